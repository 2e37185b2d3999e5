"""PNG heatmaps of phase-space grids.

Positive cells are red, negative cells blue, zero is pure white. The scale
is symmetric about zero, so negating a field swaps the red and blue channels.
"""

from __future__ import annotations

import io as _stdio
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image

from .io import atomic_write
from .wigner import WignerField

CELL_PIXELS = 8


def diverging_rgb(values: np.ndarray, vmax: Optional[float] = None) -> np.ndarray:
    """Map a grid to ``uint8`` RGB, white at 0, red at ``+vmax``, blue at ``-vmax``."""
    values = np.asarray(values, dtype=float)
    if vmax is None:
        vmax = float(np.max(np.abs(values))) if values.size else 0.0
    if vmax > 0:
        s = np.clip(values / vmax, -1.0, 1.0)
    else:
        s = np.zeros_like(values)
    pos = np.clip(s, 0.0, None)
    neg = np.clip(-s, 0.0, None)
    rgb = np.stack([1.0 - neg, 1.0 - pos - neg, 1.0 - pos], axis=-1)
    return np.rint(rgb * 255.0).astype(np.uint8)


def heatmap_image(
    grid: Union[WignerField, np.ndarray], vmax: Optional[float] = None, cell: int = CELL_PIXELS
) -> np.ndarray:
    """Pixel array for ``grid[x, k]``: ``x`` runs left to right, ``k`` bottom to top."""
    values = grid.values if isinstance(grid, WignerField) else np.asarray(grid, dtype=float)
    rgb = diverging_rgb(values, vmax)  # [x, k, 3]
    img = np.transpose(rgb, (1, 0, 2))[::-1]  # [row, col]; row 0 is the largest k
    return np.repeat(np.repeat(img, cell, axis=0), cell, axis=1)


def render_heatmap(
    grid: Union[WignerField, np.ndarray],
    path: Union[str, Path],
    vmax: Optional[float] = None,
    cell: int = CELL_PIXELS,
) -> Path:
    buf = _stdio.BytesIO()
    Image.fromarray(heatmap_image(grid, vmax, cell)).save(buf, format="PNG")
    try:
        return atomic_write(path, buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write heatmap to {path}: {exc}") from exc
