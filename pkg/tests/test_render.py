import numpy as np
import pytest
from PIL import Image

from ctqw_wigner.render import CELL_PIXELS, diverging_rgb, heatmap_image, render_heatmap
from ctqw_wigner.wigner import closed_form_limit_m1


def pixel(img, x, k, N, cell=CELL_PIXELS):
    """Centre pixel of cell (x, k); k = 0 is the bottom row."""
    row = (N - 1 - k) * cell + cell // 2
    col = x * cell + cell // 2
    return tuple(int(v) for v in img[row, col])


def test_zero_field_is_white(tmp_path):
    path = render_heatmap(np.zeros((10, 10)), tmp_path / "z.png")
    img = np.asarray(Image.open(path))
    assert img.shape == (80, 80, 3)
    assert np.all(img == 255)


def test_closed_form_cycle_layout():
    N = 50
    img = heatmap_image(closed_form_limit_m1(N, 25))
    red = (255, 0, 0)
    assert pixel(img, 0, 0, N) == red
    assert pixel(img, 25, 0, N) == red
    assert pixel(img, 10, 0, N) == (255, 255, 255)
    # even k != 0 rows are pale red (2/N^2 against a maximum of 1/N)
    pale = pixel(img, 10, 2, N)
    assert pale[0] == 255 and 230 < pale[1] < 255 and pale[1] == pale[2]
    assert pixel(img, 10, 3, N) == (255, 255, 255)


def test_negation_swaps_red_and_blue():
    rng = np.random.default_rng(1)
    grid = rng.normal(size=(9, 9))
    a = diverging_rgb(grid)
    b = diverging_rgb(-grid)
    assert np.array_equal(a[..., 0], b[..., 2])
    assert np.array_equal(a[..., 2], b[..., 0])
    assert np.array_equal(a[..., 1], b[..., 1])


def test_explicit_scale_clips():
    rgb = diverging_rgb(np.array([[2.0, -2.0, 0.5]]), vmax=1.0)
    assert rgb[0, 0].tolist() == [255, 0, 0]
    assert rgb[0, 1].tolist() == [0, 0, 255]
    assert rgb[0, 2].tolist() == [255, 128, 128]


def test_io_error_has_path(tmp_path):
    target = tmp_path / "file"
    target.write_text("x")
    with pytest.raises(OSError, match="file"):
        render_heatmap(np.zeros((3, 3)), target / "sub" / "img.png")
