"""CSV / JSON serialization.

Every writer goes through `atomic_write`, so an interrupted run never leaves a
half-written file behind. CSV output uses ``\\n`` line endings, a ``.`` decimal
point and 17 significant digits (lossless for doubles).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .netgen import Graph, Hamiltonian
from .wigner import LIMIT, WignerField

PathLike = Union[str, os.PathLike]

FLOAT_FMT = "%.17g"


def atomic_write(path: PathLike, data: Union[str, bytes]) -> Path:
    """Write ``data`` to a temp file next to ``path``, then rename over it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        kwargs = {} if mode == "wb" else {"encoding": "utf-8", "newline": "\n"}
        with os.fdopen(fd, mode, **kwargs) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse(text: str):
    if text in ("true", "false"):
        return text == "true"
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _header(meta: dict) -> str:
    return "".join(f"# {key}={_fmt(val)}\n" for key, val in meta.items())


def _rows(grid: np.ndarray) -> str:
    return "".join(",".join(FLOAT_FMT % v for v in row) + "\n" for row in np.atleast_2d(grid))


def _read_header(path: PathLike) -> dict:
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, sep, val = line[1:].strip().partition("=")
            if sep:
                meta[key] = _parse(val)
    return meta


def grid_to_csv(grid: np.ndarray, meta: dict) -> str:
    return _header(meta) + _rows(grid)


def field_to_csv(w: WignerField, extra: dict = None) -> str:
    """Rows are ``x``, columns are ``k``; metadata lines start with ``#``."""
    meta = {**w.metadata(), **(extra or {})}
    return grid_to_csv(w.values, meta)


def write_field_csv(w: WignerField, path: PathLike, extra: dict = None) -> Path:
    return atomic_write(path, field_to_csv(w, extra))


def read_field_csv(path: PathLike) -> WignerField:
    meta = _read_header(path)
    values = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    t = meta.pop("t", 0.0)
    time_tag = LIMIT if t == LIMIT else float(t)
    j = int(meta.pop("j", 0))
    tol = meta.pop("tol", None)
    meta.pop("N", None)
    return WignerField(values, j, time_tag, meta, tol=tol)


def field_to_json(w: WignerField, extra: dict = None) -> str:
    meta = {**w.metadata(), **(extra or {})}
    meta = {k: (bool(v) if isinstance(v, np.bool_) else v) for k, v in meta.items()}
    return json.dumps({"metadata": meta, "values": w.values.tolist()}) + "\n"


def write_field_json(w: WignerField, path: PathLike, extra: dict = None) -> Path:
    return atomic_write(path, field_to_json(w, extra))


def read_field_json(path: PathLike) -> WignerField:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    meta = dict(doc["metadata"])
    t = meta.pop("t", 0.0)
    time_tag = LIMIT if t == LIMIT else float(t)
    j = int(meta.pop("j", 0))
    tol = meta.pop("tol", None)
    meta.pop("N", None)
    return WignerField(np.array(doc["values"], dtype=float), j, time_tag, meta, tol=tol)


def graph_to_csv(g: Graph) -> str:
    return f"# N={g.N}\n" + "".join(f"{u},{v}\n" for u, v in g.sorted_edges())


def write_graph_csv(g: Graph, path: PathLike) -> Path:
    return atomic_write(path, graph_to_csv(g))


def read_graph_csv(path: PathLike) -> Graph:
    meta = _read_header(path)
    if "N" not in meta:
        raise ValueError(f"{path}: missing '# N=<N>' header")
    edges = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                u, v = (int(s) for s in line.split(","))
                edges.append((min(u, v), max(u, v)))
    if len(set(edges)) != len(edges):
        raise ValueError(f"{path}: duplicate edges")
    return Graph(int(meta["N"]), frozenset(edges))


def hamiltonian_to_csv(h: Hamiltonian) -> str:
    return grid_to_csv(h.matrix, {"N": h.N, **h.source})


def write_hamiltonian_csv(h: Hamiltonian, path: PathLike) -> Path:
    return atomic_write(path, hamiltonian_to_csv(h))


def spectrum_to_csv(eigenvalues: Iterable[float], classes: tuple, meta: dict = None) -> str:
    ev = np.asarray(eigenvalues, dtype=float)
    labels = np.empty(ev.size, dtype=np.int64)
    for cid, members in enumerate(classes):
        labels[list(members)] = cid
    body = "".join(f"{i},{FLOAT_FMT % e},{c}\n" for i, (e, c) in enumerate(zip(ev, labels)))
    return _header(meta or {}) + "index,eigenvalue,class_id\n" + body


def columns_to_csv(columns: dict, meta: dict = None) -> str:
    """Named equal-length vectors as CSV columns, preceded by a header row."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    body = "".join(",".join(FLOAT_FMT % v for v in row) + "\n" for row in data)
    return _header(meta or {}) + ",".join(names) + "\n" + body


def read_columns_csv(path: PathLike) -> dict:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln and not ln.startswith("#")]
    names = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]], ndmin=2)
    return {n: data[:, i] for i, n in enumerate(names)}
