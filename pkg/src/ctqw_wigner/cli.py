"""Command-line front end.

    ctqw-wigner limit --N 50 --m 1 --out runs/limit50
    ctqw-wigner wigner --N 50 --m 3 --t 1,2,5,20 --png
    ctqw-wigner ensemble --N 50 --m 1 --p 0.5 --real 200 --seed 42

Options can also come from a flat ``key = value`` file given with
``--config``; flags on the command line take precedence.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import EnsembleError, asymmetry, ensemble_average, marginals
from .io import (
    atomic_write,
    columns_to_csv,
    field_to_csv,
    field_to_json,
    graph_to_csv,
    grid_to_csv,
    spectrum_to_csv,
)
from .netgen import DisorderSpec, InvalidSpecError, NetworkSpec, RingSpec, network_graph, network_hamiltonian
from .render import render_heatmap
from .spectral import SpectralError, bloch_spectrum, degeneracy_classes, default_tolerance, eigendecompose
from .wigner import (
    WignerField,
    default_node,
    limiting_wigner_circulant,
    limiting_wigner_general,
    wigner_circulant,
    wigner_general,
)

PROG = "ctqw-wigner"
COMMANDS = ("spectrum", "wigner", "limit", "marginal", "asymmetry", "ensemble")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: int
    m: int = 1
    j: Optional[int] = None
    t: tuple = (0.0,)
    lam: Optional[float] = None
    p: Optional[float] = None
    real: int = 200
    seed: int = 0
    tol: Optional[float] = None
    out: str = "."
    png: bool = False

    # config-file / flag key for each field
    KEYS = {"lam": "lambda"}

    @property
    def node(self) -> int:
        return default_node(self.N) if self.j is None else self.j

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        try:
            RingSpec(self.N, self.m)
            if self.lam is not None:
                DisorderSpec.exponential(self.lam)
            if self.p is not None:
                DisorderSpec.ws(self.p, self.seed)
        except InvalidSpecError as exc:
            raise UsageError(str(exc)) from exc
        if not 0 <= self.node < self.N:
            raise UsageError(f"--j must lie in [0, {self.N}), got {self.j}")
        if self.lam is not None and self.p is not None:
            raise UsageError("--lambda and --p are mutually exclusive")
        if self.command == "ensemble" and self.p is None:
            raise UsageError("ensemble needs --p")
        if self.real < 1:
            raise UsageError(f"--real must be >= 1, got {self.real}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.command == "asymmetry" and self.N % 2:
            raise UsageError(f"asymmetry needs even N, got N={self.N}")
        if not self.t or not all(np.isfinite(self.t)):
            raise UsageError("--t must be a non-empty list of finite times")
        return self

    def network(self) -> NetworkSpec:
        ring = RingSpec(self.N, self.m)
        if self.p is not None:
            return NetworkSpec(ring, DisorderSpec.ws(self.p, self.seed))
        if self.lam is not None:
            return NetworkSpec(ring, DisorderSpec.exponential(self.lam))
        return NetworkSpec(ring)

    @property
    def ordered(self) -> bool:
        return self.lam is None and not self.p

    def items(self):
        for f in dataclasses.fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            yield self.KEYS.get(f.name, f.name), val

    def to_text(self) -> str:
        lines = []
        for key, val in self.items():
            if isinstance(val, tuple):
                val = ",".join(repr(float(v)) for v in val)
            elif isinstance(val, bool):
                val = "true" if val else "false"
            elif isinstance(val, float):
                val = repr(val)
            lines.append(f"{key} = {val}\n")
        return "".join(lines)

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        names = {cls.KEYS.get(f.name, f.name): f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, text in raw.items():
            if key not in names:
                raise UsageError(f"unknown config key {key!r}")
            f = names[key]
            kwargs[f.name] = _convert(f.name, text)
        missing = [k for k in ("command", "N") if k not in kwargs]
        if missing:
            raise UsageError(f"missing required setting(s): {', '.join(missing)}")
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls.from_mapping(parse_config_text(text))

    def metadata(self) -> dict:
        # the output location does not affect results
        meta = {"version": __version__}
        for key, val in self.items():
            if key == "out":
                continue
            if isinstance(val, tuple):
                val = ";".join(repr(float(v)) for v in val)
            meta[f"config.{key}"] = val
        return meta


def _convert(name: str, text):
    if not isinstance(text, str):
        return text
    text = text.strip()
    try:
        if name in ("N", "m", "j", "real", "seed"):
            return int(text)
        if name in ("lam", "p", "tol"):
            return float(text)
        if name == "t":
            return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
        if name == "png":
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
    except ValueError:
        raise UsageError(f"bad value for {name}: {text!r}") from None
    return text


def parse_config_text(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        raw[key.strip()] = val.strip()
    return raw


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Wigner phase-space patterns of continuous-time quantum walks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    helps = {
        "spectrum": "eigenvalues and degeneracy classes",
        "wigner": "Wigner fields at the listed times",
        "limit": "long-time limiting Wigner field",
        "marginal": "marginals of the limiting field",
        "asymmetry": "half-period differences of the limiting field (even N)",
        "ensemble": "Watts-Strogatz ensemble average of the limiting field",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", help="flat key = value file; flags override it")
        p.add_argument("--N", type=str)
        p.add_argument("--m", type=str)
        p.add_argument("--j", type=str, help="initial node (default N // 2)")
        p.add_argument("--t", type=str, help="comma-separated times")
        p.add_argument("--lambda", dest="lambda_", type=str, help="exponential disorder strength")
        p.add_argument("--p", type=str, help="Watts-Strogatz rewiring probability")
        p.add_argument("--real", type=str, help="number of ensemble realizations")
        p.add_argument("--seed", type=str, help="base seed (uint64)")
        p.add_argument("--tol", type=str, help="absolute degeneracy tolerance")
        p.add_argument("--out", type=str, help="output directory")
        p.add_argument("--png", action="store_const", const="true", default=None, help="also write PNG heatmaps")
    return parser


def config_from_args(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    raw = {}
    if args.config:
        try:
            raw.update(parse_config_text(Path(args.config).read_text(encoding="utf-8")))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
    raw["command"] = args.command
    flags = vars(args)
    for key in ("N", "m", "j", "t", "p", "real", "seed", "tol", "out", "png"):
        if flags[key] is not None:
            raw[key] = flags[key]
    if flags["lambda_"] is not None:
        raw["lambda"] = flags["lambda_"]
    return RunConfig.from_mapping(raw).validate()


def _tag(t: float) -> str:
    return format(t, "g").replace("-", "m")


class _Writer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.meta = cfg.metadata()
        self.written = []

    def text(self, name: str, content: str):
        self.written.append(atomic_write(self.out / name, content))

    def field(self, stem: str, w: WignerField, extra: Optional[dict] = None):
        extra = {**(extra or {}), **self.meta}
        self.text(f"{stem}.csv", field_to_csv(w, extra))
        self.text(f"{stem}.json", field_to_json(w, extra))
        if self.cfg.png:
            self.written.append(render_heatmap(w, self.out / f"{stem}.png"))

    def grid(self, stem: str, grid: np.ndarray, meta: dict):
        meta = {**meta, **self.meta}
        self.text(f"{stem}.csv", grid_to_csv(grid, meta))
        if self.cfg.png:
            self.written.append(render_heatmap(grid, self.out / f"{stem}.png"))


def _limit_field(cfg: RunConfig) -> WignerField:
    if cfg.ordered:
        return limiting_wigner_circulant(RingSpec(cfg.N, cfg.m), cfg.node, cfg.tol)
    return limiting_wigner_general(eigendecompose(network_hamiltonian(cfg.network()), cfg.tol), cfg.node)


def _graph_extra(cfg: RunConfig, out: _Writer) -> dict:
    """Record the rewired graph next to the outputs; return its connectivity flag."""
    if cfg.p is None or cfg.p == 0.0:
        return {}
    g = network_graph(cfg.network())
    out.text("graph.csv", graph_to_csv(g))
    return {"connected": g.is_connected(), "skipped_rewires": g.skipped_rewires}


def run(cfg: RunConfig) -> list:
    """Execute one validated configuration; returns the paths written."""
    out = _Writer(cfg)
    cmd = cfg.command
    if cmd == "spectrum":
        if cfg.ordered:
            E = bloch_spectrum(RingSpec(cfg.N, cfg.m)).eigenvalues
            path = "bloch"
        else:
            E = eigendecompose(network_hamiltonian(cfg.network())).eigenvalues
            path = "numeric"
        tol = cfg.tol if cfg.tol is not None else default_tolerance(E)
        meta = {"N": cfg.N, "m": cfg.m, **cfg.network().disorder.metadata(), "path": path, "tol": tol}
        meta.update(_graph_extra(cfg, out))
        out.text("spectrum.csv", spectrum_to_csv(E, degeneracy_classes(E, tol), {**meta, **out.meta}))
    elif cmd == "wigner":
        extra = _graph_extra(cfg, out)
        if cfg.ordered:
            spec = RingSpec(cfg.N, cfg.m)
            fields = [wigner_circulant(spec, cfg.node, t) for t in cfg.t]
        else:
            s = eigendecompose(network_hamiltonian(cfg.network()), cfg.tol)
            fields = [wigner_general(s, cfg.node, t) for t in cfg.t]
        for t, w in zip(cfg.t, fields):
            out.field(f"wigner_t{_tag(t)}", w, extra)
    elif cmd in ("limit", "marginal", "asymmetry"):
        extra = _graph_extra(cfg, out)
        w = _limit_field(cfg)
        if cmd == "limit":
            out.field("limit", w, extra)
        elif cmd == "marginal":
            rep = marginals(w)
            meta = {**w.metadata(), **extra, **out.meta}
            out.text("marginal.csv", columns_to_csv(
                {"index": np.arange(cfg.N), "chi": rep.chi, "k_marginal": rep.k_marginal}, meta))
            out.text("marginal.json", json.dumps(
                {"metadata": meta, "chi": rep.chi.tolist(), "k_marginal": rep.k_marginal.tolist()}) + "\n")
        else:
            am = asymmetry(w)
            meta = {**w.metadata(), **extra}
            out.grid("asymmetry_dx", am.dx, {**meta, "quantity": "W(x+N/2,k)-W(x,k)", "rows": "x<N/2"})
            out.grid("asymmetry_dk", am.dk.T, {**meta, "quantity": "W(x,k+N/2)-W(x,k)", "rows": "k<N/2"})
            out.text("chi_asym.csv", columns_to_csv(
                {"x": np.arange(cfg.N // 2), "chi_asym": am.chi_asym}, {**meta, **out.meta}))
    elif cmd == "ensemble":
        res = ensemble_average(RingSpec(cfg.N, cfg.m), cfg.p, cfg.node, cfg.real, cfg.seed, tol=cfg.tol)
        out.field("ensemble", res.mean_field, res.metadata())
        out.text("ensemble_chi.csv", columns_to_csv(
            {"x": np.arange(cfg.N), "mean_chi": res.mean_chi}, {**res.metadata(), **out.meta}))
    return out.written


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = config_from_args(argv)
        run(cfg)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpectralError, EnsembleError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"{PROG}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
