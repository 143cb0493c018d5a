"""YAML run configuration for the command-line front end.

Example::

    lattice: {a: 1.0}
    materials: {matrix: epoxy, inclusion: aurum}
    interface: {kind: circle, center: [0.5, 0.5], radius: 0.25}
    discretization: {N: 64, eps_cut: 0.03, gamma_hat: 100}
    path: {vertices: [O, X, M, O], samples_per_segment: 30}
    solver: {m: 10, tol: 1.0e-9}
    convergence: {levels: [8, 16, 32, 64], k: [pi, pi]}
    outputs: {dir: out, svg: true}

Scalars that are k-space coordinates may be written as multiples of ``pi``
(``pi``, ``-pi/2``, ``0.5pi``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .eigen import DEFAULT_BANDS, DEFAULT_TOL
from .exceptions import ConfigurationError
from .geometry import (Circle, Flower, KPath, KPoint, LatticeSpec, LevelSet, path_from_labels,
                       symmetry_point)
from .materials import Material, get_material
from .mesh import DEFAULT_EPS_CUT
from .problem import PhononicCrystal

_PI = re.compile(r"^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$", re.I)


def parse_scalar(value, name: str) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(f"{name}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
        m = _PI.match(value)
        if m:
            coef = float(m.group(2) or 1.0) * (-1.0 if m.group(1) == "-" else 1.0)
            den = float(m.group(3)) if m.group(3) else 1.0
            return coef * math.pi / den
    raise ConfigurationError(f"{name}: cannot read {value!r} as a number")


def _section(raw: dict, key: str, required: bool = False) -> dict:
    sec = raw.get(key)
    if sec is None:
        if required:
            raise ConfigurationError(f"missing required section '{key}'")
        return {}
    if not isinstance(sec, dict):
        raise ConfigurationError(f"section '{key}' must be a mapping")
    return sec


def _kpoint(value, name: str, a: float) -> KPoint:
    if isinstance(value, str):
        return symmetry_point(value, a)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigurationError(f"{name}: expected a label or a pair [kx, ky]")
    return KPoint(parse_scalar(value[0], f"{name}[0]"), parse_scalar(value[1], f"{name}[1]"))


def _interface(sec: dict) -> LevelSet | None:
    kind = str(sec.get("kind", "none")).lower()
    center = tuple(parse_scalar(c, "interface.center") for c in sec.get("center", (0.5, 0.5)))
    if len(center) != 2:
        raise ConfigurationError("interface.center must have two entries")
    if kind in ("none", "homogeneous"):
        return None
    if kind == "circle":
        return Circle(center, parse_scalar(sec.get("radius", 0.25), "interface.radius"))
    if kind == "flower":
        if "scale" in sec:
            return Flower.scaled(parse_scalar(sec["scale"], "interface.scale"), center)
        return Flower(center,
                      parse_scalar(sec.get("base_radius", 0.5), "interface.base_radius"),
                      parse_scalar(sec.get("petal_amp", 1.0 / 7.0), "interface.petal_amp"),
                      int(sec.get("petal_count", 5)))
    raise ConfigurationError(f"interface.kind: unknown kind {kind!r} (circle, flower, none)")


def _material(sec: dict, key: str) -> Material:
    if key not in sec:
        raise ConfigurationError(f"materials.{key} is missing")
    try:
        return get_material(sec[key])
    except ConfigurationError as exc:
        raise ConfigurationError(f"materials.{key}: {exc}") from None


@dataclass
class RunConfig:
    crystal: PhononicCrystal
    N: int = 64
    eps_cut: float = DEFAULT_EPS_CUT
    gamma_hat: float = 100.0
    diagonal: str = "anti"
    path: KPath = field(default_factory=KPath.square_irreducible)
    m: int = DEFAULT_BANDS
    tol: float = DEFAULT_TOL
    method: str = "auto"
    levels: tuple[int, ...] = (8, 16, 32, 64)
    conv_k: KPoint = KPoint(math.pi, math.pi)
    conv_m: int = 6
    dump_k: KPoint = KPoint(math.pi, math.pi)
    out_dir: str = "."
    svg: bool = False

    def discretize(self, N: int | None = None):
        return self.crystal.discretize(self.N if N is None else N, eps_cut=self.eps_cut,
                                       gamma_hat=self.gamma_hat, diagonal=self.diagonal)

    @classmethod
    def from_dict(cls, raw) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigurationError("configuration must be a mapping at the top level")
        lat = _section(raw, "lattice")
        a = parse_scalar(lat.get("a", 1.0), "lattice.a")
        if not a > 0:
            raise ConfigurationError("lattice.a must be positive")
        mats = _section(raw, "materials", required=True)
        matrix = _material(mats, "matrix")
        inclusion = _material(mats, "inclusion")
        iface = _interface(_section(raw, "interface"))
        crystal = PhononicCrystal(LatticeSpec.square(a), matrix, inclusion, iface)

        disc = _section(raw, "discretization")
        path_sec = _section(raw, "path")
        solver = _section(raw, "solver")
        conv = _section(raw, "convergence")
        dump = _section(raw, "dump")
        outs = _section(raw, "outputs")

        sps = int(path_sec.get("samples_per_segment", 30))
        verts = path_sec.get("vertices", ["O", "X", "M", "O"])
        if not isinstance(verts, list) or len(verts) < 2:
            raise ConfigurationError("path.vertices must list at least two points")
        if all(isinstance(v, str) for v in verts):
            path = path_from_labels(verts, a, sps)
        else:
            path = KPath(tuple(_kpoint(v, f"path.vertices[{i}]", a) for i, v in enumerate(verts)), sps)

        cfg = cls(
            crystal=crystal,
            N=int(disc.get("N", 64)),
            eps_cut=parse_scalar(disc.get("eps_cut", DEFAULT_EPS_CUT), "discretization.eps_cut"),
            gamma_hat=parse_scalar(disc.get("gamma_hat", 100.0), "discretization.gamma_hat"),
            diagonal=str(disc.get("diagonal", "anti")),
            path=path,
            m=int(solver.get("m", DEFAULT_BANDS)),
            tol=parse_scalar(solver.get("tol", DEFAULT_TOL), "solver.tol"),
            method=str(solver.get("method", "auto")),
            levels=tuple(int(n) for n in conv.get("levels", (8, 16, 32, 64))),
            conv_k=_kpoint(conv.get("k", ["pi", "pi"]), "convergence.k", a),
            conv_m=int(conv.get("m", 6)),
            dump_k=_kpoint(dump.get("k", ["pi", "pi"]), "dump.k", a),
            out_dir=str(outs.get("dir", ".")),
            svg=bool(outs.get("svg", False)),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.N < 2:
            raise ConfigurationError("discretization.N must be >= 2")
        if not 0 <= self.eps_cut < 0.5:
            raise ConfigurationError("discretization.eps_cut must lie in [0, 0.5)")
        if not self.gamma_hat > 0:
            raise ConfigurationError("discretization.gamma_hat must be positive")
        if self.diagonal not in ("main", "anti"):
            raise ConfigurationError("discretization.diagonal must be 'main' or 'anti'")
        if self.m < 1 or self.conv_m < 1:
            raise ConfigurationError("solver.m and convergence.m must be positive")
        if not self.tol > 0:
            raise ConfigurationError("solver.tol must be positive")
        if self.method not in ("auto", "dense", "sparse"):
            raise ConfigurationError("solver.method must be auto, dense or sparse")


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration {path}: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"invalid YAML in {path}: {exc}") from None
    return RunConfig.from_dict(raw)
