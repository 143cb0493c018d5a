"""Bravais lattices, Brillouin-zone paths and level-set interfaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import ConfigurationError, DegenerateLatticeError


def reciprocal_basis(a1, a2):
    """Return the reciprocal basis ``(k1, k2)`` with ``k_i . a_j = 2 pi delta_ij``."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    det = a1[0] * a2[1] - a1[1] * a2[0]
    if abs(det) <= 1e-14 * np.linalg.norm(a1) * np.linalg.norm(a2):
        raise DegenerateLatticeError(f"primitive vectors {a1}, {a2} are linearly dependent")
    # rows of inv([a1 a2])^T scaled by 2 pi
    amat = np.column_stack([a1, a2])
    kmat = 2.0 * np.pi * np.linalg.inv(amat)
    return kmat[0].copy(), kmat[1].copy()


@dataclass(frozen=True)
class LatticeSpec:
    a1: np.ndarray
    a2: np.ndarray
    k1: np.ndarray = field(init=False)
    k2: np.ndarray = field(init=False)

    def __post_init__(self):
        a1 = np.asarray(self.a1, dtype=float)
        a2 = np.asarray(self.a2, dtype=float)
        k1, k2 = reciprocal_basis(a1, a2)
        for name, val in (("a1", a1), ("a2", a2), ("k1", k1), ("k2", k2)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def square(cls, a: float = 1.0) -> "LatticeSpec":
        return cls(np.array([a, 0.0]), np.array([0.0, a]))

    @property
    def is_square(self) -> bool:
        n1, n2 = np.linalg.norm(self.a1), np.linalg.norm(self.a2)
        return (abs(self.a1 @ self.a2) <= 1e-12 * n1 * n2
                and abs(n1 - n2) <= 1e-12 * n1
                and abs(self.a1[1]) <= 1e-12 * n1)

    @property
    def a(self) -> float:
        """Lattice constant (length of ``a1``)."""
        return float(np.linalg.norm(self.a1))

    @property
    def cell_area(self) -> float:
        return float(abs(self.a1[0] * self.a2[1] - self.a1[1] * self.a2[0]))

    def reciprocal_vectors(self, cutoff: int) -> np.ndarray:
        """All ``m1 k1 + m2 k2`` with ``|m1|, |m2| <= cutoff``, shape ``(M, 2)``."""
        m = np.arange(-cutoff, cutoff + 1)
        m1, m2 = np.meshgrid(m, m, indexing="ij")
        return m1.reshape(-1, 1) * self.k1 + m2.reshape(-1, 1) * self.k2


@dataclass(frozen=True)
class KPoint:
    kx: float
    ky: float
    label: str | None = None

    def __post_init__(self):
        if not (np.isfinite(self.kx) and np.isfinite(self.ky)):
            raise ConfigurationError(f"non-finite quasi-momentum ({self.kx}, {self.ky})")

    @property
    def k(self) -> np.ndarray:
        return np.array([self.kx, self.ky], dtype=float)

    @classmethod
    def of(cls, k, label=None) -> "KPoint":
        return cls(float(k[0]), float(k[1]), label)


@dataclass(frozen=True)
class KPath:
    vertices: tuple[KPoint, ...]
    samples_per_segment: int = 30

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ConfigurationError("a k-path needs at least two vertices")
        if int(self.samples_per_segment) < 1:
            raise ConfigurationError("samples_per_segment must be >= 1")

    @classmethod
    def square_irreducible(cls, a: float = 1.0, samples_per_segment: int = 30) -> "KPath":
        """The O-X-M-O loop around the irreducible zone of the square lattice."""
        p = np.pi / a
        verts = (KPoint(0.0, 0.0, "O"), KPoint(p, 0.0, "X"), KPoint(p, p, "M"), KPoint(0.0, 0.0, "O"))
        return cls(verts, samples_per_segment)

    @property
    def n_samples(self) -> int:
        return (len(self.vertices) - 1) * self.samples_per_segment + 1


def sample_path(path: KPath) -> list[tuple[float, KPoint]]:
    """Uniform samples along each segment, keyed by cumulative k-space arclength.

    Segment endpoints are included exactly once; vertex samples keep their label.
    """
    out: list[tuple[float, KPoint]] = [(0.0, path.vertices[0])]
    s0 = 0.0
    n = path.samples_per_segment
    for start, end in zip(path.vertices[:-1], path.vertices[1:]):
        k0, k1 = start.k, end.k
        length = float(np.linalg.norm(k1 - k0))
        for j in range(1, n + 1):
            if j == n:
                out.append((s0 + length, end))
            else:
                t = j / n
                out.append((s0 + t * length, KPoint.of(k0 + t * (k1 - k0))))
        s0 += length
    return out


class LevelSet:
    """Implicit interface description; negative inside the inclusion."""

    kind = "generic"

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def check_inside_cell(self, lattice: LatticeSpec, samples_per_edge: int = 2000) -> None:
        """Raise ``ConfigurationError`` if the interface meets the cell boundary."""
        t = np.linspace(0.0, 1.0, samples_per_edge)[:, None]
        a1, a2 = lattice.a1, lattice.a2
        pts = np.concatenate([t * a1, a1 + t * a2, t * a2, a2 + t * a1])
        vals = self(pts)
        if np.any(vals <= 0.0):
            raise ConfigurationError(
                f"{self.kind} interface intersects the cell boundary "
                f"(min phi on boundary = {vals.min():.3g}); shrink the inclusion")


def levelset_eval(ls: LevelSet, x) -> float:
    return float(ls(np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class Circle(LevelSet):
    center: tuple[float, float] = (0.5, 0.5)
    radius: float = 0.25
    kind = "circle"

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError("circle radius must be positive")

    def __call__(self, x):
        d = np.asarray(x, dtype=float) - np.asarray(self.center)
        return np.hypot(d[..., 0], d[..., 1]) - self.radius


@dataclass(frozen=True)
class Flower(LevelSet):
    """Polar flower ``r(theta) = base_radius + petal_amp * sin(petal_count * theta)``.

    With the default ``r = 1/2 + sin(5 theta)/7`` the petals reach radius
    ~0.643 and leave a unit cell; use :meth:`scaled` to shrink it.
    """

    center: tuple[float, float] = (0.5, 0.5)
    base_radius: float = 0.5
    petal_amp: float = 1.0 / 7.0
    petal_count: int = 5
    kind = "flower"

    def __post_init__(self):
        if not self.base_radius - abs(self.petal_amp) > 0:
            raise ConfigurationError("flower radius profile must stay positive")

    @classmethod
    def scaled(cls, scale: float, center=(0.5, 0.5)) -> "Flower":
        return cls(center, 0.5 * scale, scale / 7.0, 5)

    def __call__(self, x):
        d = np.asarray(x, dtype=float) - np.asarray(self.center)
        theta = np.arctan2(d[..., 1], d[..., 0])
        r = np.hypot(d[..., 0], d[..., 1])
        return r - (self.base_radius + self.petal_amp * np.sin(self.petal_count * theta))


class GenericLevelSet(LevelSet):
    kind = "generic"

    def __init__(self, func: Callable[[np.ndarray], np.ndarray]):
        self.func = func

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.func(x), dtype=float)


def path_from_labels(labels: Sequence[str], a: float = 1.0, samples_per_segment: int = 30) -> KPath:
    """Build a square-lattice path from high-symmetry labels (O/G, X, M)."""
    return KPath(tuple(symmetry_point(lab, a) for lab in labels), samples_per_segment)


def symmetry_point(label: str, a: float = 1.0) -> KPoint:
    """Square-lattice high-symmetry point O (alias G), X or M."""
    p = np.pi / a
    table = {"O": (0.0, 0.0), "G": (0.0, 0.0), "X": (p, 0.0), "M": (p, p)}
    try:
        return KPoint(*table[label.upper()], label)
    except KeyError:
        raise ConfigurationError(f"unknown high-symmetry label {label!r}") from None
