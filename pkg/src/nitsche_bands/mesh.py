"""Uniform periodic triangulation of the unit cell and element classification."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .cutquad import CutGeometry, split_triangles
from .exceptions import ConfigurationError, DegenerateInterfaceError, UnsupportedLatticeError
from .geometry import LatticeSpec, LevelSet

logger = logging.getLogger(__name__)

DEFAULT_EPS_CUT = 3e-2


class Tag(enum.IntEnum):
    PLUS = 0   # entirely in the matrix
    MINUS = 1  # entirely in the inclusion
    CUT = 2


@dataclass(frozen=True)
class Mesh:
    N: int
    a: float
    nodes: np.ndarray          # (N+1)^2 x 2
    triangles: np.ndarray      # 2N^2 x 3, counterclockwise
    periodic_master: np.ndarray  # node -> canonical node in [0, N^2)
    diagonal: str = "anti"

    @property
    def h(self) -> float:
        return self.a / self.N

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_canonical(self) -> int:
        return self.N * self.N

    def element_coords(self, elements=None) -> np.ndarray:
        tri = self.triangles if elements is None else self.triangles[elements]
        return self.nodes[tri]

    def signed_areas(self) -> np.ndarray:
        p = self.element_coords()
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def build_uniform(lattice: LatticeSpec, N: int, diagonal: str = "anti") -> Mesh:
    """Split the square cell into ``N^2`` subsquares, each cut along one diagonal.

    ``diagonal="main"`` cuts from the lower-left to the upper-right corner,
    ``"anti"`` uses the mirrored diagonal.
    """
    if int(N) != N or N < 2:
        raise ConfigurationError(f"N must be an integer >= 2, got {N!r}")
    N = int(N)
    if not lattice.is_square:
        raise UnsupportedLatticeError("only axis-aligned square lattices are meshed")
    if diagonal not in ("main", "anti"):
        raise ConfigurationError(f"unknown diagonal {diagonal!r}")
    a = lattice.a
    h = a / N
    idx = np.arange(N + 1)
    I, J = np.meshgrid(idx, idx, indexing="xy")  # node id = i + (N+1) j
    nodes = np.column_stack([I.ravel() * h, J.ravel() * h])

    i, j = np.meshgrid(np.arange(N), np.arange(N), indexing="xy")
    i, j = i.ravel(), j.ravel()
    n00 = i + (N + 1) * j
    n10 = n00 + 1
    n01 = n00 + N + 1
    n11 = n01 + 1
    if diagonal == "main":
        t1 = np.column_stack([n00, n10, n11])
        t2 = np.column_stack([n00, n11, n01])
    else:
        t1 = np.column_stack([n00, n10, n01])
        t2 = np.column_stack([n10, n11, n01])
    triangles = np.empty((2 * N * N, 3), dtype=np.int64)
    triangles[0::2] = t1
    triangles[1::2] = t2

    master = (I % N + N * (J % N)).ravel().astype(np.int64)
    for arr in (nodes, triangles, master):
        arr.setflags(write=False)
    return Mesh(N=N, a=a, nodes=nodes, triangles=triangles, periodic_master=master, diagonal=diagonal)


@dataclass(frozen=True)
class ElementClass:
    """Per-triangle tags plus the geometry of every (kept) cut element."""

    tags: np.ndarray
    node_phi: np.ndarray
    cuts: dict = field(default_factory=dict)
    unresolved: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def elements(self, side: int) -> np.ndarray:
        """Triangles of the fictitious mesh for ``side`` (+1 matrix, -1 inclusion)."""
        own = Tag.PLUS if side > 0 else Tag.MINUS
        return np.flatnonzero((self.tags == own) | (self.tags == Tag.CUT))

    @property
    def cut_elements(self) -> np.ndarray:
        return np.flatnonzero(self.tags == Tag.CUT)

    def count(self, tag: Tag) -> int:
        return int(np.count_nonzero(self.tags == tag))


def nudged_node_values(mesh: Mesh, ls: LevelSet) -> np.ndarray:
    phi = np.asarray(ls(mesh.nodes), dtype=float)
    small = np.abs(phi) < 1e-14 * mesh.h
    return np.where(small, 1e-14 * mesh.h, phi)


def classify(mesh: Mesh, ls: LevelSet | None, eps_cut: float = DEFAULT_EPS_CUT,
             edge_samples: int = 7) -> ElementClass:
    """Tag every triangle as matrix, inclusion or cut.

    Cut triangles whose smaller piece covers less than ``eps_cut`` of the
    element area are reassigned to the larger side. Triangles whose vertices
    agree in sign but whose edges are crossed twice by the interface are kept
    uncut and reported in ``unresolved``.
    """
    nt = mesh.n_triangles
    if ls is None:
        return ElementClass(tags=np.full(nt, Tag.PLUS, dtype=np.int8),
                            node_phi=np.ones(mesh.n_nodes))
    raw = np.asarray(ls(mesh.nodes), dtype=float)
    tri_raw = raw[mesh.triangles]
    flat = np.all(np.abs(tri_raw) < 1e-14, axis=1)
    if np.any(flat):
        raise DegenerateInterfaceError(
            f"interface overlaps element(s) {np.flatnonzero(flat)[:5].tolist()}")
    phi = nudged_node_values(mesh, ls)
    tri_phi = phi[mesh.triangles]
    pos = tri_phi > 0
    npos = pos.sum(axis=1)
    tags = np.where(npos == 3, Tag.PLUS, Tag.MINUS).astype(np.int8)
    mixed = np.flatnonzero((npos > 0) & (npos < 3))

    # double crossings on edges whose endpoints agree in sign
    coords = mesh.element_coords()
    same = np.flatnonzero((npos == 0) | (npos == 3))
    unresolved = np.empty(0, dtype=np.int64)
    if edge_samples > 0 and len(same):
        t = (np.arange(1, edge_samples + 1) / (edge_samples + 1))[None, :, None]
        p = coords[same]
        hits = np.zeros(len(same), dtype=bool)
        sgn = npos[same] == 3
        for a_, b_ in ((0, 1), (1, 2), (2, 0)):
            pts = p[:, a_, None, :] + t * (p[:, b_, None, :] - p[:, a_, None, :])
            vals = ls(pts)
            hits |= np.any((vals > 0) != sgn[:, None], axis=1)
        unresolved = same[hits]
        if len(unresolved):
            logger.debug("%d element(s) with unresolved double edge crossings", len(unresolved))

    cuts: dict[int, CutGeometry] = {}
    if len(mixed):
        geoms = split_triangles(coords[mixed], ls, tri_phi[mixed], elements=mixed, h=mesh.h)
        area = 0.5 * mesh.h ** 2
        for g in geoms:
            frac_plus = g.area_plus / area
            frac_minus = g.area_minus / area
            if min(frac_plus, frac_minus) < eps_cut:
                tags[g.element] = Tag.PLUS if frac_plus >= frac_minus else Tag.MINUS
            else:
                tags[g.element] = Tag.CUT
                cuts[g.element] = g
    tags.setflags(write=False)
    return ElementClass(tags=tags, node_phi=phi, cuts=cuts, unresolved=unresolved)


def dump_mesh(mesh: Mesh, classes: ElementClass | None, stream) -> None:
    """Plain-text node and element listing."""
    stream.write(f"# nodes {mesh.n_nodes}\n")
    for i, (x, y) in enumerate(mesh.nodes):
        stream.write(f"{i} {x:.17g} {y:.17g}\n")
    stream.write(f"# elements {mesh.n_triangles}\n")
    tags = classes.tags if classes is not None else np.zeros(mesh.n_triangles, dtype=int)
    for e, (a, b, c) in enumerate(mesh.triangles):
        stream.write(f"{e} {a} {b} {c} {Tag(int(tags[e])).name}\n")
