"""Splitting of cut triangles and quadrature on the pieces.

Volume integrands in the assembly are polynomials of degree <= 2, so the
edge-midpoint rule on each sub-triangle is exact; interface integrands are
degree <= 2 along the (linearised) chord, so two-point Gauss is exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InterfaceResolutionError

_GAUSS2 = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])
BISECTION_MAX_ITER = 200


def triangle_area(tri) -> float:
    tri = np.asarray(tri, dtype=float)
    e1 = tri[1] - tri[0]
    e2 = tri[2] - tri[0]
    return 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])


def _midpoint_rule(tris: np.ndarray):
    """Edge-midpoint rule for a stack of triangles ``(M, 3, 2)``."""
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    pts = 0.5 * np.stack([tris[:, 0] + tris[:, 1], tris[:, 1] + tris[:, 2], tris[:, 2] + tris[:, 0]], axis=1)
    wts = np.repeat(area[:, None] / 3.0, 3, axis=1)
    return pts, wts


def bulk_quadrature(tri):
    """Three-point, degree-2 quadrature on a whole triangle.

    Returns ``(points, weights)`` with shapes ``(3, 2)`` and ``(3,)``.
    """
    tri = np.asarray(tri, dtype=float)
    if triangle_area(tri) <= 1e-14 * np.ptp(tri, axis=0).max() ** 2:
        raise ValueError("degenerate triangle")
    pts, wts = _midpoint_rule(tri[None])
    return pts[0], wts[0]


def line_quadrature(p0, p1):
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    length = float(np.linalg.norm(p1 - p0))
    pts = p0 + _GAUSS2[:, None] * (p1 - p0)
    return pts, np.full(2, 0.5 * length)


@dataclass(frozen=True)
class CutGeometry:
    """Geometry of one cut element.

    ``normal`` points from the inclusion (phi < 0) to the matrix (phi > 0).
    Quadrature rules are ``(points, weights)`` pairs.
    """

    element: int
    p0: np.ndarray
    p1: np.ndarray
    normal: np.ndarray
    vol_quad_plus: tuple
    vol_quad_minus: tuple
    line_quad: tuple
    area_plus: float
    area_minus: float
    length: float

    @property
    def area(self) -> float:
        return self.area_plus + self.area_minus


def _bisect(ls, a: np.ndarray, b: np.ndarray, sign_a: np.ndarray, tol: np.ndarray):
    """Vectorised bisection for the zero of ``ls`` on segments ``a -> b``.

    ``sign_a`` is the (nudged) sign of phi at ``a``; the opposite sign is
    assumed at ``b``. Values with ``phi == 0`` count as positive.
    """
    lo = np.zeros(len(a))
    hi = np.ones(len(a))
    length = np.linalg.norm(b - a, axis=1)
    for _ in range(BISECTION_MAX_ITER):
        if np.all((hi - lo) * length <= tol):
            break
        mid = 0.5 * (lo + hi)
        val = ls(a + mid[:, None] * (b - a))
        same = (val >= 0.0) == sign_a
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    else:
        if not np.all((hi - lo) * length <= tol):
            raise InterfaceResolutionError("edge bisection did not converge in 200 iterations")
    t = 0.5 * (lo + hi)
    return a + t[:, None] * (b - a)


def split_triangles(tris: np.ndarray, ls, vertex_phi: np.ndarray, elements=None, h: float | None = None):
    """Split a stack of triangles with one sign change each.

    ``tris`` has shape ``(M, 3, 2)`` and ``vertex_phi`` ``(M, 3)`` holds the
    nudged vertex values (no exact zeros). Returns a list of ``CutGeometry``.
    """
    tris = np.asarray(tris, dtype=float)
    vertex_phi = np.asarray(vertex_phi, dtype=float)
    m = len(tris)
    if m == 0:
        return []
    if elements is None:
        elements = np.arange(m)
    pos = vertex_phi > 0.0
    npos = pos.sum(axis=1)
    if np.any((npos == 0) | (npos == 3)):
        raise InterfaceResolutionError("split_triangles called on a triangle without a sign change")
    # lone vertex: the one whose sign differs from the other two
    lone = np.where(npos == 1, np.argmax(pos, axis=1), np.argmax(~pos, axis=1))
    i1 = (lone + 1) % 3
    i2 = (lone + 2) % 3
    rows = np.arange(m)
    x0, x1, x2 = tris[rows, lone], tris[rows, i1], tris[rows, i2]
    lone_pos = pos[rows, lone]
    if h is None:
        h = np.linalg.norm(x1 - x0, axis=1)
    tol = 1e-13 * np.broadcast_to(np.asarray(h, dtype=float), (m,))
    pa = _bisect(ls, x0, x1, lone_pos, tol)
    pb = _bisect(ls, x0, x2, lone_pos, tol)

    small = np.stack([x0, pa, pb], axis=1)
    quad1 = np.stack([pa, x1, x2], axis=1)
    quad2 = np.stack([pa, x2, pb], axis=1)
    sp, sw = _midpoint_rule(small)
    q1p, q1w = _midpoint_rule(quad1)
    q2p, q2w = _midpoint_rule(quad2)
    big_p = np.concatenate([q1p, q2p], axis=1)
    big_w = np.concatenate([q1w, q2w], axis=1)

    chord = pb - pa
    length = np.linalg.norm(chord, axis=1)
    normal = np.stack([chord[:, 1], -chord[:, 0]], axis=1)
    nn = np.linalg.norm(normal, axis=1)
    nn[nn == 0.0] = 1.0
    normal /= nn[:, None]
    # orient towards the positive side using the lone vertex position
    to_lone = x0 - pa
    flip = np.sign(np.einsum("ij,ij->i", normal, to_lone))
    flip = np.where(lone_pos, flip, -flip)
    flip[flip == 0.0] = 1.0
    normal *= flip[:, None]

    out = []
    for j in range(m):
        if lone_pos[j]:
            plus = (sp[j], sw[j])
            minus = (big_p[j], big_w[j])
        else:
            plus = (big_p[j], big_w[j])
            minus = (sp[j], sw[j])
        lq = line_quadrature(pa[j], pb[j])
        out.append(CutGeometry(
            element=int(elements[j]), p0=pa[j], p1=pb[j], normal=normal[j],
            vol_quad_plus=plus, vol_quad_minus=minus, line_quad=lq,
            area_plus=float(plus[1].sum()), area_minus=float(minus[1].sum()),
            length=float(length[j]),
        ))
    return out


def split_triangle(tri, ls, vertex_phi=None, element: int = 0) -> CutGeometry:
    """Split one triangle crossed once by the interface ``ls``.

    Vertex values are taken from ``ls`` unless given; exact zeros count as
    positive. Raises ``InterfaceResolutionError`` without a sign change.
    """
    tri = np.asarray(tri, dtype=float)
    if vertex_phi is None:
        vertex_phi = ls(tri)
    vertex_phi = np.asarray(vertex_phi, dtype=float)
    vertex_phi = np.where(vertex_phi == 0.0, np.finfo(float).tiny, vertex_phi)
    return split_triangles(tri[None], ls, vertex_phi[None], elements=[element])[0]
