"""Doubled periodic P1 vector space: dof numbering and shape functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import ElementClass, Mesh

SIDES = (1, -1)


@dataclass(frozen=True)
class DofMap:
    """Global numbering of complex scalar dofs.

    Dofs are ordered side-major (matrix side first), then by canonical node,
    then by displacement component. ``element_dofs[s]`` is an
    ``(n_triangles, 6)`` array with local order ``2 * vertex + component``;
    rows of triangles outside the side's fictitious mesh hold -1.
    """

    n_dofs: int
    node_rank: dict          # side -> (N^2,) rank of canonical node or -1
    offsets: dict            # side -> first dof of that side
    element_dofs: dict       # side -> (n_triangles, 6)
    side_support: np.ndarray  # (n_dofs,) +1 / -1
    dof_node: np.ndarray      # (n_dofs,) canonical node of each dof

    def n_side(self, side: int) -> int:
        return int(np.count_nonzero(self.side_support == side))


def build_dofmap(mesh: Mesh, classes: ElementClass) -> DofMap:
    master = mesh.periodic_master
    nt = mesh.n_triangles
    offset = 0
    node_rank, offsets, element_dofs = {}, {}, {}
    support, dof_node = [], []
    for side in SIDES:
        elems = classes.elements(side)
        canon = master[mesh.triangles[elems]]
        used = np.unique(canon)
        rank = np.full(mesh.n_canonical, -1, dtype=np.int64)
        rank[used] = np.arange(len(used))
        edofs = np.full((nt, 6), -1, dtype=np.int64)
        base = offset + 2 * rank[canon]           # (n_elems, 3)
        edofs[elems, 0::2] = base
        edofs[elems, 1::2] = base + 1
        node_rank[side] = rank
        offsets[side] = offset
        element_dofs[side] = edofs
        support.append(np.full(2 * len(used), side, dtype=np.int8))
        dof_node.append(np.repeat(used, 2))
        offset += 2 * len(used)
    return DofMap(n_dofs=offset, node_rank=node_rank, offsets=offsets,
                  element_dofs=element_dofs, side_support=np.concatenate(support),
                  dof_node=np.concatenate(dof_node))


@dataclass(frozen=True)
class ShapeEval:
    values: np.ndarray  # (3,)
    grads: np.ndarray   # (3, 2)


def barycentric(tri: np.ndarray, x: np.ndarray):
    """Barycentric coordinates and their gradients for stacks of triangles.

    ``tri`` is ``(M, 3, 2)`` and ``x`` is ``(M, Q, 2)``; returns values of
    shape ``(M, Q, 3)`` and gradients of shape ``(M, 3, 2)``.
    """
    x0 = tri[:, 0]
    jac = np.stack([tri[:, 1] - x0, tri[:, 2] - x0], axis=2)  # columns are edge vectors
    det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    inv = np.empty_like(jac)
    inv[:, 0, 0] = jac[:, 1, 1] / det
    inv[:, 0, 1] = -jac[:, 0, 1] / det
    inv[:, 1, 0] = -jac[:, 1, 0] / det
    inv[:, 1, 1] = jac[:, 0, 0] / det
    ref = np.einsum("mij,mqj->mqi", inv, x - x0[:, None, :])
    lam = np.concatenate([1.0 - ref.sum(axis=2, keepdims=True), ref], axis=2)
    g12 = inv  # rows: gradients of lambda_1, lambda_2
    grads = np.concatenate([-g12.sum(axis=1, keepdims=True), g12], axis=1)
    return lam, grads


def shape_eval(tri, x) -> ShapeEval:
    tri = np.asarray(tri, dtype=float)
    x = np.asarray(x, dtype=float)
    e1, e2 = tri[1] - tri[0], tri[2] - tri[0]
    if abs(e1[0] * e2[1] - e1[1] * e2[0]) <= 1e-14 * max(e1 @ e1, e2 @ e2):
        raise ValueError("degenerate triangle")
    lam, grads = barycentric(tri[None], x[None, None])
    return ShapeEval(values=lam[0, 0], grads=grads[0])
