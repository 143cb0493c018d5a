"""Nitsche stiffness and mass matrices for the Bloch-shifted elasticity operator.

Row index = test function, column index = trial function, so that
``A[p, q] = a_h(phi_q, phi_p)`` and ``x^H A x = a_h(u, u)`` for ``u = sum x_q phi_q``.
Jumps are ``v+ - v-`` and the interface normal points from the inclusion
into the matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .cutquad import _midpoint_rule
from .geometry import KPoint
from .materials import MaterialParams, NitscheParams
from .mesh import ElementClass, Mesh, Tag
from .space import DofMap, barycentric


def stiffness_apply(mu, lam, E):
    """Hooke's law ``C E = 2 mu E + lam tr(E) I`` on (stacks of) 2x2 tensors."""
    E = np.asarray(E)
    tr = E[..., 0, 0] + E[..., 1, 1]
    out = 2.0 * mu * E
    out = out.astype(np.result_type(out, tr, lam * tr))
    out[..., 0, 0] += lam * tr
    out[..., 1, 1] += lam * tr
    return out


def shifted_strain(grad_u, k, u):
    """Symmetric part of ``grad_u + i k (x) u``.

    ``grad_u[..., i, j]`` is the derivative of component ``i`` along ``j``.
    """
    grad_u = np.asarray(grad_u)
    u = np.asarray(u)
    k = k.k if isinstance(k, KPoint) else np.asarray(k, dtype=float)
    g = grad_u + 1j * k[..., :, None] * u[..., None, :]
    return 0.5 * (g + np.swapaxes(g, -1, -2))


@dataclass(frozen=True)
class SystemMatrices:
    A: sp.csr_matrix
    B: sp.csr_matrix

    @property
    def n_dofs(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class FormParts:
    """Separately assembled pieces of the Nitsche form.

    ``consistency`` holds the flux/jump term only; its adjoint is added in
    ``stiffness``. ``flux_gram`` is the interface Gram matrix of the weighted
    flux average, used by the mesh-dependent energy norm.
    """

    volume: sp.csr_matrix
    consistency: sp.csr_matrix
    penalty: sp.csr_matrix
    flux_gram: sp.csr_matrix
    mass: sp.csr_matrix
    h: float

    @property
    def stiffness(self) -> sp.csr_matrix:
        return (self.volume + self.consistency + self.consistency.getH() + self.penalty).tocsr()

    @property
    def energy(self) -> sp.csr_matrix:
        return (self.volume + self.h * self.flux_gram + self.penalty).tocsr()

    def system(self) -> SystemMatrices:
        return SystemMatrices(A=self.stiffness, B=self.mass)


def _basis_fields(lam, grads):
    """Values ``(M, Q, 6, 2)`` and gradients ``(M, 6, 2, 2)`` of the local vector basis."""
    m, q, _ = lam.shape
    vals = np.zeros((m, q, 6, 2))
    vals[:, :, 0::2, 0] = lam
    vals[:, :, 1::2, 1] = lam
    gu = np.zeros((m, 6, 2, 2))
    gu[:, 0::2, 0, :] = grads
    gu[:, 1::2, 1, :] = grads
    return vals, gu


def _divergence(gu, vals, k):
    """``div u + i k.u`` per basis function, computed without forming the strain."""
    return (gu[:, None, :, 0, 0] + gu[:, None, :, 1, 1]) + 1j * np.einsum("i,mqbi->mqb", k, vals)


class _Accumulator:
    def __init__(self, n):
        self.n = n
        self.rows, self.cols, self.vals = [], [], []

    def add(self, dofs_row, dofs_col, local):
        r = np.broadcast_to(dofs_row[:, :, None], local.shape)
        c = np.broadcast_to(dofs_col[:, None, :], local.shape)
        self.rows.append(r.ravel())
        self.cols.append(c.ravel())
        self.vals.append(local.ravel())

    def tocsr(self):
        if not self.rows:
            return sp.csr_matrix((self.n, self.n), dtype=complex)
        mat = sp.coo_matrix((np.concatenate(self.vals).astype(complex),
                             (np.concatenate(self.rows), np.concatenate(self.cols))),
                            shape=(self.n, self.n))
        return mat.tocsr()


def _volume_local(coords, pts, wts, k, material, variant):
    lam, grads = barycentric(coords, pts)
    vals, gu = _basis_fields(lam, grads)
    E = shifted_strain(gu[:, None], k, vals)            # (M, Q, 6, 2, 2)
    if variant == "tensor":
        S = stiffness_apply(material.mu, material.lam, E)
        stiff = np.einsum("mq,mqbij,mqaij->mab", wts, S, E.conj())
    else:
        div = _divergence(gu, vals, k)
        stiff = (2.0 * material.mu * np.einsum("mq,mqbij,mqaij->mab", wts, E, E.conj())
                 + material.lam * np.einsum("mq,mqb,mqa->mab", wts, div, div.conj()))
    mass = material.rho * np.einsum("mq,mqbi,mqai->mab", wts, vals, vals)
    return stiff, mass


def _interface_traces(coords, pts, normals, k, material, kappa, variant):
    lam, grads = barycentric(coords, pts)
    vals, gu = _basis_fields(lam, grads)
    E = shifted_strain(gu[:, None], k, vals)
    if variant == "tensor":
        flux = np.einsum("mgbij,mj->mgbi", stiffness_apply(material.mu, material.lam, E), normals)
    else:
        div = _divergence(gu, vals, k)
        flux = (2.0 * material.mu * np.einsum("mgbij,mj->mgbi", E, normals)
                + material.lam * div[..., None] * normals[:, None, None, :])
    return vals, kappa * flux


def _pad_rule(rules, npts):
    pts = np.zeros((len(rules), npts, 2))
    wts = np.zeros((len(rules), npts))
    for i, (p, w) in enumerate(rules):
        pts[i, :len(w)] = p
        wts[i, :len(w)] = w
        pts[i, len(w):] = p[0]
    return pts, wts


def assemble_parts(mesh: Mesh, classes: ElementClass, dofmap: DofMap, mat: MaterialParams,
                   nit: NitscheParams, k, variant: str = "tensor") -> FormParts:
    """Assemble every piece of the Nitsche form at quasi-momentum ``k``.

    ``variant="tensor"`` contracts ``C(E) : conj(E)``; ``variant="lame"``
    expands it as ``2 mu E : conj(E) + lambda div conj(div)``.
    """
    if variant not in ("tensor", "lame"):
        raise ValueError(f"unknown variant {variant!r}")
    k = k.k if isinstance(k, KPoint) else np.asarray(k, dtype=float)
    n = dofmap.n_dofs
    vol, mass = _Accumulator(n), _Accumulator(n)
    cons, pen, fgram = _Accumulator(n), _Accumulator(n), _Accumulator(n)

    for side, tag in ((1, Tag.PLUS), (-1, Tag.MINUS)):
        elems = np.flatnonzero(classes.tags == tag)
        if len(elems) == 0:
            continue
        coords = mesh.element_coords(elems)
        pts, wts = _midpoint_rule(coords)
        stiff, m_loc = _volume_local(coords, pts, wts, k, mat.side(side), variant)
        dofs = dofmap.element_dofs[side][elems]
        vol.add(dofs, dofs, stiff)
        mass.add(dofs, dofs, m_loc)

    cut_ids = np.array(sorted(classes.cuts), dtype=np.int64)
    if len(cut_ids):
        geoms = [classes.cuts[e] for e in cut_ids]
        coords = mesh.element_coords(cut_ids)
        for side in (1, -1):
            rules = [g.vol_quad_plus if side > 0 else g.vol_quad_minus for g in geoms]
            pts, wts = _pad_rule(rules, 6)
            stiff, m_loc = _volume_local(coords, pts, wts, k, mat.side(side), variant)
            dofs = dofmap.element_dofs[side][cut_ids]
            vol.add(dofs, dofs, stiff)
            mass.add(dofs, dofs, m_loc)

        lpts = np.stack([g.line_quad[0] for g in geoms])
        lw = np.stack([g.line_quad[1] for g in geoms])
        normals = np.stack([g.normal for g in geoms])
        vp, fp = _interface_traces(coords, lpts, normals, k, mat.plus, nit.kappa_plus, variant)
        vm, fm = _interface_traces(coords, lpts, normals, k, mat.minus, nit.kappa_minus, variant)
        jump = np.concatenate([vp, -vm], axis=2)            # (M, G, 12, 2)
        flux = np.concatenate([fp, fm], axis=2)
        dofs = np.concatenate([dofmap.element_dofs[1][cut_ids], dofmap.element_dofs[-1][cut_ids]], axis=1)
        cons.add(dofs, dofs, np.einsum("mg,mgbi,mgai->mab", lw, flux, jump.conj()))
        pen.add(dofs, dofs, (nit.gamma / mesh.h) * np.einsum("mg,mgbi,mgai->mab", lw, jump, jump))
        fgram.add(dofs, dofs, np.einsum("mg,mgbi,mgai->mab", lw, flux, flux.conj()))

    return FormParts(volume=vol.tocsr(), consistency=cons.tocsr(), penalty=pen.tocsr(),
                     flux_gram=fgram.tocsr(), mass=mass.tocsr(), h=mesh.h)


def assemble(mesh, classes, dofmap, mat, nit, k) -> SystemMatrices:
    """Stiffness ``A(k)`` and mass ``B`` using the stress-tensor contraction."""
    return assemble_parts(mesh, classes, dofmap, mat, nit, k, "tensor").system()


def assemble_alt(mesh, classes, dofmap, mat, nit, k) -> SystemMatrices:
    """Same matrices via the Lame expansion; an independent check on ``assemble``."""
    return assemble_parts(mesh, classes, dofmap, mat, nit, k, "lame").system()


def energy_norm(coeffs, parts: FormParts) -> float:
    """Mesh-dependent norm: volume energy, h-weighted flux average, scaled jumps."""
    c = np.asarray(coeffs)
    val = np.vdot(c, parts.energy @ c).real
    return float(np.sqrt(max(val, 0.0)))


def coercivity_ratios(parts: FormParts, n_samples: int = 100, rng=None) -> np.ndarray:
    """``Re a_h(u, u) / |||u|||^2`` for random complex coefficient vectors."""
    rng = np.random.default_rng(rng)
    n = parts.volume.shape[0]
    A, N = parts.stiffness, parts.energy
    X = rng.standard_normal((n, n_samples)) + 1j * rng.standard_normal((n, n_samples))
    num = np.einsum("ij,ij->j", X.conj(), A @ X).real
    den = np.einsum("ij,ij->j", X.conj(), N @ X).real
    return num / den


def hermitian_defect(M) -> float:
    """``max |M - M^H|`` relative to ``max |M|``."""
    M = sp.csr_matrix(M)
    scale = abs(M).max()
    if scale == 0:
        return 0.0
    diff = M - M.getH()
    return float(abs(diff).max() / scale) if diff.nnz else 0.0


def dump_coo(M, stream) -> None:
    """Coordinate text dump: ``row col re im`` per stored entry."""
    coo = sp.coo_matrix(M)
    order = np.lexsort((coo.col, coo.row))
    for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
        stream.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")
