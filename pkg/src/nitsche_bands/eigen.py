"""Smallest eigenpairs of the Hermitian definite pencil ``A u = w^2 B u``."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .exceptions import ConvergenceError, IllConditionedMassError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_BANDS = 10
DENSE_MAX = 2000


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray   # ascending omega^2
    eigenvectors: np.ndarray  # (n_dofs, m), B-orthonormal columns
    residuals: np.ndarray     # normwise backward errors
    orthonormality_defect: float
    method: str
    raw_residuals: np.ndarray | None = None  # |A u - w2 B u|_2 / |u|_B, in the units of A


def _inf_norm(M) -> float:
    return float(abs(M).sum(axis=1).max())


def residuals(A, B, values, vectors) -> np.ndarray:
    """Normwise backward errors ``|A u - w2 B u| / ((|A| + |w2| |B|) |u|)``.

    Infinity norms for the matrices, 2-norms for the vectors.
    """
    na, nb = _inf_norm(A), _inf_norm(B)
    R = A @ vectors - (B @ vectors) * values[None, :]
    num = np.linalg.norm(R, axis=0)
    den = (na + np.abs(values) * nb) * np.linalg.norm(vectors, axis=0)
    return num / den


def raw_residuals(A, B, values, vectors) -> np.ndarray:
    """Unscaled residuals ``|A u - w2 B u|_2 / |u|_B``."""
    BV = B @ vectors
    R = A @ vectors - BV * values[None, :]
    bnorm = np.sqrt(np.abs(np.einsum("ij,ij->j", vectors.conj(), BV)))
    return np.linalg.norm(R, axis=0) / bnorm


def _rayleigh_ritz(A, B, V):
    """Re-diagonalise the pencil on span(V); fixes ordering and B-orthonormality."""
    Am = V.conj().T @ (A @ V)
    Bm = V.conj().T @ (B @ V)
    Am = 0.5 * (Am + Am.conj().T)
    Bm = 0.5 * (Bm + Bm.conj().T)
    w, Y = la.eigh(Am, Bm)
    return w, V @ Y


def solve_smallest(mats, m: int = DEFAULT_BANDS, tol: float = DEFAULT_TOL,
                   method: str = "auto", dense_max: int = DENSE_MAX) -> EigenResult:
    """The ``m`` smallest eigenpairs of ``(mats.A, mats.B)``.

    ``method`` is ``"dense"``, ``"sparse"`` (shift-invert Lanczos) or
    ``"auto"`` (dense up to ``dense_max`` dofs). A small positive shift keeps
    the shifted operator invertible when rigid modes sit at zero.
    """
    A = sp.csr_matrix(mats.A)
    B = sp.csr_matrix(mats.B)
    n = A.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n_dofs = {n}, got m = {m}")
    if method == "auto":
        method = "dense" if n <= dense_max else "sparse"

    if method == "dense":
        Ad, Bd = A.toarray(), B.toarray()
        try:
            w, V = la.eigh(Ad, Bd, subset_by_index=[0, m - 1], driver="gvx")
        except la.LinAlgError as exc:
            raise IllConditionedMassError(
                f"mass matrix factorization failed ({exc}); adjust eps_cut") from exc
    elif method == "sparse":
        sigma = 1e-8 * float(A.diagonal().real.sum()) / n
        shifted = (A + sigma * B).tocsc()
        # Krylov method needs some slack over the wanted count
        k = min(m + 2, n - 1)
        try:
            theta, V = eigsh(shifted, k=k, M=B.tocsc(), sigma=0.0, which="LM",
                             ncv=min(n, max(2 * k + 1, 24)), tol=0.0, maxiter=20 * n)
        except ArpackNoConvergence as exc:
            raise ConvergenceError("shift-invert Lanczos did not converge",
                                   residuals=getattr(exc, "eigenvalues", None)) from exc
        except RuntimeError as exc:
            raise IllConditionedMassError(f"shift-invert factorization failed: {exc}") from exc
        order = np.argsort(theta)[:m]
        V = V[:, order]
        w, V = _rayleigh_ritz(A, B, V)
    else:
        raise ValueError(f"unknown method {method!r}")

    w = np.asarray(w, dtype=float)
    # normalise phase so that the largest entry is real positive (reproducible output)
    idx = np.argmax(np.abs(V), axis=0)
    phase = V[idx, np.arange(V.shape[1])]
    V = V * (np.abs(phase) / phase)[None, :]
    res = residuals(A, B, w, V)
    G = V.conj().T @ (B @ V)
    defect = float(np.abs(G - np.eye(len(w))).max())
    if np.any(res > tol) or not np.all(np.isfinite(res)):
        raise ConvergenceError(
            f"eigenpairs above tolerance {tol:g}: max backward error {res.max():.3e}", residuals=res)
    return EigenResult(eigenvalues=w, eigenvectors=V, residuals=res,
                       orthonormality_defect=defect, method=method,
                       raw_residuals=raw_residuals(A, B, w, V))
