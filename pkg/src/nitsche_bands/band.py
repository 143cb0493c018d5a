"""Band sweeps along k-paths, gap detection and mesh convergence studies."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .eigen import DEFAULT_BANDS, DEFAULT_TOL, DENSE_MAX
from .exceptions import ConfigurationError, ConvergenceError, NumericalError
from .geometry import KPath, KPoint, sample_path
from .materials import Material
from .mesh import DEFAULT_EPS_CUT

logger = logging.getLogger(__name__)

# relative errors below this are roundoff, i.e. the mode is reproduced exactly
EXACT_TOL = 1e-12


@dataclass(frozen=True)
class BandSample:
    arc: float
    kpoint: KPoint
    omega2: np.ndarray
    freq: np.ndarray


@dataclass(frozen=True)
class BandStructure:
    samples: tuple[BandSample, ...]
    band_count: int
    ticks: tuple[tuple[float, str], ...] = ()

    @property
    def arc(self) -> np.ndarray:
        return np.array([s.arc for s in self.samples])

    @property
    def kpoints(self) -> np.ndarray:
        return np.array([s.kpoint.k for s in self.samples])

    @property
    def omega2(self) -> np.ndarray:
        return np.array([s.omega2 for s in self.samples])

    @property
    def freq(self) -> np.ndarray:
        """Normalized frequencies, shape ``(n_samples, band_count)``."""
        return np.array([s.freq for s in self.samples])


@dataclass(frozen=True)
class Gap:
    band_low: int   # 1-based index of the band below the gap
    bottom: float
    top: float

    @property
    def width(self) -> float:
        return self.top - self.bottom


@dataclass(frozen=True)
class GapReport:
    gaps: tuple[Gap, ...]

    def __len__(self):
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    def between(self, lower: int) -> Gap | None:
        """The gap above band ``lower`` (1-based), if any."""
        for g in self.gaps:
            if g.band_low == lower:
                return g
        return None


def _tag_k(exc: NumericalError, k) -> NumericalError:
    msg = f"at k = ({k[0]:.17g}, {k[1]:.17g}): {exc}"
    if isinstance(exc, ConvergenceError):
        new = ConvergenceError(msg, residuals=exc.residuals)
    else:
        new = type(exc)(msg)
    new.k = tuple(float(v) for v in k)
    return new


def _solve_at(disc, kp: KPoint, m, tol, method, dense_max):
    try:
        return disc.solve(kp.k, m, tol, method=method, dense_max=dense_max).eigenvalues
    except NumericalError as exc:
        raise _tag_k(exc, kp.k) from exc


def compute_bands(disc, path: KPath, m: int = DEFAULT_BANDS, tol: float = DEFAULT_TOL,
                  threads: int = 1, method: str = "auto",
                  dense_max: int = DENSE_MAX) -> BandStructure:
    """Solve at every sample of ``path`` and attach normalized frequencies.

    ``disc`` is a ``Discretization``. With ``threads > 1`` the k-points are
    handed to a thread pool; samples always come back in path order.
    """
    samples = sample_path(path)
    threads = max(1, int(threads))
    args = (m, tol, method, dense_max)
    if threads == 1:
        values = [_solve_at(disc, kp, *args) for _, kp in samples]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda s: _solve_at(disc, s[1], *args), samples))
    out = []
    for (arc, kp), w in zip(samples, values):
        w = np.asarray(w, dtype=float)
        out.append(BandSample(arc, kp, w, disc.normalized_frequency(w)))
    ticks = tuple((arc, kp.label) for arc, kp in samples if kp.label)
    return BandStructure(tuple(out), m, ticks)


def detect_gaps(bands: BandStructure) -> GapReport:
    """Complete gaps between consecutive bands over the sampled path."""
    freq = bands.freq
    if freq.ndim != 2 or freq.shape[1] < 2:
        raise ValueError("need at least two bands to look for gaps")
    bottoms = freq[:, :-1].max(axis=0)
    tops = freq[:, 1:].min(axis=0)
    gaps = tuple(Gap(i + 1, float(b), float(t)) for i, (b, t) in enumerate(zip(bottoms, tops)) if t > b)
    return GapReport(gaps)


def homogeneous_dispersion(material: Material, k, a: float = 1.0, m: int = DEFAULT_BANDS,
                           cutoff: int = 4) -> np.ndarray:
    """Exact smallest ``m`` values of ``w^2`` for a homogeneous square-lattice medium.

    Every reciprocal vector ``G`` contributes one transverse branch
    ``c_T^2 |k + G|^2`` and one longitudinal branch ``c_L^2 |k + G|^2``.
    """
    k = k.k if isinstance(k, KPoint) else np.asarray(k, dtype=float)
    g = np.arange(-cutoff, cutoff + 1) * (2.0 * np.pi / a)
    gx, gy = np.meshgrid(g, g, indexing="ij")
    q2 = (k[0] + gx.ravel()) ** 2 + (k[1] + gy.ravel()) ** 2
    ct2 = material.mu / material.rho
    cl2 = (material.lam + 2.0 * material.mu) / material.rho
    vals = np.sort(np.concatenate([ct2 * q2, cl2 * q2]))
    # make sure nothing below the m-th value was cut off by the stencil
    if vals[m - 1] > ct2 * ((cutoff + 0.5) * 2.0 * np.pi / a) ** 2:
        return homogeneous_dispersion(material, k, a, m, 2 * cutoff)
    return vals[:m]


@dataclass(frozen=True)
class ConvergenceReport:
    """Eigenvalues per mesh level with successive relative errors and rates.

    ``rel_errors[j, i] = |w2[j, i] - w2[j+1, i]| / w2[j, i]`` and
    ``rates[j, i] = log2(rel_errors[j, i] / rel_errors[j+1, i])``. When an
    exact reference is supplied, ``ref_errors``/``ref_rates`` measure
    against it instead. Rates are NaN where an error is at roundoff level.
    """

    levels: tuple[int, ...]
    h: np.ndarray
    eigenvalues: np.ndarray
    rel_errors: np.ndarray
    rates: np.ndarray
    reference: np.ndarray | None = None
    ref_errors: np.ndarray | None = None
    ref_rates: np.ndarray | None = None

    @property
    def exact(self) -> np.ndarray:
        """Modes whose successive errors all sit at roundoff level."""
        return np.all(self.rel_errors < EXACT_TOL, axis=0)

    @property
    def fitted_rates(self) -> np.ndarray:
        """Least-squares slope of log(rel_error) against log(h), per mode."""
        x = np.log(self.h[:-1])
        out = np.full(self.rel_errors.shape[1], np.nan)
        for i in np.flatnonzero(~self.exact):
            e = self.rel_errors[:, i]
            if np.all(e >= EXACT_TOL):
                out[i] = np.polyfit(x, np.log(e), 1)[0]
        return out


def _rates(err: np.ndarray, ratio: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.log2(err[:-1] / err[1:]) / np.log2(ratio)[:, None]
    bad = (err[:-1] < EXACT_TOL) | (err[1:] < EXACT_TOL)
    r[bad] = np.nan
    return r


def convergence_study(crystal, k, levels, m: int = 6, eps_cut: float = DEFAULT_EPS_CUT,
                      gamma_hat: float = 100.0, diagonal: str = "anti", tol: float = DEFAULT_TOL,
                      reference=None) -> ConvergenceReport:
    """Solve on a sequence of refined meshes and fit convergence rates."""
    levels = tuple(int(n) for n in levels)
    if len(levels) < 3:
        raise ConfigurationError(f"convergence needs at least 3 mesh levels, got {len(levels)}")
    for n0, n1 in zip(levels[:-1], levels[1:]):
        if n1 <= n0 or n1 % n0:
            raise ConfigurationError(f"mesh levels must be increasing multiples, got {levels}")
    k = k.k if isinstance(k, KPoint) else np.asarray(k, dtype=float)
    vals = []
    for n in levels:
        disc = crystal.discretize(n, eps_cut=eps_cut, gamma_hat=gamma_hat, diagonal=diagonal)
        try:
            vals.append(disc.solve(k, m, tol).eigenvalues)
        except NumericalError as exc:
            raise _tag_k(exc, k) from exc
        logger.info("N=%d: %d dofs", n, disc.n_dofs)
    vals = np.array(vals)
    lv = np.array(levels, dtype=float)
    h = crystal.lattice.a / lv
    ratio = lv[1:] / lv[:-1]
    err = np.abs(np.diff(vals, axis=0)) / np.abs(vals[:-1])
    rates = _rates(err, ratio[1:])
    ref = ref_err = ref_rates = None
    if reference is not None:
        ref = np.asarray(reference, dtype=float)[:m]
        ref_err = np.abs(vals - ref) / np.abs(ref)
        ref_rates = _rates(ref_err, ratio)
    return ConvergenceReport(levels, h, vals, err, rates, ref, ref_err, ref_rates)
