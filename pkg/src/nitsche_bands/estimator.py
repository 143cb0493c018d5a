"""scikit-learn style wrapper: fit builds the mesh, predict maps k-points to bands."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .eigen import DEFAULT_BANDS, DEFAULT_TOL
from .exceptions import ConfigurationError
from .geometry import Circle, Flower, LatticeSpec, LevelSet
from .materials import get_material
from .mesh import DEFAULT_EPS_CUT
from .problem import PhononicCrystal


class PhononicBandEstimator(TransformerMixin, BaseEstimator):
    """Band structure model of a square-lattice two-phase crystal.

    ``X`` passed to ``predict``/``transform`` is an ``(n, 2)`` array of
    quasi-momenta. ``predict`` returns the ``n_bands`` smallest ``w^2`` per
    row, ``transform`` the corresponding normalized frequencies.

    ``interface`` is ``"circle"`` (uses ``radius``), ``"flower"`` (uses
    ``flower_scale``), ``"none"`` or any ``LevelSet``.
    """

    def __init__(self, matrix="epoxy", inclusion="aurum", interface="circle", radius=0.25,
                 flower_scale=0.5, a=1.0, N=32, n_bands=DEFAULT_BANDS, eps_cut=DEFAULT_EPS_CUT,
                 gamma_hat=100.0, tol=DEFAULT_TOL, diagonal="anti"):
        self.matrix = matrix
        self.inclusion = inclusion
        self.interface = interface
        self.radius = radius
        self.flower_scale = flower_scale
        self.a = a
        self.N = N
        self.n_bands = n_bands
        self.eps_cut = eps_cut
        self.gamma_hat = gamma_hat
        self.tol = tol
        self.diagonal = diagonal

    def _levelset(self):
        c = (0.5 * self.a, 0.5 * self.a)
        if isinstance(self.interface, LevelSet):
            return self.interface
        kind = str(self.interface).lower()
        if kind == "circle":
            return Circle(c, self.radius * self.a)
        if kind == "flower":
            return Flower.scaled(self.flower_scale * self.a, c)
        if kind in ("none", "homogeneous"):
            return None
        raise ConfigurationError(f"unknown interface {self.interface!r}")

    def fit(self, X=None, y=None):
        """Build the discretization; ``X`` and ``y`` are ignored."""
        if not self.a > 0:
            raise ConfigurationError("a must be positive")
        if int(self.n_bands) < 1:
            raise ConfigurationError("n_bands must be positive")
        self.crystal_ = PhononicCrystal(LatticeSpec.square(self.a), get_material(self.matrix),
                                        get_material(self.inclusion), self._levelset())
        self.discretization_ = self.crystal_.discretize(self.N, eps_cut=self.eps_cut,
                                                        gamma_hat=self.gamma_hat,
                                                        diagonal=self.diagonal)
        self.n_dofs_ = self.discretization_.n_dofs
        return self

    def _check_k(self, X):
        check_is_fitted(self, "discretization_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected quasi-momenta of shape (n, 2), got {X.shape}")
        return X

    def predict(self, X):
        X = self._check_k(X)
        disc = self.discretization_
        return np.array([disc.solve(k, int(self.n_bands), self.tol).eigenvalues for k in X])

    def transform(self, X):
        return self.discretization_.normalized_frequency(self.predict(X))
