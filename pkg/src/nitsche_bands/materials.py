"""Isotropic elastic materials and the built-in presets."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ConfigurationError


@dataclass(frozen=True)
class Material:
    rho: float   # kg/m^3
    lam: float   # first Lame parameter, N/m^2
    mu: float    # shear modulus, N/m^2
    name: str = ""

    def __post_init__(self):
        if not (self.mu > 0 and self.lam >= 0 and self.rho > 0):
            raise ConfigurationError(
                f"material {self.name or '?'}: need mu > 0, lambda >= 0, rho > 0 "
                f"(got mu={self.mu}, lambda={self.lam}, rho={self.rho})")

    @property
    def beta(self) -> float:
        return 2.0 * self.mu + self.lam

    @property
    def c_transverse(self) -> float:
        return math.sqrt(self.mu / self.rho)

    @property
    def c_longitudinal(self) -> float:
        return math.sqrt((self.lam + 2.0 * self.mu) / self.rho)


PRESETS = {
    "aurum": Material(rho=19500.0, lam=4.23e10, mu=2.99e10, name="aurum"),
    "aluminium": Material(rho=2730.0, lam=4.59e10, mu=2.70e10, name="aluminium"),
    "epoxy": Material(rho=1180.0, lam=4.23e9, mu=1.57e9, name="epoxy"),
}
PRESETS["gold"] = PRESETS["aurum"]
PRESETS["aluminum"] = PRESETS["aluminium"]


def get_material(spec) -> Material:
    """Resolve a preset name, a ``Material`` or a mapping with rho/lambda/mu."""
    if isinstance(spec, Material):
        return spec
    if isinstance(spec, str):
        try:
            return PRESETS[spec.lower()]
        except KeyError:
            raise ConfigurationError(f"unknown material preset {spec!r}") from None
    if isinstance(spec, dict):
        if "preset" in spec:
            return get_material(spec["preset"])
        try:
            lam = spec["lambda"] if "lambda" in spec else spec["lam"]
            return Material(rho=float(spec["rho"]), lam=float(lam), mu=float(spec["mu"]),
                            name=str(spec.get("name", "")))
        except KeyError as exc:
            raise ConfigurationError(f"material is missing field {exc.args[0]!r}") from None
    raise ConfigurationError(f"cannot interpret material {spec!r}")


@dataclass(frozen=True)
class MaterialParams:
    """Matrix (``plus``, outside) and inclusion (``minus``) materials."""

    plus: Material
    minus: Material

    def side(self, s: int) -> Material:
        return self.plus if s > 0 else self.minus

    @property
    def is_homogeneous(self) -> bool:
        p, m = self.plus, self.minus
        return (p.rho, p.lam, p.mu) == (m.rho, m.lam, m.mu)


@dataclass(frozen=True)
class NitscheParams:
    kappa_plus: float
    kappa_minus: float
    gamma_hat: float
    gamma: float

    @classmethod
    def from_materials(cls, mat: MaterialParams, gamma_hat: float = 100.0) -> "NitscheParams":
        if not gamma_hat > 0:
            raise ConfigurationError("gamma_hat must be positive")
        bp, bm = mat.plus.beta, mat.minus.beta
        return cls(kappa_plus=bm / (bp + bm), kappa_minus=bp / (bp + bm),
                   gamma_hat=float(gamma_hat), gamma=gamma_hat * bp * bm / (bp + bm))

    def kappa(self, s: int) -> float:
        return self.kappa_plus if s > 0 else self.kappa_minus
