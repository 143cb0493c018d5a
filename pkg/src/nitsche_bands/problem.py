"""A phononic crystal cell together with its unfitted discretization."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import FormParts, SystemMatrices, assemble_parts
from .eigen import DEFAULT_BANDS, DEFAULT_TOL, DENSE_MAX, EigenResult, solve_smallest
from .geometry import KPoint, LatticeSpec, LevelSet
from .materials import Material, MaterialParams, NitscheParams
from .mesh import DEFAULT_EPS_CUT, ElementClass, Mesh, build_uniform, classify
from .space import DofMap, build_dofmap


@dataclass(frozen=True)
class PhononicCrystal:
    """Unit cell: lattice, inclusion interface and the two materials.

    ``interface=None`` means a homogeneous cell made of ``matrix``.
    """

    lattice: LatticeSpec
    matrix: Material
    inclusion: Material
    interface: LevelSet | None = None

    def __post_init__(self):
        if self.interface is not None:
            self.interface.check_inside_cell(self.lattice)

    @property
    def materials(self) -> MaterialParams:
        return MaterialParams(plus=self.matrix, minus=self.inclusion)

    @property
    def reference_speed(self) -> float:
        """Transverse wave speed used to normalise frequencies (the inclusion's)."""
        return self.inclusion.c_transverse

    def discretize(self, N: int, eps_cut: float = DEFAULT_EPS_CUT, gamma_hat: float = 100.0,
                   diagonal: str = "anti") -> "Discretization":
        mesh = build_uniform(self.lattice, N, diagonal=diagonal)
        classes = classify(mesh, self.interface, eps_cut)
        dofmap = build_dofmap(mesh, classes)
        nit = NitscheParams.from_materials(self.materials, gamma_hat)
        return Discretization(self, mesh, classes, dofmap, nit)


@dataclass
class Discretization:
    crystal: PhononicCrystal
    mesh: Mesh
    classes: ElementClass
    dofmap: DofMap
    nitsche: NitscheParams
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_dofs(self) -> int:
        return self.dofmap.n_dofs

    def parts(self, k, variant: str = "tensor") -> FormParts:
        k = k.k if isinstance(k, KPoint) else np.asarray(k, dtype=float)
        return assemble_parts(self.mesh, self.classes, self.dofmap, self.crystal.materials,
                              self.nitsche, k, variant)

    def matrices(self, k, variant: str = "tensor") -> SystemMatrices:
        return self.parts(k, variant).system()

    def solve(self, k, m: int = DEFAULT_BANDS, tol: float = DEFAULT_TOL,
              method: str = "auto", dense_max: int = DENSE_MAX) -> EigenResult:
        return solve_smallest(self.matrices(k), m, tol, method=method, dense_max=dense_max)

    def normalized_frequency(self, omega2) -> np.ndarray:
        omega = np.sqrt(np.clip(np.asarray(omega2, dtype=float), 0.0, None))
        return omega * self.crystal.lattice.a / (2.0 * np.pi * self.crystal.reference_speed)
