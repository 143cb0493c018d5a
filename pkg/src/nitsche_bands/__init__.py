"""Phononic crystal band structures by an unfitted Nitsche finite element method."""
from .assembly import (SystemMatrices, assemble, assemble_alt, coercivity_ratios, energy_norm,
                       hermitian_defect, shifted_strain, stiffness_apply)
from .band import (BandStructure, ConvergenceReport, GapReport, compute_bands, convergence_study,
                   detect_gaps, homogeneous_dispersion)
from .config import RunConfig, load_config
from .cutquad import CutGeometry, bulk_quadrature, split_triangle
from .eigen import EigenResult, solve_smallest
from .estimator import PhononicBandEstimator
from .exceptions import (ConfigurationError, ConvergenceError, DegenerateInterfaceError,
                         IllConditionedMassError, NitscheBandsError, NumericalError)
from .geometry import (Circle, Flower, GenericLevelSet, KPath, KPoint, LatticeSpec, LevelSet,
                       levelset_eval, reciprocal_basis, sample_path)
from .materials import PRESETS, Material, MaterialParams, NitscheParams, get_material
from .mesh import ElementClass, Mesh, Tag, build_uniform, classify
from .problem import Discretization, PhononicCrystal
from .space import DofMap, build_dofmap, shape_eval

__version__ = "0.1.0"
