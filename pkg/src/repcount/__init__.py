"""Exact orbit counting for finite reflection groups over Z/p^M.

Builds the exceptional groups G12, G24, G29, G31 and the monomial family
G(m,s,n) from explicit generator matrices, and counts orbits of their
action on (Z/p^k)^l by several independent methods (full Burnside sums,
classwise rank/torsion sums, closed forms, fundamental-domain enumeration,
brute-force flood fill) that must agree exactly.
"""

from .catalog import ExponentList, GroupSpec, build, derive_exponents, exponents, parse_spec
from .counting import (
    CountReport,
    count_burnside_classes,
    count_burnside_full,
    count_formula_general,
    resolve_torsion,
    solomon_sum,
    torsion_census,
    torsion_classes,
)
from .errors import RepcountError
from .formulas import theorem_a, theorem_c, x24_piecewise_check
from .grassmannian import build_orbits, enumerate_distinguished, sphere_count, theorem_b
from .groups import ConjugacyClassRecord, FiniteMatrixGroup, close, rank_fixed_space
from .linalg import (
    SmithValuations,
    SquareMatrix,
    determinant,
    kernel_size,
    multiply,
    smith_valuations,
)
from .modp import (
    SATURATED,
    Modulus,
    Residue,
    hensel_lift,
    invert,
    mth_root_of_unity,
    teichmuller,
    valuation,
)
from .oracle import fixed_points_bruteforce, orbit_count_bruteforce

__version__ = "0.1.0"

__all__ = [
    "SATURATED",
    "ConjugacyClassRecord",
    "CountReport",
    "ExponentList",
    "FiniteMatrixGroup",
    "GroupSpec",
    "Modulus",
    "RepcountError",
    "Residue",
    "SmithValuations",
    "SquareMatrix",
    "build",
    "build_orbits",
    "close",
    "count_burnside_classes",
    "count_burnside_full",
    "count_formula_general",
    "derive_exponents",
    "determinant",
    "enumerate_distinguished",
    "exponents",
    "fixed_points_bruteforce",
    "hensel_lift",
    "invert",
    "kernel_size",
    "mth_root_of_unity",
    "multiply",
    "orbit_count_bruteforce",
    "parse_spec",
    "rank_fixed_space",
    "resolve_torsion",
    "smith_valuations",
    "solomon_sum",
    "sphere_count",
    "teichmuller",
    "theorem_a",
    "theorem_b",
    "theorem_c",
    "torsion_census",
    "torsion_classes",
    "valuation",
    "x24_piecewise_check",
]
