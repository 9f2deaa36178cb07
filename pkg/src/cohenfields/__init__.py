"""Exact coefficient-field machinery for formal power series in positive
characteristic: divided-power Taylor maps on truncated series, Weierstrass
preparation, ideal normalization, a formal implicit-function solver, and
the structure-isomorphism pipeline over the perfect closure of F_p(t).
"""

from .coeffield import (
    CohenIso,
    IdealGenerator,
    TowerPoly,
    build_cohen,
    counterexample_report,
    effective_generator,
)
from .fields import GF, PerfClosure, PerfClosureElem
from .implicit import compose, implicit_solve, revert
from .normalization import (
    CoordChange,
    CoordLayer,
    NormalizationResult,
    normalize_ideal,
    normalize_principal,
    separability_check,
)
from .residue import LaurentField, LaurentSeries, ResidueElem, ResidueField
from .series import EXACT, TruncSeries, binom_mod
from .weierstrass import (
    SigmaChoice,
    WeierstrassFactorization,
    distinguish,
    newton_min_set,
    select_sigma,
    weierstrass_divide,
    weierstrass_prepare,
)

__version__ = "0.1.0"

__all__ = [
    "CohenIso",
    "CoordChange",
    "CoordLayer",
    "EXACT",
    "GF",
    "IdealGenerator",
    "LaurentField",
    "LaurentSeries",
    "NormalizationResult",
    "PerfClosure",
    "PerfClosureElem",
    "ResidueElem",
    "ResidueField",
    "SigmaChoice",
    "TowerPoly",
    "TruncSeries",
    "WeierstrassFactorization",
    "binom_mod",
    "build_cohen",
    "compose",
    "counterexample_report",
    "distinguish",
    "effective_generator",
    "implicit_solve",
    "newton_min_set",
    "normalize_ideal",
    "normalize_principal",
    "revert",
    "select_sigma",
    "separability_check",
    "weierstrass_divide",
    "weierstrass_prepare",
]
