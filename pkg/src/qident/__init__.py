"""qident: exact-arithmetic verification kernel for q-series identities.

The package verifies generating-function identities for Rogers--Szegő-type
polynomial families in three ways: formal truncated-series comparison over
Q(q, A, B, x, y, b, u, v), seeded rational sampling of the same comparisons,
and certified interval evaluation at rational points with rigorous tail
bounds.
"""

from .algebra import (
    DEFAULT_REGISTRY,
    MultiPoly,
    Q,
    RatFunc,
    SymbolRegistry,
    TruncSeries,
)
from .errors import (
    DivisionByZero,
    DomainViolation,
    NotFormallySummable,
    QidentError,
    TailNotBounded,
)
from .families import (
    caoniu_C,
    caoniu_D,
    cauchy_p,
    cigler_C3,
    cigler_D3,
    cigler_l,
    hahn_phi,
    hahn_psi,
    qlaguerre_L,
)
from .operators import apply_D, apply_E, apply_T, apply_theta
from .qcore import (
    phi_formal,
    phi_numeric,
    qbinom_int,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_recip,
)
from .verify import (
    CheckReport,
    run_analytic,
    run_formal,
    run_mutations,
    run_reductions,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_REGISTRY",
    "CheckReport",
    "DivisionByZero",
    "DomainViolation",
    "MultiPoly",
    "NotFormallySummable",
    "Q",
    "QidentError",
    "RatFunc",
    "SymbolRegistry",
    "TailNotBounded",
    "TruncSeries",
    "apply_D",
    "apply_E",
    "apply_T",
    "apply_theta",
    "caoniu_C",
    "caoniu_D",
    "cauchy_p",
    "cigler_C3",
    "cigler_D3",
    "cigler_l",
    "hahn_phi",
    "hahn_psi",
    "phi_formal",
    "phi_numeric",
    "qbinom_int",
    "qlaguerre_L",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_infinite_recip",
    "run_analytic",
    "run_formal",
    "run_mutations",
    "run_reductions",
    "run_suite",
    "__version__",
]
