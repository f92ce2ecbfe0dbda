"""Exact computations in the ring of polynomial-growth functions on Z^d."""

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyList,
    EqualPoints,
    HalfRootNotExact,
    ParseError,
    PolygrowthError,
    QuotientNotInferable,
    VanishesAtK,
)
from .expr import (
    Conj,
    Const,
    CoordPoly,
    Dirac,
    DiracComplement,
    Expr,
    FiniteSupport,
    HalfRoot,
    InvNormPower,
    MagnitudeMaxSq,
    PatternMask,
    Product,
    Quotient,
    ScalarMul,
    Shift,
    Sum,
    coord,
    const,
    eval_approx,
    evaluate,
    evaluate_points,
    parse,
    poly,
    serialize,
    zero_set,
)
from .growth import (
    AuditReport,
    GrowthCertificate,
    LowerCertificate,
    NoFit,
    audit_lower,
    audit_upper,
    fit_certificate,
    infer_certificate,
    infer_lower,
)
from .ideals import (
    classify_principal_prime,
    fixed_maximal_member,
    maximality_witness,
    nonfixed_ideal_member,
    separator,
)
from .krull import (
    ZeroOrder,
    chain_report,
    check_P1,
    check_P2,
    membership_i_n,
    membership_i_star,
    membership_M_n,
    pattern_mask,
    zero_order,
)
from .lattice import GaussianRational, Window, enumerate_window, norm1, squared_magnitude
from .ring import cofactor, divides, gcd, ideal_member, is_invertible, principal_generator

__version__ = "0.1.0"
