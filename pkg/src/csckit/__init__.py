"""Desk-scale verification toolkit for constant-scalar-curvature Kahler gluing data.

Exact rational arithmetic for orbifolds, Hirzebruch-Jung chains, parabolic
stability and blow-up calculus; floating point for quaternion representations,
momentum profiles and Kahler-class design.
"""

from . import calabi, classdesign, numkit, orbifold, parabolic, quatrep, surfcalc
from ._kernels import BACKEND
from .calabi import (
    DecayFit,
    LaurentProfile,
    PositivityReport,
    ale_decay_fit,
    phi_flat,
    phi_scalar_flat,
    positivity_check,
    scalar_curvature_exact,
    scalar_curvature_numeric,
    t_of_tau,
)
from .classdesign import (
    ClassInvariants,
    TwistedProductClass,
    design_c1_ratio,
    design_fiber_ratio,
    einstein_ratio,
    invariants,
    product_scalar_sign,
)
from .errors import (
    CheckFailure,
    ConvergenceError,
    CscError,
    DomainError,
    InfeasibleSectionError,
    SNCViolation,
    UnknownGeneratorError,
    ValidationError,
)
from .numkit import Rational, as_rational, hj_chain_census, hj_complement, hj_evaluate, hj_expand
from .orbifold import (
    GoodnessVerdict,
    GroupPresentation,
    OrbifoldSurface,
    classify,
    euler_orb,
    has_nontrivial_holomorphic_fields,
    presentation,
)
from .parabolic import (
    ParabolicPoint,
    ParabolicRuledSurface,
    SectionSpec,
    StabilityResult,
    blowup_count,
    is_feasible,
    is_stable,
    min_degree_through,
    slope,
    to_orbifold,
)
from .quatrep import (
    QuatModSign,
    RelationReport,
    Representation,
    RotationData,
    check_representation,
    enumerate_image,
    is_irreducible,
    preset,
    rotation_of,
)
from .surfcalc import (
    BlowupStep,
    Curve,
    CurveConfig,
    blow_down,
    blow_up_at_intersection,
    blow_up_on_curve,
    fiber_chain,
    minimal_model,
    realize_iterated_blowup,
)

__version__ = "0.1.0"
