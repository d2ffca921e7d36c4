"""Early exercise boundary of the zero-dividend American put.

Five closed-form near-expiry approximations, a closed integral formula with
its convexity analysis, a sequential solver for the governing nonlinear
integral equation, a projected-SOR finite-difference benchmark, and the
Green's-function machinery that turns boundary differences into option
mispricing numbers.
"""

from .core import (
    BoundaryCurve,
    BracketError,
    DomainError,
    MarketParams,
    MaxIterationsError,
    NumericalError,
    QuadratureConfig,
    QuadratureNodeError,
    TailTooHeavyError,
    TauGrid,
    find_root_bracketed,
    integrate_newton_cotes,
    integrate_semi_infinite,
    interp_linear,
    norm_cdf,
)
from .asymptotics import (
    AsymptoticMethod,
    chen_chadam_alpha,
    eta_lowest_order,
    rho_asymptotic,
    rho_chen_chadam,
    rho_ekk,
    rho_kk,
    rho_ssc_analytic,
    rho_zhu_asymptote,
)
from .zhu import (
    SmallTauSubstitution,
    ZhuKernelValue,
    f2_max,
    gamma_critical,
    rho_zhu,
    zhu_kernels,
    zhu_second_derivative,
)
from .ssch import (
    EtaPath,
    LogDomainError,
    MeshError,
    MeshKind,
    big_f_eval,
    build_mesh,
    g_eval,
    solve_boundary,
    solve_eta_at,
)
from .psor import (
    IterationError,
    NoContactError,
    PsorConfig,
    PsorSolution,
    extract_boundary,
    price_at,
    psor_solve,
)
from .pricing import (
    DegenerateDenominatorError,
    PriceTransformConsts,
    boundary_rel_err,
    european_put,
    green_kernel,
    mispricing_err,
    price_gap_at_boundary,
    price_gap_full,
)

__version__ = "0.1.0"
