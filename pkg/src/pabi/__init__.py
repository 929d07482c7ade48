"""Divergence bounds, mixing times, and privacy accounting for
projected noisy iterations under square-root-quadratic moduli of
continuity, with a Monte-Carlo validation harness."""

from .bounds import (
    RenyiBoundResult,
    dissipative_shift_series,
    kl_bound_pla,
    renyi_bound_dissipative,
    renyi_bound_general,
    renyi_bound_sqrt_shift,
)
from .errors import OracleConvergenceError, PreconditionError
from .mixing import (
    MixingResult,
    boost_rounds,
    bretagnolle_huber_tv,
    mixing_time_dissipative,
    mixing_time_weakly_smooth,
    pinsker_tv,
    theta_threshold,
)
from .moduli import (
    ConvexLipschitz,
    ConvexWeaklySmooth,
    QuadraticModulus,
    SmoothConvex,
    StronglyDissipative,
    modulus_from_class,
)
from .privacy import (
    EpsilonResult,
    PrivacySpec,
    alpha_star,
    epsilon_nsgd,
    privacy_curve_sweep,
    s_alpha_bound,
    tbar,
    v_term,
)
from .shifts import (
    FeasibilityReport,
    IterationSpec,
    ShiftSolution,
    feasibility_check,
    numeric_oracle,
    objective_E,
    solve_closed_form,
    stationarity_residuals,
)
from .simulate import (
    AbsLipschitz,
    ChainConfig,
    DissipativeQuadratic,
    PowerWeaklySmooth,
    QuadraticSmooth,
    TVEstimate,
    empirical_tv,
    rng_stream,
    run_chains,
    run_noisy_sgd,
    samples_to_csv,
    validate_mixing_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AbsLipschitz",
    "ChainConfig",
    "ConvexLipschitz",
    "ConvexWeaklySmooth",
    "DissipativeQuadratic",
    "EpsilonResult",
    "FeasibilityReport",
    "IterationSpec",
    "MixingResult",
    "OracleConvergenceError",
    "PowerWeaklySmooth",
    "PreconditionError",
    "PrivacySpec",
    "QuadraticModulus",
    "QuadraticSmooth",
    "RenyiBoundResult",
    "ShiftSolution",
    "SmoothConvex",
    "StronglyDissipative",
    "TVEstimate",
    "alpha_star",
    "boost_rounds",
    "bretagnolle_huber_tv",
    "dissipative_shift_series",
    "empirical_tv",
    "epsilon_nsgd",
    "feasibility_check",
    "kl_bound_pla",
    "mixing_time_dissipative",
    "mixing_time_weakly_smooth",
    "modulus_from_class",
    "numeric_oracle",
    "objective_E",
    "pinsker_tv",
    "privacy_curve_sweep",
    "renyi_bound_dissipative",
    "renyi_bound_general",
    "renyi_bound_sqrt_shift",
    "rng_stream",
    "run_chains",
    "run_noisy_sgd",
    "s_alpha_bound",
    "samples_to_csv",
    "solve_closed_form",
    "stationarity_residuals",
    "tbar",
    "theta_threshold",
    "v_term",
    "validate_mixing_bound",
]
