"""Jump-diffusion market simulation and optimal quadratic hedging in benchmark units."""

from .levy_core import (
    IntegrationError,
    JumpAtom,
    LevyMeasure,
    NoiseRealization,
    PathSeries,
    SingularDenominatorError,
    SymmetricCoefficients,
    TimeGrid,
    compensate,
    exponential_path,
    integrate,
    integrate_proportional,
    product_coefficients,
    quotient_coefficients,
    sample_noise,
)
from .market import (
    AssetSpec,
    GeometricBernoulliSpec,
    PricingKernelSpec,
    benchmark_coefficients,
    domestic_coefficients,
    domestic_drift,
    from_natural,
    geometric_price_path,
    kernel_path,
    natural_coefficients,
    to_natural,
)
from .hedging import (
    ConstantRatioRule,
    DegeneracyError,
    DegeneracyReport,
    GramSystem,
    HedgeReport,
    HedgeStrategy,
    SingleHedgeCoefficients,
    analytic_delta,
    degeneracy_check,
    evolve_portfolio,
    gram_system,
    multi_asset_hedge,
    rho_diagnostic,
    single_asset_hedge,
    single_coefficients,
    two_asset_hedge,
    volatility_inner,
)
from .sim_harness import (
    BruteForceResult,
    Scenario,
    ScenarioResult,
    brute_force_constant_hedge,
    builtin_scenario,
    run_scenario,
    scenario_ratios,
)

__version__ = "0.1.0"
