"""Geodesic metric spaces, Frechet barycenters, and rate experiments."""

__version__ = "0.1.0"

from .barycenter import (
    BarycenterResult,
    SolverOptions,
    barycenter,
    bures_fixed_point,
    empirical_barycenter,
    frechet_mean_descent,
    quantile_mean,
    variance,
)
from .comparison import (
    MonotonicityReport,
    TriangleSides,
    angle_monotonicity_probe,
    c_kappa,
    comparison_angle,
    cone_distance,
    model_diameter,
    quadruple_defect,
    s_kappa,
    tangent_inner,
)
from .distributions import DiscreteDistribution
from .families import (
    EuclideanGaussian,
    Family,
    GaussianEnsemble,
    HyperbolicGaussian,
    SphereCap,
    family_from_config,
)
from .hugging import (
    HuggingReport,
    bures_potential_bounds,
    exp_barycenter_residual,
    extendibility_kmin,
    hugging_value,
    min_hugging_over_targets,
    support_extendibility,
    variance_equality_residual,
    wasserstein_kmin,
)
from .ratelab import (
    RateCurve,
    RateExperimentConfig,
    TailExperimentResult,
    estimate_sigma2,
    fit_loglog_slope,
    population_barycenter,
    run_rate_experiment,
    run_tail_experiment,
    subgaussian_proxy_check,
)
from .spaces import (
    BuresWasserstein,
    Euclidean,
    Extendibility,
    GaussianPoint,
    GeodesicSegment,
    Hyperboloid,
    QuantileSpace,
    Space,
    Sphere,
    TangentVector,
    point_from_payload,
)

__all__ = [name for name in dir() if not name.startswith("_")]
