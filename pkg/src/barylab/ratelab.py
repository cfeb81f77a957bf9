"""Monte Carlo verification harness for barycenter convergence rates.

Experiments verify three rate regimes and a tail bound:

* nonpositive curvature: E d^2(b_n, b*) <= sigma^2 / n,
* extendible support on nonnegative curvature: E d^2 <= 4 sigma^2 / (n k^2)
  with k from the support extendibility bound,
* Gaussian transport families: E W2^2 <= 4 sigma^2 / ((1 - beta + alpha) n),
* a high-probability bound d^2 <= c1 log(2/delta) / n under a subgaussian
  variance proxy.

Hypotheses are hard gates: an experiment refuses to run when its premises
fail numerically.  All randomness derives from the master seed through
per-purpose and per-trial streams, so results are independent of execution
order and bit-reproducible on one platform.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .barycenter import SolverOptions, empirical_barycenter
from .errors import (
    AnchorNotBarycenter,
    DiscardRateExceeded,
    HypothesisViolated,
    InsufficientGrid,
)
from .families import Family, GaussianEnsemble
from .hugging import extendibility_kmin, hugging_value, wasserstein_kmin

THEOREMS = ("negcurv", "master_extendible", "wasserstein", "tail")

# stream labels for seed derivation
_VERIFY, _SIGMA2, _TRIAL, _PROFILE, _SUBG = 1, 2, 3, 4, 5

# discarding more than this fraction of trials fails the run
MAX_DISCARD_RATE = 0.01

# proof constant c in (0, 1) for the tail thresholds, fixed by convention
TAIL_SPLIT_C = 0.5

# sampled hugging minima overestimate the true minimum; thresholds use this margin
PK_MARGIN = 0.9


@dataclass(frozen=True)
class RateExperimentConfig:
    family: Family
    theorem: str
    n_grid: tuple
    trials: int
    master_seed: int
    solver: SolverOptions = SolverOptions()
    sigma2_draws: int = 1_000_000
    verify_draws: int = 100_000
    threads: int = 1

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem!r}")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or any(n < 2 for n in grid) or list(grid) != sorted(grid):
            raise ValueError("n_grid must be ascending with every n >= 2")
        object.__setattr__(self, "n_grid", grid)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class RatePoint:
    n: int
    trials: int
    mean_sq_dist: float
    stderr: float
    sigma2: float
    bound: float
    ratio: float


@dataclass(frozen=True)
class RateCurve:
    points: tuple
    slope: float
    k_used: float
    sigma2: float
    sigma2_stderr: float
    theorem: str
    space: str
    master_seed: int
    discarded: int = 0


@dataclass(frozen=True)
class SubgaussianCheck:
    estimate: float
    stderr: float
    varsigma2: float
    passed: bool


@dataclass(frozen=True)
class HuggingProfile:
    pk: float
    pk_stderr: float
    pk_sq: float
    k_min: float
    points: int
    targets: int


@dataclass(frozen=True)
class TailExperimentResult:
    delta: float
    n: int
    trials: int
    threshold: float  # on squared distance
    empirical_exceedance: float
    bound_probability: float
    c1_used: float
    c2_used: float
    varsigma2: float
    pk_estimate: float
    pk_used: float
    kmin_estimate: float


def _stream(master_seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *path]))


def population_barycenter(config: RateExperimentConfig):
    """The family anchor, after an empirical first-order verification pass.

    Draws ``verify_draws`` samples and requires the tangent mean at the
    anchor to be within three standard errors of zero.
    """
    family = config.family
    space = family.space
    rng = _stream(config.master_seed, _VERIFY)
    count = config.verify_draws
    payload_sum = None
    sq_sum = 0.0
    done = 0
    while done < count:
        block = min(100_000, count - done)
        batch = family.sample_batch(rng, block)
        payloads, mags = space.log_batch(family.anchor, batch)
        block_sum = payloads.sum(axis=0)
        payload_sum = block_sum if payload_sum is None else payload_sum + block_sum
        sq_sum += float(mags @ mags)
        done += block
    mean_norm = space.tangent_norm(family.anchor, payload_sum / count)
    sigma2_hat = sq_sum / count
    tolerance = 3.0 * math.sqrt(sigma2_hat / count)
    if mean_norm > tolerance:
        raise AnchorNotBarycenter(
            f"empirical gradient norm {mean_norm:.3e} exceeds {tolerance:.3e} "
            f"({count} draws)"
        )
    return family.anchor


_SIGMA2_CACHE: dict = {}


def estimate_sigma2(config: RateExperimentConfig) -> tuple[float, float]:
    """Monte Carlo variance of the family about its anchor, with stderr, cached."""
    key = (config.family.key(), config.sigma2_draws, config.master_seed)
    if key not in _SIGMA2_CACHE:
        rng = _stream(config.master_seed, _SIGMA2)
        total = 0.0
        total_sq = 0.0
        done = 0
        while done < config.sigma2_draws:
            block = min(200_000, config.sigma2_draws - done)
            sq = config.family.sqdist_anchor(rng, block)
            total += float(sq.sum())
            total_sq += float(sq @ sq)
            done += block
        mean = total / config.sigma2_draws
        var = max(total_sq / config.sigma2_draws - mean**2, 0.0)
        _SIGMA2_CACHE[key] = (mean, math.sqrt(var / config.sigma2_draws))
    return _SIGMA2_CACHE[key]


def _theorem_k(config: RateExperimentConfig) -> float:
    """The constant in force for the configured theorem, hypothesis-gated."""
    family = config.family
    space = family.space
    if config.theorem == "negcurv":
        # needs curvature bounded above by 0 and below by some finite kappa
        if not (space.curv_upper <= 0 and math.isfinite(space.curv_lower)):
            raise HypothesisViolated(
                f"{space.tag} is not a pinched nonpositive-curvature space"
            )
        return 1.0
    if config.theorem == "master_extendible":
        if space.curv_lower < 0:
            raise HypothesisViolated("extendibility bound needs curvature >= 0")
        ext = family.support_extendibility()
        k = extendibility_kmin(ext.lambda_in, ext.lambda_out)
        if k <= 0:
            raise HypothesisViolated(f"support extendibility gives k = {k:.6g} <= 0")
        return k
    if config.theorem == "wasserstein":
        if not isinstance(family, GaussianEnsemble):
            raise HypothesisViolated("wasserstein regime needs a Gaussian transport family")
        k = wasserstein_kmin(family.alpha, family.beta)
        if k <= 0:
            raise HypothesisViolated(f"1 - beta + alpha = {k:.6g} <= 0")
        return k
    raise HypothesisViolated("tail configs run through run_tail_experiment")


def _theorem_bound(theorem: str, sigma2: float, n: int, k: float) -> float:
    if theorem == "negcurv":
        return sigma2 / n
    if theorem == "master_extendible":
        return 4.0 * sigma2 / (n * k * k)
    return 4.0 * sigma2 / (n * k)  # wasserstein: first power of k


def _one_trial(config: RateExperimentConfig, b_star, n_index: int, trial: int):
    """Sample, solve and score one replication; redraw on non-convergence."""
    family = config.family
    redraw = 0
    while True:
        rng = _stream(config.master_seed, _TRIAL, n_index, trial, redraw)
        points = family.sample(rng, config.n_grid[n_index])
        result = empirical_barycenter(family.space, points, config.solver)
        if result.converged:
            return family.space.distance(result.point, b_star) ** 2, redraw
        redraw += 1
        if redraw > 25:
            raise DiscardRateExceeded(
                f"trial ({n_index}, {trial}) failed to converge after {redraw} redraws"
            )


def run_rate_experiment(config: RateExperimentConfig) -> RateCurve:
    """Estimate E d^2(b_n, b*) over the n grid and compare to the theorem bound."""
    k = _theorem_k(config)
    b_star = population_barycenter(config)
    sigma2, sigma2_stderr = estimate_sigma2(config)
    points = []
    discarded = 0
    for n_index, n in enumerate(config.n_grid):
        sq = np.empty(config.trials)
        if config.threads and config.threads > 1:
            with ThreadPoolExecutor(max_workers=config.threads) as pool:
                results = list(
                    pool.map(
                        lambda t: _one_trial(config, b_star, n_index, t),
                        range(config.trials),
                    )
                )
            for t, (value, redraw) in enumerate(results):
                sq[t] = value
                discarded += redraw
        else:
            for t in range(config.trials):
                sq[t], redraw = _one_trial(config, b_star, n_index, t)
                discarded += redraw
        mean = float(sq.mean())
        stderr = float(sq.std(ddof=1) / math.sqrt(config.trials)) if config.trials > 1 else 0.0
        bound = _theorem_bound(config.theorem, sigma2, n, k)
        points.append(
            RatePoint(n, config.trials, mean, stderr, sigma2, bound, mean / bound)
        )
    total = config.trials * len(config.n_grid)
    if discarded / (total + discarded) > MAX_DISCARD_RATE:
        raise DiscardRateExceeded(
            f"{discarded} non-converged trials out of {total + discarded}"
        )
    slope = float("nan")
    if len(points) >= 3:
        slope = _loglog_slope([p.n for p in points], [p.mean_sq_dist for p in points])
    return RateCurve(
        points=tuple(points),
        slope=slope,
        k_used=k,
        sigma2=sigma2,
        sigma2_stderr=sigma2_stderr,
        theorem=config.theorem,
        space=config.family.space.tag,
        master_seed=config.master_seed,
        discarded=discarded,
    )


def _loglog_slope(ns, means) -> float:
    x = np.log(np.asarray(ns, float))
    y = np.log(np.asarray(means, float))
    x = x - x.mean()
    return float((x @ (y - y.mean())) / (x @ x))


def fit_loglog_slope(curve: RateCurve) -> float:
    """Least-squares slope of log mean squared distance against log n."""
    usable = [(p.n, p.mean_sq_dist) for p in curve.points if p.mean_sq_dist > 0]
    if len(usable) < 3:
        raise InsufficientGrid("need at least 3 grid points with positive means")
    return _loglog_slope([n for n, _ in usable], [m for _, m in usable])


def subgaussian_proxy_check(
    config: RateExperimentConfig, varsigma2: float, draws: int = 1_000_000
) -> SubgaussianCheck:
    """Monte Carlo estimate of the exponential moment against the proxy.

    Passes when the estimate of E exp(d^2 / (2 varsigma^2)) is at most 2.
    """
    if varsigma2 <= 0:
        raise ValueError("varsigma2 must be positive")
    rng = _stream(config.master_seed, _SUBG)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < draws:
        block = min(200_000, draws - done)
        sq = config.family.sqdist_anchor(rng, block)
        with np.errstate(over="ignore"):
            vals = np.exp(sq / (2.0 * varsigma2))
        total += float(vals.sum())
        total_sq += float(vals @ vals)
        done += block
    mean = total / draws
    var = max(total_sq / draws - mean**2, 0.0)
    stderr = math.sqrt(var / draws)
    return SubgaussianCheck(mean, stderr, float(varsigma2), bool(mean <= 2.0))


def estimate_hugging_profile(
    config: RateExperimentConfig, n_points: int = 200, n_targets: int = 100
) -> HuggingProfile:
    """Sampled hugging statistics of the family around its anchor.

    For each of ``n_points`` support draws x the inner minimum over targets
    is approximated by ``n_targets`` family draws; the profile records the
    average (an upper bound on the true average minimum), its standard
    error, the mean square, and the smallest value seen anywhere.
    """
    family = config.family
    space = family.space
    rng = _stream(config.master_seed, _PROFILE)
    xs = family.sample(rng, n_points)
    targets = family.sample(rng, n_targets)
    k_of_x = np.empty(n_points)
    k_floor = math.inf
    for i, x in enumerate(xs):
        best = math.inf
        for b in targets:
            if space.distance(b, family.anchor) <= 1e-12:
                continue
            value = hugging_value(space, family.anchor, b, x)
            best = min(best, value)
        k_of_x[i] = best
        k_floor = min(k_floor, best)
    pk = float(k_of_x.mean())
    pk_stderr = float(k_of_x.std(ddof=1) / math.sqrt(n_points)) if n_points > 1 else 0.0
    return HuggingProfile(pk, pk_stderr, float((k_of_x**2).mean()), float(k_floor),
                          n_points, n_targets)


def run_tail_experiment(
    config: RateExperimentConfig,
    delta: float,
    varsigma2: float,
    profile: HuggingProfile | None = None,
    subgaussian: SubgaussianCheck | None = None,
) -> list[TailExperimentResult]:
    """High-probability bound check: one result per n in the config grid.

    The threshold on d^2(b_n, b*) is the proof-derived
    8 varsigma^2 log(2/delta) / (n c^2 Pk^2) with c = 1/2 and the sampled Pk
    reduced by PK_MARGIN (the sampled estimate is an upper bound on the true
    value, so the reduction is the conservative direction).
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if subgaussian is None:
        subgaussian = subgaussian_proxy_check(config, varsigma2)
    if not subgaussian.passed:
        raise HypothesisViolated(
            f"subgaussian proxy estimate {subgaussian.estimate:.4g} > 2"
        )
    if profile is None:
        profile = estimate_hugging_profile(config)
    if profile.pk - 3.0 * profile.pk_stderr <= 0:
        raise HypothesisViolated(
            f"sampled Pk {profile.pk:.4g} +- {profile.pk_stderr:.2g} is not positive"
        )
    pk_used = PK_MARGIN * profile.pk
    c = TAIL_SPLIT_C
    c1 = 8.0 * varsigma2 / (c**2 * pk_used**2)
    kmin_abs = max(abs(profile.k_min), 1e-12)
    c2 = ((1.0 - c) * pk_used / (2.0 * kmin_abs)) * min(
        (1.0 - c) * kmin_abs * pk_used / max(profile.pk_sq, 1e-300), 1.5
    )
    b_star = population_barycenter(config)
    out = []
    for n_index, n in enumerate(config.n_grid):
        threshold = c1 * math.log(2.0 / delta) / n
        exceed = 0
        for trial in range(config.trials):
            sq, _ = _one_trial(config, b_star, n_index, trial)
            if sq > threshold:
                exceed += 1
        rate = exceed / config.trials
        out.append(
            TailExperimentResult(
                delta=float(delta),
                n=n,
                trials=config.trials,
                threshold=threshold,
                empirical_exceedance=rate,
                bound_probability=min(delta + math.exp(-c2 * n), 1.0),
                c1_used=c1,
                c2_used=c2,
                varsigma2=float(varsigma2),
                pk_estimate=profile.pk,
                pk_used=pk_used,
                kmin_estimate=profile.k_min,
            )
        )
    return out


def rate_violations(curve: RateCurve, strict: bool = False) -> list[str]:
    """Bound violations in a rate curve; statistical slack unless strict."""
    out = []
    for p in curve.points:
        slack = 0.0 if strict else 3.0 * p.stderr / p.bound
        if p.ratio > 1.0 + slack:
            out.append(
                f"n={p.n}: ratio {p.ratio:.6g} exceeds 1 + {slack:.3g}"
            )
    return out


def tail_violations(results, strict: bool = False) -> list[str]:
    out = []
    for r in results:
        stderr = math.sqrt(
            max(r.empirical_exceedance * (1 - r.empirical_exceedance), 0.0) / r.trials
        )
        slack = 0.0 if strict else 3.0 * stderr
        if r.empirical_exceedance > r.bound_probability + slack:
            out.append(
                f"delta={r.delta}, n={r.n}: exceedance {r.empirical_exceedance:.4g} "
                f"above bound {r.bound_probability:.4g} + {slack:.3g}"
            )
    return out
