"""Strict JSON experiment configuration parsing.

Unknown keys are errors, and validation collects every violated invariant
before raising so a bad config is fixed in one round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .barycenter import SolverOptions
from .errors import BadFamilyParams, ParseError, ValidationError
from .families import Family, family_from_config
from .ratelab import RateExperimentConfig
from .spaces import BuresWasserstein, Euclidean, Hyperboloid, QuantileSpace, Sphere

EXPERIMENTS = ("rates", "tail", "hugging", "curvature", "barycenter", "plot")

# which families can exercise which theorem
THEOREM_FAMILIES = {
    "negcurv": {"euclidean_gaussian", "hyperbolic_gaussian"},
    "master_extendible": {"sphere_cap", "gaussian_ensemble"},
    "wasserstein": {"gaussian_ensemble"},
    "tail": {"euclidean_gaussian", "sphere_cap"},
}

_SPACE_KINDS = {
    "euclidean": (Euclidean, {"dim"}),
    "sphere": (Sphere, {"dim"}),
    "hyperbolic": (Hyperboloid, {"dim"}),
    "quantile": (QuantileSpace, {"grid_size"}),
    "gaussian": (BuresWasserstein, {"dim"}),
}

_DEFAULT_TRIALS = 1000


@dataclass(frozen=True)
class ParsedConfig:
    experiment: str
    payload: dict  # experiment-specific, validated values


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return obj


def parse_config(path, expected_experiment: str | None = None) -> ParsedConfig:
    """Parse and validate a config file for one experiment."""
    obj = load_json(path)
    violations: list[str] = []
    experiment = obj.get("experiment")
    if experiment is None:
        violations.append("missing required key 'experiment'")
    elif experiment not in EXPERIMENTS:
        violations.append(f"experiment {experiment!r} not one of {sorted(EXPERIMENTS)}")
    if expected_experiment and experiment not in (None, expected_experiment):
        violations.append(
            f"config declares experiment {experiment!r} but the "
            f"{expected_experiment!r} subcommand was invoked"
        )
    if violations:
        raise ValidationError(violations)
    builder = _BUILDERS[experiment]
    payload = builder(obj, violations)
    if violations:
        raise ValidationError(violations)
    return ParsedConfig(experiment, payload)


# -- field helpers ------------------------------------------------------------


def _check_keys(obj: dict, allowed: set, required: set, ctx: str, violations: list):
    for key in sorted(set(obj) - allowed):
        violations.append(f"{ctx}: unknown key {key!r}")
    for key in sorted(required - set(obj)):
        violations.append(f"{ctx}: missing required key {key!r}")


def _positive_int(obj, key, default, ctx, violations, minimum=1):
    value = obj.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        violations.append(f"{ctx}: {key!r} must be an integer >= {minimum}")
        return default
    return value


def _positive_float(obj, key, default, ctx, violations):
    value = obj.get(key, default)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        violations.append(f"{ctx}: {key!r} must be a positive number")
        return default
    return float(value)


def _seed(obj, violations) -> int:
    value = obj.get("master_seed", 0)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        violations.append("'master_seed' must be a nonnegative integer")
        return 0
    return value


def _solver(obj: dict, violations) -> SolverOptions:
    section = obj.get("solver", {})
    if not isinstance(section, dict):
        violations.append("'solver' must be an object")
        return SolverOptions()
    _check_keys(section, {"max_iters", "tol", "step"}, set(), "solver", violations)
    max_iters = _positive_int(section, "max_iters", 10_000, "solver", violations)
    tol = _positive_float(section, "tol", 1e-10, "solver", violations)
    step = _positive_float(section, "step", 1.0, "solver", violations)
    try:
        return SolverOptions(max_iters=max_iters, tol=tol, step=step)
    except ValueError as exc:
        violations.append(f"solver: {exc}")
        return SolverOptions()


def _family(obj: dict, violations) -> Family | None:
    section = obj.get("family")
    if not isinstance(section, dict):
        violations.append("'family' must be an object with a 'kind'")
        return None
    try:
        return family_from_config(section)
    except BadFamilyParams as exc:
        violations.append(f"family: {exc}")
        return None


def _n_grid(obj: dict, violations, default=None):
    grid = obj.get("n_grid", default)
    if (
        not isinstance(grid, list)
        or not grid
        or any(not isinstance(n, int) or isinstance(n, bool) or n < 2 for n in grid)
        or grid != sorted(grid)
    ):
        violations.append("'n_grid' must be an ascending list of integers >= 2")
        return (2,)
    return tuple(grid)


def _rate_config(obj: dict, violations, theorem: str) -> RateExperimentConfig | None:
    family = _family(obj, violations)
    grid = _n_grid(obj, violations)
    trials = _positive_int(obj, "trials", _DEFAULT_TRIALS, "config", violations)
    seed = _seed(obj, violations)
    solver = _solver(obj, violations)
    sigma2_draws = _positive_int(obj, "sigma2_draws", 1_000_000, "config", violations)
    verify_draws = _positive_int(obj, "verify_draws", 100_000, "config", violations)
    if family is not None and family.kind not in THEOREM_FAMILIES[theorem]:
        violations.append(
            f"theorem {theorem!r} is incompatible with family {family.kind!r}; "
            f"allowed: {sorted(THEOREM_FAMILIES[theorem])}"
        )
    if violations or family is None:
        return None
    return RateExperimentConfig(
        family=family,
        theorem=theorem,
        n_grid=grid,
        trials=trials,
        master_seed=seed,
        solver=solver,
        sigma2_draws=sigma2_draws,
        verify_draws=verify_draws,
    )


# -- per-experiment builders ----------------------------------------------------


def _build_rates(obj: dict, violations) -> dict:
    allowed = {
        "experiment", "family", "theorem", "n_grid", "trials", "master_seed",
        "solver", "sigma2_draws", "verify_draws",
    }
    _check_keys(obj, allowed, {"family", "theorem", "n_grid"}, "config", violations)
    theorem = obj.get("theorem")
    if theorem not in ("negcurv", "master_extendible", "wasserstein"):
        violations.append(
            "'theorem' must be one of ['master_extendible', 'negcurv', 'wasserstein']"
        )
        return {}
    config = _rate_config(obj, violations, theorem)
    return {"config": config}


def _build_tail(obj: dict, violations) -> dict:
    allowed = {
        "experiment", "family", "n_grid", "trials", "master_seed", "solver",
        "delta", "varsigma2", "sigma2_draws", "verify_draws",
        "profile_points", "profile_targets", "subgaussian_draws",
    }
    _check_keys(obj, allowed, {"family", "n_grid", "delta", "varsigma2"}, "config", violations)
    deltas = obj.get("delta")
    if isinstance(deltas, (int, float)) and not isinstance(deltas, bool):
        deltas = [deltas]
    if (
        not isinstance(deltas, list)
        or not deltas
        or any(not isinstance(d, (int, float)) or isinstance(d, bool) or not 0 < d < 1
               for d in deltas)
    ):
        violations.append("'delta' must be a number or list of numbers in (0, 1)")
        deltas = [0.1]
    varsigma2 = _positive_float(obj, "varsigma2", 1.0, "config", violations)
    profile_points = _positive_int(obj, "profile_points", 200, "config", violations)
    profile_targets = _positive_int(obj, "profile_targets", 100, "config", violations)
    subg_draws = _positive_int(obj, "subgaussian_draws", 1_000_000, "config", violations)
    config = _rate_config(obj, violations, "tail")
    return {
        "config": config,
        "deltas": [float(d) for d in deltas],
        "varsigma2": varsigma2,
        "profile_points": profile_points,
        "profile_targets": profile_targets,
        "subgaussian_draws": subg_draws,
    }


def _build_hugging(obj: dict, violations) -> dict:
    allowed = {
        "experiment", "family", "n_support", "n_cases", "master_seed", "solver",
    }
    _check_keys(obj, allowed, {"family"}, "config", violations)
    family = _family(obj, violations)
    return {
        "family": family,
        "n_support": _positive_int(obj, "n_support", 30, "config", violations, minimum=2),
        "n_cases": _positive_int(obj, "n_cases", 200, "config", violations),
        "master_seed": _seed(obj, violations),
        "solver": _solver(obj, violations),
    }


def _space(obj: dict, violations):
    section = obj.get("space")
    if not isinstance(section, dict) or "kind" not in section:
        violations.append("'space' must be an object with a 'kind'")
        return None
    kind = section["kind"]
    if kind not in _SPACE_KINDS:
        violations.append(f"space: unknown kind {kind!r}")
        return None
    cls, allowed = _SPACE_KINDS[kind]
    _check_keys(section, allowed | {"kind"}, set(), "space", violations)
    size_key = "grid_size" if kind == "quantile" else "dim"
    size = _positive_int(section, size_key, 2 if size_key == "dim" else 256,
                         "space", violations)
    try:
        return cls(size)
    except ValueError as exc:
        violations.append(f"space: {exc}")
        return None


def _build_curvature(obj: dict, violations) -> dict:
    allowed = {
        "experiment", "space", "kappa", "quadruples", "triples", "grid", "master_seed",
    }
    _check_keys(obj, allowed, {"space", "kappa"}, "config", violations)
    space = _space(obj, violations)
    kappa = obj.get("kappa", 0.0)
    if not isinstance(kappa, (int, float)) or isinstance(kappa, bool):
        violations.append("'kappa' must be a number")
        kappa = 0.0
    grid = obj.get("grid", [0.25, 0.5, 0.75, 1.0])
    if (
        not isinstance(grid, list)
        or any(not isinstance(g, (int, float)) or isinstance(g, bool) or not 0 < g <= 1
               for g in grid)
        or grid != sorted(grid)
    ):
        violations.append("'grid' must be an ascending list of numbers in (0, 1]")
        grid = [0.25, 0.5, 0.75, 1.0]
    return {
        "space": space,
        "kappa": float(kappa),
        "quadruples": _positive_int(obj, "quadruples", 1000, "config", violations),
        "triples": _positive_int(obj, "triples", 50, "config", violations),
        "grid": [float(g) for g in grid],
        "master_seed": _seed(obj, violations),
    }


def _build_barycenter(obj: dict, violations) -> dict:
    allowed = {"experiment", "points", "weights", "solver", "master_seed"}
    _check_keys(obj, allowed, {"points"}, "config", violations)
    from .spaces import point_from_payload

    raw_points = obj.get("points")
    points, space = [], None
    if not isinstance(raw_points, list) or not raw_points:
        violations.append("'points' must be a nonempty list of tagged point payloads")
    else:
        for i, payload in enumerate(raw_points):
            try:
                this_space, point = point_from_payload(payload)
            except (KeyError, TypeError, ValueError) as exc:
                violations.append(f"points[{i}]: {exc}")
                continue
            if space is None:
                space = this_space
            elif repr(this_space) != repr(space):
                violations.append(
                    f"points[{i}]: space {this_space!r} differs from {space!r}"
                )
                continue
            points.append(point)
    weights = obj.get("weights")
    if weights is not None:
        if (
            not isinstance(weights, list)
            or len(weights) != len(points)
            or any(not isinstance(w, (int, float)) or isinstance(w, bool) or w <= 0
                   for w in weights)
        ):
            violations.append("'weights' must be positive numbers, one per point")
            weights = None
    return {
        "space": space,
        "points": points,
        "weights": weights,
        "solver": _solver(obj, violations),
    }


def _build_plot(obj: dict, violations) -> dict:
    allowed = {"experiment", "csv", "title"}
    _check_keys(obj, allowed, {"csv"}, "config", violations)
    csv = obj.get("csv")
    if not isinstance(csv, str) or not csv:
        violations.append("'csv' must be a path string")
    title = obj.get("title", "")
    if not isinstance(title, str):
        violations.append("'title' must be a string")
        title = ""
    return {"csv": csv, "title": title}


_BUILDERS = {
    "rates": _build_rates,
    "tail": _build_tail,
    "hugging": _build_hugging,
    "curvature": _build_curvature,
    "barycenter": _build_barycenter,
    "plot": _build_plot,
}
