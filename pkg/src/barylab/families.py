"""Sampling families with known population barycenters.

Each family is constructed symmetric about its anchor so the anchor is the
population barycenter; the experiment harness verifies this with a large
empirical gradient pass rather than assuming it.  Families also expose the
extendibility of their population support, computed through the space's
max_extendibility on extreme support points.
"""

from __future__ import annotations

import abc
import json
import math

import numpy as np
from scipy.special import ndtri

from .errors import BadFamilyParams
from .linalg import sym
from .spaces import (
    BuresWasserstein,
    Euclidean,
    Extendibility,
    GaussianPoint,
    Hyperboloid,
    QuantileSpace,
    Space,
    Sphere,
)


class Family(abc.ABC):
    """A seeded sampling distribution on one model space."""

    kind: str
    space: Space
    anchor: object

    @abc.abstractmethod
    def sample_batch(self, rng: np.random.Generator, count: int):
        """Batch of draws in the space's stacked representation."""

    @abc.abstractmethod
    def sqdist_anchor(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Squared distances to the anchor for ``count`` fresh draws."""

    @abc.abstractmethod
    def support_extendibility(self) -> Extendibility:
        """Extendibility infimum over the population support."""

    @abc.abstractmethod
    def describe(self) -> dict:
        """JSON-ready parameter echo."""

    def sample(self, rng: np.random.Generator, count: int) -> list:
        return list(self.space._iter_batch(self.sample_batch(rng, count)))

    def key(self) -> str:
        """Canonical hashable identity of the family, for caching."""
        return json.dumps(self.describe(), sort_keys=True)


def _as_unit_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return v / norms


class EuclideanGaussian(Family):
    """Isotropic Gaussian around a Euclidean anchor."""

    kind = "euclidean_gaussian"

    def __init__(self, dim: int = 3, mean=None, sd: float = 1.0):
        if sd <= 0:
            raise BadFamilyParams("sd must be positive")
        self.space = Euclidean(dim)
        self.anchor = np.zeros(dim) if mean is None else np.asarray(mean, float)
        self.space.check_point(self.anchor)
        self.sd = float(sd)

    def sample_batch(self, rng, count):
        return self.anchor + self.sd * rng.standard_normal((count, self.space.dim))

    def sqdist_anchor(self, rng, count):
        z = rng.standard_normal((count, self.space.dim))
        return self.sd**2 * np.einsum("ij,ij->i", z, z)

    def support_extendibility(self) -> Extendibility:
        return Extendibility(math.inf, math.inf)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.space.dim,
            "mean": [float(c) for c in self.anchor],
            "sd": self.sd,
        }


class SphereCap(Family):
    """Uniform (surface measure) on a geodesic cap around the anchor.

    The cap radius is capped at pi/4, which keeps empirical barycenters of
    cap samples unique and inside the cap.
    """

    kind = "sphere_cap"

    def __init__(self, radius: float, dim: int = 2, anchor=None):
        if not 0 < radius < math.pi / 4:
            raise BadFamilyParams("cap radius must lie in (0, pi/4)")
        self.space = Sphere(dim)
        if anchor is None:
            anchor = np.zeros(dim + 1)
            anchor[-1] = 1.0
        self.anchor = np.asarray(anchor, float)
        self.space.check_point(self.anchor)
        self.radius = float(radius)
        self._basis = _orthonormal_tangent_basis(self.anchor)

    def _draw_theta(self, rng, count) -> np.ndarray:
        d = self.space.dim
        if d == 2:
            # exact inverse CDF of the area measure on a cap of S^2
            u = rng.random(count)
            return np.arccos(1.0 - u * (1.0 - math.cos(self.radius)))
        # rejection against the uniform envelope of sin^(d-1)
        out = np.empty(count)
        filled = 0
        peak = math.sin(self.radius) ** (d - 1)
        while filled < count:
            block = max(count - filled, 1024)
            theta = rng.uniform(0.0, self.radius, block)
            keep = rng.random(block) * peak <= np.sin(theta) ** (d - 1)
            kept = theta[keep][: count - filled]
            out[filled : filled + kept.size] = kept
            filled += kept.size
        return out

    def sample_batch(self, rng, count):
        theta = self._draw_theta(rng, count)
        dirs = _as_unit_rows(rng.standard_normal((count, self.space.dim)))
        tangent = dirs @ self._basis
        pts = np.cos(theta)[:, None] * self.anchor + np.sin(theta)[:, None] * tangent
        return _as_unit_rows(pts)

    def sqdist_anchor(self, rng, count):
        return self._draw_theta(rng, count) ** 2

    def support_extendibility(self) -> Extendibility:
        edge = self.space.exp(self.anchor, self.radius * self._basis[0])
        return self.space.max_extendibility(self.anchor, edge)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.space.dim,
            "anchor": [float(c) for c in self.anchor],
            "radius": self.radius,
        }


class HyperbolicGaussian(Family):
    """Exponential of an isotropic Gaussian tangent vector at the anchor."""

    kind = "hyperbolic_gaussian"

    def __init__(self, scale: float, dim: int = 2, anchor=None):
        if scale <= 0:
            raise BadFamilyParams("scale must be positive")
        self.space = Hyperboloid(dim)
        self.anchor = self.space.origin() if anchor is None else np.asarray(anchor, float)
        self.space.check_point(self.anchor)
        self.scale = float(scale)
        self._basis = self.space.tangent_basis(self.anchor)

    def sample_batch(self, rng, count):
        coords = self.scale * rng.standard_normal((count, self.space.dim))
        norms = np.linalg.norm(coords, axis=1)
        dirs = _as_unit_rows(coords) @ self._basis
        pts = np.cosh(norms)[:, None] * self.anchor + np.sinh(norms)[:, None] * dirs
        # re-project to the sheet to keep the Minkowski norm exact
        q = -np.einsum("ij,j,ij->i", pts, self.space._j, pts)
        return pts / np.sqrt(np.maximum(q, 1e-300))[:, None]

    def sqdist_anchor(self, rng, count):
        coords = self.scale * rng.standard_normal((count, self.space.dim))
        return np.einsum("ij,ij->i", coords, coords)

    def support_extendibility(self) -> Extendibility:
        return Extendibility(math.inf, math.inf)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.space.dim,
            "anchor": [float(c) for c in self.anchor],
            "scale": self.scale,
        }


class GaussianEnsemble(Family):
    """Pushforwards of the anchor Gaussian by random SPD maps.

    Maps are R diag(eigs) R^T with Haar rotations and eigenvalues drawn from
    a two-segment uniform mixture on [alpha, 1] and [1, beta] with mean
    exactly 1, so the expected map is the identity and the anchor is the
    population barycenter while every map eigenvalue stays in [alpha, beta].
    """

    kind = "gaussian_ensemble"

    def __init__(self, alpha: float, beta: float, dim: int = 3, base_cov=None):
        if not 0 < alpha <= 1 <= beta:
            raise BadFamilyParams("need 0 < alpha <= 1 <= beta")
        self.space = BuresWasserstein(dim)
        cov = np.eye(dim) if base_cov is None else np.asarray(base_cov, float)
        self.anchor = GaussianPoint(np.zeros(dim), cov)
        self.alpha = float(alpha)
        self.beta = float(beta)

    def _draw_eigs(self, rng, shape) -> np.ndarray:
        lo = rng.uniform(self.alpha, 1.0, shape)
        hi = rng.uniform(1.0, self.beta, shape)
        if self.beta == self.alpha:
            return np.ones(shape)
        p_lo = (self.beta - 1.0) / (self.beta - self.alpha)
        return np.where(rng.random(shape) < p_lo, lo, hi)

    def draw_maps(self, rng, count) -> np.ndarray:
        d = self.space.dim
        eigs = self._draw_eigs(rng, (count, d))
        z = rng.standard_normal((count, d, d))
        q, r = np.linalg.qr(z)
        q = q * np.sign(np.einsum("nii->ni", r))[:, None, :]
        return sym(np.einsum("nij,nj,nkj->nik", q, eigs, q))

    def sample_batch(self, rng, count):
        maps = self.draw_maps(rng, count)
        covs = sym(np.einsum("nij,jk,nkl->nil", maps, self.anchor.cov, maps))
        means = np.zeros((count, self.space.dim))
        return means, covs

    def sqdist_anchor(self, rng, count):
        gap = self.draw_maps(rng, count) - np.eye(self.space.dim)
        return np.einsum("nij,jk,nki->n", gap, self.anchor.cov, gap)

    def support_extendibility(self) -> Extendibility:
        # extreme admissible map realizes the support infimum exactly
        d = self.space.dim
        eigs = np.ones(d)
        eigs[0] = self.beta
        eigs[-1] = self.alpha
        extreme = GaussianPoint(
            np.zeros(d), sym(np.diag(eigs) @ self.anchor.cov @ np.diag(eigs))
        )
        return self.space.max_extendibility(self.anchor, extreme)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.space.dim,
            "alpha": self.alpha,
            "beta": self.beta,
            "base_cov": [[float(c) for c in row] for row in self.anchor.cov],
        }


FAMILY_KINDS = {
    EuclideanGaussian.kind: EuclideanGaussian,
    SphereCap.kind: SphereCap,
    HyperbolicGaussian.kind: HyperbolicGaussian,
    GaussianEnsemble.kind: GaussianEnsemble,
}


def family_from_config(obj: dict) -> Family:
    """Build a family from its JSON description (strict keys)."""
    obj = dict(obj)
    kind = obj.pop("kind", None)
    if kind not in FAMILY_KINDS:
        raise BadFamilyParams(f"unknown family kind {kind!r}")
    cls = FAMILY_KINDS[kind]
    if kind == EuclideanGaussian.kind:
        allowed = {"dim", "mean", "sd"}
    elif kind == SphereCap.kind:
        allowed = {"dim", "anchor", "radius"}
    elif kind == HyperbolicGaussian.kind:
        allowed = {"dim", "anchor", "scale"}
    else:
        allowed = {"dim", "alpha", "beta", "base_cov"}
    unknown = set(obj) - allowed
    if unknown:
        raise BadFamilyParams(f"unknown family keys {sorted(unknown)}")
    try:
        return cls(**obj)
    except TypeError as exc:
        raise BadFamilyParams(str(exc)) from exc


def _orthonormal_tangent_basis(anchor: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to anchor."""
    n = anchor.shape[0]
    basis = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        v = e - np.dot(e, anchor) * anchor
        for b in basis:
            v = v - np.dot(v, b) * b
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            basis.append(v / norm)
        if len(basis) == n - 1:
            break
    return np.stack(basis)


def gaussian_quantile_grid(space: QuantileSpace, mean: float, sd: float) -> np.ndarray:
    """Quantile-space discretization of a one-dimensional Gaussian."""
    if sd < 0:
        raise BadFamilyParams("sd must be nonnegative")
    return mean + sd * ndtri(space.levels())


def random_quantile_point(space: QuantileSpace, rng: np.random.Generator) -> np.ndarray:
    """Random Gaussian quantile curve, for diagnostics on the quantile space."""
    return gaussian_quantile_grid(space, rng.normal(), rng.uniform(0.5, 1.5))
