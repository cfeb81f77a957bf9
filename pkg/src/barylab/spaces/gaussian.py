"""Bures-Wasserstein space: Gaussian measures on R^D under the W2 metric.

Distances, geodesics and log/exp are closed-form in the mean and covariance.
A tangent payload is the affine displacement map z -> u + L (z - mean),
stored as the (D+1, D) array [u; L]; its norm in L2 of the base Gaussian is
the cone norm, so payload algebra matches the tangent-cone structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import OutOfDomain
from ..linalg import SPD_EIG_FLOOR, spd_check, spd_sqrt, spd_sqrt_batch, spd_sqrt_inv_sqrt, sym
from .base import Extendibility, GeodesicSegment, Space, TangentVector


@dataclass(frozen=True, eq=False)
class GaussianPoint:
    """A Gaussian N(mean, cov) with SPD covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "cov", np.asarray(self.cov, dtype=float))
        d = self.mean.shape[0]
        if self.mean.ndim != 1 or self.cov.shape != (d, d):
            raise ValueError(f"inconsistent shapes {self.mean.shape} / {self.cov.shape}")
        spd_check(self.cov, "covariance")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


class BuresWasserstein(Space):
    tag = "gaussian"
    curv_lower = 0.0
    curv_upper = float("inf")

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"BuresWasserstein(dim={self.dim})"

    def check_point(self, x) -> None:
        if not isinstance(x, GaussianPoint) or x.dim != self.dim:
            raise ValueError(f"expected a GaussianPoint of dimension {self.dim}")
        spd_check(x.cov, "covariance")

    def random_point(self, rng):
        z = rng.standard_normal((self.dim, self.dim))
        q, r = np.linalg.qr(z)
        q = q * np.sign(np.diag(r))
        eig = rng.uniform(0.5, 2.0, self.dim)
        cov = (q * eig) @ q.T
        return GaussianPoint(0.5 * rng.standard_normal(self.dim), sym(cov))

    def point_payload(self, x) -> dict:
        return {
            "space": self.tag,
            "mean": [float(c) for c in x.mean],
            "cov": [[float(c) for c in row] for row in x.cov],
        }

    def point_from_payload(self, obj):
        pt = GaussianPoint(np.asarray(obj["mean"], float), np.asarray(obj["cov"], float))
        self.check_point(pt)
        return pt

    # -- metric ----------------------------------------------------------------

    def transport_map(self, p: GaussianPoint, x: GaussianPoint) -> np.ndarray:
        """Linear part A of the optimal map from p to x (SPD)."""
        s, s_inv = spd_sqrt_inv_sqrt(p.cov)
        middle = spd_sqrt(s @ x.cov @ s)
        return sym(s_inv @ middle @ s_inv)

    def distance(self, x: GaussianPoint, y: GaussianPoint) -> float:
        # evaluated through the transport map as tr((A - I) cov (A - I)):
        # a quadratic form, so nearly-equal points do not lose precision to
        # the cancellation of O(1) traces
        dm = x.mean - y.mean
        lin = self.transport_map(x, y) - np.eye(self.dim)
        bures_sq = max(float(np.einsum("ij,jk,ki->", lin, x.cov, lin)), 0.0)
        return math.sqrt(float(dm @ dm) + bures_sq)

    def geodesic(self, x: GaussianPoint, y: GaussianPoint) -> GeodesicSegment:
        a = self.transport_map(x, y)
        eye = np.eye(self.dim)

        def evaluator(t, _x=x, _y=y, _a=a, _eye=eye):
            m_t = _eye + t * (_a - _eye)
            # past the extension boundary the interpolated map degenerates
            # and the path stops being a geodesic, even though squaring
            # would still produce a covariance
            if np.min(np.linalg.eigvalsh(sym(m_t))) <= SPD_EIG_FLOOR:
                raise OutOfDomain(
                    f"interpolated transport map degenerates at t = {t:.6g}"
                )
            return GaussianPoint(
                (1.0 - t) * _x.mean + t * _y.mean, sym(m_t @ _x.cov @ m_t)
            )

        return GeodesicSegment(self, x, y, self.distance(x, y), evaluator)

    def max_extendibility(self, x: GaussianPoint, y: GaussianPoint) -> Extendibility:
        """Extension range limited by positive-definiteness of the interpolant.

        The interpolated map (1 - t) I + t A stays PD outward while
        t < 1/(1 - a_min) and inward while t > -1/(a_max - 1); both suprema
        are open because the map degenerates exactly at the endpoint.
        """
        eig = np.linalg.eigvalsh(self.transport_map(x, y))
        a_min, a_max = float(eig[0]), float(eig[-1])
        if a_min < 1.0 - 1e-15:
            lam_out, open_out = a_min / (1.0 - a_min), True
        else:
            lam_out, open_out = math.inf, False
        if a_max > 1.0 + 1e-15:
            lam_in, open_in = 1.0 / (a_max - 1.0), True
        else:
            lam_in, open_in = math.inf, False
        return Extendibility(lam_in, lam_out, open_in, open_out)

    # -- tangent cone ------------------------------------------------------------

    def log(self, p: GaussianPoint, x: GaussianPoint) -> TangentVector:
        payload = np.zeros((self.dim + 1, self.dim))
        if x is p or (np.array_equal(x.mean, p.mean) and np.array_equal(x.cov, p.cov)):
            return TangentVector(self, p, payload)  # exact cone tip
        payload[0] = x.mean - p.mean
        payload[1:] = self.transport_map(p, x) - np.eye(self.dim)
        return TangentVector(self, p, payload)

    def exp(self, p: GaussianPoint, v):
        payload = self._payload_of(v)
        u, lin = payload[0], payload[1:]
        t = np.eye(self.dim) + lin
        if np.min(np.linalg.eigvalsh(sym(t))) <= SPD_EIG_FLOOR:
            raise OutOfDomain("induced map I + L is not positive definite")
        return GaussianPoint(p.mean + u, sym(t @ p.cov @ t))

    def tangent_inner(self, p: GaussianPoint, u_payload, v_payload) -> float:
        u1, l1 = u_payload[0], u_payload[1:]
        u2, l2 = v_payload[0], v_payload[1:]
        return float(u1 @ u2) + float(np.einsum("ij,jk,ki->", l1, p.cov, l2))

    def random_tangent(self, p: GaussianPoint, rng) -> np.ndarray:
        payload = np.empty((self.dim + 1, self.dim))
        payload[0] = rng.standard_normal(self.dim)
        payload[1:] = sym(rng.standard_normal((self.dim, self.dim)))
        return payload

    # -- batched -------------------------------------------------------------

    def stack(self, points):
        means = np.stack([pt.mean for pt in points])
        covs = np.stack([pt.cov for pt in points])
        return means, covs

    @staticmethod
    def _iter_batch(batch):
        if isinstance(batch, tuple):
            means, covs = batch
            return (GaussianPoint(m, c) for m, c in zip(means, covs))
        return batch

    def cross_sqrts(self, p: GaussianPoint, covs: np.ndarray) -> np.ndarray:
        """(S covs_i S)^(1/2) for S = p.cov^(1/2), batched."""
        s = spd_sqrt(p.cov)
        return spd_sqrt_batch(np.einsum("ij,njk,kl->nil", s, covs, s))

    def log_batch(self, p: GaussianPoint, batch):
        means, covs = batch
        s, s_inv = spd_sqrt_inv_sqrt(p.cov)
        cross = spd_sqrt_batch(np.einsum("ij,njk,kl->nil", s, covs, s))
        a = np.einsum("ij,njk,kl->nil", s_inv, cross, s_inv)
        n = means.shape[0]
        payloads = np.empty((n, self.dim + 1, self.dim))
        payloads[:, 0, :] = means - p.mean
        payloads[:, 1:, :] = sym(a) - np.eye(self.dim)
        lin = payloads[:, 1:, :]
        mags_sq = np.einsum("ni,ni->n", payloads[:, 0, :], payloads[:, 0, :])
        mags_sq = mags_sq + np.einsum("nij,jk,nki->n", lin, p.cov, lin)
        return payloads, np.sqrt(np.maximum(mags_sq, 0.0))

    def sqdist_batch(self, p: GaussianPoint, batch) -> np.ndarray:
        means, covs = batch
        cross = self.cross_sqrts(p, covs)
        dm = means - p.mean
        bures_sq = (
            np.trace(p.cov)
            + np.einsum("nii->n", covs)
            - 2.0 * np.einsum("nii->n", cross)
        )
        return np.einsum("ni,ni->n", dm, dm) + np.maximum(bures_sq, 0.0)
