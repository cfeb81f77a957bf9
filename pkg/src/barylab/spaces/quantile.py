"""Quantile space: monotone grids of m values at levels (i - 1/2)/m.

A point is the quantile function of a one-dimensional measure sampled on a
fixed grid, which makes the space a convex subset of R^m carrying the
(1/m)-scaled Euclidean metric: exactly discretized 1-D 2-Wasserstein.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import OutOfDomain
from .base import Extendibility, GeodesicSegment, Space, TangentVector

# ulp-level order flips from float rounding are snapped, larger ones rejected
SORT_SNAP_TOL = 1e-12


class QuantileSpace(Space):
    tag = "quantile"

    def __init__(self, grid_size: int = 256):
        if grid_size < 1:
            raise ValueError("grid_size must be >= 1")
        self.grid_size = int(grid_size)

    def __repr__(self):
        return f"QuantileSpace(grid_size={self.grid_size})"

    def levels(self) -> np.ndarray:
        m = self.grid_size
        return (np.arange(m) + 0.5) / m

    def check_point(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.grid_size,):
            raise ValueError(f"expected grid size {self.grid_size}, got {x.shape}")
        if np.any(np.diff(x) < 0):
            raise ValueError("quantile grid must be nondecreasing")

    def random_point(self, rng):
        return np.sort(rng.standard_normal(self.grid_size))

    def point_payload(self, x) -> dict:
        return {"space": self.tag, "values": [float(c) for c in x]}

    def point_from_payload(self, obj):
        x = np.asarray(obj["values"], dtype=float)
        self.check_point(x)
        return x

    def distance(self, x, y) -> float:
        diff = np.asarray(x, float) - np.asarray(y, float)
        return float(np.linalg.norm(diff) / math.sqrt(self.grid_size))

    def geodesic(self, x, y) -> GeodesicSegment:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        # convex combinations of sorted grids stay sorted
        return GeodesicSegment(
            self, x, y, self.distance(x, y), lambda t: (1.0 - t) * x + t * y
        )

    def max_extendibility(self, x, y) -> Extendibility:
        """Extension range limited by monotonicity of the extended grid."""
        dx = np.diff(np.asarray(x, float))
        dy = np.diff(np.asarray(y, float))
        slope = dy - dx  # gap i evolves as dx_i + t * slope_i, must stay >= 0
        t_max = math.inf
        t_min = -math.inf
        closing = slope < 0
        if np.any(closing):
            t_max = float(np.min(dx[closing] / -slope[closing]))
        opening = slope > 0
        if np.any(opening):
            t_min = float(np.max(-dx[opening] / slope[opening]))
        lam_out = t_max - 1.0 if math.isfinite(t_max) else math.inf
        lam_in = -t_min if math.isfinite(t_min) else math.inf
        return Extendibility(max(lam_in, 0.0), max(lam_out, 0.0))

    def log(self, p, x) -> TangentVector:
        return TangentVector(self, np.asarray(p, float), np.asarray(x, float) - p)

    def exp(self, p, v):
        out = np.asarray(p, float) + self._payload_of(v)
        diffs = np.diff(out)
        scale = max(1.0, float(np.max(np.abs(out))))
        if np.any(diffs < -SORT_SNAP_TOL * scale):
            raise OutOfDomain("exponential leaves the monotone cone")
        return np.maximum.accumulate(out)

    def tangent_inner(self, p, u_payload, v_payload) -> float:
        return float(np.dot(u_payload, v_payload) / self.grid_size)

    def random_tangent(self, p, rng) -> np.ndarray:
        return rng.standard_normal(self.grid_size)

    # -- batched -------------------------------------------------------------

    def stack(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float)

    def log_batch(self, p, batch):
        payloads = batch - np.asarray(p, float)
        return payloads, np.linalg.norm(payloads, axis=1) / math.sqrt(self.grid_size)

    def sqdist_batch(self, p, batch) -> np.ndarray:
        diff = batch - np.asarray(p, float)
        return np.einsum("ij,ij->i", diff, diff) / self.grid_size

    def pairwise_sqdist(self, batch) -> np.ndarray:
        sq = np.einsum("ij,ij->i", batch, batch)
        out = sq[:, None] + sq[None, :] - 2.0 * (batch @ batch.T)
        np.maximum(out, 0.0, out=out)
        return out / self.grid_size
