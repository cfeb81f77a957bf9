"""Hyperbolic space H^d in the hyperboloid model.

Points live on the upper sheet {x : <x, x>_M = -1, x0 > 0} of the Minkowski
quadric; the model is numerically stabler for log/exp than the Poincare disk.
"""

from __future__ import annotations

import math

import numpy as np

from .base import Extendibility, GeodesicSegment, Space, TangentVector

MINKOWSKI_TOL = 1e-12


class Hyperboloid(Space):
    tag = "hyperbolic"
    curv_lower = -1.0
    curv_upper = -1.0

    def __init__(self, dim: int = 2):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)
        # Minkowski signature (-, +, ..., +)
        self._j = np.ones(dim + 1)
        self._j[0] = -1.0

    def __repr__(self):
        return f"Hyperboloid(dim={self.dim})"

    @property
    def ambient(self) -> int:
        return self.dim + 1

    def minkowski(self, a, b) -> float:
        return float(np.sum(self._j * np.asarray(a, float) * np.asarray(b, float)))

    def origin(self) -> np.ndarray:
        o = np.zeros(self.ambient)
        o[0] = 1.0
        return o

    def check_point(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient,):
            raise ValueError(f"expected ambient dimension {self.ambient}, got {x.shape}")
        q = self.minkowski(x, x)
        if abs(q + 1.0) > MINKOWSKI_TOL * max(1.0, x[0] ** 2) or x[0] < 1.0 - MINKOWSKI_TOL:
            raise ValueError(f"not on the upper hyperboloid sheet: <x,x>_M = {q!r}")

    def _project(self, x: np.ndarray) -> np.ndarray:
        return x / math.sqrt(max(-self.minkowski(x, x), 1e-300))

    def random_point(self, rng):
        v = np.zeros(self.ambient)
        v[1:] = rng.standard_normal(self.dim)
        return self.exp(self.origin(), v)

    def point_payload(self, x) -> dict:
        return {"space": self.tag, "coords": [float(c) for c in x]}

    def point_from_payload(self, obj):
        x = np.asarray(obj["coords"], dtype=float)
        self.check_point(x)
        return x

    def distance(self, x, y) -> float:
        # 2 asinh(|x - y|_M / 2): avoids the acosh precision loss near 1
        diff = np.asarray(x, float) - np.asarray(y, float)
        q = max(self.minkowski(diff, diff), 0.0)
        return float(2.0 * math.asinh(math.sqrt(q) / 2.0))

    def geodesic(self, x, y) -> GeodesicSegment:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        v = self.log(x, y)
        length = self.distance(x, y)
        return GeodesicSegment(self, x, y, length, lambda t: self.exp(x, t * v.payload))

    def max_extendibility(self, x, y) -> Extendibility:
        return Extendibility(math.inf, math.inf)

    def log(self, p, x) -> TangentVector:
        p = np.asarray(p, float)
        x = np.asarray(x, float)
        theta = self.distance(p, x)
        if theta < 1e-14:
            return TangentVector(self, p, np.zeros(self.ambient))
        c = -self.minkowski(p, x)  # cosh(theta)
        v = x - c * p
        s = math.sinh(theta)
        return TangentVector(self, p, (theta / s) * v)

    def exp(self, p, v):
        p = np.asarray(p, float)
        payload = self._payload_of(v)
        q = max(self.minkowski(payload, payload), 0.0)
        m = math.sqrt(q)
        if m < 1e-300:
            return p.copy()
        u = payload / m
        return self._project(math.cosh(m) * p + math.sinh(m) * u)

    def tangent_inner(self, p, u_payload, v_payload) -> float:
        # the Minkowski form is positive definite on tangent planes
        return float(np.sum(self._j * u_payload * v_payload))

    def random_tangent(self, p, rng) -> np.ndarray:
        p = np.asarray(p, float)
        v = rng.standard_normal(self.ambient)
        return v + self.minkowski(v, p) * p

    # -- batched -------------------------------------------------------------

    def stack(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float)

    def log_batch(self, p, batch):
        p = np.asarray(p, float)
        diff = batch - p
        q = np.maximum(np.einsum("ij,j,ij->i", diff, self._j, diff), 0.0)
        theta = 2.0 * np.arcsinh(np.sqrt(q) / 2.0)
        c = -np.einsum("ij,j,j->i", batch, self._j, p)
        v = batch - np.outer(c, p)
        s = np.sinh(theta)
        scale = np.where(s > 0, theta / np.where(s == 0, 1.0, s), 0.0)
        return v * scale[:, None], theta

    def sqdist_batch(self, p, batch) -> np.ndarray:
        diff = batch - np.asarray(p, float)
        q = np.maximum(np.einsum("ij,j,ij->i", diff, self._j, diff), 0.0)
        return (2.0 * np.arcsinh(np.sqrt(q) / 2.0)) ** 2

    def pairwise_sqdist(self, batch) -> np.ndarray:
        g = (batch * self._j) @ batch.T
        q = np.maximum(-2.0 - 2.0 * g, 0.0)
        return (2.0 * np.arcsinh(np.sqrt(q) / 2.0)) ** 2

    def tangent_basis(self, p) -> np.ndarray:
        """Minkowski-orthonormal basis of the tangent plane at p, rows as vectors."""
        p = np.asarray(p, float)
        basis = []
        for k in range(1, self.ambient):
            e = np.zeros(self.ambient)
            e[k] = 1.0
            v = e + self.minkowski(e, p) * p  # project onto the tangent plane
            for b in basis:
                v = v - self.tangent_inner(p, v, b) * b
            norm = math.sqrt(max(self.tangent_inner(p, v, v), 0.0))
            basis.append(v / norm)
        return np.stack(basis)
