"""Unit sphere S^d embedded in R^(d+1), with chordal-stable distances."""

from __future__ import annotations

import math

import numpy as np

from ..errors import AntipodalPoints, CutLocus, OutOfDomain
from .base import Extendibility, GeodesicSegment, Space, TangentVector

# Points this close to the cut locus are rejected rather than resolved.
ANTIPODAL_TOL = 1e-9
UNIT_NORM_TOL = 1e-12


class Sphere(Space):
    tag = "sphere"
    curv_lower = 1.0
    curv_upper = 1.0

    def __init__(self, dim: int = 2):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)  # intrinsic dimension; ambient is dim + 1

    def __repr__(self):
        return f"Sphere(dim={self.dim})"

    @property
    def ambient(self) -> int:
        return self.dim + 1

    def check_point(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient,):
            raise ValueError(f"expected ambient dimension {self.ambient}, got {x.shape}")
        if abs(np.linalg.norm(x) - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"not a unit vector: |x| = {np.linalg.norm(x)!r}")

    def random_point(self, rng):
        v = rng.standard_normal(self.ambient)
        return v / np.linalg.norm(v)

    def point_payload(self, x) -> dict:
        return {"space": self.tag, "coords": [float(c) for c in x]}

    def point_from_payload(self, obj):
        x = np.asarray(obj["coords"], dtype=float)
        self.check_point(x)
        return x

    def distance(self, x, y) -> float:
        # chordal form: exact near 0 and stable everywhere on [0, pi]
        chord = np.linalg.norm(np.asarray(x, float) - np.asarray(y, float))
        return float(2.0 * math.asin(min(chord / 2.0, 1.0)))

    def geodesic(self, x, y) -> GeodesicSegment:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        theta = self.distance(x, y)
        if theta > math.pi - ANTIPODAL_TOL:
            raise AntipodalPoints(f"d(x, y) = {theta:.12g} is within tolerance of pi")

        if theta < 1e-14:
            evaluator = lambda t: x.copy()
        else:
            sin_theta = math.sin(theta)

            def evaluator(t, _x=x, _y=y, _th=theta, _s=sin_theta):
                p = (math.sin((1.0 - t) * _th) * _x + math.sin(t * _th) * _y) / _s
                return p / np.linalg.norm(p)

        return GeodesicSegment(self, x, y, theta, evaluator)

    def max_extendibility(self, x, y) -> Extendibility:
        length = self.distance(x, y)
        if length < 1e-14:
            return Extendibility(math.inf, math.inf)
        if length > math.pi - ANTIPODAL_TOL:
            raise AntipodalPoints("no unique geodesic to extend")
        # the extension stays minimizing while the total arc is <= pi;
        # report the symmetric maximal split of the remaining budget
        budget = math.pi / length - 1.0
        half = budget / 2.0
        return Extendibility(half, half)

    def log(self, p, x) -> TangentVector:
        p = np.asarray(p, float)
        x = np.asarray(x, float)
        theta = self.distance(p, x)
        if theta > math.pi - ANTIPODAL_TOL:
            raise CutLocus(f"d(p, x) = {theta:.12g} reaches the cut locus")
        if theta < 1e-14:
            return TangentVector(self, p, np.zeros(self.ambient))
        v = x - np.dot(x, p) * p
        nv = np.linalg.norm(v)
        return TangentVector(self, p, (theta / nv) * v)

    def exp(self, p, v):
        p = np.asarray(p, float)
        payload = self._payload_of(v)
        m = np.linalg.norm(payload)
        if m >= math.pi:
            raise OutOfDomain(f"tangent magnitude {m:.12g} >= pi")
        if m < 1e-300:
            return p.copy()
        out = math.cos(m) * p + math.sin(m) * (payload / m)
        return out / np.linalg.norm(out)

    def tangent_inner(self, p, u_payload, v_payload) -> float:
        return float(np.dot(u_payload, v_payload))

    def random_tangent(self, p, rng) -> np.ndarray:
        p = np.asarray(p, float)
        v = rng.standard_normal(self.ambient)
        return v - np.dot(v, p) * p

    # -- batched -------------------------------------------------------------

    def stack(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float)

    def _theta_batch(self, p, batch) -> np.ndarray:
        chord = np.linalg.norm(batch - np.asarray(p, float), axis=1)
        return 2.0 * np.arcsin(np.minimum(chord / 2.0, 1.0))

    def log_batch(self, p, batch):
        p = np.asarray(p, float)
        theta = self._theta_batch(p, batch)
        if np.any(theta > math.pi - ANTIPODAL_TOL):
            raise CutLocus("a batch point reaches the cut locus of the base")
        v = batch - np.outer(batch @ p, p)
        nv = np.linalg.norm(v, axis=1)
        scale = np.where(nv > 0, theta / np.where(nv == 0, 1.0, nv), 0.0)
        return v * scale[:, None], theta

    def sqdist_batch(self, p, batch) -> np.ndarray:
        return self._theta_batch(p, batch) ** 2

    def pairwise_sqdist(self, batch) -> np.ndarray:
        g = batch @ batch.T
        chord_sq = np.maximum(2.0 - 2.0 * g, 0.0)
        theta = 2.0 * np.arcsin(np.minimum(np.sqrt(chord_sq) / 2.0, 1.0))
        return theta**2
