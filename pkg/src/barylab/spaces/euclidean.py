"""Euclidean space R^d: the flat calibration case."""

from __future__ import annotations

import math

import numpy as np

from .base import Extendibility, GeodesicSegment, Space, TangentVector


class Euclidean(Space):
    tag = "euclidean"

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Euclidean(dim={self.dim})"

    def check_point(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            raise ValueError(f"not a finite point of R^{self.dim}: {x!r}")

    def random_point(self, rng):
        return rng.standard_normal(self.dim)

    def point_payload(self, x) -> dict:
        return {"space": self.tag, "coords": [float(c) for c in x]}

    def point_from_payload(self, obj):
        x = np.asarray(obj["coords"], dtype=float)
        self.check_point(x)
        return x

    def distance(self, x, y) -> float:
        return float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))

    def geodesic(self, x, y) -> GeodesicSegment:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        return GeodesicSegment(
            self, x, y, self.distance(x, y), lambda t: (1.0 - t) * x + t * y
        )

    def max_extendibility(self, x, y) -> Extendibility:
        return Extendibility(math.inf, math.inf)

    def log(self, p, x) -> TangentVector:
        return TangentVector(self, np.asarray(p, float), np.asarray(x, float) - p)

    def exp(self, p, v):
        return np.asarray(p, float) + self._payload_of(v)

    def tangent_inner(self, p, u_payload, v_payload) -> float:
        return float(np.dot(u_payload, v_payload))

    def random_tangent(self, p, rng) -> np.ndarray:
        return rng.standard_normal(self.dim)

    # -- batched -------------------------------------------------------------

    def stack(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float)

    def log_batch(self, p, batch):
        payloads = batch - np.asarray(p, float)
        return payloads, np.linalg.norm(payloads, axis=1)

    def sqdist_batch(self, p, batch) -> np.ndarray:
        diff = batch - np.asarray(p, float)
        return np.einsum("ij,ij->i", diff, diff)

    def pairwise_sqdist(self, batch) -> np.ndarray:
        sq = np.einsum("ij,ij->i", batch, batch)
        g = batch @ batch.T
        out = sq[:, None] + sq[None, :] - 2.0 * g
        np.maximum(out, 0.0, out=out)
        return out
