"""Concrete geodesic model spaces and shared space machinery."""

from .base import Extendibility, GeodesicSegment, Space, TangentVector, componentwise_inf
from .euclidean import Euclidean
from .gaussian import BuresWasserstein, GaussianPoint
from .hyperboloid import Hyperboloid
from .quantile import QuantileSpace
from .sphere import Sphere

__all__ = [
    "BuresWasserstein",
    "TangentVector",
    "Euclidean",
    "Extendibility",
    "GaussianPoint",
    "GeodesicSegment",
    "Hyperboloid",
    "QuantileSpace",
    "Space",
    "Sphere",
    "componentwise_inf",
    "point_from_payload",
]

_SPACE_TAGS = {
    Euclidean.tag: Euclidean,
    Sphere.tag: Sphere,
    Hyperboloid.tag: Hyperboloid,
    QuantileSpace.tag: QuantileSpace,
    BuresWasserstein.tag: BuresWasserstein,
}


def point_from_payload(obj: dict):
    """Reconstruct (space, point) from a tagged JSON payload."""
    tag = obj.get("space")
    if tag == Euclidean.tag:
        space = Euclidean(len(obj["coords"]))
    elif tag == Sphere.tag:
        space = Sphere(len(obj["coords"]) - 1)
    elif tag == Hyperboloid.tag:
        space = Hyperboloid(len(obj["coords"]) - 1)
    elif tag == QuantileSpace.tag:
        space = QuantileSpace(len(obj["values"]))
    elif tag == BuresWasserstein.tag:
        space = BuresWasserstein(len(obj["mean"]))
    else:
        raise ValueError(f"unknown space tag {tag!r}")
    return space, space.point_from_payload(obj)
