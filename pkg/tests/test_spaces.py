"""Model-space contracts: metric axioms, geodesics, log/exp, extendibility."""

import itertools
import math

import numpy as np
import pytest

import barylab as bl
from barylab.errors import AntipodalPoints, CutLocus, NotPositiveDefinite, OutOfDomain
from barylab.families import gaussian_quantile_grid

from conftest import probe_point, separated_points


class TestMetricAxioms:
    def test_axioms_on_random_triples(self, any_space, rng):
        space = any_space
        for _ in range(1000):
            x, y, z = (probe_point(space, rng) for _ in range(3))
            dxy = space.distance(x, y)
            assert dxy >= 0.0
            assert space.distance(x, x) <= 1e-12
            assert abs(dxy - space.distance(y, x)) <= 1e-12 * max(1.0, dxy)
            assert space.distance(x, z) <= dxy + space.distance(y, z) + 1e-9

    def test_euclidean_pythagoras(self):
        assert bl.Euclidean(2).distance(np.zeros(2), np.array([3.0, 4.0])) == 5.0

    def test_quantile_point_mass_distance(self):
        space = bl.QuantileSpace(2)
        assert space.distance(np.zeros(2), np.full(2, 2.0)) == pytest.approx(2.0)

    def test_gaussian_one_dim_example(self):
        space = bl.BuresWasserstein(1)
        a = bl.GaussianPoint([0.0], [[1.0]])
        b = bl.GaussianPoint([0.0], [[4.0]])
        assert space.distance(a, b) == pytest.approx(1.0, abs=1e-12)


class TestGeodesics:
    def test_endpoints(self, any_space, rng):
        for _ in range(10):
            x, y = separated_points(any_space, rng, 2)
            seg = any_space.geodesic(x, y)
            assert any_space.distance(seg.at(0.0), x) <= 1e-9
            assert any_space.distance(seg.at(1.0), y) <= 1e-9

    def test_constant_speed_on_grid(self, any_space, rng):
        grid = np.linspace(0.0, 1.0, 10)
        for _ in range(20):
            x, y = separated_points(any_space, rng, 2)
            seg = any_space.geodesic(x, y)
            length = any_space.distance(x, y)
            pts = [seg.at(t) for t in grid]
            for (s, ps), (t, pt) in itertools.combinations(zip(grid, pts), 2):
                assert any_space.distance(ps, pt) == pytest.approx(
                    (t - s) * length, abs=1e-9
                )

    def test_euclidean_interpolation(self):
        seg = bl.Euclidean(2).geodesic(np.zeros(2), np.array([2.0, 0.0]))
        assert np.allclose(seg.at(0.25), [0.5, 0.0])

    def test_gaussian_variance_interpolation(self):
        space = bl.BuresWasserstein(1)
        seg = space.geodesic(
            bl.GaussianPoint([0.0], [[1.0]]), bl.GaussianPoint([0.0], [[9.0]])
        )
        mid = seg.at(0.5)
        assert mid.cov[0, 0] == pytest.approx(4.0, abs=1e-12)

    def test_quantile_geodesic_stays_sorted(self, rng):
        space = bl.QuantileSpace(32)
        x = np.sort(rng.standard_normal(32))
        y = np.sort(rng.standard_normal(32))
        seg = space.geodesic(x, y)
        for t in np.linspace(0, 1, 7):
            assert np.all(np.diff(seg.at(t)) >= 0)

    def test_sphere_antipodal_rejected(self):
        space = bl.Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        with pytest.raises(AntipodalPoints):
            space.geodesic(p, -p)


class TestLogExp:
    def test_log_magnitude_is_distance(self, any_space, rng):
        for _ in range(50):
            p, x = separated_points(any_space, rng, 2)
            v = any_space.log(p, x)
            assert v.magnitude == pytest.approx(any_space.distance(p, x), abs=1e-12)

    def test_log_at_base_is_tip(self, any_space, rng):
        p = probe_point(any_space, rng)
        v = any_space.log(p, p)
        assert v.magnitude == 0.0
        assert any_space.distance(any_space.exp(p, v), p) <= 1e-12

    def test_exp_log_round_trip(self, any_space, rng):
        for _ in range(100):
            p, x = separated_points(any_space, rng, 2)
            back = any_space.exp(p, any_space.log(p, x))
            assert any_space.distance(back, x) <= 1e-9

    def test_exp_magnitude_is_distance(self, any_space, rng):
        p = probe_point(any_space, rng)
        v = any_space.random_tangent(p, rng)
        norm = any_space.tangent_norm(p, v)
        scaled = (0.37 / norm) * v
        try:
            q = any_space.exp(p, scaled)
        except OutOfDomain:
            return  # quantile cone boundary: nothing to check
        assert any_space.distance(p, q) == pytest.approx(0.37, abs=1e-9)

    def test_sphere_round_trips_large_sample(self, rng):
        space = bl.Sphere(2)
        worst = 0.0
        for _ in range(1000):
            p, x = separated_points(space, rng, 2, min_sep=1e-3)
            if space.distance(p, x) > math.pi - 0.1:
                continue
            back = space.exp(p, space.log(p, x))
            worst = max(worst, space.distance(back, x))
        assert worst <= 1e-9

    def test_sphere_log_example(self):
        space = bl.Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        x = np.array([1.0, 0.0, 0.0])
        v = space.log(p, x)
        assert v.magnitude == pytest.approx(math.pi / 2, abs=1e-12)
        assert np.allclose(v.payload / v.magnitude, [1.0, 0.0, 0.0], atol=1e-12)

    def test_sphere_cut_locus(self):
        space = bl.Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        with pytest.raises(CutLocus):
            space.log(p, -p)

    def test_sphere_exp_domain(self):
        space = bl.Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        with pytest.raises(OutOfDomain):
            space.exp(p, np.array([math.pi, 0.0, 0.0]))

    def test_euclidean_exp_example(self):
        space = bl.Euclidean(2)
        assert np.allclose(
            space.exp(np.array([1.0, 1.0]), np.array([2.0, 0.0])), [3.0, 1.0]
        )

    def test_gaussian_log_magnitude_matches_w2(self, rng):
        space = bl.BuresWasserstein(3)
        for _ in range(50):
            p, x = (space.random_point(rng) for _ in range(2))
            assert space.log(p, x).magnitude == pytest.approx(
                space.distance(p, x), abs=1e-9
            )

    def test_gaussian_exp_domain(self):
        space = bl.BuresWasserstein(2)
        p = bl.GaussianPoint(np.zeros(2), np.eye(2))
        payload = np.zeros((3, 2))
        payload[1:] = -2.0 * np.eye(2)  # I + L has eigenvalue -1
        with pytest.raises(OutOfDomain):
            space.exp(p, payload)

    def test_quantile_exp_leaves_cone(self):
        space = bl.QuantileSpace(3)
        p = np.array([0.0, 1.0, 2.0])
        with pytest.raises(OutOfDomain):
            space.exp(p, np.array([0.0, 5.0, 0.0]))


class TestExtendibility:
    def test_euclidean_lines_extend_forever(self, rng):
        space = bl.Euclidean(3)
        x, y = separated_points(space, rng, 2)
        ext = space.max_extendibility(x, y)
        assert math.isinf(ext.lambda_in) and math.isinf(ext.lambda_out)

    def test_hyperbolic_extends_forever(self, rng):
        space = bl.Hyperboloid(2)
        x, y = separated_points(space, rng, 2)
        ext = space.max_extendibility(x, y)
        assert math.isinf(ext.lambda_in) and math.isinf(ext.lambda_out)

    def test_sphere_symmetric_budget(self):
        space = bl.Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        q = space.exp(p, np.array([math.pi / 8, 0.0, 0.0]))
        ext = space.max_extendibility(p, q)
        assert ext.lambda_in == pytest.approx(3.5, abs=1e-9)
        assert ext.lambda_out == pytest.approx(3.5, abs=1e-9)

    def test_sphere_extension_is_minimizing(self, rng):
        """Oracle: the extended arc realizes its length as a distance.

        Probed at 95% of the reported budget; at the exact budget the
        endpoints are antipodal, where chordal evaluation loses precision.
        """
        space = bl.Sphere(2)
        for _ in range(20):
            p, q = separated_points(space, rng, 2)
            length = space.distance(p, q)
            ext = space.max_extendibility(p, q)
            payload = space.log(p, q).payload
            lam_in = 0.95 * ext.lambda_in
            lam_out = 0.95 * ext.lambda_out
            total = (lam_in + 1.0 + lam_out) * length
            assert total < math.pi
            start = space.exp(p, -lam_in * payload)
            end = space.exp(p, (1.0 + lam_out) * payload)
            assert space.distance(start, end) == pytest.approx(total, abs=1e-9)

    def test_gaussian_example_bounds(self):
        space = bl.BuresWasserstein(1)
        a = bl.GaussianPoint([0.0], [[1.0]])
        b = bl.GaussianPoint([0.0], [[4.0]])
        ext = space.max_extendibility(a, b)
        assert ext.lambda_in == pytest.approx(1.0, abs=1e-12)
        assert math.isinf(ext.lambda_out)
        assert ext.open_in and not ext.open_out

    def test_gaussian_supremum_is_open(self):
        """Inside the supremum the interpolated map stays PD, at it it fails."""
        space = bl.BuresWasserstein(1)
        a = bl.GaussianPoint([0.0], [[1.0]])
        b = bl.GaussianPoint([0.0], [[4.0]])
        seg = space.geodesic(a, b)
        inside = seg.at(-0.99)
        assert inside.cov[0, 0] > 0
        with pytest.raises(OutOfDomain):
            seg.at(-1.01)

    def test_quantile_monotone_budget(self):
        space = bl.QuantileSpace(2)
        p = np.array([0.0, 1.0])
        x = np.array([0.0, 2.0])
        ext = space.max_extendibility(p, x)
        assert ext.lambda_in == pytest.approx(1.0, abs=1e-12)
        assert math.isinf(ext.lambda_out)


class TestValidationAndSerialization:
    def test_check_point_rejects_bad_points(self):
        with pytest.raises(ValueError):
            bl.Sphere(2).check_point(np.array([1.0, 1.0, 1.0]))
        with pytest.raises(ValueError):
            bl.Hyperboloid(2).check_point(np.array([0.5, 0.0, 0.0]))
        with pytest.raises(ValueError):
            bl.QuantileSpace(3).check_point(np.array([1.0, 0.0, 2.0]))
        with pytest.raises(NotPositiveDefinite):
            bl.GaussianPoint([0.0], [[-1.0]])
        with pytest.raises(NotPositiveDefinite):
            bl.GaussianPoint([0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]])

    def test_payload_round_trip(self, any_space, rng):
        x = probe_point(any_space, rng)
        payload = any_space.point_payload(x)
        space2, back = bl.point_from_payload(payload)
        assert space2.tag == any_space.tag
        assert any_space.distance(x, back) <= 1e-12

    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError):
            bl.point_from_payload({"space": "torus", "coords": [0.0]})

    def test_quantile_discretization_is_monotone(self):
        space = bl.QuantileSpace(100)
        grid = gaussian_quantile_grid(space, 0.3, 1.7)
        assert np.all(np.diff(grid) > 0)


class TestCrossSpaceOracles:
    def test_quantile_distance_is_w2_brute_force(self, rng):
        """Brute-force assignment over all permutations equals the grid metric."""
        space = bl.QuantileSpace(4)
        for _ in range(10):
            x = np.sort(rng.standard_normal(4))
            y = np.sort(rng.standard_normal(4))
            best = min(
                math.sqrt(sum((x[i] - y[s[i]]) ** 2 for i in range(4)) / 4.0)
                for s in itertools.permutations(range(4))
            )
            assert space.distance(x, y) == pytest.approx(best, abs=1e-12)

    def test_gaussian_matches_quantile_discretization(self, rng):
        """1-D W2 between Gaussians against their quantile discretizations."""
        g = bl.BuresWasserstein(1)
        q = bl.QuantileSpace(10_000)
        for _ in range(5):
            m1, s1 = rng.normal(), rng.uniform(0.5, 2.0)
            m2, s2 = rng.normal(), rng.uniform(0.5, 2.0)
            w2 = g.distance(
                bl.GaussianPoint([m1], [[s1**2]]), bl.GaussianPoint([m2], [[s2**2]])
            )
            quantized = q.distance(
                gaussian_quantile_grid(q, m1, s1), gaussian_quantile_grid(q, m2, s2)
            )
            assert w2 == pytest.approx(quantized, abs=1e-3)
