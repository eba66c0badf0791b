import math

import numpy as np
import pytest
from conftest import circle_map, sampled_circle_map

from zerocert import (EndpointMismatch, NotANullHomotopy, Region, SampledMap,
                      concatenate, contraction_from_extension, null_homotopy,
                      radial_extension, reverse, sample_sphere, straight_line)


def _identity_map(level=6):
    return sampled_circle_map(lambda pts: np.asarray(pts, dtype=float), level)


def _shifted_map(level=6, shift=(3.0, 3.0)):
    return sampled_circle_map(
        lambda pts: np.asarray(pts, dtype=float) + np.asarray(shift), level)


class TestStraightLine:
    def test_constant_in_t(self):
        f = _shifted_map()
        trace, report = straight_line(f, f, t_steps=16)
        assert report.valid
        min_f = float(np.min(np.linalg.norm(f.images, axis=1)))
        assert report.min_norm == pytest.approx(min_f)
        assert np.allclose(trace.frames[0], trace.frames[-1])

    def test_paper_nonhomotopic_pair_has_vanishing_witness(self):
        # H(x,t) = x + t(3,3) vanishes at x = -(1,1)/sqrt(2), t = 1/(3 sqrt 2)
        f = _identity_map(level=6)
        g = _shifted_map(level=6)
        trace, report = straight_line(f, g, t_steps=257, L=5.0)
        assert not report.valid
        p_idx, t_idx = report.witness
        witness_point = f.sampling.points[p_idx]
        expected_point = -np.array([1.0, 1.0]) / math.sqrt(2.0)
        assert np.linalg.norm(witness_point - expected_point) < 0.05
        assert trace.t_grid[t_idx] == pytest.approx(1.0 / (3.0 * math.sqrt(2.0)),
                                                    abs=0.01)

    def test_positive_multiple_is_valid(self):
        f = _identity_map()
        g = SampledMap(sampling=f.sampling, images=2.0 * f.images, m=2)
        _, report = straight_line(f, g, t_steps=32)
        assert report.valid

    def test_positive_scaling_validity_random(self):
        rng = np.random.default_rng(21)
        f = _shifted_map(level=4, shift=(0.5, -0.2))
        for _ in range(100):
            lam = rng.uniform(0.1, 10.0, size=(len(f.images), 1))
            g = SampledMap(sampling=f.sampling, images=lam * f.images, m=2)
            _, report = straight_line(f, g, t_steps=16)
            assert report.valid

    def test_symmetry_with_reverse(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4, shift=(0.1, 0.4))
        fwd, _ = straight_line(f, g, t_steps=9)
        bwd, _ = straight_line(g, f, t_steps=9)
        assert np.allclose(fwd.frames, reverse(bwd).frames)

    def test_mismatched_samplings_rejected(self):
        from zerocert import InvalidInput
        f = _identity_map(level=3)
        g = _identity_map(level=4)
        with pytest.raises(InvalidInput):
            straight_line(f, g, t_steps=8)


class TestReverse:
    def test_involution(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4, shift=(0.2, 0.1))
        trace, _ = straight_line(f, g, t_steps=11)
        assert np.allclose(reverse(reverse(trace)).frames, trace.frames)

    def test_endpoints_swap(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4, shift=(0.2, 0.1))
        trace, _ = straight_line(f, g, t_steps=11)
        rev = reverse(trace)
        assert np.allclose(rev.frames[0], trace.frames[-1])
        assert rev.min_norm == trace.min_norm

    def test_constant_trace_fixed(self):
        f = _shifted_map(level=3)
        trace, _ = straight_line(f, f, t_steps=7)
        assert np.allclose(reverse(trace).frames, trace.frames)


class TestConcatenate:
    def test_round_trip(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4, shift=(0.3, 0.0))
        trace, _ = straight_line(f, g, t_steps=9)
        loop = concatenate(trace, reverse(trace))
        assert np.allclose(loop.frames[0], loop.frames[-1])

    def test_min_norm_is_min_of_parts(self):
        rng = np.random.default_rng(5)
        f = _shifted_map(level=3, shift=(2.0, 1.0))
        for _ in range(10):
            mid_images = f.images + rng.normal(scale=0.3, size=f.images.shape)
            mid = SampledMap(sampling=f.sampling, images=mid_images, m=2)
            h, _ = straight_line(f, mid, t_steps=7)
            back, _ = straight_line(mid, f, t_steps=5)
            joined = concatenate(h, back)
            assert joined.min_norm == pytest.approx(min(h.min_norm, back.min_norm))

    def test_endpoint_mismatch(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4)
        h, _ = straight_line(f, g, t_steps=5)
        with pytest.raises(EndpointMismatch):
            concatenate(h, h)

    def test_associativity_of_endpoints(self):
        f = _identity_map(level=3)
        g = _shifted_map(level=3, shift=(0.2, -0.1))
        k = _shifted_map(level=3, shift=(0.5, 0.5))
        hg, _ = straight_line(f, g, t_steps=5)
        gk, _ = straight_line(g, k, t_steps=5)
        kf, _ = straight_line(k, f, t_steps=5)
        left = concatenate(concatenate(hg, gk), kf)
        right = concatenate(hg, concatenate(gk, kf))
        assert np.allclose(left.frames[-1], right.frames[-1])
        assert np.allclose(left.frames[0], right.frames[0])


class TestNullHomotopy:
    def test_contracts_winding_zero_map(self):
        f = _shifted_map(level=5)
        trace = null_homotopy(f, t_steps=33)
        assert np.allclose(trace.frames[0], f.images)
        last = trace.frames[-1]
        assert np.max(np.abs(last - last[0])) < 1e-9
        assert trace.min_norm > 0

    def test_rejects_nonzero_winding(self):
        with pytest.raises(NotANullHomotopy):
            null_homotopy(_identity_map(level=5))


class TestRadialExtension:
    def test_constant_map(self):
        f = _shifted_map(level=4, shift=(5.0, 0.0))
        const = SampledMap(sampling=f.sampling,
                           images=np.tile([5.0, 0.0], (len(f.images), 1)), m=2)
        trace, _ = straight_line(const, const, t_steps=5)
        phi = radial_extension(trace)
        for x in ([0.0, 0.0], [0.3, 0.2], [0.9, 0.0], [0.0, -1.0]):
            assert np.allclose(phi(x), [5.0, 0.0])

    def test_center_value_is_terminal_constant(self):
        f = _shifted_map(level=5)
        trace = null_homotopy(f)
        phi = radial_extension(trace)
        assert np.allclose(phi([0.0, 0.0]), trace.frames[-1][0])

    def test_boundary_agreement_exact(self):
        f = _shifted_map(level=5)
        phi = radial_extension(null_homotopy(f))
        for p, image in zip(f.sampling.points, f.images):
            assert np.allclose(phi(p), image, atol=1e-12)

    def test_zero_free_on_grid(self):
        # the winding-0 map admits a zero-free disk extension
        f = _shifted_map(level=6)
        phi = radial_extension(null_homotopy(f, t_steps=65))
        radii = np.linspace(0.0, 1.0, 100)
        angles = np.linspace(0.0, 2.0 * math.pi, 100, endpoint=False)
        worst = math.inf
        for r in radii:
            for a in angles:
                worst = min(worst, float(np.linalg.norm(
                    phi([r * math.cos(a), r * math.sin(a)]))))
        assert worst > 0.0

    def test_rejects_nonconstant_tail(self):
        f = _identity_map(level=4)
        g = _shifted_map(level=4)
        trace, _ = straight_line(f, g, t_steps=5)
        with pytest.raises(NotANullHomotopy):
            radial_extension(trace)


class TestContractionFromExtension:
    def _sampling(self, level=4):
        return sample_sphere(Region.disk([0.0, 0.0], 1.0), level)

    def test_constant_extension(self):
        sampling = self._sampling()
        trace, report = contraction_from_extension(
            lambda x: np.array([2.0, 1.0]), sampling, t_steps=9)
        assert np.allclose(trace.frames, 0.0 + np.array([2.0, 1.0]))
        assert report.valid

    def test_shift_extension_margin(self):
        # min of ||x + (3,3)|| over the disk is 3 sqrt(2) - 1, attained at
        # the boundary point opposite the shift
        sampling = self._sampling(level=3)
        phi = lambda x: np.asarray(x, dtype=float) + np.array([3.0, 3.0])
        trace, report = contraction_from_extension(phi, sampling, t_steps=33)
        assert report.valid
        assert np.allclose(trace.frames[-1], [3.0, 3.0])
        assert report.min_norm == pytest.approx(3.0 * math.sqrt(2.0) - 1.0)

    def test_identity_extension_vanishes_at_center(self):
        sampling = self._sampling()
        trace, report = contraction_from_extension(
            lambda x: np.asarray(x, dtype=float), sampling, t_steps=9)
        assert not report.valid
        assert report.min_norm == 0.0
        _, t_idx = report.witness
        assert trace.t_grid[t_idx] == 1.0
