import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfgaps import (AngleSequence, GapSample, ObserverFrame, PreconditionError,
                    angle_sequence, build_curve, empirical_G, gap_per_point,
                    normalized_gaps)

from conftest import cached_gap_sample


def slope_order_oracle(points, t: Fraction, J: int):
    """Independent ordering oracle: sort by exact rational slope."""
    a, b = t.numerator, t.denominator
    return sorted(points, key=lambda p: Fraction(p[1], b * p[0] + a * J * J))


class TestObserverFrame:
    def test_position(self):
        fr = ObserverFrame(t=Fraction(3), J=10)
        assert fr.position == (-300.0, 0.0)

    def test_observer_inside_rejected(self):
        with pytest.raises(PreconditionError):
            ObserverFrame(t=Fraction(1, 10), J=10)  # t = 1/J exactly
        with pytest.raises(PreconditionError):
            angle_sequence([(0, 1)], Fraction(1, 20), J=10)


class TestAngleSequence:
    def test_symmetric_pair(self):
        seq = angle_sequence([(0, 1), (0, -1)], 3, J=2)
        theta = math.atan(1.0 / 12.0)
        assert seq.angles == pytest.approx([-theta, theta])
        assert seq.alpha_min == -seq.alpha_max

    def test_seven_one_order(self):
        ps = build_curve(7, 1)
        seq = angle_sequence(ps, 3)
        got = [ps.points[i] for i in seq.order]
        assert got == slope_order_oracle(ps.points, Fraction(3), 3)
        assert got == [(1, -3), (-3, -2), (3, -1), (-2, 2), (2, 3)]

    def test_angles_ascending_and_bounded(self):
        seq = angle_sequence(build_curve(1009, 3), Fraction("1.5"))
        assert np.all(np.diff(seq.angles) >= 0)
        assert seq.alpha_min > -math.pi / 2 and seq.alpha_max < math.pi / 2

    def test_alpha_max_asymptotics(self):
        # alpha_max = 1/(tJ) up to an O(1/J^2) correction
        seq, _ = cached_gap_sample(10007, 1, "2.76")
        J = 5003
        assert abs(seq.alpha_max - 1.0 / (2.76 * J)) <= 10.0 / J ** 2

    def test_raw_points_rejected(self):
        from nfgaps import build_nf_curve

        with pytest.raises(PreconditionError):
            angle_sequence(build_nf_curve(7, 1), 3)

    def test_empty_rejected(self):
        with pytest.raises(PreconditionError):
            angle_sequence([], 3, J=5)


class TestNormalizedGaps:
    def test_two_points_single_unit_gap(self):
        seq = angle_sequence([(0, 1), (0, -1)], 3, J=2)
        gaps = normalized_gaps(seq)
        assert gaps.gaps.tolist() == [1.0]

    def test_equally_spaced_angles(self):
        angles = np.linspace(-0.4, 0.4, 9)
        seq = AngleSequence(angles=angles, order=np.arange(9),
                            frame=ObserverFrame(t=Fraction(3), J=5))
        gaps = normalized_gaps(seq)
        assert gaps.gaps == pytest.approx(np.ones(8))

    def test_mean_identity_large_prime(self):
        _, gaps = cached_gap_sample(10007, 1, "2.76")
        assert gaps.n == 10004
        assert abs(gaps.mean - 1.0) < 1e-12
        assert abs(float(np.sum(gaps.gaps)) - gaps.n) < 1e-9 * gaps.n

    def test_zero_gap_for_collinear_points(self):
        # (0,2) and (-2,1) are collinear with the observer at (-4, 0)
        seq = angle_sequence([(0, 2), (-2, 1), (1, -1)], 1, J=2)
        gaps = normalized_gaps(seq)
        assert np.min(gaps.gaps) == 0.0

    def test_single_point_rejected(self):
        seq = angle_sequence([(0, 1)], 3, J=2)
        with pytest.raises(PreconditionError):
            normalized_gaps(seq)

    def test_reflection_symmetry(self):
        ps = build_curve(101, 3)
        flipped = [(x, -y) for x, y in ps.points]
        g1 = normalized_gaps(angle_sequence(ps, Fraction("1.5")))
        g2 = normalized_gaps(angle_sequence(flipped, Fraction("1.5"), J=ps.J))
        assert np.array_equal(np.sort(g1.gaps), np.sort(g2.gaps))


class TestEmpiricalG:
    def test_at_zero(self):
        _, gaps = cached_gap_sample(101, 1, "3")
        assert empirical_G(gaps, 0.0) == 1.0

    def test_single_gap_threshold(self):
        seq = angle_sequence([(0, 1), (0, -1)], 3, J=2)
        gaps = normalized_gaps(seq)
        assert empirical_G(gaps, 1.0) == 1.0
        assert empirical_G(gaps, 1.0001) == 0.0

    def test_monotone_and_vanishing(self, lambda_grid):
        _, gaps = cached_gap_sample(1009, 2, "1.5")
        curve = empirical_G(gaps, lambda_grid)
        assert np.all(np.diff(curve) <= 0)
        assert empirical_G(gaps, gaps.max + 1e-9) == 0.0
        assert empirical_G(gaps, gaps.max) > 0.0

    def test_step_integral_equals_mean(self):
        # exact integral of the right-closed step function is the gap mean
        _, gaps = cached_gap_sample(1009, 2, "1.5")
        assert float(np.sum(gaps.gaps)) / gaps.n == pytest.approx(1.0, abs=1e-12)

    def test_negative_lambda_rejected(self):
        _, gaps = cached_gap_sample(101, 1, "3")
        with pytest.raises(PreconditionError):
            empirical_G(gaps, -0.1)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.0, 50.0), min_size=1, max_size=60),
           st.floats(0.0, 60.0), st.floats(0.0, 60.0))
    def test_monotone_property(self, raw, lam1, lam2):
        gaps = GapSample(gaps=np.asarray(raw))
        lo, hi = sorted((lam1, lam2))
        assert empirical_G(gaps, lo) >= empirical_G(gaps, hi)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1.0, 1.0), min_size=2, max_size=50, unique=True))
    def test_gap_sum_identity_property(self, raw):
        angles = np.sort(np.asarray(raw))
        if angles[-1] - angles[0] < 1e-9:
            return
        seq = AngleSequence(angles=angles, order=np.arange(len(angles)),
                            frame=ObserverFrame(t=Fraction(3), J=2))
        gaps = normalized_gaps(seq)
        assert float(np.sum(gaps.gaps)) == pytest.approx(gaps.n, rel=1e-9)


class TestGapPerPoint:
    def test_two_points(self):
        rows = gap_per_point([(0, 1), (0, -1)], 3, J=2)
        assert rows == [(0, 1, None), (0, -1, 1.0)]

    def test_symmetric_fan_unit_gaps(self):
        rows = gap_per_point([(0, -5), (0, 0), (0, 5)], 2, J=5)
        gaps = [g for (_, _, g) in rows]
        assert gaps[:2] == pytest.approx([1.0, 1.0]) and gaps[2] is None

    def test_order_matches_input(self):
        ps = build_curve(101, 1)
        rows = gap_per_point(ps, 3)
        assert [(x, y) for x, y, _ in rows] == list(ps.points)
        assert sum(g is None for _, _, g in rows) == 1

    def test_close_observer_shifts_gaps_small(self):
        # near observer: small gaps dominate; median drops versus a far observer
        far = gap_per_point(build_curve(5003, 1), 5)
        near = gap_per_point(build_curve(5003, 1), Fraction(1, 3))
        med_far = np.median([g for *_, g in far if g is not None])
        med_near = np.median([g for *_, g in near if g is not None])
        assert med_near < med_far


class TestEquidistribution:
    def test_ks_moderate_prime(self):
        from nfgaps import equidistribution_check

        assert equidistribution_check(5003, 1, Fraction("2.76")) <= 0.02
