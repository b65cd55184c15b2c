import math

import numpy as np
import pytest

from nfgaps import (PreconditionError, Region, SingularPointError, branch_derivative,
                    branch_value, classify_region, integral_of_G, limit_G,
                    limit_density, thresholds, tile_map)
from nfgaps.limitdist import write_curve_csv, write_tiles_csv

T_SWEEP = [1.05, 1.12, 1.3, 4 / 3, 1.45, 1.9, 2.0, 2.76, 5.0, 22.0]


def boundary_pairs(t: float):
    """(left region, threshold, right region) triples for a given t."""
    eps = 1e-9
    pairs = []
    for tau in thresholds(t):
        left = classify_region(t, tau - eps)
        right = classify_region(t, tau + eps)
        if left is not right:
            pairs.append((left, tau, right))
    return pairs


class TestClassify:
    def test_interference_free_row(self):
        assert classify_region(2.76, 0.1) is Region.ONE
        assert classify_region(2.76, 0.5) is Region.C2
        assert classify_region(2.76, 1.2) is Region.C3
        assert classify_region(2.76, 2.0) is Region.ZERO

    def test_mid_band_rows(self):
        assert classify_region(1.45, 1.2) is Region.H4
        assert classify_region(1.12, 0.3) is Region.H7
        assert classify_region(1.45, 0.2) is Region.H1
        assert classify_region(1.45, 0.5) is Region.H2
        assert classify_region(1.45, 0.8) is Region.H3
        assert classify_region(1.45, 1.7) is Region.H5
        assert classify_region(1.45, 2.2) is Region.H6

    def test_degenerate_cell_at_four_thirds(self):
        # 2/t - 1 and 2 - 2/t coincide at 1/2: the H2 cell is empty
        t = 4 / 3
        assert classify_region(t, 0.5) is Region.H1
        assert classify_region(t, 0.5 + 1e-12) is Region.H3

    def test_row_t_equal_one(self):
        assert classify_region(1.0, 0.0) is Region.H1
        assert classify_region(1.0, 0.5) is Region.H7
        assert classify_region(1.0, 1.5) is Region.H5
        assert classify_region(1.0, 2.5) is Region.H6
        assert classify_region(1.0, 3.0) is Region.ZERO

    def test_domain_errors(self):
        with pytest.raises(PreconditionError):
            classify_region(0.9, 0.5)
        with pytest.raises(PreconditionError):
            classify_region(2.0, -0.1)


class TestLimitG:
    def test_plateau_and_tail(self):
        assert limit_G(3.0, 0.2) == 1.0
        assert limit_G(2.76, 2.0) == 0.0

    def test_value_at_two_half(self):
        expected = (4 + 4 - 4 + 1 + 4 * math.log(2)) / 8
        assert limit_G(2.0, 0.5) == pytest.approx(expected, abs=1e-15)
        assert limit_G(2.0, 0.5) == pytest.approx(0.9715735902799727, abs=1e-12)

    def test_half_at_spike(self):
        for t in (2.0, 2.76, 5.0, 22.0):
            assert abs(limit_G(t, 1.0) - 0.5) < 1e-12

    def test_edges(self):
        for t in T_SWEEP:
            assert limit_G(t, 0.0) == 1.0
            assert limit_G(t, 1.0 + 2.0 / t) == 0.0
            assert limit_G(t, 5.0) == 0.0

    def test_monotone_in_lambda(self):
        lams = np.arange(0.0, 3.2, 0.004)
        for t in T_SWEEP:
            values = [limit_G(t, lam) for lam in lams]
            assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
            assert all(0.0 <= v <= 1.0 for v in values)

    def test_branch_continuity(self):
        for t in T_SWEEP:
            for left, tau, right in boundary_pairs(t):
                assert abs(branch_value(left, t, tau) - branch_value(right, t, tau)) < 1e-10

    def test_derivative_continuity_except_spike(self):
        for t in T_SWEEP:
            for left, tau, right in boundary_pairs(t):
                if abs(tau - 1.0) < 1e-12:
                    continue
                dl = branch_derivative(left, t, tau)
                dr = branch_derivative(right, t, tau)
                assert abs(dl - dr) < 1e-8, (t, tau, left, right)


class TestDensity:
    def test_zero_on_flat_branches(self):
        assert limit_density(3.0, 0.1) == 0.0
        assert limit_density(2.76, 2.0) == 0.0

    def test_finite_difference_oracle(self):
        step = 1e-6
        for t, lam in ((2.0, 0.5), (2.76, 0.8), (1.45, 1.25), (1.12, 0.5), (5.0, 1.3)):
            fd = -(limit_G(t, lam + step) - limit_G(t, lam - step)) / (2 * step)
            assert limit_density(t, lam) == pytest.approx(fd, rel=1e-6)

    def test_nonnegative(self):
        for t in T_SWEEP:
            for lam in np.arange(0.0, 3.2, 0.01):
                if abs(lam - 1.0) < 1e-9:
                    continue
                assert limit_density(t, float(lam)) >= -1e-12

    def test_spike_errors_and_one_sided(self):
        with pytest.raises(SingularPointError):
            limit_density(2.76, 1.0)
        assert limit_density(2.76, 1.0, side="left") == math.inf
        assert limit_density(2.76, 1.0, side="right") == math.inf
        assert limit_density(1.12, 1.0, side="right") == math.inf

    def test_bad_side_rejected(self):
        with pytest.raises(PreconditionError):
            limit_density(2.76, 0.5, side="up")


class TestMass:
    def test_unit_mass_interference_free(self):
        # the mean normalized gap forces unit mass; exact for t >= 2
        for t in (1.9, 2.0, 2.76, 5.0, 22.0):
            assert abs(integral_of_G(t) - 1.0) < 1e-8

    def test_small_t_mass_defect_is_characterized(self):
        # The printed branch formulas integrate to slightly more than 1 for
        # t below ~1.75 even though they match the region volume pointwise
        # to 1e-12; see the acceptance suite for the full sweep.  Pin the
        # measured defect so silent transcription drift cannot hide in it.
        defects = {1.05: 4.2254e-4, 1.12: 2.4298e-4, 1.3: 4.9387e-5, 1.45: 9.8624e-6}
        for t, expected in defects.items():
            assert integral_of_G(t) - 1.0 == pytest.approx(expected, rel=1e-3)


class TestTiles:
    def test_row_partition_matches_thresholds(self):
        lams = np.round(np.arange(0.0, 2.0001, 0.0001), 10)
        row = tile_map([2.76], lams)[0]
        changes = [float(lams[i]) for i in range(1, len(row)) if row[i] is not row[i - 1]]
        assert changes == pytest.approx([1 - 2 / 2.76, 1.0, 1 + 2 / 2.76], abs=2e-4)

    def test_csv_exports(self, tmp_path):
        write_curve_csv(2.76, np.arange(0.0, 2.01, 0.5), tmp_path / "curve.csv")
        lines = (tmp_path / "curve.csv").read_text().splitlines()
        assert lines[0] == "lambda,G_limit,g_limit,region"
        assert lines[1].endswith(",ONE")
        assert "inf" in lines[3]  # density column at lambda = 1

        write_tiles_csv([2.76, 1.45], [0.1, 1.2], tmp_path / "tiles.csv")
        tiles = (tmp_path / "tiles.csv").read_text().splitlines()
        assert tiles[0] == "t,lambda,region"
        assert len(tiles) == 5


class TestThresholds:
    def test_interference_free(self):
        assert thresholds(2.76) == pytest.approx((1 - 2 / 2.76, 1.0, 1 + 2 / 2.76))

    def test_t_two_drops_zero(self):
        assert thresholds(2.0) == pytest.approx((1.0, 2.0))

    def test_mid_band_count(self):
        assert len(thresholds(1.45)) == 6
