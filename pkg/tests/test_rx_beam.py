import numpy as np
import pytest

from fdswipt import (AlphaGrid, DegenerateChannelWarning, InfeasibleError,
                     InfeasibleHarvestError, ParameterError, build_wr,
                     sample_channels, search_alpha, SystemParams)
from fdswipt.channels import project_complement, project_onto

from test_metrics import make_channel


class TestBuildWr:
    def test_alpha_one_is_parallel_direction(self, channel_m2):
        w = build_wr(1.0, channel_m2)
        par = project_onto(channel_m2.h_ar, channel_m2.h_br)
        np.testing.assert_allclose(w, par / np.linalg.norm(par), atol=1e-12)

    def test_alpha_zero_is_perpendicular_direction(self, channel_m2):
        w = build_wr(0.0, channel_m2)
        perp = project_complement(channel_m2.h_ar, channel_m2.h_br)
        np.testing.assert_allclose(w, perp / np.linalg.norm(perp), atol=1e-12)

    def test_half_alpha_value(self):
        ch = make_channel(h_ar=np.array([1, 1]) / np.sqrt(2), h_br=[1, 0],
                          h_ra=[1, 0], h_rb=[0, 1])
        w = build_wr(0.5, ch)
        # pre-normalization (0.5, 0.7071), renormalized to unit length
        np.testing.assert_allclose(w, [0.57735027, 0.81649658], atol=1e-7)

    def test_unit_norm_everywhere(self, rng):
        params = SystemParams(m_t=2, m_r=3)
        for k in range(20):
            ch = sample_channels(params, k)
            for alpha in (0.0, 0.25, 0.5, 0.75, 1.0, rng.uniform(0, 1)):
                w = build_wr(alpha, ch)
                assert abs(np.linalg.norm(w) - 1.0) < 1e-10

    def test_lies_in_uplink_span(self, rng):
        params = SystemParams(m_t=2, m_r=4)
        for k in range(20):
            ch = sample_channels(params, 50 + k)
            w = build_wr(rng.uniform(0, 1), ch)
            e1 = ch.h_ar / np.linalg.norm(ch.h_ar)
            r = ch.h_br - e1 * np.vdot(e1, ch.h_br)
            e2 = r / np.linalg.norm(r)
            residual = w - e1 * np.vdot(e1, w) - e2 * np.vdot(e2, w)
            assert np.linalg.norm(residual) < 1e-10

    def test_collinear_channels_degenerate(self):
        ch = make_channel(h_ar=[1, 1j], h_br=[2, 2j], h_ra=[1, 0], h_rb=[0, 1])
        with pytest.warns(DegenerateChannelWarning):
            w = build_wr(0.3, ch)
        np.testing.assert_allclose(w, ch.h_ar / np.linalg.norm(ch.h_ar),
                                   atol=1e-12)
        assert abs(np.linalg.norm(w) - 1.0) < 1e-10

    def test_single_receive_antenna_degenerates(self):
        ch = make_channel(h_ar=[1.5], h_br=[1j], h_ra=[1, 0], h_rb=[0, 1])
        with pytest.warns(DegenerateChannelWarning):
            w = build_wr(0.7, ch)
        assert abs(np.linalg.norm(w) - 1.0) < 1e-12

    def test_zero_channel_rejected(self):
        ch_ok = make_channel([1, 0], [0, 1], [1, 0], [0, 1])
        with pytest.raises(ParameterError):
            build_wr(1.5, ch_ok)
        ch = make_channel([1e-13, 0], [0, 1], [1, 0], [0, 1])
        with pytest.raises(ParameterError):
            build_wr(0.5, ch)


class TestAlphaGrid:
    def test_invalid(self):
        with pytest.raises(ParameterError):
            AlphaGrid(start=0.5, stop=0.5)
        with pytest.raises(ParameterError):
            AlphaGrid(step=0.0)
        with pytest.raises(ParameterError):
            AlphaGrid(include=(1.5,))

    def test_points_include_extras_and_endpoints(self):
        grid = AlphaGrid(step=0.25, include=(0.583,))
        np.testing.assert_allclose(grid.points(),
                                   [0.0, 0.25, 0.5, 0.583, 0.75, 1.0])

    def test_points_cover_stop_for_uneven_step(self):
        pts = AlphaGrid(step=0.3).points()
        assert pts[0] == 0.0 and pts[-1] == 1.0


class TestSearchAlpha:
    def test_constant_inner_returns_start(self, channel_m2, params_m2):
        grid = AlphaGrid(step=0.1, refine_tol=0.0)
        alpha, payload = search_alpha(channel_m2, params_m2,
                                      lambda a: (1.0, a), grid)
        assert alpha == 0.0

    def test_tie_breaks_toward_smaller_alpha(self, channel_m2, params_m2):
        grid = AlphaGrid(step=0.5, refine_tol=0.0)
        alpha, _ = search_alpha(channel_m2, params_m2,
                                lambda a: (abs(a - 0.5), a), grid)
        assert alpha == 0.0

    def test_unimodal_peak_on_grid(self, channel_m2, params_m2):
        grid = AlphaGrid(step=0.1, refine_tol=0.0)
        alpha, _ = search_alpha(channel_m2, params_m2,
                                lambda a: (-(a - 0.4) ** 2, a), grid)
        assert alpha == pytest.approx(0.4, abs=1e-12)

    def test_refinement_improves_off_grid_peak(self, channel_m2, params_m2):
        inner = lambda a: (-(a - 0.43) ** 2, a)
        coarse, _ = search_alpha(channel_m2, params_m2, inner,
                                 AlphaGrid(step=0.1, refine_tol=0.0))
        refined, _ = search_alpha(channel_m2, params_m2, inner,
                                  AlphaGrid(step=0.1, refine_tol=1e-4))
        assert coarse == pytest.approx(0.4, abs=1e-12)
        assert abs(refined - 0.43) < 1e-3

    def test_result_dominates_grid(self, channel_m2, params_m2, rng):
        # returned value >= re-evaluated value at every grid point
        coeffs = rng.standard_normal(4)
        inner = lambda a: (float(np.polyval(coeffs, a) + np.sin(5 * a)), a)
        grid = AlphaGrid(step=0.05)
        alpha, _ = search_alpha(channel_m2, params_m2, inner, grid)
        best = inner(alpha)[0]
        assert all(best >= inner(float(a))[0] - 1e-12 for a in grid.points())

    def test_deterministic(self, channel_m2, params_m2):
        inner = lambda a: (np.cos(3 * a), a)
        grid = AlphaGrid(step=0.07)
        r1 = search_alpha(channel_m2, params_m2, inner, grid)
        r2 = search_alpha(channel_m2, params_m2, inner, grid)
        assert r1 == r2

    def test_partial_infeasibility_is_skipped(self, channel_m2, params_m2):
        def inner(a):
            if a < 0.5:
                raise InfeasibleHarvestError("low alpha infeasible")
            return (-a, a)

        alpha, _ = search_alpha(channel_m2, params_m2, inner,
                                AlphaGrid(step=0.1, refine_tol=0.0))
        assert alpha == pytest.approx(0.5)

    def test_all_infeasible_raises(self, channel_m2, params_m2):
        def inner(a):
            raise InfeasibleHarvestError("nothing works")

        with pytest.raises(InfeasibleError):
            search_alpha(channel_m2, params_m2, inner, AlphaGrid(step=0.2))
