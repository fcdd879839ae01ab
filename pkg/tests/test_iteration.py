"""Picard traces, the explicit rate formulas, and certificate semantics."""

import pytest

import cat0feas as cf
from cat0feas.iteration import IterationTrace, trace_rows


def line_line_map(e2):
    a = cf.AffineSubspace(e2, (0.0, 0.0), ((1.0, 0.0),))
    b = cf.AffineSubspace(e2, (0.0, 1.0), ((1.0, 0.0),))
    return cf.averaged_projections(a, b, 0.5), a, b


def ball_halfspace_map(e2):
    a = cf.EuclideanBall(e2, (0.0, 0.0), 1.0)
    b = cf.Halfspace(e2, (-1.0, 0.0), -2.0)
    return cf.averaged_projections(a, b, 0.5), a, b


class TestRateFormulas:
    # expected values recomputed by hand in exact decimal arithmetic
    @pytest.mark.parametrize(
        "b,eps,expected", [(1, 1, 2), (1, 0.5, 4), (1, 1.0, 2), (0.5, 1, 1), (1, 0.25, 8)]
    )
    def test_stage_count(self, b, eps, expected):
        assert cf.regularity_stage_count(b, eps) == expected

    @pytest.mark.parametrize(
        "b,eps,expected", [(1, 1, 21), (1, 0.5, 273), (0.5, 1, 4), (3.5, 1, 6322)]
    )
    def test_regularity_rate(self, b, eps, expected):
        assert cf.asymptotic_regularity_rate(b, eps) == expected

    @pytest.mark.parametrize(
        "M,b,eps,lam,expected",
        [(1, 1, 1, 0.5, 258), (1, 1, 0.5, 0.5, 4098), (1, 1, 1, 0.25, 343)],
    )
    def test_gap_rate(self, M, b, eps, lam, expected):
        assert cf.averaged_projection_gap_rate(M, b, eps, lam) == expected

    @pytest.mark.parametrize(
        "M,b,eps,expected", [(1, 1, 1, 6), (2, 1, 1, 18), (1, 1, 0.1, 402)]
    )
    def test_composed_gap_rate(self, M, b, eps, expected):
        assert cf.composed_projection_gap_rate(M, b, eps) == expected

    def test_decimal_boundary_semantics(self):
        # 2b/eps = 20 exactly in decimals; ceil must not jump to 21
        assert cf.regularity_stage_count(1, 0.1) == 20

    def test_huge_rates_are_exact_ints(self):
        n = cf.asymptotic_regularity_rate(3.5, 0.01)
        assert isinstance(n, int)
        assert n > 10**200  # exponential growth in 1/eps

    def test_monotonicity_grids(self):
        eps_grid = [2.0, 1.0, 0.5, 0.25, 0.125]
        b_grid = [0.5, 1.0, 2.0, 4.0]
        for b in b_grid:
            vals = [cf.asymptotic_regularity_rate(b, e) for e in eps_grid]
            assert vals == sorted(vals)  # nonincreasing in eps (grid descends)
        for e in eps_grid:
            vals = [cf.asymptotic_regularity_rate(b, e) for b in b_grid]
            assert vals == sorted(vals)  # nondecreasing in b
        for b in b_grid:
            vals = [cf.averaged_projection_gap_rate(1.0, b, e, 0.5) for e in eps_grid]
            assert vals == sorted(vals)
            vals = [cf.averaged_projection_gap_rate(b, 1.0, e, 0.5) for e in eps_grid]
            assert vals == sorted(vals)

    def test_domain_errors(self):
        with pytest.raises(cf.DomainError):
            cf.asymptotic_regularity_rate(0.0, 1.0)
        with pytest.raises(cf.DomainError):
            cf.asymptotic_regularity_rate(1.0, -0.5)
        with pytest.raises(cf.DomainError):
            cf.averaged_projection_gap_rate(1.0, 1.0, 1.0, 1.0)
        with pytest.raises(cf.DomainError):
            cf.composed_projection_gap_rate(1.0, 0.0, 1.0)


class TestPicard:
    def test_identity_stops_immediately(self, e2):
        trace = cf.picard(cf.IdentityMap(e2), e2.point((1, 2)), 100)
        assert trace.stationary_from == 0
        assert trace.residuals == [0.0]

    def test_line_line_one_step(self, e2):
        t_map, a, b = line_line_map(e2)
        trace = cf.picard(
            t_map, e2.point((0, 4)), 50,
            fixed_point=e2.point((0, 0.5)), aux_pair=(a, b),
        )
        assert trace.points[1].payload == (0.0, 0.5)
        assert trace.stationary_from == 1
        assert trace.residuals[0] == 3.5
        assert trace.residuals[1] == 0.0
        assert trace.to_fixed_point[0] == 3.5
        assert trace.aux[1] == 1.0  # the two line projections stay 1 apart

    def test_ball_halfspace_limit(self, e2):
        t_map, a, b = ball_halfspace_map(e2)
        trace = cf.picard(t_map, e2.point((5, 5)), 500)
        final = trace.points[-1].payload
        assert final[0] == pytest.approx(1.5, abs=1e-6)
        assert final[1] == pytest.approx(0.0, abs=1e-6)

    def test_fejer_monotone_with_fixed_point(self, e2):
        t_map, a, b = ball_halfspace_map(e2)
        trace = cf.picard(
            t_map, e2.point((5, 5)), 2000, fixed_point=e2.point((1.5, 0.0))
        )
        for earlier, later in zip(trace.to_fixed_point, trace.to_fixed_point[1:]):
            assert later <= earlier + 1e-9

    def test_stop_tol(self, e2):
        t_map, _, _ = ball_halfspace_map(e2)
        trace = cf.picard(t_map, e2.point((5, 5)), 10_000, stop_tol=1e-3)
        assert trace.residuals[-1] < 1e-3
        assert len(trace.points) < 100

    def test_n_max_domain(self, e2):
        with pytest.raises(cf.DomainError):
            cf.picard(cf.IdentityMap(e2), e2.point((0, 0)), 0)

    def test_nonfinite_iterate_reports_step(self, e1):
        class Exploder(cf.Mapping):
            kind = "exploder"

            def __init__(self, space):
                self._space = space

            @property
            def space(self):
                return self._space

            def __call__(self, x):
                return self._space.point((x.payload[0] * 1e200,))

        with pytest.raises(cf.NumericError) as err:
            cf.picard(Exploder(e1), e1.point((1.0,)), 100)
        assert err.value.step == 2  # 1e200 -> 1e400 = inf at the second step

    def test_trace_invariant_enforced(self, e2):
        with pytest.raises(cf.DomainError):
            IterationTrace(space=e2, points=[e2.point((0, 0))], residuals=[1.0, 2.0])

    def test_csv_rows_shape(self, e2):
        t_map, a, b = line_line_map(e2)
        trace = cf.picard(
            t_map, e2.point((0, 4)), 50,
            fixed_point=e2.point((0, 0.5)), aux_pair=(a, b),
        )
        rows = trace_rows(trace)
        assert rows[0][0] == 0
        assert rows[-1][1] is None  # no residual for the final iterate
        assert all(len(r) == 4 for r in rows)


class TestCertificates:
    def test_identity_passes_every_eps(self, e2):
        trace = cf.picard(cf.IdentityMap(e2), e2.point((0.5, 0.5)), 10)
        certs = cf.certify_asymptotic_regularity(trace, b=1.0, eps_grid=[1, 0.5, 0.1])
        assert all(c.passed for c in certs)

    def test_recorded_horizon_pass(self, e2):
        # horizon beyond the bound: the ordinary check path
        t_map, _, _ = line_line_map(e2)
        trace = cf.picard(t_map, e2.point((0, 0.75)), 60, stop_on_stationary=False)
        b = 0.25  # d(x0, fix) = 0.25
        bound = cf.asymptotic_regularity_rate(b, 1.0)
        assert bound < trace.horizon
        (cert,) = cf.certify_asymptotic_regularity(trace, b, [1.0])
        assert cert.passed and cert.bound_n == bound

    def test_stationary_extension_pass(self, e2):
        t_map, _, _ = line_line_map(e2)
        trace = cf.picard(t_map, e2.point((0, 4)), 50)
        certs = cf.certify_asymptotic_regularity(trace, 3.5, [1, 0.5, 0.1, 0.01])
        assert [c.status for c in certs] == ["pass"] * 4
        # bounds dwarf the recorded horizon; stationarity decides them
        assert certs[-1].bound_n > 10**100
        assert all(c.observed_first_n <= 1 for c in certs)

    def test_short_nonstationary_trace_inconclusive(self, e2):
        t_map, _, _ = ball_halfspace_map(e2)
        trace = cf.picard(t_map, e2.point((5, 5)), 20)
        assert trace.stationary_from is None
        (cert,) = cf.certify_asymptotic_regularity(trace, 6.2, [0.5])
        assert cert.status == "inconclusive"
        assert not cert.passed

    def test_violation_fails(self, e2):
        # synthetic trace with a large residual beyond a tiny bound
        pts = [e2.point((float(k), 0.0)) for k in range(8)]
        trace = IterationTrace(space=e2, points=pts, residuals=[1.0] * 7)
        b, eps = 0.25, 0.5
        bound = cf.asymptotic_regularity_rate(b, eps)
        assert bound < 7
        (cert,) = cf.certify_asymptotic_regularity(trace, b, [eps])
        assert cert.status == "fail"

    def test_gap_certificates_ball_halfspace(self, e2):
        t_map, a, b = ball_halfspace_map(e2)
        start = e2.point((5, 5))
        trace = cf.picard(t_map, start, 20_000, aux_pair=(a, b))
        assert trace.stationary_from is not None
        m_val = e2.distance(start, e2.point((1.5, 0.0)))
        gap0 = e2.distance(a.project(start), b.project(start))
        certs = cf.certify_best_approx_rate(
            trace, m_val, gap0 * gap0, 1.0, [1, 0.5, 0.25], 0.5
        )
        assert all(c.passed for c in certs)
        # the certified quantity settles at r itself: final aux == 1 exactly
        assert trace.aux[-1] == 1.0

    def test_gap_requires_aux(self, e2):
        t_map, _, _ = ball_halfspace_map(e2)
        trace = cf.picard(t_map, e2.point((5, 5)), 10)
        with pytest.raises(cf.DomainError):
            cf.certify_best_approx_rate(trace, 1.0, 1.0, 1.0, [1.0], 0.5)

    def test_certificate_json_fields(self, e2):
        trace = cf.picard(cf.IdentityMap(e2), e2.point((0, 0)), 5)
        (cert,) = cf.certify_asymptotic_regularity(trace, 1.0, [1.0])
        doc = cert.to_json()
        assert set(doc) == {"epsilon", "bound_n", "observed_first_n", "pass", "status"}
        assert doc["pass"] is True
