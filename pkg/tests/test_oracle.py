import math

import numpy as np
import pytest
from scipy.interpolate import BSpline

from gtbsplines import (
    ExponentialFamily,
    OracleUnsupportedError,
    PolynomialFamily,
    SectionSpace,
    SpaceConfig,
    TrigonometricFamily,
    build_bernstein,
    build_space,
    eval_basis,
)
from gtbsplines.config import mixed_family_demo_config
from gtbsplines.oracle import (
    RecurrenceEvaluator,
    bernstein_recurrence,
    cox_de_boor_basis,
    cox_de_boor_knots,
    global_recurrence_eval,
    local_recurrence_eval,
)

from helpers import random_config


class TestLocalRecurrence:
    def test_single_quadratic_patch(self):
        space = build_space(SpaceConfig([0.0, 1.0], [PolynomialFamily(2)], []))
        assert local_recurrence_eval(space, 2, 0.5) == pytest.approx(0.5, abs=1e-8)

    def test_two_hats_peak(self):
        space = build_space(
            SpaceConfig([0.0, 1.0, 2.0], [PolynomialFamily(1)] * 2, [0])
        )
        assert local_recurrence_eval(space, 2, 1.0) == pytest.approx(1.0, abs=1e-8)

    def test_matches_extraction_on_mixed_demo(self, mixed_space):
        xs = np.linspace(0.0, 5.0, 20)
        for k in range(1, mixed_space.n_basis + 1):
            for x in xs:
                ref = eval_basis(mixed_space, float(x))[k - 1, 0]
                assert local_recurrence_eval(mixed_space, k, float(x)) == pytest.approx(
                    ref, abs=1e-7
                )


class TestGlobalRecurrence:
    def test_agrees_with_local_on_mixed_degrees(self, rng):
        cfg = SpaceConfig(
            [0.0, 1.0, 2.2, 3.0],
            [PolynomialFamily(2), TrigonometricFamily(3, 1.1), PolynomialFamily(4)],
            [1, 2],
        )
        space = build_space(cfg)
        for _ in range(50):
            x = float(rng.uniform(0.0, 3.0))
            k = int(rng.integers(1, space.n_basis + 1))
            assert global_recurrence_eval(space, k, x) == pytest.approx(
                local_recurrence_eval(space, k, x), abs=1e-9
            )

    def test_uniform_trig_space(self):
        cfg = SpaceConfig([0.0, 1.0, 2.0, 3.0], [TrigonometricFamily(3, 1.0)] * 3, [2, 2])
        space = build_space(cfg)
        xs = np.linspace(0.0, 3.0, 25)
        for k in range(1, space.n_basis + 1):
            for x in xs:
                ref = eval_basis(space, float(x))[k - 1, 0]
                assert global_recurrence_eval(space, k, float(x)) == pytest.approx(
                    ref, abs=1e-9
                )

    def test_right_endpoint_left_limit(self, mixed_space):
        assert global_recurrence_eval(mixed_space, mixed_space.n_basis, 5.0) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_intermediate_masses_positive(self, mixed_space):
        ev = RecurrenceEvaluator(mixed_space, "global")
        for q, level in enumerate(ev.levels):
            for k, fn in level.items():
                assert fn.total > 0.0, (q, k)


class TestBernsteinRecurrence:
    def test_polynomial_matches_binomial(self):
        section = SectionSpace(0.0, 1.0, PolynomialFamily(2))
        ladder = bernstein_recurrence(section)
        for x in np.linspace(0, 1, 17):
            vals = ladder.evaluate(float(x))[:, 0]
            assert vals[1] == pytest.approx(2 * x * (1 - x), abs=1e-9)

    def test_trig_matches_closed_form(self):
        omega = 1.0
        section = SectionSpace(0.0, 1.0, TrigonometricFamily(2, omega))
        ladder = bernstein_recurrence(section)
        for x in np.linspace(0, 1, 17):
            expected = (1 - math.cos(omega * (1 - x))) / (1 - math.cos(omega))
            assert ladder.evaluate(float(x))[0, 0] == pytest.approx(expected, abs=1e-9)

    def test_base_level_is_normalized_pair(self):
        section = SectionSpace(0.0, 1.0, ExponentialFamily(1, 2.0))
        ladder = bernstein_recurrence(section)
        u_star, v_star = section.normalized_pair()
        for x in np.linspace(0, 1, 9):
            vals = ladder.evaluate(float(x))[:, 0]
            assert vals[0] == pytest.approx(u_star(float(x)), abs=1e-12)
            assert vals[1] == pytest.approx(v_star(float(x)), abs=1e-12)

    def test_agrees_with_hermite_construction(self, rng):
        for section in (
            SectionSpace(1.0, 2.5, TrigonometricFamily(3, math.pi / 2)),
            SectionSpace(0.0, 1.5, ExponentialFamily(3, 2.0)),
            SectionSpace(-1.0, 1.0, PolynomialFamily(4)),
        ):
            ladder = bernstein_recurrence(section)
            hermite = build_bernstein(section)
            for x in rng.uniform(section.x_lo, section.x_hi, 25):
                delta = ladder.evaluate(float(x))[:, 0] - hermite.evaluate(float(x))[:, 0]
                assert np.max(np.abs(delta)) <= 1e-9

    def test_degree_zero_unsupported(self):
        with pytest.raises(OracleUnsupportedError):
            bernstein_recurrence(SectionSpace(0.0, 1.0, PolynomialFamily(0)))


class TestOracleAgreementOnRandomSpaces:
    def test_custom_pair_space(self):
        from gtbsplines import GeneralizedPolynomialFamily

        custom = GeneralizedPolynomialFamily(
            3,
            u=lambda x, d: math.exp(x),
            v=lambda x, d: (2.0**d) * math.exp(2.0 * x),
            name="exp-pair",
        )
        space = build_space(
            SpaceConfig([0.0, 1.0, 2.0], [custom, PolynomialFamily(3)], [1])
        )
        for x in np.linspace(0.0, 2.0, 21):
            vals = eval_basis(space, float(x))[:, 0]
            for k in range(1, space.n_basis + 1):
                assert local_recurrence_eval(space, k, float(x)) == pytest.approx(
                    vals[k - 1], abs=1e-9
                )

    def test_sampled_spaces(self, rng):
        for _ in range(4):
            space = build_space(random_config(rng, n_intervals=3))
            xs = rng.uniform(*space.domain, 10)
            for x in xs:
                vals = eval_basis(space, float(x))[:, 0]
                for k in range(1, space.n_basis + 1):
                    assert local_recurrence_eval(space, k, float(x)) == pytest.approx(
                        vals[k - 1], abs=1e-7
                    )


class TestCoxDeBoor:
    def test_knot_vector_construction(self):
        knots = cox_de_boor_knots([0.0, 1.0, 2.0], 3, [1])
        assert np.array_equal(knots, [0, 0, 0, 0, 1, 1, 2, 2, 2, 2])

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_matches_scipy(self, degree, rng):
        breakpoints = [0.0, 0.8, 1.7, 2.4, 4.0]
        smoothness = [int(rng.integers(0, degree)) for _ in range(3)]
        knots = cox_de_boor_knots(breakpoints, degree, smoothness)
        n = len(knots) - degree - 1
        spline = BSpline(knots, np.eye(n), degree, extrapolate=False)
        for x in rng.uniform(0.01, 3.99, 60):
            ours = cox_de_boor_basis(knots, degree, float(x), min(degree, 2))
            ref_vals = spline(float(x))
            assert np.max(np.abs(ours[:, 0] - ref_vals)) <= 1e-12
            d1 = spline.derivative()(float(x))
            assert np.max(np.abs(ours[:, 1] - d1)) <= 1e-10

    def test_left_limit_at_right_end(self):
        knots = cox_de_boor_knots([0.0, 1.0, 2.0], 2, [1])
        vals = cox_de_boor_basis(knots, 2, 2.0)
        assert vals[-1, 0] == pytest.approx(1.0)
        assert abs(vals[:-1, 0]).max() == 0.0
