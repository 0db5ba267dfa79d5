import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from lpstrips import asymptotics
from lpstrips.asymptotics import ComponentPattern, integrability_condition
from lpstrips.core import DomainError, EigProfile, Status, conjugate
from lpstrips.straight import canonicalize, mu_from_pattern

from strategies import exponents, straight_configs

F = Fraction
positive = st.fractions(min_value=0, max_value=30, max_denominator=9).filter(lambda x: x > 0)
reals = st.floats(min_value=1e-4, max_value=1e4)


def brent_log_min(a, b, log_A, log_B):
    g = lambda t: np.logaddexp(-a * t + log_A, b * t + log_B)  # noqa: E731
    return minimize_scalar(g, method="brent", options={"xtol": 1e-12}).fun


class TestPullback:
    def test_real_hyperbolic(self):
        # constant profile (1, ..., 1): a k-form scales by e^{-kt}, exponent -(k - n/p)
        n, k, p = 5, 2, F(7, 3)
        assert asymptotics.pullback_exponent(EigProfile((1,) * n), -k, p) == -(k - F(n) / p)

    def test_trace_zero(self):
        assert asymptotics.pullback_exponent(0, F(-3, 2), 2) == F(-3, 2)

    def test_critical_balance(self):
        prof = EigProfile((1, 2, 3))
        assert asymptotics.pullback_exponent(prof.h, prof.h / 4, 4) == 0
        # a profile of -delta carries trace -h
        assert asymptotics.pullback_exponent(prof, -prof.h / 4, 4) == 0

    def test_domain(self):
        with pytest.raises(DomainError):
            asymptotics.pullback_exponent(1, 0, 1)


class TestTwoTermMinimum:
    def test_symmetric(self):
        res = asymptotics.lemma_num_min(1, 1, 1, 1)
        assert res.t_min == 0 and res.f_min == 2

    def test_golden(self):
        res = asymptotics.lemma_num_min(1, 2, 4, 1)
        assert mpmath.almosteq(res.t_min, mpmath.log(2) / 3, 1e-14)
        assert mpmath.almosteq(res.f_min, 3 * mpmath.cbrt(4), 1e-14)
        assert abs(float(res.f_min) - 4.76220315590459) < 1e-12

    @pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, -2)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            asymptotics.lemma_num_min(*args)

    @given(positive, positive, reals, reals)
    def test_matches_numeric_minimizer(self, a, b, A, B):
        closed = float(asymptotics.lemma_num_min(a, b, A, B).f_min)
        numeric = math.exp(brent_log_min(float(a), float(b), math.log(A), math.log(B)))
        assert abs(closed - numeric) <= 1e-9 * closed

    @given(positive, positive, reals, reals)
    def test_log_form_agrees(self, a, b, A, B):
        res = asymptotics.lemma_num_min(a, b, A, B)
        assert mpmath.almosteq(asymptotics.log_min_value(a, b, math.log(A), math.log(B)),
                               mpmath.log(res.f_min), 1e-12)

    def test_rate_examples(self):
        assert asymptotics.rate(2, 3, F(5, 7), F(5, 7)) == F(5, 7)
        p = 2
        a, b = 2 - F(3, p), -1 + F(3, p)
        assert asymptotics.rate(a, b, 1, -1) == 0

    @given(positive, positive, st.fractions(-5, 5, max_denominator=5), st.fractions(-5, 5, max_denominator=5))
    def test_rate_is_the_empirical_slope(self, a, b, alpha, beta):
        s = np.linspace(10.0, 40.0, 31)
        logs = [brent_log_min(float(a), float(b), float(alpha) * v, float(beta) * v) for v in s]
        assert abs(np.polyfit(s, logs, 1)[0] - float(asymptotics.rate(a, b, alpha, beta))) < 1e-6

    @given(positive, positive, reals, reals,
           st.lists(st.floats(-20, 20), min_size=1, max_size=6), st.lists(st.floats(-20, 20), max_size=6))
    def test_norm_bound_monotone_in_candidates(self, a, b, A, B, ts, extra):
        small = asymptotics.class_norm_bound(a, b, A, B, ts)
        large = asymptotics.class_norm_bound(a, b, A, B, ts + extra)
        assert large <= small
        assert asymptotics.lemma_num_min(a, b, A, B).f_min <= small * (1 + mpmath.mpf(10) ** -12)

    def test_real_hyperbolic_rates(self):
        assert asymptotics.real_hyperbolic_rates(3, 2, 2) == (F(1, 2), F(1, 2))


class TestBudget:
    def test_component_exponents(self):
        mu = (F(1), F(0), F(-1))
        assert asymptotics.component_exponent(mu, "dx^dz") == 0
        pat = ComponentPattern.of(mu, ["dx^dz", "dx^dy"])
        assert (pat.leading("+"), pat.leading("-")) == (1, 0)
        with pytest.raises(DomainError):
            asymptotics.component_exponent(mu, "dw")

    def test_equally_spaced_is_empty(self):
        res = asymptotics.budget_nonvanishing(mu_from_pattern((1, 0, -1)))
        assert res.plus_threshold == 3 and res.feasible_p.pieces == ()

    def test_degenerate_pattern(self):
        res = asymptotics.budget_nonvanishing(mu_from_pattern((2, -1, -1)))
        assert res.plus_threshold == 2
        assert [(pc.lo, pc.hi, pc.status) for pc in res.feasible_p.pieces] == [(2, 3, Status.NONZERO)]

    def test_vanishing_examples(self):
        mu = mu_from_pattern((1, 0, -1))
        assert asymptotics.budget_vanishing_value(mu, "T1", 2) == 1
        assert asymptotics.budget_vanishing_value(mu, "T3", 2) == -1
        assert asymptotics.budget_vanishing(mu, "T1", 2) and asymptotics.budget_vanishing(mu, "T3", 2)
        with pytest.raises(DomainError):
            asymptotics.budget_vanishing(mu, "T1", 3)
        with pytest.raises(DomainError):
            asymptotics.budget_vanishing(mu, "T2", 2)

    @given(straight_configs())
    def test_plus_threshold_is_the_critical_exponent(self, cfg):
        canon = canonicalize(cfg)
        res = asymptotics.budget_nonvanishing(canon)
        assert res.plus_threshold == canon.p_alpha
        assert res.minus_threshold <= F(3, 2)
        m1, m2, m3 = canon.mu
        assert res.minus_threshold == 1 + (m2 - m3) / (m1 - m3)

    def test_conditions_reduce_to_the_simplified_forms(self):
        p, m1, m2 = sympy.symbols("p mu1 mu2")
        m3 = -m1 - m2
        assert sympy.expand((2 * p - 3) * m2 - (3 - p) * m3 - (p * (m2 - m1) + 3 * m1)) == 0
        assert sympy.expand((3 - p) * m1 - (2 * p - 3) * m2 - (-p * (m2 - m3) - 3 * m3)) == 0

    def test_linear_condition(self):
        cond = integrability_condition(1, -1, "<")
        assert (cond.slope, cond.intercept) == (3, -6)
        assert cond.solution() == (None, 2) and cond.describe() == "p < 2"
        assert cond.holds(F(3, 2)) and not cond.holds(3)


class TestConjugateBookkeeping:
    @given(exponents)
    def test_identities(self, p):
        q = conjugate(p)
        assert 2 - 3 / q == 3 / p - 1
        assert -1 + 3 / q == 2 - 3 / p

    def test_unshifted_variant_fails(self):
        # 1 + 3/q equals 4 - 3/p, not 2 - 3/p
        p = F(131, 50)
        q = conjugate(p)
        assert 1 + 3 / q == 4 - 3 / p != 2 - 3 / p


class TestSl3Decay:
    def test_golden(self):
        cert = asymptotics.sl3_decay("f dx", 3, "-")
        assert (cert.a, cert.b, cert.c) == (F(1, 3), F(2, 3), F(5, 3))
        assert cert.rates == (F(1, 2), F(7, 2), F(1))

    def test_mirrored(self):
        assert asymptotics.sl3_decay("g dy", 3, "+") == asymptotics.sl3_decay("f dx", 3, "-")
        assert asymptotics.sl3_decay("f dx", 3, "+") is None

    @pytest.mark.parametrize("p", [2, 4, F(3, 2)])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            asymptotics.sl3_decay("f dx", p, "-")

    @given(st.fractions(min_value=2, max_value=4, max_denominator=50).filter(lambda p: 2 < p < 4))
    def test_certified_throughout(self, p):
        a, b, c = asymptotics.sl3_coefficients(p)
        assert a > 0 and b > 0 and c > 0
        for pattern, direction in (("f dx", "-"), ("g dy", "+")):
            cert = asymptotics.sl3_decay(pattern, p, direction)
            assert cert is not None and all(r > 0 for r in cert.rates)


def test_seeded_sweeps_are_deterministic():
    def sweep(seed):
        rng = random.Random(seed)
        return [asymptotics.lemma_num_min(rng.randint(1, 9), rng.randint(1, 9), rng.random() + 0.1, 1).f_min
                for _ in range(5)]
    assert sweep(4) == sweep(4)
