"""Seeded randomized invariant suites.

Every suite draws from one ``random.Random(seed)`` so that a report is fully
determined by (suite, seed, trials). Failures keep the first counterexample.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import asymptotics, heis, strips, structure
from .core import EigProfile, Status, WeightConfig, conjugate, rat_str
from .heis import HeisForm
from .poly import Poly, random_poly
from .straight import canonicalize, config_from_mu, is_straight

SUITES = ("heis", "budget", "numlemma", "appendix")


@dataclass
class Check:
    name: str
    trials: int = 0
    failures: int = 0
    counterexample: Optional[dict] = None
    detail: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.trials > 0

    def record(self, ok: bool, example: Callable[[], dict] = None) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None and example is not None:
                self.counterexample = example()

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "trials": self.trials,
               "failures": self.failures}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    checks: List[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


# ---------------------------------------------------------------------------
# random generators


def random_rat(rng: random.Random, lo: int = -6, hi: int = 6, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def random_form(rng: random.Random, m: int, degree: int, poly_degree: int = 3,
                n_terms: int = 3) -> HeisForm:
    all_monos = list(itertools.combinations(range(2 * m - 1), degree))
    chosen = rng.sample(all_monos, min(n_terms, len(all_monos)))
    return HeisForm(m, degree, {mono: random_poly(rng, heis.nvars(m), poly_degree) for mono in chosen})


def random_horizontal_form(rng: random.Random, m: int, degree: int, poly_degree: int = 3,
                           n_terms: int = 3) -> HeisForm:
    monos = list(heis.horizontal_basis(m, degree))
    chosen = rng.sample(monos, min(n_terms, len(monos)))
    return HeisForm(m, degree, {mono: random_poly(rng, heis.nvars(m), poly_degree) for mono in chosen})


def random_mu(rng: random.Random) -> List[Fraction]:
    """A zero-sum rational triple, not all zero."""
    while True:
        m1, m2 = random_rat(rng), random_rat(rng)
        mu = [m1, m2, -m1 - m2]
        if len(set(mu)) > 1:
            return mu


def random_gl2(rng: random.Random) -> List[List[Fraction]]:
    while True:
        g = [[random_rat(rng, -3, 3, 3) for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 0:
            return g


def random_straight(rng: random.Random) -> WeightConfig:
    """A straight configuration: a random mu pattern moved by GL_2, rescaled and permuted."""
    cfg = config_from_mu(random_mu(rng)).precompose(random_gl2(rng))
    order = list(range(3))
    rng.shuffle(order)
    return cfg.permute(order)


def random_profile(rng: random.Random, n: int) -> EigProfile:
    lams = [Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(n)]
    if sum(lams) == 0:
        lams[-1] = Fraction(1)
    return EigProfile(tuple(lams))


def random_config(rng: random.Random, r: int, n: int, span: int = 3) -> WeightConfig:
    rows = []
    while len(rows) < n:
        row = tuple(Fraction(rng.randint(-span, span)) for _ in range(r))
        if any(row):
            rows.append(row)
    return WeightConfig(tuple(rows))


def _form_json(f: HeisForm) -> dict:
    return {"m": f.m, "degree": f.degree, "terms": f.to_json()}


def _cfg_json(cfg: WeightConfig) -> dict:
    return cfg.to_json()


# ---------------------------------------------------------------------------
# heis


def f_dx_obstruction_expected(f: Poly) -> HeisForm:
    """-(Z f + X Y f) dx ^ tau - (Y^2 f) dy ^ tau on Heis(3)."""
    m = 2
    Yf = heis.frame_Y(m, 1, f)
    c1 = -(heis.frame_Z(m, f) + heis.frame_X(m, 1, Yf))
    c2 = -heis.frame_Y(m, 1, Yf)
    return HeisForm.basis(m, "dx1^tau", c1) + HeisForm.basis(m, "dy1^tau", c2)


def check_lefschetz_ranks(m: int) -> bool:
    for k in range(0, 2 * (m - 1) + 1):
        dim, ker, img = heis.lefschetz_rank(m, k)
        target = len(heis.horizontal_basis(m, k + 2))
        if (ker == 0) != (k <= m - 2) or (img == target) != (k >= m - 2):
            return False
    return True


def suite_heis(seed: int, trials: int, ms: Sequence[int] = (2, 3)) -> SuiteReport:
    rng = random.Random(seed)
    checks = []

    dd = Check("d_squared_zero")
    for i in range(trials):
        m = ms[i % len(ms)]
        k = rng.randint(0, min(3, 2 * m - 2))
        w = random_form(rng, m, k)
        ddw = heis.differentiate(heis.differentiate(w))
        dd.record(ddw.is_zero(), lambda: _form_json(w))
    checks.append(dd)

    split = Check("weight_split_recombines")
    for i in range(trials):
        m = ms[i % len(ms)]
        w = random_form(rng, m, rng.randint(1, 2 * m - 1))
        h, v = heis.weight_split(w)
        split.record(heis.recombine(h, v) == w and h.is_horizontal() and v.is_horizontal(),
                     lambda: _form_json(w))
    checks.append(split)

    f_dx = Check("obstruction_formula_f_dx")
    for _ in range(trials):
        f = random_poly(rng, 3, 4, 5)
        theta = HeisForm.basis(2, "dx1", f)
        got = heis.nullclass_middle(2, theta)
        f_dx.record(got == f_dx_obstruction_expected(f), lambda: {"f": f.to_str(heis.var_names(2))})
    checks.append(f_dx)

    pair = Check("pair_construction_zero_obstruction")
    for _ in range(trials):
        u = random_poly(rng, 3, 4, 5)
        _, _, cert = heis.sl3_pair_construct(u)
        pair.record(cert.is_zero(), lambda: {"u": u.to_str(heis.var_names(2))})
    checks.append(pair)

    vert = Check("vertical_construct_is_vertical")
    for i in range(trials):
        m = ms[i % len(ms)]
        phi1 = random_horizontal_form(rng, m, m - 1)
        phi = heis.vertical_construct(m, phi1)
        horizontal, _ = heis.weight_split(heis.differentiate(phi))
        vert.record(horizontal.is_zero(), lambda: _form_json(phi1))
    checks.append(vert)

    exact = Check("obstruction_invariant_under_exact_terms")
    for i in range(trials):
        m = ms[i % len(ms)]
        # theta0 = d beta0 + psi ^ tau has zero obstruction; adding d beta must keep it zero
        beta0 = random_form(rng, m, m - 2)
        psi = random_horizontal_form(rng, m, m - 2)
        theta0 = heis.differentiate(beta0) + psi.wedge(heis.tau(m))
        beta = random_form(rng, m, m - 2)
        theta = theta0 + heis.differentiate(beta)
        if not heis.nullclass_middle(m, theta0).is_zero():
            exact.record(False, lambda: _form_json(theta0))
            continue
        exact.record(heis.nullclass_middle(m, theta).is_zero(), lambda: _form_json(beta))
    checks.append(exact)

    inv = Check("lefschetz_inverse_roundtrip")
    for i in range(trials):
        m = ms[i % len(ms)]
        w = random_horizontal_form(rng, m, m)
        gamma = heis.lefschetz_inverse(m, w)
        inv.record(gamma.wedge(heis.d_tau(m)) == w, lambda: _form_json(w))
    checks.append(inv)

    pairing = Check("top_pairing_weight_identity")
    for i in range(trials):
        m = ms[i % len(ms)]
        k = rng.randint(0, 2 * m - 1)
        T = random_form(rng, m, k, 2)
        th = random_form(rng, m, 2 * m - 1 - k, 2)
        T1, T2 = heis.weight_split(T)
        t1, t2 = heis.weight_split(th)
        tau = heis.tau(m)
        lhs = heis.top_coefficient(T.wedge(th))
        rhs = heis.top_coefficient(T1.wedge(t2.wedge(tau)))
        if k >= 1:
            rhs = rhs + heis.top_coefficient(T2.wedge(tau.wedge(t1)))
        pairing.record(lhs == rhs, lambda: {"T": _form_json(T), "theta": _form_json(th)})
    checks.append(pairing)

    lef = Check("lefschetz_injective_surjective")
    for m in range(2, 6):
        lef.record(check_lefschetz_ranks(m), lambda: {"m": m})
    checks.append(lef)

    dims = Check("horizontal_dimension_count")
    for m in range(2, 6):
        total = sum(heis.lefschetz_rank(m, k)[0] for k in range(2 * m - 1))
        dims.record(total == 2 ** (2 * (m - 1)), lambda: {"m": m, "total": total})
    checks.append(dims)

    dual = Check("annihilator_of_kernel_is_image")
    for m in range(2, 5):
        for k in range(2, 2 * m - 1):
            dual.record(heis.duality_orthogonality(m, k), lambda: {"m": m, "k": k})
    checks.append(dual)

    return SuiteReport("heis", seed, trials, checks)


# ---------------------------------------------------------------------------
# budget


def _identity_polys():
    """Both sides of the simplifications as polynomials in (p, mu1, mu2), mu3 = -mu1 - mu2."""
    p, m1, m2 = (Poly.var(3, i) for i in range(3))
    m3 = -m1 - m2
    first = ((2 * p - 3) * m2 - (3 - p) * m3, p * (m2 - m1) + 3 * m1)
    second = ((3 - p) * m1 - (2 * p - 3) * m2, -p * (m2 - m3) - 3 * m3)
    return first, second


def suite_budget(seed: int, trials: int) -> SuiteReport:
    rng = random.Random(seed)
    agree = Check("plus_threshold_equals_p_alpha")
    implied = Check("minus_threshold_below_strip")
    rng_check = Check("p_alpha_in_2_3")
    invariance = Check("p_alpha_group_invariance")
    idem = Check("canonicalize_idempotent")
    zero_strip = Check("salpha_table_zero_near_1")
    vanish = Check("dual_blowup_signs")
    for _ in range(trials):
        cfg = random_straight(rng)
        canon = canonicalize(cfg)
        res = asymptotics.budget_nonvanishing(canon)
        agree.record(res.plus_threshold == canon.p_alpha, lambda: _cfg_json(cfg))
        implied.record(res.minus_threshold <= Fraction(3, 2) < res.plus_threshold,
                       lambda: _cfg_json(cfg))
        rng_check.record(2 <= canon.p_alpha <= 3, lambda: _cfg_json(cfg))
        g = random_gl2(rng)
        order = list(range(3))
        rng.shuffle(order)
        moved = cfg.precompose(g).permute(order)
        scaled = WeightConfig(tuple(tuple(v * 3 for v in row) for row in cfg.weights))
        invariance.record(canonicalize(moved) == canon and canonicalize(scaled) == canon,
                          lambda: {"cfg": _cfg_json(cfg), "g": [[rat_str(v) for v in r] for r in g]})
        idem.record(canonicalize(canon.config()) == canon, lambda: _cfg_json(cfg))
        table = strips.s_alpha_degree2(cfg)
        zero_strip.record(any(pc.lo == 1 and pc.hi >= Fraction(3, 2) and pc.status == Status.ZERO
                              for pc in table.regions.pieces), lambda: _cfg_json(cfg))
        p = Fraction(3, 2) + Fraction(rng.randint(1, 299), 200)
        ok = asymptotics.budget_vanishing(canon, "T1", p)
        ok = ok and asymptotics.budget_vanishing(canon, "T3", p) == (p < canon.p_alpha)
        vanish.record(ok, lambda: {"cfg": _cfg_json(cfg), "p": rat_str(p)})

    ident = Check("simplification_identities")
    for lhs, rhs in _identity_polys():
        ident.record(lhs == rhs)
    conj = Check("conjugate_exponent_identities")
    for _ in range(trials):
        p = Fraction(rng.randint(101, 1000), 100)
        q = conjugate(p)
        # the weights of d theta and theta under the conjugate exponent
        conj.record(2 - 3 / q == 3 / p - 1 and -1 + 3 / q == 2 - 3 / p, lambda: {"p": rat_str(p)})
    checks = [agree, implied, rng_check, invariance, idem, zero_strip, vanish, ident, conj]
    return SuiteReport("budget", seed, trials, checks)


# ---------------------------------------------------------------------------
# numeric lemma


def numeric_log_min(a: float, b: float, log_A: float, log_B: float) -> float:
    """Brent minimization of log(e^{-at} A + e^{bt} B) in log space."""
    g = lambda t: np.logaddexp(-a * t + log_A, b * t + log_B)  # noqa: E731
    res = minimize_scalar(g, method="brent", options={"xtol": 1e-12})
    return float(res.fun)


def random_numlemma_instance(rng: random.Random):
    a = Fraction(rng.randint(1, 40), rng.randint(1, 8))
    b = Fraction(rng.randint(1, 40), rng.randint(1, 8))
    A = math.exp(rng.uniform(-7, 7))
    B = math.exp(rng.uniform(-7, 7))
    return a, b, A, B


def slope_fit(a: Fraction, b: Fraction, alpha: Fraction, beta: Fraction,
              s_values: Sequence[float]) -> float:
    """Least-squares slope of the numeric log-infimum against s, with A = e^{alpha s}, B = e^{beta s}."""
    logs = [numeric_log_min(float(a), float(b), float(alpha) * s, float(beta) * s) for s in s_values]
    return float(np.polyfit(np.asarray(s_values), np.asarray(logs), 1)[0])


def suite_numlemma(seed: int, trials: int) -> SuiteReport:
    rng = random.Random(seed)
    closed = Check("closed_form_matches_numeric")
    worst = 0.0
    for _ in range(trials):
        a, b, A, B = random_numlemma_instance(rng)
        exact = float(asymptotics.lemma_num_min(a, b, A, B).f_min)
        numeric = math.exp(numeric_log_min(float(a), float(b), math.log(A), math.log(B)))
        err = abs(numeric - exact) / exact
        worst = max(worst, err)
        closed.record(err <= 1e-9, lambda: {"a": rat_str(a), "b": rat_str(b), "A": A, "B": B,
                                             "error": err})
    closed.detail["max_relative_error"] = worst

    slope = Check("log_infimum_slope_matches_rate")
    s_values = list(np.linspace(10.0, 40.0, 31))
    worst = 0.0
    for _ in range(max(1, trials // 20)):
        a = Fraction(rng.randint(1, 12), rng.randint(1, 4))
        b = Fraction(rng.randint(1, 12), rng.randint(1, 4))
        alpha, beta = random_rat(rng, -3, 3), random_rat(rng, -3, 3)
        fitted = slope_fit(a, b, alpha, beta, s_values)
        expected = float(asymptotics.rate(a, b, alpha, beta))
        err = abs(fitted - expected)
        worst = max(worst, err)
        slope.record(err <= 1e-6, lambda: {"a": rat_str(a), "b": rat_str(b), "alpha": rat_str(alpha),
                                            "beta": rat_str(beta), "fitted": fitted})
    slope.detail["max_slope_error"] = worst
    return SuiteReport("numlemma", seed, trials, [closed, slope])


# ---------------------------------------------------------------------------
# appendix


def suite_appendix(seed: int, trials: int) -> SuiteReport:
    rng = random.Random(seed)
    fixed = Check("reference_configurations")
    tri = WeightConfig(((-1, 1), (-1, 0), (-1, -1)))
    fixed.record(structure.reducible(tri) is None and structure.npc(tri) is not None
                 and structure.hyperbolic_direction(tri) is not None)
    fixed.record(structure.reducible(WeightConfig(((-1, 0), (0, -1)))) == ((1,), (2,)))

    sol = Check("sol_weights_fail_npc")
    for _ in range(trials):
        lam = 1 + Fraction(rng.randint(0, 400), rng.randint(1, 20))
        cfg = WeightConfig(((Fraction(1),), (-lam,)))
        sol.record(structure.npc(cfg) is None, lambda: _cfg_json(cfg))

    duality = Check("profile_duality_w_plus_W")
    for _ in range(trials):
        prof = random_profile(rng, rng.randint(1, 8))
        n = prof.n
        duality.record(all(prof.w(j) + prof.W(n - j) == prof.h for j in range(n + 1)),
                       lambda: {"lambdas": [rat_str(v) for v in prof.lambdas]})

    npc_hull = Check("npc_agrees_with_hull_test")
    hyp_npc = Check("hyperbolic_implies_npc")
    center_abelian = Check("abelian_factor_iff_center")
    red = Check("partition_search_agrees_with_components")
    for _ in range(trials):
        r = rng.randint(1, 3)
        cfg = random_config(rng, r, rng.randint(1, 5))
        witness = structure.npc(cfg)
        ok = (witness is None) == structure.zero_in_convex_hull(cfg)
        if witness is not None:
            ok = ok and all(v <= -1 for v in cfg.evaluate(witness))
        npc_hull.record(ok, lambda: _cfg_json(cfg))
        if structure.hyperbolic_direction(cfg) is not None:
            hyp_npc.record(witness is not None, lambda: _cfg_json(cfg))
        center_abelian.record(structure.has_abelian_factor(cfg) == bool(structure.center(cfg)),
                              lambda: _cfg_json(cfg))
        if not structure.has_abelian_factor(cfg):
            split = structure.reducible(cfg)
            comps = structure.weight_components(cfg)
            red.record((split is None) == (len(comps) == 1), lambda: _cfg_json(cfg))

    straight_hyp = Check("straight_has_hyperbolic_direction")
    for _ in range(trials):
        cfg = random_straight(rng)
        straight_hyp.record(is_straight(cfg) and structure.hyperbolic_direction(cfg) is not None,
                            lambda: _cfg_json(cfg))
    checks = [fixed, sol, duality, npc_hull, hyp_npc, center_abelian, red, straight_hyp]
    return SuiteReport("appendix", seed, trials, checks)


def run_suite(name: str, seed: int, trials: int, ms: Sequence[int] = (2, 3)) -> SuiteReport:
    if name == "heis":
        return suite_heis(seed, trials, ms)
    if name == "budget":
        return suite_budget(seed, trials)
    if name == "numlemma":
        return suite_numlemma(seed, trials)
    if name == "appendix":
        return suite_appendix(seed, trials)
    raise ValueError(f"unknown suite {name!r}")


__all__ = ["Check", "SuiteReport", "SUITES", "run_suite", "suite_heis", "suite_budget",
           "suite_numlemma", "suite_appendix", "random_straight", "random_profile", "random_form",
           "random_horizontal_form", "random_mu", "random_gl2", "random_config", "f_dx_obstruction_expected",
           "numeric_log_min", "slope_fit", "check_lefschetz_ranks"]
