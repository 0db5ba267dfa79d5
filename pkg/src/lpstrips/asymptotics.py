"""Exponent bookkeeping for pullback norms and the two-term minimization.

Exponents are exact rationals. Only the prefactors A, B of the two-term
minimization are real numbers, held as mpmath floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

import mpmath

from .core import DomainError, EigProfile, Piece, PuncturedIntervalSet, Status, rat_str
from .straight import CanonicalMu

STRIP = (Fraction(3, 2), Fraction(3))


def pullback_exponent(trace, mu_I, p) -> Fraction:
    """Exponent of e^{mu_I - tr(delta)/p} in the norm of (e^delta)^* f_I omega_I.

    ``trace`` is tr(delta) itself, or an :class:`EigProfile` of -delta, whose
    trace h then enters with the opposite sign.
    """
    p = Fraction(p)
    if p <= 1:
        raise DomainError(f"exponent p = {p} must exceed 1")
    tr = -trace.h if isinstance(trace, EigProfile) else Fraction(trace)
    return Fraction(mu_I) - tr / p


# ---------------------------------------------------------------------------
# the two-term minimization inf_t e^{-at} A + e^{bt} B


def _mp(x) -> mpmath.mpf:
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class NumMin:
    t_min: mpmath.mpf
    f_min: mpmath.mpf
    t_expr: str


def lemma_num_min(a, b, A, B) -> NumMin:
    """Closed-form minimizer of f(t) = e^{-at} A + e^{bt} B.

    f'(t) = 0 gives A / B = (b / a) e^{(a+b) t}, and then f = B e^{bt} (b/a + 1).
    """
    a, b = Fraction(a), Fraction(b)
    A, B = mpmath.mpf(A), mpmath.mpf(B)
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    if A <= 0 or B <= 0:
        raise DomainError("A and B must be positive")
    am, bm = _mp(a), _mp(b)
    t = mpmath.log(am * A / (bm * B)) / (am + bm)
    f = B * mpmath.exp(bm * t) * (bm / am + 1)
    expr = f"ln(({a})*A/(({b})*B))/({a + b})"
    return NumMin(t, f, expr)


def log_min_value(a, b, log_A, log_B) -> mpmath.mpf:
    """log of the minimum, from log A and log B (avoids overflow for large exponents)."""
    am, bm = _mp(a), _mp(b)
    log_A, log_B = mpmath.mpf(log_A), mpmath.mpf(log_B)
    t = (mpmath.log(am / bm) + log_A - log_B) / (am + bm)
    return log_B + bm * t + mpmath.log(bm / am + 1)


def rate(a, b, alpha, beta) -> Fraction:
    """Growth rate (a beta + b alpha) / (a + b) of the minimum when A ~ e^{alpha s}, B ~ e^{beta s}."""
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise DomainError("a and b must be positive")
    return (a * Fraction(beta) + b * Fraction(alpha)) / (a + b)


def class_norm_bound(a, b, A, B, ts: Iterable) -> mpmath.mpf:
    """min over the candidate t of e^{-at} A + e^{bt} B."""
    a, b = _mp(a), _mp(b)
    A, B = mpmath.mpf(A), mpmath.mpf(B)
    values = [mpmath.exp(-a * t) * A + mpmath.exp(b * t) * B for t in ts]
    if not values:
        raise DomainError("empty candidate set")
    return min(values)


def real_hyperbolic_rates(n: int, k: int, p) -> Tuple[Fraction, Fraction]:
    """Exponents (k - n/p, 1 - k + n/p) weighting d theta and theta in degree k."""
    p = Fraction(p)
    if p <= 1 or n < 1 or not 1 <= k <= n:
        raise DomainError("need p > 1 and 1 <= k <= n")
    return k - Fraction(n) / p, 1 - k + Fraction(n) / p


# ---------------------------------------------------------------------------
# component patterns under e^{s D_mu}

_ONE_FORM = {"dx": 0, "dy": 1, "dz": 2}


def component_exponent(mu: Sequence[Fraction], label: str) -> Fraction:
    """Pullback exponent of a coordinate monomial on R^3 under diag(mu)."""
    try:
        return sum((Fraction(mu[_ONE_FORM[part]]) for part in label.split("^")), Fraction(0))
    except KeyError as exc:
        raise DomainError(f"unknown component {label!r}") from exc


@dataclass(frozen=True)
class ComponentPattern:
    """The components present in a form, each with its exponent as a multiple of s."""

    components: Tuple[Tuple[str, Fraction], ...]

    def __post_init__(self):
        if not self.components:
            raise DomainError("a component pattern must be nonempty")

    @classmethod
    def of(cls, mu: Sequence[Fraction], labels: Sequence[str]) -> "ComponentPattern":
        return cls(tuple((lab, component_exponent(mu, lab)) for lab in labels))

    def leading(self, direction: str) -> Fraction:
        """Exponent of the dominant term as s -> +inf ('+') or s -> -inf ('-')."""
        exps = [e for _, e in self.components]
        if direction == "+":
            return max(exps)
        if direction == "-":
            return min(exps)
        raise DomainError(f"direction must be '+' or '-', got {direction!r}")


@dataclass(frozen=True)
class LinearCondition:
    """slope * p + intercept (op) 0, with op in {'<', '>'}."""

    slope: Fraction
    intercept: Fraction
    op: str

    def holds(self, p) -> bool:
        v = self.slope * Fraction(p) + self.intercept
        return v < 0 if self.op == "<" else v > 0

    @property
    def threshold(self) -> Fraction:
        return -self.intercept / self.slope

    def solution(self) -> Tuple[Optional[Fraction], Optional[Fraction]]:
        """Open solution ray (lo, hi); None marks an unbounded end."""
        if self.slope == 0:
            raise DomainError("condition does not depend on p")
        upper = (self.slope > 0) == (self.op == "<")
        return (None, self.threshold) if upper else (self.threshold, None)

    def describe(self) -> str:
        lo, hi = self.solution()
        return f"p < {hi}" if lo is None else f"p > {lo}"

    def to_json(self) -> dict:
        return {"slope": rat_str(self.slope), "intercept": rat_str(self.intercept),
                "op": self.op, "solution": self.describe()}


def integrability_condition(beta, alpha, op: str) -> LinearCondition:
    """(2p - 3) beta + (3 - p) alpha (op) 0 as a linear condition in p."""
    beta, alpha = Fraction(beta), Fraction(alpha)
    return LinearCondition(2 * beta - alpha, 3 * alpha - 3 * beta, op)


@dataclass(frozen=True)
class BudgetResult:
    alpha_plus: Fraction
    alpha_minus: Fraction
    beta_plus: Fraction
    beta_minus: Fraction
    plus_condition: LinearCondition
    minus_condition: LinearCondition
    feasible_p: PuncturedIntervalSet

    @property
    def plus_threshold(self) -> Fraction:
        return self.plus_condition.threshold

    @property
    def minus_threshold(self) -> Fraction:
        return self.minus_condition.threshold

    def to_json(self) -> dict:
        return {
            "alpha_plus": rat_str(self.alpha_plus), "alpha_minus": rat_str(self.alpha_minus),
            "beta_plus": rat_str(self.beta_plus), "beta_minus": rat_str(self.beta_minus),
            "plus_condition": self.plus_condition.to_json(),
            "minus_condition": self.minus_condition.to_json(),
            "plus_threshold": rat_str(self.plus_threshold),
            "minus_threshold": rat_str(self.minus_threshold),
            "feasible_p": self.feasible_p.to_json(),
        }


def _intersect(rays, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    for r_lo, r_hi in rays:
        if r_lo is not None:
            lo = max(lo, r_lo)
        if r_hi is not None:
            hi = min(hi, r_hi)
    return lo, hi


def budget_nonvanishing(mu: CanonicalMu) -> BudgetResult:
    """Integrability conditions for d(f dx) = d(g dy + h dz) under e^{s D_mu}.

    theta = f dx controls s -> -inf, Theta = g dy + h dz controls s -> +inf, and
    d theta has components dx^dz, dx^dy.
    """
    m = mu.mu
    theta = ComponentPattern.of(m, ["dx"])
    big_theta = ComponentPattern.of(m, ["dy", "dz"])
    d_theta = ComponentPattern.of(m, ["dx^dz", "dx^dy"])
    a_plus = d_theta.leading("+")
    a_minus = d_theta.leading("-")
    b_plus = big_theta.leading("+")
    b_minus = theta.leading("-")
    plus = integrability_condition(b_plus, a_plus, "<")
    minus = integrability_condition(b_minus, a_minus, ">")
    lo, hi = _intersect([plus.solution(), minus.solution()], *STRIP)
    pieces = (Piece(lo, hi, Status.NONZERO),) if lo < hi else ()
    return BudgetResult(a_plus, a_minus, b_plus, b_minus, plus, minus, PuncturedIntervalSet(pieces))


_DUAL_PATTERNS = {
    # component -> (test form, components of its differential, direction of s)
    "T1": ("dx", ("dx^dy", "dx^dz"), "-"),
    "T3": ("dz", ("dx^dz", "dy^dz"), "+"),
}


def budget_vanishing_value(mu: CanonicalMu, component: str, p) -> Fraction:
    """p (a beta + b alpha) with a = 3/p - 1, b = 2 - 3/p for the test form dual to ``component``."""
    p = Fraction(p)
    if not STRIP[0] < p < STRIP[1]:
        raise DomainError(f"p = {p} outside (3/2, 3)")
    try:
        form, d_form, direction = _DUAL_PATTERNS[component]
    except KeyError as exc:
        raise DomainError(f"component must be T1 or T3, got {component!r}") from exc
    beta = ComponentPattern.of(mu.mu, [form]).leading(direction)
    alpha = ComponentPattern.of(mu.mu, list(d_form)).leading(direction)
    return (3 - p) * beta + (2 * p - 3) * alpha


def budget_vanishing(mu: CanonicalMu, component: str, p) -> bool:
    """Whether the dual test forms certify blow-up of a class with this component.

    T1 is tested as s -> -inf (needs a positive value), T3 as s -> +inf
    (needs a negative value).
    """
    v = budget_vanishing_value(mu, component, p)
    return v > 0 if component == "T1" else v < 0


# ---------------------------------------------------------------------------
# decay of the pair construction on SL_3(R)/SO_3(R)

_SL3_TERMS = {
    # sign of s in the terms e^{at +- s}, e^{-ct +- s}
    "f dx": 1,
    "g dy": -1,
}


@dataclass(frozen=True)
class DecayCertificate:
    a: Fraction
    b: Fraction
    c: Fraction
    rates: Tuple[Fraction, Fraction, Fraction]

    def to_json(self) -> dict:
        return {"a": rat_str(self.a), "b": rat_str(self.b), "c": rat_str(self.c),
                "rates": [rat_str(r) for r in self.rates]}


def sl3_coefficients(p) -> Tuple[Fraction, Fraction, Fraction]:
    p = Fraction(p)
    if not 2 < p < 4:
        raise DomainError(f"p = {p} outside (2, 4)")
    return 4 / p - 1, 2 - 4 / p, 3 - 4 / p


def sl3_decay(pattern: str, p, direction: str) -> Optional[DecayCertificate]:
    """Decay rates in |s| of (e^{at} + e^{-ct}) e^{+-s} + e^{-bt} along t = -+s / (2a).

    Returns None when some term fails to decay in the requested direction.
    """
    a, b, c = sl3_coefficients(p)
    try:
        eps = _SL3_TERMS[pattern]
    except KeyError as exc:
        raise DomainError(f"pattern must be 'f dx' or 'g dy', got {pattern!r}") from exc
    if direction not in ("+", "-"):
        raise DomainError(f"direction must be '+' or '-', got {direction!r}")
    sigma = 1 if direction == "+" else -1
    terms = [(a, eps), (-c, eps), (-b, 0)]
    # t = -eps s / (2a) balances the first term against e^{-bt}
    t_per_s = Fraction(-eps) / (2 * a)
    exponents = [(tc * t_per_s + sc) * sigma for tc, sc in terms]
    if any(e >= 0 for e in exponents):
        return None
    return DecayCertificate(a, b, c, tuple(-e for e in exponents))
