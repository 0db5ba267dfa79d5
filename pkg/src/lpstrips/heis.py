"""Exterior calculus with polynomial coefficients on the Heisenberg group Heis(2m-1).

Coordinates are x_1..x_{m-1}, y_1..y_{m-1}, z with contact form
tau = dz - 1/2 sum (x_i dy_i - y_i dx_i). The left-invariant frame dual to
(dx_i, dy_i, tau) is

    X_i = d/dx_i - (y_i / 2) d/dz,   Y_i = d/dy_i + (x_i / 2) d/dz,   Z = d/dz,

so that [X_i, Y_i] = Z and dtau = -sum dx_i ^ dy_i.

Coframe elements are numbered dx_i -> 2(i-1), dy_i -> 2(i-1)+1, tau -> 2(m-1);
a wedge monomial is a strictly increasing tuple of these indices.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .core import ContractError, DomainError
from .poly import Poly

Mono = Tuple[int, ...]


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"Heis(2m-1) needs an integer m >= 2, got {m!r}")


def nvars(m: int) -> int:
    return 2 * m - 1


def var_names(m: int) -> List[str]:
    return ([f"x{i}" for i in range(1, m)] + [f"y{i}" for i in range(1, m)] + ["z"])


def x_var(m: int, i: int) -> int:
    return i - 1


def y_var(m: int, i: int) -> int:
    return m - 1 + i - 1


def z_var(m: int) -> int:
    return 2 * m - 2


def tau_index(m: int) -> int:
    return 2 * (m - 1)


def coframe_labels(m: int) -> List[str]:
    out = []
    for i in range(1, m):
        out += [f"dx{i}", f"dy{i}"]
    return out + ["tau"]


def monomial_label(m: int, mono: Mono) -> str:
    labels = coframe_labels(m)
    return "^".join(labels[c] for c in mono) if mono else "1"


def parse_monomial(m: int, text: str) -> Tuple[int, Mono]:
    """Parse ``"dy1^dx1"`` into (sign, sorted tuple); sign 0 for repeated factors."""
    text = text.replace(" ", "")
    if text in ("", "1"):
        return 1, ()
    index = {lab: c for c, lab in enumerate(coframe_labels(m))}
    try:
        seq = [index[part] for part in text.split("^")]
    except KeyError as exc:
        raise DomainError(f"unknown coframe element in {text!r}") from exc
    return _sort_sign(seq)


def _sort_sign(seq: Sequence[int]) -> Tuple[int, Mono]:
    if len(set(seq)) != len(seq):
        return 0, ()
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def wedge_mono(a: Mono, b: Mono) -> Tuple[int, Mono]:
    """Sign and normalized monomial of a ^ b (sign 0 when they share a factor)."""
    if set(a) & set(b):
        return 0, ()
    inversions = sum(1 for i in a for j in b if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


# ---------------------------------------------------------------------------
# the Lie algebra


@dataclass(frozen=True)
class HeisAlgebra:
    """Basis X_1..X_{m-1}, Y_1..Y_{m-1}, Z with [X_i, Y_i] = Z."""

    m: int

    def __post_init__(self):
        _check_m(self.m)

    @property
    def labels(self) -> List[str]:
        return [f"X{i}" for i in range(1, self.m)] + [f"Y{i}" for i in range(1, self.m)] + ["Z"]

    def bracket(self, a: Sequence, b: Sequence) -> Tuple[Fraction, ...]:
        """Bracket of two vectors written in the basis above."""
        h = self.m - 1
        a = [Fraction(v) for v in a]
        b = [Fraction(v) for v in b]
        zc = sum((a[i] * b[h + i] - a[h + i] * b[i] for i in range(h)), Fraction(0))
        return (Fraction(0),) * (2 * h) + (zc,)


# ---------------------------------------------------------------------------
# frame derivations


def frame_X(m: int, i: int, f: Poly) -> Poly:
    y = Poly.var(nvars(m), y_var(m, i))
    return f.diff(x_var(m, i)) - y * f.diff(z_var(m)) * Fraction(1, 2)


def frame_Y(m: int, i: int, f: Poly) -> Poly:
    x = Poly.var(nvars(m), x_var(m, i))
    return f.diff(y_var(m, i)) + x * f.diff(z_var(m)) * Fraction(1, 2)


def frame_Z(m: int, f: Poly) -> Poly:
    return f.diff(z_var(m))


def frame_derivative(m: int, c: int, f: Poly) -> Poly:
    """Derivative of f along the frame vector dual to coframe element c."""
    if c == tau_index(m):
        return frame_Z(m, f)
    i = c // 2 + 1
    return frame_X(m, i, f) if c % 2 == 0 else frame_Y(m, i, f)


# ---------------------------------------------------------------------------
# forms


class HeisForm:
    """A k-form sum f_S e_S with polynomial coefficients; immutable by convention."""

    __slots__ = ("m", "degree", "terms")

    def __init__(self, m: int, degree: int, terms: Dict[Mono, Poly] = None):
        _check_m(m)
        if not 0 <= degree <= 2 * m - 1:
            raise DomainError(f"degree {degree} outside 0..{2 * m - 1}")
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != degree:
                raise DomainError(f"monomial {mono} in a {degree}-form")
            if list(mono) != sorted(set(mono)) or (mono and not 0 <= mono[-1] <= tau_index(m)):
                raise DomainError(f"monomial {mono} is not normalized")
            if not isinstance(c, Poly):
                c = Poly.const(nvars(m), c)
            if c:
                clean[mono] = c
        self.m = m
        self.degree = degree
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, m: int, degree: int) -> "HeisForm":
        return cls(m, degree)

    @classmethod
    def function(cls, m: int, f) -> "HeisForm":
        return cls(m, 0, {(): f})

    @classmethod
    def basis(cls, m: int, label: str, coeff=1) -> "HeisForm":
        """``coeff * label`` where label is like ``"dx1^dy1"``."""
        sign, mono = parse_monomial(m, label)
        degree = 0 if label.strip() in ("", "1") else len(label.split("^"))
        if not isinstance(coeff, Poly):
            coeff = Poly.const(nvars(m), coeff)
        return cls(m, degree, {mono: coeff * sign} if sign else {})

    # algebra

    def _same(self, other: "HeisForm") -> None:
        if not isinstance(other, HeisForm) or other.m != self.m or other.degree != self.degree:
            raise DomainError("forms of different degree or on different groups")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out[mono] + c if mono in out else c
        return HeisForm(self.m, self.degree, out)

    def __neg__(self):
        return HeisForm(self.m, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "HeisForm":
        """Multiply every coefficient by a function or scalar."""
        return HeisForm(self.m, self.degree, {k: v * f for k, v in self.terms.items()})

    def wedge(self, other: "HeisForm") -> "HeisForm":
        if other.m != self.m:
            raise DomainError("forms on different groups")
        deg = self.degree + other.degree
        if deg > 2 * self.m - 1:
            return HeisForm(self.m, 2 * self.m - 1)
        out: Dict[Mono, Poly] = {}
        for a, fa in self.terms.items():
            for b, fb in other.terms.items():
                sign, mono = wedge_mono(a, b)
                if sign:
                    term = fa * fb * sign
                    out[mono] = out[mono] + term if mono in out else term
        return HeisForm(self.m, deg, out)

    __xor__ = wedge

    def __eq__(self, other):
        if not isinstance(other, HeisForm):
            return NotImplemented
        return (self.m, self.degree, self.terms) == (other.m, other.degree, other.terms)

    def __hash__(self):
        return hash((self.m, self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_horizontal(self) -> bool:
        t = tau_index(self.m)
        return all(t not in mono for mono in self.terms)

    def coeff(self, label: str) -> Poly:
        sign, mono = parse_monomial(self.m, label)
        c = self.terms.get(mono, Poly(nvars(self.m)))
        return c * sign

    # serialization

    def to_json(self) -> list:
        names = var_names(self.m)
        return [{"monomial": monomial_label(self.m, mono), "coeff": self.terms[mono].to_str(names)}
                for mono in sorted(self.terms)]

    @classmethod
    def from_json(cls, m: int, items: Sequence[dict], degree: Optional[int] = None) -> "HeisForm":
        names = var_names(m)
        out = None
        for item in items:
            piece = cls.basis(m, item["monomial"], Poly.parse(str(item["coeff"]), names))
            out = piece if out is None else out + piece
        if out is None:
            if degree is None:
                raise DomainError("degree of an empty form must be given")
            return cls.zero(m, degree)
        if degree is not None and degree != out.degree:
            raise DomainError(f"declared degree {degree} but monomials have degree {out.degree}")
        return out

    def __repr__(self):
        if not self.terms:
            return f"HeisForm(m={self.m}, 0 in degree {self.degree})"
        names = var_names(self.m)
        body = " + ".join(f"({self.terms[k].to_str(names)}) {monomial_label(self.m, k)}"
                          for k in sorted(self.terms))
        return f"HeisForm(m={self.m}, {body})"


def tau(m: int) -> HeisForm:
    return HeisForm.basis(m, "tau")


def d_tau(m: int) -> HeisForm:
    """The constant 2-form -sum dx_i ^ dy_i."""
    _check_m(m)
    return HeisForm(m, 2, {(2 * i, 2 * i + 1): Fraction(-1) for i in range(m - 1)})


def differentiate(form: HeisForm) -> HeisForm:
    """Exterior derivative, computed in the left-invariant coframe."""
    m, k = form.m, form.degree
    if k == 2 * m - 1:
        return HeisForm(m, k)
    t = tau_index(m)
    dt = d_tau(m)
    out = HeisForm(m, k + 1)
    acc: Dict[Mono, Poly] = {}
    for mono, f in form.terms.items():
        for c in range(t + 1):
            if c in mono:
                continue
            g = frame_derivative(m, c, f)
            if g:
                sign, tgt = wedge_mono((c,), mono)
                acc[tgt] = acc[tgt] + g * sign if tgt in acc else g * sign
        if t in mono:
            # d(e_S' ^ tau) = (-1)^(k-1) e_S' ^ dtau
            rest = HeisForm(m, k - 1, {mono[:-1]: f * (-1) ** (k - 1)})
            out = out + rest.wedge(dt)
    return out + HeisForm(m, k + 1, acc)


def weight_split(form: HeisForm) -> Tuple[HeisForm, HeisForm]:
    """Unique (theta_1, theta_2) with form = theta_1 + theta_2 ^ tau, both horizontal."""
    m, k = form.m, form.degree
    t = tau_index(m)
    horiz = {mono: c for mono, c in form.terms.items() if t not in mono}
    vert = {mono[:-1]: c for mono, c in form.terms.items() if t in mono}
    return HeisForm(m, k, horiz), (HeisForm(m, k - 1, vert) if k >= 1 else HeisForm(m, 0))


def recombine(horizontal: HeisForm, vertical: HeisForm) -> HeisForm:
    return horizontal + vertical.wedge(tau(horizontal.m))


def top_coefficient(form: HeisForm) -> Poly:
    """Coefficient of dx_1 ^ dy_1 ^ ... ^ tau in a top-degree form."""
    m = form.m
    if form.degree != 2 * m - 1:
        raise DomainError(f"top coefficient needs degree {2 * m - 1}, got {form.degree}")
    return form.terms.get(tuple(range(2 * m - 1)), Poly(nvars(m)))


# ---------------------------------------------------------------------------
# Lefschetz map on constant horizontal forms


@functools.lru_cache(maxsize=None)
def horizontal_basis(m: int, k: int) -> Tuple[Mono, ...]:
    return tuple(itertools.combinations(range(2 * (m - 1)), k)) if 0 <= k <= 2 * (m - 1) else ()


@functools.lru_cache(maxsize=None)
def lefschetz_matrix(m: int, k: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Matrix of alpha -> alpha ^ dtau from wedge^k to wedge^(k+2) (rows index the target)."""
    src, tgt = horizontal_basis(m, k), horizontal_basis(m, k + 2)
    row_of = {mono: i for i, mono in enumerate(tgt)}
    M = [[Fraction(0)] * len(src) for _ in tgt]
    for j, mono in enumerate(src):
        for i in range(m - 1):
            sign, out = wedge_mono(mono, (2 * i, 2 * i + 1))
            if sign:
                M[row_of[out]][j] -= sign
    return tuple(tuple(row) for row in M)


def _check_lefschetz_degree(m: int, k: int) -> None:
    _check_m(m)
    if not 0 <= k <= 2 * (m - 1):
        raise DomainError(f"Lefschetz degree k = {k} outside 0..{2 * (m - 1)}")


def lefschetz_rank(m: int, k: int) -> Tuple[int, int, int]:
    """(dim domain, dim kernel, dim image) of L_k."""
    _check_lefschetz_degree(m, k)
    dim = len(horizontal_basis(m, k))
    M = [list(row) for row in lefschetz_matrix(m, k)]
    rk = linalg.rank(M) if M else 0
    return dim, dim - rk, rk


@functools.lru_cache(maxsize=None)
def _lefschetz_middle_inverse(m: int):
    M = [list(row) for row in lefschetz_matrix(m, m - 2)]
    return tuple(tuple(row) for row in linalg.inverse(M))


def lefschetz_inverse(m: int, form: HeisForm) -> HeisForm:
    """The horizontal (m-2)-form gamma with gamma ^ dtau = form."""
    _check_m(m)
    if form.m != m or form.degree != m or not form.is_horizontal():
        raise ContractError("Lefschetz inverse needs a horizontal form of degree m")
    inv = _lefschetz_middle_inverse(m)
    src, tgt = horizontal_basis(m, m - 2), horizontal_basis(m, m)
    zero = Poly(nvars(m))
    out = {}
    for i, mono in enumerate(src):
        acc = zero
        for j, tmono in enumerate(tgt):
            if inv[i][j] and tmono in form.terms:
                acc = acc + form.terms[tmono] * inv[i][j]
        out[mono] = acc
    return HeisForm(m, m - 2, out)


def in_lefschetz_image(m: int, form: HeisForm) -> bool:
    """Whether a horizontal k-form equals gamma ^ dtau for some horizontal gamma."""
    k = form.degree
    if not form.is_horizontal():
        raise ContractError("image test needs a horizontal form")
    if k < 2 or k > 2 * (m - 1):
        return form.is_zero()
    tgt = horizontal_basis(m, k)
    M = [list(row) for row in lefschetz_matrix(m, k - 2)]
    # a form lies in the image iff every left null vector annihilates it
    for c in _kernel(linalg.transpose(M), len(tgt)):
        acc = Poly(nvars(m))
        for cj, mono in zip(c, tgt):
            if cj and mono in form.terms:
                acc = acc + form.terms[mono] * cj
        if acc:
            return False
    return True


def _kernel(rows, n_cols: int):
    """Kernel basis, treating a matrix without rows as the zero map."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    return linalg.kernel(rows, n_cols)


def nullclass_generic(m: int, theta: HeisForm, k: int) -> bool:
    """For a (k-1)-form theta, whether (d theta)_1 lies in the image of L_{k-2}."""
    _check_m(m)
    if not 1 <= k < m:
        raise DomainError(f"need 1 <= k < m, got k = {k}, m = {m}")
    if theta.m != m or theta.degree != k - 1:
        raise DomainError(f"theta must have degree {k - 1}")
    horizontal, _ = weight_split(differentiate(theta))
    return in_lefschetz_image(m, horizontal)


def _middle_correction(m: int, theta: HeisForm) -> HeisForm:
    horizontal, _ = weight_split(differentiate(theta))
    return lefschetz_inverse(m, horizontal).scale((-1) ** m)


def nullclass_middle(m: int, theta: HeisForm) -> HeisForm:
    """Obstruction d(theta - gamma ^ tau), gamma = (-1)^m L^{-1}((d theta)_1).

    gamma is the unique horizontal form making the horizontal part of
    d(theta - gamma ^ tau) vanish; the class is null iff the result is zero.
    """
    _check_m(m)
    if theta.m != m or theta.degree != m - 1:
        raise DomainError(f"theta must have degree {m - 1}")
    gamma = _middle_correction(m, theta)
    return differentiate(theta - gamma.wedge(tau(m)))


def vertical_construct(m: int, phi1: HeisForm) -> HeisForm:
    """phi = phi1 + phi2 ^ tau with (d phi1)_1 = -(-1)^m phi2 ^ dtau, so d phi is vertical."""
    _check_m(m)
    if phi1.m != m or phi1.degree != m - 1 or not phi1.is_horizontal():
        raise ContractError("vertical_construct needs a horizontal form of degree m - 1")
    phi2 = _middle_correction(m, phi1)
    return phi1 - phi2.wedge(tau(m))


def duality_orthogonality(m: int, k: int) -> bool:
    """Annihilator of Ker L_{l-2} under u ^ v equals Im L_{k-2}, where k + l = 2m."""
    _check_m(m)
    ell = 2 * m - k
    if k < 2 or ell < 2:
        raise DomainError(f"need k >= 2 and l = 2m - k >= 2, got k = {k}, m = {m}")
    left = horizontal_basis(m, ell - 2)
    right = horizontal_basis(m, k)
    top = tuple(range(2 * (m - 1)))
    ker = _kernel([list(row) for row in lefschetz_matrix(m, ell - 2)], len(left))
    # functional v -> top coefficient of u ^ v, for each kernel vector u
    pairing = []
    for u in ker:
        row = []
        for vm in right:
            acc = Fraction(0)
            for cu, um in zip(u, left):
                if cu:
                    sign, mono = wedge_mono(um, vm)
                    if sign and mono == top:
                        acc += cu * sign
            row.append(acc)
        pairing.append(row)
    ann = _kernel(pairing, len(right))
    image = linalg.transpose([list(row) for row in lefschetz_matrix(m, k - 2)])
    dim_ann = linalg.rank(ann) if ann else 0
    dim_img = linalg.rank(image) if image else 0
    if dim_ann != dim_img:
        return False
    both = [list(v) for v in ann] + [list(v) for v in image]
    return (linalg.rank(both) if both else 0) == dim_img


def sl3_pair_construct(u: Poly, m: int = 2) -> Tuple[HeisForm, HeisForm, HeisForm]:
    """theta = (X u) dx, Theta = -(Y u) dy and the obstruction of theta - Theta."""
    if m != 2:
        raise DomainError("the pair construction lives on Heis(3)")
    theta = HeisForm.basis(m, "dx1", frame_X(m, 1, u))
    big_theta = HeisForm.basis(m, "dy1", -frame_Y(m, 1, u))
    return theta, big_theta, nullclass_middle(m, theta - big_theta)


def parse_form(m: int, text: str) -> HeisForm:
    """Parse ``"(y1^2) dx1 + (x1) dy1^tau"``: parenthesized coefficients times monomials."""
    names = var_names(m)
    items = re.findall(r"([+-]?)\s*\(([^()]*)\)\s*([A-Za-z0-9_^ ]+?)\s*(?=[+-]\s*\(|$)", text.strip())
    if not items:
        raise DomainError(f"cannot parse form {text!r}")
    out = None
    for sign, coeff, mono in items:
        c = Poly.parse(coeff, names) * (-1 if sign == "-" else 1)
        piece = HeisForm.basis(m, mono.strip(), c)
        out = piece if out is None else out + piece
    return out
