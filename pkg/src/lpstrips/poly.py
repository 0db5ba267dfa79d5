"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Monomial = Tuple[int, ...]


class Poly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: coefficient}.

    Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] = None):
        self.nvars = nvars
        self.terms = {} if terms is None else {e: Fraction(c) for e, c in terms.items() if c != 0}

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials over different variable sets")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._lift(other)
        out: Dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == Poly.const(self.nvars, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Poly":
        index = {n: i for i, n in enumerate(names)}
        nvars = len(names)
        compact = text.replace(" ", "")
        if compact in ("", "0"):
            return cls(nvars)
        if compact[0] not in "+-":
            compact = "+" + compact
        tokens = re.findall(r"[+-][^+-]+", compact)
        if "".join(tokens) != compact:
            raise ValueError(f"cannot parse polynomial {text!r}")
        out = cls(nvars)
        for tok in tokens:
            sign = -1 if tok[0] == "-" else 1
            coeff = Fraction(sign)
            e = [0] * nvars
            for factor in tok[1:].split("*"):
                m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(\d+))?", factor)
                if m:
                    if m.group(1) not in index:
                        raise ValueError(f"unknown variable {m.group(1)!r}")
                    e[index[m.group(1)]] += int(m.group(2) or 1)
                else:
                    try:
                        coeff *= Fraction(factor)
                    except (ValueError, ZeroDivisionError) as exc:
                        raise ValueError(f"bad factor {factor!r} in {text!r}") from exc
            out = out + cls(nvars, {tuple(e): coeff})
        return out

    def __repr__(self):
        return f"Poly({self.to_str([f'v{i}' for i in range(self.nvars)])})"


def random_poly(rng: random.Random, nvars: int, max_degree: int = 3, n_terms: int = 4,
                coeff_range: int = 5) -> Poly:
    """A random polynomial with small rational coefficients."""
    out: Dict[Monomial, Fraction] = {}
    for _ in range(n_terms):
        deg = rng.randint(0, max_degree)
        e = [0] * nvars
        for _ in range(deg):
            e[rng.randrange(nvars)] += 1
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.choice((1, 1, 1, 2, 3))
        out[tuple(e)] = out.get(tuple(e), 0) + Fraction(num, den)
    return Poly(nvars, out)


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    total = Poly(nvars)
    for p in polys:
        total = total + p
    return total
