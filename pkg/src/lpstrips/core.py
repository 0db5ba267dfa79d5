"""Exact scalars, punctured interval sets, weight configurations, eigenvalue profiles.

Rationals are :class:`fractions.Fraction`. The extended value +inf is ``math.inf``;
``Fraction`` compares correctly against it, so thresholds can be ordered without
any special casing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

Rat = Fraction
XRat = Union[Fraction, float]  # float only ever holds +inf

INF = math.inf


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """A documented precondition of an operation does not hold."""


# ---------------------------------------------------------------------------
# scalars


def parse_rat(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into a Fraction.

    Floats are rejected so that no binary rounding leaks into thresholds.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    raise DomainError(f"not a rational: {value!r}")


def parse_xrat(value) -> XRat:
    if isinstance(value, str) and value.strip() in ("inf", "+inf"):
        return INF
    if isinstance(value, float) and value == INF:
        return INF
    return parse_rat(value)


def is_inf(x: XRat) -> bool:
    return isinstance(x, float) and x == INF


def rat_str(x: XRat) -> str:
    if is_inf(x):
        return "inf"
    return str(Fraction(x))


def xdiv(num: Fraction, den: Fraction) -> XRat:
    """``num / den`` with ``num / 0 := +inf`` for ``num > 0``."""
    if den == 0:
        if num <= 0:
            raise DomainError("0/0 or negative/0 has no extended value")
        return INF
    return Fraction(num) / Fraction(den)


def conjugate(p) -> Fraction:
    """Hoelder conjugate q = p / (p - 1)."""
    p = Fraction(p)
    if p <= 1:
        raise DomainError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1)


def dual_pair(p, k: int, D: int) -> Tuple[Fraction, int]:
    """Poincare dual (q, D - k) of (p, k) on a manifold of dimension D."""
    if not 0 <= k <= D:
        raise DomainError(f"degree {k} outside 0..{D}")
    return conjugate(p), D - k


# ---------------------------------------------------------------------------
# punctured interval sets


class Status(str, enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    HAUSDORFF_ONLY = "hausdorff_only"
    UNKNOWN = "unknown"


@dataclass(frozen=True, order=True)
class Piece:
    """Open interval (lo, hi) carrying a status and informational flags."""

    lo: XRat
    hi: XRat
    status: Status
    flags: Tuple[str, ...] = ()

    def label(self):
        return self.status, self.flags

    def contains(self, p) -> bool:
        return self.lo < p < self.hi


@dataclass(frozen=True)
class PuncturedIntervalSet:
    pieces: Tuple[Piece, ...]
    punctures: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        pieces = tuple(sorted((pc for pc in self.pieces if pc.lo < pc.hi), key=lambda pc: pc.lo))
        punctures = tuple(sorted(set(Fraction(x) for x in self.punctures)))
        for pc in pieces:
            if pc.lo < 1:
                raise DomainError(f"interval ({pc.lo}, {pc.hi}) leaves the exponent domain (1, inf)")
        for a, b in zip(pieces, pieces[1:]):
            if b.lo < a.hi:
                raise DomainError(f"overlapping intervals ({a.lo}, {a.hi}) and ({b.lo}, {b.hi})")
        for x in punctures:
            if x <= 1 or not any(pc.lo <= x <= pc.hi for pc in pieces):
                raise DomainError(f"puncture {x} is not in the closure of the pieces")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "punctures", punctures)

    def normalized(self) -> "PuncturedIntervalSet":
        """Merge neighbours (a, b), (b, c) with equal labels when b is a puncture."""
        merged: List[Piece] = []
        for pc in self.pieces:
            if merged:
                last = merged[-1]
                if last.hi == pc.lo and last.label() == pc.label() and pc.lo in self.punctures:
                    merged[-1] = Piece(last.lo, pc.hi, pc.status, pc.flags)
                    continue
            merged.append(pc)
        return PuncturedIntervalSet(tuple(merged), self.punctures)

    def status_at(self, p) -> Optional[Status]:
        """Status of exponent ``p``; punctures are UNKNOWN, uncovered points None."""
        p = Fraction(p)
        if p in self.punctures:
            return Status.UNKNOWN
        for pc in self.pieces:
            if pc.contains(p):
                return pc.status
        return None

    def contains(self, p) -> bool:
        p = Fraction(p)
        return p not in self.punctures and any(pc.contains(p) for pc in self.pieces)

    def breakpoints(self) -> List[XRat]:
        pts = set()
        for pc in self.pieces:
            pts.update((pc.lo, pc.hi))
        pts.update(self.punctures)
        return sorted(pts)

    def covers_domain(self) -> bool:
        """True iff pieces and punctures partition (1, +inf) exactly."""
        if not self.pieces or self.pieces[0].lo != 1 or not is_inf(self.pieces[-1].hi):
            return False
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.hi != b.lo or a.hi not in self.punctures:
                return False
        return True

    def region(self, status: Status) -> List[Tuple[XRat, XRat]]:
        return [(pc.lo, pc.hi) for pc in self.pieces if pc.status == status]

    def to_json(self) -> list:
        out = []
        for pc in self.pieces:
            item = {"lo": rat_str(pc.lo), "hi": rat_str(pc.hi), "status": pc.status.value}
            if pc.flags:
                item["flags"] = list(pc.flags)
            out.append(item)
        out.extend({"at": rat_str(x), "status": Status.UNKNOWN.value} for x in self.punctures)
        return out

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "PuncturedIntervalSet":
        pieces, punctures = [], []
        for item in items:
            if "at" in item:
                punctures.append(parse_rat(item["at"]))
            else:
                pieces.append(Piece(parse_xrat(item["lo"]), parse_xrat(item["hi"]),
                                    Status(item["status"]), tuple(item.get("flags", ()))))
        return cls(tuple(pieces), tuple(punctures))


Label = Tuple[Status, Tuple[str, ...]]


def partition_domain(breakpoints: Iterable[XRat], label: Callable[[Fraction], Label]) -> PuncturedIntervalSet:
    """Split (1, +inf) at the finite breakpoints > 1 and label each open cell.

    Every breakpoint becomes an UNKNOWN puncture; ``label`` is evaluated at an
    interior rational point of each cell.
    """
    cuts = sorted({Fraction(b) for b in breakpoints if not is_inf(b) and b > 1})
    edges: List[XRat] = [Fraction(1)] + cuts + [INF]
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        sample = lo + 1 if is_inf(hi) else (lo + hi) / 2
        status, flags = label(sample)
        pieces.append(Piece(lo, hi, status, tuple(flags)))
    return PuncturedIntervalSet(tuple(pieces), tuple(cuts)).normalized()


# ---------------------------------------------------------------------------
# weight configurations and eigenvalue profiles


@dataclass(frozen=True)
class WeightConfig:
    """Weights of a diagonal action of R^r on R^n: row i is the covector varpi_i."""

    weights: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rat(v) if not isinstance(v, Fraction) else v for v in row)
                     for row in self.weights)
        if not rows or not rows[0]:
            raise DomainError("a weight configuration needs n >= 1 and r >= 1")
        if any(len(row) != len(rows[0]) for row in rows):
            raise DomainError("weight rows have different lengths")
        for i, row in enumerate(rows, 1):
            if all(v == 0 for v in row):
                raise DomainError(f"weight {i} is zero (n must be minimal)")
        object.__setattr__(self, "weights", rows)

    @property
    def r(self) -> int:
        return len(self.weights[0])

    @property
    def n(self) -> int:
        return len(self.weights)

    def evaluate(self, U: Sequence[Fraction]) -> List[Fraction]:
        """The values varpi_i(U)."""
        if len(U) != self.r:
            raise DomainError(f"vector of length {len(U)} for r = {self.r}")
        return [sum((w * u for w, u in zip(row, U)), Fraction(0)) for row in self.weights]

    def precompose(self, g: Sequence[Sequence[Fraction]]) -> "WeightConfig":
        """Weights varpi_i o g for an r x r matrix g."""
        return WeightConfig(tuple(
            tuple(sum((row[a] * Fraction(g[a][b]) for a in range(self.r)), Fraction(0))
                  for b in range(self.r))
            for row in self.weights))

    def permute(self, order: Sequence[int]) -> "WeightConfig":
        return WeightConfig(tuple(self.weights[i] for i in order))

    def to_json(self) -> dict:
        return {"r": self.r, "n": self.n, "weights": [[rat_str(v) for v in row] for row in self.weights]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightConfig":
        try:
            rows = data["weights"]
        except (KeyError, TypeError) as exc:
            raise DomainError("weight file needs a 'weights' list") from exc
        cfg = cls(tuple(tuple(parse_rat(v) for v in row) for row in rows))
        if "r" in data and int(data["r"]) != cfg.r:
            raise DomainError(f"declared r = {data['r']} but rows have length {cfg.r}")
        if "n" in data and int(data["n"]) != cfg.n:
            raise DomainError(f"declared n = {data['n']} but there are {cfg.n} rows")
        return cfg


@dataclass(frozen=True)
class EigProfile:
    """Real parts 0 <= lambda_1 <= ... <= lambda_n of the eigenvalues of -delta."""

    lambdas: Tuple[Fraction, ...]
    h: Fraction = field(init=False)

    def __post_init__(self):
        lams = tuple(sorted(parse_rat(v) if not isinstance(v, Fraction) else v for v in self.lambdas))
        if not lams:
            raise DomainError("empty eigenvalue profile")
        if lams[0] < 0:
            raise DomainError("eigenvalues of -delta must have nonnegative real parts")
        h = sum(lams, Fraction(0))
        if h <= 0:
            raise DomainError("trace of -delta must be positive")
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def _check(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise DomainError(f"k = {k} outside 0..{self.n}")

    def w(self, k: int) -> Fraction:
        """Sum of the k smallest eigenvalues."""
        self._check(k)
        return sum(self.lambdas[:k], Fraction(0))

    def W(self, k: int) -> Fraction:
        """Sum of the k largest eigenvalues."""
        self._check(k)
        return sum(self.lambdas[self.n - k:], Fraction(0))

    def threshold(self, which: str, k: int) -> XRat:
        """``h/w_k`` or ``h/W_k`` with the convention h/0 = +inf."""
        if which == "h/w":
            return xdiv(self.h, self.w(k))
        if which == "h/W":
            return xdiv(self.h, self.W(k))
        raise DomainError(f"unknown threshold {which!r}")


def w_k(profile: EigProfile, k: int) -> Fraction:
    return profile.w(k)


def W_k(profile: EigProfile, k: int) -> Fraction:
    return profile.W(k)


def threshold(profile: EigProfile, which: str, k: int) -> XRat:
    return profile.threshold(which, k)
