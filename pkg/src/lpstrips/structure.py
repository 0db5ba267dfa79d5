"""Structural decision procedures for S_alpha = R^r x|_alpha R^n.

Index sets in partitions are 1-based, matching the usual labelling of the
weights varpi_1, ..., varpi_n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .core import ContractError, DomainError, WeightConfig, rat_str

MAX_PARTITION_N = 24
MAX_FM_RANK = 4


@dataclass(frozen=True)
class AlgebraElement:
    U: Tuple[Fraction, ...]
    X: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(Fraction(v) for v in self.U))
        object.__setattr__(self, "X", tuple(Fraction(v) for v in self.X))

    def __add__(self, other):
        return AlgebraElement(tuple(a + b for a, b in zip(self.U, other.U)),
                              tuple(a + b for a, b in zip(self.X, other.X)))

    def __neg__(self):
        return AlgebraElement(tuple(-a for a in self.U), tuple(-a for a in self.X))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.U) and all(v == 0 for v in self.X)


def bracket(cfg: WeightConfig, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """[(U, X), (V, Y)] = (0, Pi(U) Y - Pi(V) X)."""
    for e in (a, b):
        if len(e.U) != cfg.r or len(e.X) != cfg.n:
            raise DomainError(f"element of shape ({len(e.U)}, {len(e.X)}) for (r, n) = ({cfg.r}, {cfg.n})")
    wu = cfg.evaluate(a.U)
    wv = cfg.evaluate(b.U)
    return AlgebraElement((Fraction(0),) * cfg.r,
                          tuple(wu[i] * b.X[i] - wv[i] * a.X[i] for i in range(cfg.n)))


def center(cfg: WeightConfig) -> List[Tuple[Fraction, ...]]:
    """Basis of the common kernel of the weights (the center is that space times 0)."""
    return [tuple(v) for v in linalg.kernel([list(row) for row in cfg.weights])]


def has_abelian_factor(cfg: WeightConfig) -> bool:
    return linalg.rank([list(row) for row in cfg.weights]) < cfg.r


def _span_dim(cfg: WeightConfig, idx: Sequence[int]) -> int:
    return linalg.span_dim([list(cfg.weights[i]) for i in idx])


def reducible(cfg: WeightConfig) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """A nontrivial partition whose weight spans meet only in 0, or None.

    Exhaustive over bipartitions; the span condition is tested as rank
    additivity. Requires the weights to span the dual space.
    """
    if has_abelian_factor(cfg):
        raise ContractError("reducibility criterion assumes no abelian direct factor "
                            "(the weights must span (R^r)*)")
    n = cfg.n
    if n > MAX_PARTITION_N:
        raise DomainError(f"exhaustive partition search capped at n <= {MAX_PARTITION_N}")
    total = _span_dim(cfg, range(n))
    # element 0 always sits in the first block
    for mask in range(1, 2 ** (n - 1)):
        second = [i for i in range(1, n) if mask >> (i - 1) & 1]
        first = [i for i in range(n) if i not in second]
        if _span_dim(cfg, first) + _span_dim(cfg, second) == total:
            return tuple(i + 1 for i in first), tuple(i + 1 for i in second)
    return None


def weight_components(cfg: WeightConfig) -> List[Tuple[int, ...]]:
    """Connected components of the vector matroid of the weights (1-based).

    Built from the fundamental circuits of a greedy basis: a non-basis weight is
    joined to every basis weight that appears in its expansion. The weights split
    into spans meeting trivially exactly along unions of these components.
    """
    n = cfg.n
    basis: List[int] = []
    for i in range(n):
        if _span_dim(cfg, basis + [i]) > len(basis):
            basis.append(i)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cols = linalg.transpose([list(cfg.weights[b]) for b in basis])
    for e in range(n):
        if e in basis:
            continue
        coeffs = linalg.solve(cols, list(cfg.weights[e]))
        for b, c in zip(basis, coeffs):
            if c != 0:
                parent[find(b)] = find(e)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i + 1)
    return sorted(tuple(g) for g in groups.values())


# ---------------------------------------------------------------------------
# non-positive curvature: varpi_i(U) <= -1 for all i


def _fm_eliminate(rows: List[Tuple[List[Fraction], Fraction]], var: int):
    """Eliminate variable ``var`` from constraints ``a . x <= b``."""
    pos, neg, rest = [], [], []
    for a, b in rows:
        (pos if a[var] > 0 else neg if a[var] < 0 else rest).append((a, b))
    out = list(rest)
    for ap, bp in pos:
        for an, bn in neg:
            cp, cn = ap[var], -an[var]
            a = [cn * x + cp * y for x, y in zip(ap, an)]
            out.append((a, cn * bp + cp * bn))
    # drop exact duplicates to slow the quadratic growth
    seen, uniq = set(), []
    for a, b in out:
        key = (tuple(a), b)
        if key not in seen:
            seen.add(key)
            uniq.append((a, b))
    return uniq


def _pick(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    """Value of smallest absolute value in [lo, hi] (bounds may be None)."""
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        return Fraction(0)
    if lo is not None and lo > 0:
        return lo
    return hi


def fourier_motzkin(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """A rational point with A x <= b, or None if the system is infeasible."""
    r = len(A[0])
    systems = [[(list(map(Fraction, row)), Fraction(v)) for row, v in zip(A, b)]]
    for var in range(r - 1, 0, -1):
        systems.append(_fm_eliminate(systems[-1], var))
    x = [Fraction(0)] * r
    for var in range(r):
        rows = systems[r - 1 - var]
        lo = hi = None
        for a, bb in rows:
            slack = bb - sum((a[j] * x[j] for j in range(var)), Fraction(0))
            if a[var] > 0:
                bound = slack / a[var]
                hi = bound if hi is None else min(hi, bound)
            elif a[var] < 0:
                bound = slack / a[var]
                lo = bound if lo is None else max(lo, bound)
        if var == 0:
            # constraints free of x_0 after full elimination
            if any(all(c == 0 for c in a) and bb < 0 for a, bb in rows):
                return None
        if lo is not None and hi is not None and lo > hi:
            return None
        x[var] = _pick(lo, hi)
    return x


def npc(cfg: WeightConfig) -> Optional[Tuple[Fraction, ...]]:
    """Witness U with varpi_i(U) <= -1 for every i, or None if none exists."""
    if cfg.r > MAX_FM_RANK:
        raise DomainError(f"Fourier-Motzkin elimination is limited to r <= {MAX_FM_RANK}")
    A = [list(row) for row in cfg.weights]
    U = fourier_motzkin(A, [Fraction(-1)] * cfg.n)
    return None if U is None else tuple(U)


def zero_in_convex_hull(cfg: WeightConfig) -> bool:
    """Exact test of 0 in conv{varpi_i} by Caratheodory enumeration.

    Tries every affinely independent subset of at most r + 1 weights and solves
    for barycentric coordinates of 0.
    """
    pts = [list(row) for row in cfg.weights]
    r = cfg.r
    for size in range(1, min(r + 1, cfg.n) + 1):
        for subset in itertools.combinations(range(cfg.n), size):
            lifted = [pts[i] + [Fraction(1)] for i in subset]
            if linalg.rank(lifted) < size:
                continue
            cols = linalg.transpose(lifted)
            coeffs = linalg.solve(cols, [Fraction(0)] * r + [Fraction(1)])
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return True
    return False


def hyperbolic_direction(cfg: WeightConfig) -> Optional[Tuple[Fraction, ...]]:
    """A solution U of varpi_i(U) = -1 for all i, or None if inconsistent."""
    U = linalg.solve([list(row) for row in cfg.weights], [Fraction(-1)] * cfg.n)
    return None if U is None else tuple(U)


@dataclass(frozen=True)
class StructureReport:
    center_basis: Tuple[Tuple[Fraction, ...], ...]
    derived_is_full_Rn: bool
    has_abelian_factor: bool
    reducible_partition: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    npc_witness: Optional[Tuple[Fraction, ...]]
    hyperbolic_witness: Optional[Tuple[Fraction, ...]]

    def to_json(self) -> dict:
        out = {
            "center_basis": [[rat_str(v) for v in vec] for vec in self.center_basis],
            "derived_is_full_Rn": self.derived_is_full_Rn,
            "has_abelian_factor": self.has_abelian_factor,
        }
        if self.reducible_partition is not None:
            out["reducible_partition"] = [list(block) for block in self.reducible_partition]
        if self.npc_witness is not None:
            out["npc_witness"] = [rat_str(v) for v in self.npc_witness]
        if self.hyperbolic_witness is not None:
            out["hyperbolic_witness"] = [rat_str(v) for v in self.hyperbolic_witness]
        return out


def analyze(cfg: WeightConfig) -> StructureReport:
    abelian = has_abelian_factor(cfg)
    return StructureReport(
        center_basis=tuple(center(cfg)),
        # every weight is nonzero, so [s, s] = 0 x R^n
        derived_is_full_Rn=True,
        has_abelian_factor=abelian,
        reducible_partition=None if abelian else reducible(cfg),
        npc_witness=npc(cfg) if cfg.r <= MAX_FM_RANK else None,
        hyperbolic_witness=hyperbolic_direction(cfg),
    )
