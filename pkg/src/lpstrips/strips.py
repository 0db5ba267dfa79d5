"""Strip decomposition of L^p-cohomology in a fixed degree.

The generic classifier works for G = R x|_delta H from the eigenvalue profile of
-delta. The closed-form tables cover real and complex hyperbolic spaces, the
straight family in degree 2, and SL_3(R)/SO_3(R) in degree 2. Boundary points
of every strip are reported as UNKNOWN punctures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .core import (DomainError, EigProfile, PuncturedIntervalSet, Status, WeightConfig,
                   dual_pair, partition_domain, xdiv)
from .straight import p_alpha


@dataclass(frozen=True)
class StripFlags:
    vanishes: bool
    hausdorff_iso_Z: bool
    boundary_density: bool
    torsion_nonzero: bool
    dual: Tuple[Fraction, int]
    reasons: Tuple[str, ...] = ()


@dataclass(frozen=True)
class StripReport:
    degree: int
    regions: PuncturedIntervalSet

    def status_at(self, p) -> Status:
        return self.regions.status_at(p)

    def to_json(self) -> dict:
        return {"degree": self.degree, "regions": self.regions.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "StripReport":
        return cls(int(data["degree"]), PuncturedIntervalSet.from_json(data["regions"]))


def _check_degree(profile: EigProfile, k: int) -> None:
    if not 1 <= k <= profile.n:
        raise DomainError(f"degree k = {k} outside 1..{profile.n}")


def classify(profile: EigProfile, k: int, p, abelian: bool = False) -> StripFlags:
    """Which strip statements apply at (p, k).

    ``abelian`` asserts H = R^n, which enables the torsion statement.
    """
    _check_degree(profile, k)
    p = Fraction(p)
    if p <= 1:
        raise DomainError(f"exponent p = {p} must exceed 1")
    hW_k, hW_km1 = profile.threshold("h/W", k), profile.threshold("h/W", k - 1)
    hw_k, hw_km1 = profile.threshold("h/w", k), profile.threshold("h/w", k - 1)
    reasons = []
    vanishes = p < hW_k or p > hw_km1
    if vanishes:
        reasons.append("vanishing: p < h/W_k or p > h/w_{k-1}")
    hausdorff = hW_k < p < hW_km1
    if hausdorff:
        reasons.append("hausdorff: h/W_k < p < h/W_{k-1}")
    density = hw_k < p < hw_km1
    if density:
        reasons.append("density: h/w_k < p < h/w_{k-1}")
    torsion = abelian and hW_km1 < p < hw_km1
    if torsion:
        reasons.append("torsion: H abelian and h/W_{k-1} < p < h/w_{k-1}")
    return StripFlags(vanishes, hausdorff, density, torsion,
                      dual_pair(p, k, profile.n + 1), tuple(reasons))


def _label(flags: StripFlags):
    names = tuple(name for name, on in (("hausdorff", flags.hausdorff_iso_Z),
                                        ("density", flags.boundary_density),
                                        ("torsion", flags.torsion_nonzero)) if on)
    if flags.vanishes:
        return Status.ZERO, names
    if flags.hausdorff_iso_Z:
        return Status.HAUSDORFF_ONLY, names
    return Status.UNKNOWN, names


def strip_report(profile: EigProfile, k: int, abelian: bool = False) -> StripReport:
    _check_degree(profile, k)
    cuts = [profile.threshold(which, j) for which in ("h/w", "h/W") for j in (k - 1, k)]
    regions = partition_domain(cuts, lambda p: _label(classify(profile, k, p, abelian)))
    return StripReport(k, regions)


def _table(degree: int, cuts, status_of) -> StripReport:
    return StripReport(degree, partition_domain(cuts, lambda p: (status_of(p), ())))


def real_hyperbolic_table(n: int, k: int) -> StripReport:
    """Degree-k table of the real hyperbolic space of dimension n + 1."""
    if n < 2 or not 1 <= k <= n:
        raise DomainError(f"need n >= 2 and 1 <= k <= n, got n = {n}, k = {k}")
    lo = Fraction(n, k)
    hi = xdiv(Fraction(n), Fraction(k - 1))

    def status(p):
        return Status.NONZERO if lo < p < hi else Status.ZERO

    return _table(k, [lo, hi], status)


def complex_hyperbolic_table(m: int, k: int) -> StripReport:
    """Degree-k table of the complex hyperbolic space of complex dimension m."""
    if m < 2 or not 1 <= k <= 2 * m - 1:
        raise DomainError(f"need m >= 2 and 1 <= k <= 2m - 1, got m = {m}, k = {k}")
    a = Fraction(2 * m, k + 1)
    b = Fraction(2 * m, k)
    c = xdiv(Fraction(2 * m), Fraction(k - 1))

    def status(p):
        if a < p < b:
            return Status.NONZERO if k >= m else Status.ZERO
        if b < p < c:
            return Status.NONZERO if k <= m else Status.ZERO
        return Status.ZERO

    return _table(k, [a, b, c], status)


def s_alpha_degree2(cfg: WeightConfig) -> StripReport:
    """Degree-2 table of a straight S_alpha (raises ContractError otherwise)."""
    crit = p_alpha(cfg)
    return _table(2, [Fraction(3, 2), crit, Fraction(3)],
                  lambda p: Status.ZERO if p < crit else Status.NONZERO)


def sl3_degree2() -> StripReport:
    """Degree-2 table of SL_3(R)/SO_3(R)."""
    return _table(2, [Fraction(4, 3), Fraction(2), Fraction(4)],
                  lambda p: Status.ZERO if p < 2 else Status.NONZERO)


__all__ = ["StripFlags", "StripReport", "classify", "strip_report", "real_hyperbolic_table",
           "complex_hyperbolic_table", "s_alpha_degree2", "sl3_degree2"]
