"""Normal form and critical exponent for straight configurations in S^{2,3}.

A configuration (r, n) = (2, 3) is straight when its weights span (R^2)* and
are collinear; the common line then misses the origin automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from . import linalg
from .core import ContractError, DomainError, WeightConfig, rat_str


@dataclass(frozen=True)
class CanonicalMu:
    """Weights -e1* + mu_i e2* with sum mu = 0, 0 <= mu2 - mu3 <= mu1 - mu2 = 1."""

    mu: Tuple[Fraction, Fraction, Fraction]
    p_alpha: Fraction

    def to_json(self) -> dict:
        return {"mu": [rat_str(m) for m in self.mu], "p_alpha": rat_str(self.p_alpha)}

    def config(self) -> WeightConfig:
        return config_from_mu(self.mu)


def config_from_mu(mu) -> WeightConfig:
    """The configuration alpha(t, s) = exp(-t I + s diag(mu))."""
    return WeightConfig(tuple((Fraction(-1), Fraction(m)) for m in mu))


def _det2(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _require_23(cfg: WeightConfig) -> None:
    if (cfg.r, cfg.n) != (2, 3):
        raise DomainError(f"straight family needs (r, n) = (2, 3), got ({cfg.r}, {cfg.n})")


def is_straight(cfg: WeightConfig) -> bool:
    _require_23(cfg)
    w1, w2, w3 = cfg.weights
    if linalg.rank([list(w) for w in cfg.weights]) != 2:
        return False
    d12 = (w2[0] - w1[0], w2[1] - w1[1])
    d13 = (w3[0] - w1[0], w3[1] - w1[1])
    return _det2(d12, d13) == 0


def mu_from_pattern(mu) -> CanonicalMu:
    """Canonical form of a zero-sum triple (not all equal), in any order or scale."""
    mu = [Fraction(m) for m in mu]
    if sum(mu) != 0:
        raise DomainError("mu must sum to zero")
    return _normalize(mu)


def _normalize(t) -> CanonicalMu:
    mu = sorted(t, reverse=True)
    if mu[1] - mu[2] > mu[0] - mu[1]:
        # reverse the orientation of the line
        mu = sorted((-m for m in t), reverse=True)
    gap = mu[0] - mu[1]
    if gap == 0:
        raise DomainError("all mu equal: the weights do not span (R^2)*")
    mu = tuple(m / gap for m in mu)
    return CanonicalMu(mu, 1 + (mu[0] - mu[2]) / (mu[0] - mu[1]))


def canonicalize(cfg: WeightConfig) -> CanonicalMu:
    """Reduce by GL_2 and permutations to the unique normalized mu triple."""
    if not is_straight(cfg):
        raise ContractError("canonicalize requires a straight configuration")
    ws = cfg.weights
    c = tuple(sum(w[j] for w in ws) / 3 for j in range(2))
    d = next((w[0] - c[0], w[1] - c[1]) for w in ws if (w[0], w[1]) != c)
    # varpi_i = c + t_i d; c and d are independent because the line misses 0
    # g maps c -> -e1*, d -> e2*, so varpi_i o g = -e1* + t_i e2*
    t = []
    for w in ws:
        diff = (w[0] - c[0], w[1] - c[1])
        t.append(diff[0] / d[0] if d[0] != 0 else diff[1] / d[1])
    return _normalize(t)


def p_alpha(cfg: WeightConfig) -> Fraction:
    return canonicalize(cfg).p_alpha


def same_isomorphism_class(a: WeightConfig, b: WeightConfig) -> bool:
    return canonicalize(a) == canonicalize(b)


def quasi_isometric(a: WeightConfig, b: WeightConfig) -> bool:
    """Within the straight family quasi-isometry coincides with isomorphism."""
    return same_isomorphism_class(a, b)
