"""Residuals of the linear relations on f-, alpha- and gamma-vectors.

Each residual is one linear combination of vector entries (coefficients are
collected before evaluating, so an entry appearing on both sides is counted
once in the error propagation).  Residuals are returned, never judged here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .vecalg import (AlphaVector, Estimate, FVector, HVector, gamma_coefficients,
                     gamma_from_alpha, lincomb)

__all__ = [
    "RelationResidual", "euler_residual", "dehn_sommerville_residual",
    "gram_residual", "perles_residual", "gamma_h_residual",
    "dehn_sommerville_all", "perles_all", "gamma_h_all", "judge",
]


@dataclass(frozen=True)
class RelationResidual:
    name: str
    k: Optional[int]
    value: object
    sigma_ratio: Optional[float] = None

    def to_json(self) -> dict:
        v = self.value
        return {
            "relation": self.name,
            "k": self.k,
            "residual": v.mean if isinstance(v, Estimate) else str(Fraction(v)),
            "sigma_ratio": self.sigma_ratio,
        }


def _make(name, k, value) -> RelationResidual:
    ratio = None
    if isinstance(value, Estimate) and value.se > 0:
        ratio = abs(value.mean) / value.se
    return RelationResidual(name, k, value, ratio)


def judge(r: RelationResidual, max_sigma: float = 4.0, abs_tol: float = 1e-9) -> bool:
    """Default acceptance: exact equality, ``sigma_ratio <= max_sigma`` for
    sampled values, ``abs_tol`` for closed-form reals."""
    v = r.value
    if not isinstance(v, Estimate):
        return v == 0
    if abs(v.mean) <= abs_tol:
        return True
    return r.sigma_ratio is not None and r.sigma_ratio <= max_sigma


def euler_residual(f: FVector) -> RelationResidual:
    value = lincomb([((-1) ** i, x) for i, x in enumerate(f)]) - 1
    return _make("euler", None, value)


def dehn_sommerville_residual(f: FVector, k: int) -> RelationResidual:
    d = f.d
    if not -1 <= k <= d - 2:
        raise ValueError(f"Dehn-Sommerville index k={k} outside [-1, {d - 2}]")
    coef = {j: (-1) ** j * comb(j + 1, k + 1) for j in range(k, d)}
    coef[k] = coef.get(k, 0) - (-1) ** (d - 1)
    return _make("dehn_sommerville", k, lincomb((c, f.get(j)) for j, c in coef.items()))


def gram_residual(a: AlphaVector) -> RelationResidual:
    return _make("gram", None, lincomb(((-1) ** i, x) for i, x in enumerate(a)))


def perles_residual(a: AlphaVector, f: FVector, k: int) -> RelationResidual:
    d = a.d
    if f.d != d:
        raise ValueError("alpha and f vectors have different dimensions")
    if not 0 <= k <= d - 1:
        raise ValueError(f"Perles index k={k} outside [0, {d - 1}]")
    coef = {j: (-1) ** j * comb(j + 1, k + 1) for j in range(k, d)}
    coef[k] -= (-1) ** d
    terms = [(c, a[j]) for j, c in coef.items()] + [((-1) ** d, f[k])]
    return _make("perles", k, lincomb(terms))


def gamma_h_residual(g, h: HVector, i: int, alpha: Optional[AlphaVector] = None) -> RelationResidual:
    """``gamma_i + gamma_{d-i} - h_i``.

    When ``alpha`` is given the residual is expanded in the alpha entries so
    the error of correlated gamma entries is propagated correctly.
    """
    d = len(h) - 1
    if not 0 <= i <= d:
        raise ValueError(f"index {i} outside [0, {d}]")
    if alpha is None:
        return _make("gamma_h", i, lincomb([(1, g[i]), (1, g[d - i]), (-1, h[i])]))
    coef = {}
    for idx in (i, d - i):
        for j, c in gamma_coefficients(d, idx).items():
            coef[j] = coef.get(j, 0) + c
    terms = [(c, alpha.get(j)) for j, c in coef.items()] + [(-1, h[i])]
    return _make("gamma_h", i, lincomb(terms))


def dehn_sommerville_all(f: FVector) -> list:
    return [dehn_sommerville_residual(f, k) for k in range(-1, f.d - 1)]


def perles_all(a: AlphaVector, f: FVector) -> list:
    return [perles_residual(a, f, k) for k in range(a.d)]


def gamma_h_all(a: AlphaVector, h: HVector) -> list:
    g = gamma_from_alpha(a)
    return [gamma_h_residual(g, h, i, alpha=a) for i in range(a.d + 1)]

