"""Graded combinatorial vectors and the linear maps between them.

Entries are *scalars*: either exact rationals (:class:`fractions.Fraction`,
plain ``int`` accepted) or :class:`Estimate` values carrying a standard
error.  Every transform is a fixed integer/rational linear map, so it is
written once against :func:`lincomb` and works for both kinds.

Index conventions: ``f_{-1} = 1`` and ``alpha_{-1} = 0`` everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

__all__ = [
    "Estimate", "Scalar", "lincomb", "is_exact", "mean_of", "se_of",
    "scalar_to_json", "scalar_from_json",
    "FVector", "ExtendedFVector", "HVector", "AlphaVector", "GammaVector",
    "concat", "h_from_f", "f_from_h", "gamma_from_alpha", "alpha_from_gamma",
    "gamma_coefficients", "pinf_matrix", "pinf_matrix_inverse",
    "apply_pinf_matrix", "apply_pinf_matrix_inverse",
    "pyramid_matrix", "pyramid_matrix_inverse",
    "apply_pyramid_matrix", "apply_pyramid_matrix_inverse",
    "apply_block_C", "apply_block_C_inverse",
]


@dataclass(frozen=True)
class Estimate:
    """A real value known up to an independent Gaussian error."""

    mean: float
    se: float = 0.0

    def __post_init__(self):
        if not self.se >= 0:
            raise ValueError(f"std error must be >= 0, got {self.se}")

    def __float__(self):
        return float(self.mean)


Scalar = Union[Fraction, int, Estimate]


def is_exact(x) -> bool:
    return not isinstance(x, Estimate)


def mean_of(x) -> float:
    return x.mean if isinstance(x, Estimate) else float(x)


def se_of(x) -> float:
    return x.se if isinstance(x, Estimate) else 0.0


def lincomb(terms: Iterable[tuple]) -> Scalar:
    """Evaluate ``sum(c * x)`` over ``(c, x)`` pairs with rational ``c``.

    Exact inputs give an exact ``Fraction``.  If any ``x`` is an estimate the
    result is an estimate with ``se = sqrt(sum(c^2 se^2))``.
    """
    terms = [(c, x) for c, x in terms if c != 0]
    if all(is_exact(x) for _, x in terms):
        return sum((Fraction(c) * x for c, x in terms), Fraction(0))
    mean = 0.0
    var = 0.0
    for c, x in terms:
        cf = float(c)
        mean += cf * mean_of(x)
        var += (cf * se_of(x)) ** 2
    return Estimate(mean, math.sqrt(var))


def scalar_to_json(x):
    if isinstance(x, Estimate):
        return {"mean": x.mean, "se": x.se}
    if isinstance(x, int):
        return x
    return str(Fraction(x))


def scalar_from_json(v):
    if isinstance(v, dict):
        return Estimate(float(v["mean"]), float(v["se"]))
    if isinstance(v, int):
        return v
    return Fraction(v)


def _exact_equal(x, value) -> bool:
    if isinstance(x, Estimate):
        return x.se == 0 and x.mean == value
    return x == value


# --------------------------------------------------------------------------
# vector types


@dataclass(frozen=True)
class _Graded:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise ValueError(f"{type(self).__name__} needs at least one entry")

    @property
    def d(self) -> int:
        return len(self.entries) - 1

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.entries)

    def to_json(self) -> list:
        return [scalar_to_json(x) for x in self.entries]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(scalar_from_json(v) for v in data))


class FVector(_Graded):
    """Face counts ``f_0..f_d``; requires ``f_d == 1``."""

    def __post_init__(self):
        super().__post_init__()
        for x in self.entries:
            if not isinstance(x, int) or x < 0:
                raise ValueError(f"f-vector entries must be nonnegative ints: {self.entries}")
        if self.entries[-1] != 1:
            raise ValueError(f"f_d must be 1, got {self.entries}")

    def extended(self) -> "ExtendedFVector":
        return ExtendedFVector((1,) + self.entries)

    def get(self, i: int) -> int:
        """``f_i`` with the conventions ``f_{-1} = 1`` and ``f_i = 0`` past ``d``."""
        if i == -1:
            return 1
        if 0 <= i <= self.d:
            return self.entries[i]
        return 0


class ExtendedFVector(_Graded):
    """``(f_{-1}, f_0, ..., f_d)``.

    The leading entry is 1 for genuine polytopes; pyramid-inverse images are
    allowed to carry anything there (it equals an Euler sum).
    """

    @property
    def d(self) -> int:
        return len(self.entries) - 2

    def unextended(self) -> FVector:
        if self.entries[0] != 1:
            raise ValueError("f_{-1} must be 1")
        return FVector(self.entries[1:])


class HVector(_Graded):
    pass


class AlphaVector(_Graded):
    """Angle sums ``alpha_0..alpha_d``; requires ``alpha_d == 1``."""

    def __post_init__(self):
        super().__post_init__()
        if not _exact_equal(self.entries[-1], 1):
            raise ValueError(f"alpha_d must be exactly 1, got {self.entries[-1]!r}")

    def get(self, i: int):
        if i == -1:
            return Fraction(0)
        return self.entries[i]


class GammaVector(_Graded):
    pass


def concat(*vectors) -> tuple:
    """Flat entry tuple of an alpha-f, gamma-h or gamma-f vector."""
    ds = {v.d for v in vectors}
    if len(ds) != 1:
        raise ValueError(f"halves have different dimensions: {sorted(ds)}")
    out = ()
    for v in vectors:
        out += tuple(v.entries)
    return out


# --------------------------------------------------------------------------
# f <-> h and alpha <-> gamma


def _shifted_transform(d: int, shifted: Sequence) -> list:
    # out_i = sum_{j<=i} (-1)^(i-j) C(d-j, d-i) x_{j-1}, shifted[j] = x_{j-1}
    return [
        lincomb(((-1) ** (i - j) * comb(d - j, d - i), shifted[j]) for j in range(i + 1))
        for i in range(d + 1)
    ]


def _shifted_inverse(d: int, y: Sequence) -> list:
    # x_{j-1} = sum_{i<=j} C(d-i, j-i) y_i, for j = 0..d
    return [lincomb((comb(d - i, j - i), y[i]) for i in range(j + 1)) for j in range(d + 1)]


def gamma_coefficients(d: int, i: int) -> dict:
    """Coefficients of ``gamma_i`` as a combination of ``alpha_{-1..d}``."""
    return {j - 1: (-1) ** (i - j) * comb(d - j, d - i) for j in range(i + 1)}


def h_from_f(f: FVector) -> HVector:
    if not isinstance(f, FVector):
        f = FVector(tuple(f))
    d = f.d
    h = _shifted_transform(d, [f.get(j - 1) for j in range(d + 1)])
    return HVector(tuple(int(x) for x in h))


def f_from_h(h: HVector) -> FVector:
    d = len(h) - 1
    shifted = _shifted_inverse(d, list(h))
    if shifted[0] != 1:
        raise ValueError(f"h_0 must be 1, got {h[0]}")
    f = [int(x) if Fraction(x).denominator == 1 else x for x in shifted[1:]] + [1]
    return FVector(tuple(f))


def gamma_from_alpha(a: AlphaVector) -> GammaVector:
    if not isinstance(a, AlphaVector):
        a = AlphaVector(tuple(a))
    d = a.d
    return GammaVector(tuple(_shifted_transform(d, [a.get(j - 1) for j in range(d + 1)])))


def alpha_from_gamma(g: GammaVector) -> AlphaVector:
    """Inverse of :func:`gamma_from_alpha` on vectors with ``gamma_0 = 0``.

    ``alpha_d`` does not enter the gamma transform; it is restored as 1.
    """
    d = len(g) - 1
    shifted = _shifted_inverse(d, list(g))
    if not _exact_equal(shifted[0], 0) and is_exact(shifted[0]):
        raise ValueError(f"gamma_0 must be 0 (alpha_-1 = 0), got {g[0]}")
    return AlphaVector(tuple(shifted[1:]) + (Fraction(1),))


# --------------------------------------------------------------------------
# the P-infinity matrix on gamma vectors


def _matvec(m, v) -> tuple:
    if len(m[0]) != len(v):
        raise ValueError(f"shape mismatch: matrix has {len(m[0])} columns, vector {len(v)}")
    return tuple(lincomb(zip(row, v)) for row in m)


def pinf_matrix(n: int) -> list:
    """``n x n`` matrix, 1/2 on the diagonal and subdiagonal."""
    half = Fraction(1, 2)
    return [[half if j in (i, i - 1) else Fraction(0) for j in range(n)] for i in range(n)]


def pinf_matrix_inverse(n: int) -> list:
    return [[Fraction(2 * (-1) ** (i - j)) if j <= i else Fraction(0) for j in range(n)]
            for i in range(n)]


def apply_pinf_matrix(g, extend: bool = True) -> GammaVector:
    """gamma of ``P_inf Q`` from gamma of ``Q``.

    With ``extend`` the input is the plain gamma-vector of a (d-1)-polytope and
    a trailing 1 (standing for ``gamma_d(Q)``) is appended before multiplying.
    Without it the input is used as-is and the length is preserved.
    """
    v = tuple(g) + ((Fraction(1),) if extend else ())
    return GammaVector(_matvec(pinf_matrix(len(v)), v))


def apply_pinf_matrix_inverse(g) -> GammaVector:
    v = tuple(g)
    return GammaVector(_matvec(pinf_matrix_inverse(len(v)), v))


# --------------------------------------------------------------------------
# the pyramid matrix on extended f-vectors


def pyramid_matrix(n: int) -> list:
    """``n x n`` upper bidiagonal matrix of ones."""
    return [[1 if j in (i, i + 1) else 0 for j in range(n)] for i in range(n)]


def pyramid_matrix_inverse(n: int) -> list:
    return [[(-1) ** (j - i) if j >= i else 0 for j in range(n)] for i in range(n)]


def _as_ints(xs) -> tuple:
    return tuple(int(x) if Fraction(x).denominator == 1 else x for x in xs)


def apply_pyramid_matrix(f) -> ExtendedFVector:
    """Extended f-vector of ``P Q`` from the extended f-vector of ``Q``."""
    v = tuple(f)
    if v[0] != 1:
        raise ValueError("f_{-1} must be 1")
    return ExtendedFVector((1,) + _as_ints(_matvec(pyramid_matrix(len(v)), v)))


def apply_pyramid_matrix_inverse(f) -> ExtendedFVector:
    """Pyramid-inverse image ``(fbar_{-1}, fbar_0, ..., fbar_{d-1})``.

    The input is an extended f-vector ``(1, f_0..f_d)``; the leading 1 is
    dropped before multiplying by the inverse matrix.
    """
    v = tuple(f)
    if v[0] != 1:
        raise ValueError("f_{-1} must be 1")
    body = v[1:]
    return ExtendedFVector(_as_ints(_matvec(pyramid_matrix_inverse(len(body)), body)))


# --------------------------------------------------------------------------
# block matrix C = diag(A, B) acting on (gamma(Q), 1 | 1, f(Q))


def _split_half(v) -> tuple:
    v = tuple(v)
    if len(v) % 2:
        raise ValueError(f"block vector must have even length, got {len(v)}")
    n = len(v) // 2
    return v[:n], v[n:]


def apply_block_C(v) -> tuple:
    """``C @ v`` for ``v = (gamma(Q), 1, 1, f(Q))``; returns gamma-f of ``P_inf Q``."""
    g, f = _split_half(v)
    n = len(g)
    return _matvec(pinf_matrix(n), g) + _as_ints(_matvec(pyramid_matrix(n), f))


def apply_block_C_inverse(v) -> tuple:
    g, f = _split_half(v)
    n = len(g)
    return _matvec(pinf_matrix_inverse(n), g) + _as_ints(_matvec(pyramid_matrix_inverse(n), f))
