"""Pyramid / prism construction calculus.

An expression tree over ``pt``, pyramids ``P_k`` (with the limiting heights
``0`` and ``inf``) and prisms ``B*_k`` is either realized geometrically with
exact rational coordinates or pushed through the exact angle-sum recursions.

Expression grammar::

    expr   := "pt"
            | "P"    ["^" int] ["_" height] [args]
            | "P0"   ["^" int] [args]
            | "Pinf" ["^" int] [args]
            | ("B*" | "(B*)") ["^" int] ["_" height] [args]
    args   := "(" expr ["," height] ")"
    height := int | int "/" int | "inf"

A missing argument means ``pt``, so ``P^3`` is a tetrahedron.  ``P_0`` and
``P_inf`` are the same as ``P0`` and ``Pinf``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .geometry import VPolytope, f_vector
from .vecalg import AlphaVector, FVector, lincomb

__all__ = [
    "Limit", "ZERO", "INF", "Point", "Pyramid", "Prism", "Expr", "ParseError",
    "UnsupportedExact", "NotRealizable", "LimitingAlphaF",
    "parse_expr", "format_expr", "as_expr", "expr_dim", "has_limits",
    "pyramid", "prism", "build_geometric", "exact_alpha_f", "exact_f", "alpha_step", "f_step",
    "exact_supported", "cyclic_polytope", "glued_tetra_bipyramid",
    "regular_tetrahedron", "cube", "octahedron",
    "family_theorem5", "family_theorem8",
]


class Limit(enum.Enum):
    ZERO = "0"
    INF = "inf"


ZERO = Limit.ZERO
INF = Limit.INF


@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class Pyramid:
    base: "Expr"
    height: Union[Fraction, Limit] = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.height, Limit):
            h = Fraction(self.height)
            if h <= 0:
                raise ValueError(f"pyramid height must be positive, got {h}")
            object.__setattr__(self, "height", h)


@dataclass(frozen=True)
class Prism:
    base: "Expr"
    height: Fraction = Fraction(1)

    def __post_init__(self):
        if isinstance(self.height, Limit):
            raise ValueError("prism height cannot be a limit (0 or inf)")
        h = Fraction(self.height)
        if h <= 0:
            raise ValueError(f"prism height must be positive, got {h}")
        object.__setattr__(self, "height", h)


Expr = Union[Point, Pyramid, Prism]


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnsupportedExact(ValueError):
    """A finite-height pyramid of dimension >= 3 has no exact angle formula."""


class NotRealizable(ValueError):
    """Expression contains a limiting (0 / inf) pyramid."""


def expr_dim(e: Expr) -> int:
    n = 0
    while not isinstance(e, Point):
        n += 1
        e = e.base
    return n


def has_limits(e: Expr) -> bool:
    while not isinstance(e, Point):
        if isinstance(e, Pyramid) and isinstance(e.height, Limit):
            return True
        e = e.base
    return False


# --------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(\(B\*\)|B\*|Pinf|P0|P|pt|inf|\d+/\d+|\d+|[\^_(),]|-)")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    toks.append(("", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok or 'end of input'!r}", pos)
        self.i += 1
        return tok

    def integer(self):
        tok, pos = self.toks[self.i]
        if not tok.isdigit():
            raise ParseError(f"expected an integer, got {tok or 'end of input'!r}", pos)
        self.i += 1
        n = int(tok)
        if n < 1:
            raise ParseError("repetition count must be >= 1", pos)
        return n

    def height(self):
        tok, pos = self.toks[self.i]
        if tok == "-":
            raise ParseError("heights must be positive", pos)
        if tok == "inf":
            self.i += 1
            return INF, pos
        if re.fullmatch(r"\d+(/\d+)?", tok or "x"):
            self.i += 1
            h = Fraction(tok)
            return (ZERO if h == 0 else h), pos
        raise ParseError(f"expected a height, got {tok or 'end of input'!r}", pos)

    def expr(self):
        tok = self.peek()
        start = self.pos()
        if tok == "pt":
            self.take()
            return Point()
        if tok not in ("P", "P0", "Pinf", "B*", "(B*)"):
            raise ParseError(f"expected an expression, got {tok or 'end of input'!r}", start)
        self.take()
        reps = 1
        if self.peek() == "^":
            self.take()
            reps = self.integer()
        height = {"P0": ZERO, "Pinf": INF}.get(tok, Fraction(1))
        hpos = start
        if self.peek() == "_":
            if tok in ("P0", "Pinf"):
                raise ParseError(f"{tok} takes no height", self.pos())
            self.take()
            height, hpos = self.height()
        base = Point()
        if self.peek() == "(":
            self.take()
            base = self.expr()
            if self.peek() == ",":
                self.take()
                if tok in ("P0", "Pinf"):
                    raise ParseError(f"{tok} takes no height", self.pos())
                height, hpos = self.height()
            self.take(")")
        is_prism = tok in ("B*", "(B*)")
        if is_prism and isinstance(height, Limit):
            raise ParseError("prism height must be positive and finite", hpos)
        for _ in range(reps):
            base = Prism(base, height) if is_prism else Pyramid(base, height)
        return base


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if p.peek() != "":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return e


def as_expr(e) -> Expr:
    return parse_expr(e) if isinstance(e, str) else e


def _op_label(e) -> str:
    if isinstance(e, Prism):
        return "B*" if e.height == 1 else f"B*_{e.height}"
    if e.height is ZERO:
        return "P0"
    if e.height is INF:
        return "Pinf"
    return "P" if e.height == 1 else f"P_{e.height}"


def format_expr(e: Expr) -> str:
    """Canonical string; ``parse_expr(format_expr(e)) == e``."""
    if isinstance(e, Point):
        return "pt"
    label = _op_label(e)
    reps = 1
    base = e.base
    while type(base) is type(e) and base.height == e.height:
        reps += 1
        base = base.base
    if label == "P" and isinstance(base, Point):
        return "P(pt)" if reps == 1 else f"P^{reps}"
    head = label if reps == 1 else f"{label}^{reps}"
    if "_" in head and reps > 1:
        name, h = label.split("_")
        head = f"{name}^{reps}_{h}"
    return f"{head}({format_expr(base)})"


# --------------------------------------------------------------------------
# geometric realization


def pyramid(q: VPolytope, height=1, name=None) -> VPolytope:
    """Base in ``x_{d} = 0``, apex at height ``height`` over the vertex centroid."""
    h = Fraction(height)
    if h <= 0:
        raise ValueError("pyramid height must be positive")
    n = len(q.vertices)
    centroid = tuple(sum(c) / n for c in zip(*q.vertices)) if q.ambient_dim else ()
    verts = [v + (Fraction(0),) for v in q.vertices] + [centroid + (h,)]
    return VPolytope(verts, name=name)


def prism(q: VPolytope, height=1, name=None) -> VPolytope:
    """``Q x [0, height]``; bottom copy first, then top copy."""
    h = Fraction(height)
    if h <= 0:
        raise ValueError("prism height must be positive")
    verts = [v + (Fraction(0),) for v in q.vertices] + [v + (h,) for v in q.vertices]
    return VPolytope(verts, name=name)


def build_geometric(e) -> VPolytope:
    e = as_expr(e)
    if has_limits(e):
        raise NotRealizable(f"{format_expr(e)} contains a limiting pyramid (P0/Pinf)")
    chain = []
    node = e
    while not isinstance(node, Point):
        chain.append(node)
        node = node.base
    poly = VPolytope([()])
    for node in reversed(chain):
        poly = (prism if isinstance(node, Prism) else pyramid)(poly, node.height)
    poly.name = format_expr(e)
    return poly


# --------------------------------------------------------------------------
# exact angle sums of limiting constructions


@dataclass(frozen=True)
class LimitingAlphaF:
    d: int
    alpha: AlphaVector
    f: FVector


def exact_f(e) -> FVector:
    """f-vector from the pyramid / prism face-count recursions."""
    e = as_expr(e)
    if isinstance(e, Point):
        return FVector((1,))
    return f_step(e, exact_f(e.base))


def alpha_step(node, alpha_q: list, f_q: FVector) -> list:
    """Angle sums of ``node`` from those of its base (entries may be estimates).

    ``alpha_q`` has entries ``alpha_0..alpha_{d-1}`` of the base.  Finite
    pyramids are handled only where the result is a segment or polygon.
    """
    dq = f_q.d
    d = dq + 1
    half = Fraction(1, 2)

    def a(i):
        if i < 0 or i > dq:
            return Fraction(0)
        return alpha_q[i]

    if isinstance(node, Prism):
        return [lincomb([(1, a(i)), (1, a(i - 1))]) for i in range(d + 1)]
    if d == 1:
        return [Fraction(1), Fraction(1)]
    if node.height is ZERO:
        out = [half * f_q.get(i - 1) for i in range(d - 1)]
        out.append(half * f_q.get(d - 2) + half)
        return out + [Fraction(1)]
    if node.height is INF:
        out = [lincomb([(half, a(i)), (1, a(i - 1))]) for i in range(d)]
        return out + [Fraction(1)]
    if d == 2:
        n = f_q.get(0) + 1
        return [Fraction(n - 2, 2), Fraction(n, 2), Fraction(1)]
    raise UnsupportedExact(
        f"finite-height pyramid of dimension {d} has no exact angle formula")


def exact_alpha_f(e) -> LimitingAlphaF:
    e = as_expr(e)
    chain = []
    node = e
    while not isinstance(node, Point):
        chain.append(node)
        node = node.base
    alpha = [Fraction(1)]
    f = FVector((1,))
    for node in reversed(chain):
        alpha = alpha_step(node, alpha, f)
        f = f_step(node, f)
    return LimitingAlphaF(f.d, AlphaVector(tuple(alpha)), f)


def f_step(node, q: FVector) -> FVector:
    d = q.d + 1
    if isinstance(node, Pyramid):
        return FVector(tuple(q.get(i) + q.get(i - 1) for i in range(d + 1)))
    return FVector(tuple([2 * q.get(0)] + [2 * q.get(i) + q.get(i - 1) for i in range(1, d + 1)]))


def exact_supported(e) -> bool:
    try:
        exact_alpha_f(e)
    except UnsupportedExact:
        return False
    return True


# --------------------------------------------------------------------------
# named polytopes


def cyclic_polytope(d: int, n: int) -> VPolytope:
    """Moment-curve points ``(t, t^2, ..., t^d)`` for ``t = 1..n``."""
    if d < 2 or n < d + 1:
        raise ValueError(f"cyclic polytope needs d >= 2 and n >= d+1, got d={d}, n={n}")
    return VPolytope([[t ** k for k in range(1, d + 1)] for t in range(1, n + 1)],
                     name=f"cyclic({d},{n})")


_TETRA = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]


def regular_tetrahedron() -> VPolytope:
    return VPolytope(_TETRA, name="tetra")


def glued_tetra_bipyramid() -> VPolytope:
    """Two regular tetrahedra glued along a face.

    The apex ``(1,1,1)`` is reflected across the plane ``x+y+z = -1`` of the
    opposite face, giving ``(-5/3, -5/3, -5/3)``.
    """
    apex = _TETRA[0]
    t = Fraction(sum(apex) + 1, 3)
    reflected = tuple(Fraction(x) - 2 * t for x in apex)
    return VPolytope(_TETRA + [reflected], name="glued_bipyramid")


def cube(d: int = 3) -> VPolytope:
    from itertools import product
    return VPolytope(list(product((0, 1), repeat=d)), name=f"cube({d})")


def octahedron() -> VPolytope:
    verts = []
    for i in range(3):
        for s in (1, -1):
            v = [0, 0, 0]
            v[i] = s
            verts.append(v)
    return VPolytope(verts, name="octahedron")


# --------------------------------------------------------------------------
# spanning families


def _chain(op, k: int, base: Expr) -> Expr:
    for _ in range(k):
        base = op(base)
    return base


def _simplex(d: int) -> Expr:
    return _chain(Pyramid, d, Point())


def family_theorem5(d: int) -> list:
    """Limiting simplices with affinely independent angle sums in dimension ``d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d <= 2:
        return [_simplex(d)]
    first = _chain(lambda q: Pyramid(q, ZERO), d - 1, _simplex(1))
    rest = [_chain(lambda q: Pyramid(q, INF), 2, q) for q in family_theorem5(d - 2)]
    return [first] + rest


def family_theorem8(d: int) -> list:
    """``2d - 2`` polytopes with affinely independent alpha-f vectors."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if d == 2:
        return [_simplex(2), Prism(_simplex(1))]
    lifted = [Pyramid(q, INF) for q in family_theorem8(d - 1)]
    return lifted + [_chain(Prism, d - 2, _simplex(2)), _chain(Prism, d - 1, _simplex(1))]
