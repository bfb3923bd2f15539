import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from polyangle.constructions import (INF, ZERO, NotRealizable, ParseError, Point, Prism, Pyramid,
                                     UnsupportedExact, build_geometric, cyclic_polytope,
                                     exact_alpha_f, exact_f, family_theorem5, family_theorem8,
                                     format_expr, glued_tetra_bipyramid, parse_expr)
from polyangle.geometry import f_vector
from polyangle.vecalg import concat, gamma_from_alpha, h_from_f
from oracles import combinatorial_lattice


def test_parse_examples():
    assert parse_expr("P0^2(pt)") == Pyramid(Pyramid(Point(), ZERO), ZERO)
    e = parse_expr("Pinf^2(B*_1(P^2))")
    tri = Pyramid(Pyramid(Point()))
    assert e == Pyramid(Pyramid(Prism(tri, F(1)), INF), INF)
    with pytest.raises(ParseError):
        parse_expr("B*(pt, 0)")


def test_parse_errors_have_position():
    with pytest.raises(ParseError) as info:
        parse_expr("P(pt")
    assert info.value.pos >= 4
    for bad in ("B*_inf(pt)", "Q(pt)", "P_0(pt) extra", "P^x"):
        with pytest.raises(ParseError):
            parse_expr(bad)


def test_format_round_trip():
    for text in ("P0^2(P(pt))", "Pinf^2(P^2)", "B*^2(P(pt))", "P_1/2(B*_3(P^2))", "P^3"):
        e = parse_expr(text)
        assert parse_expr(format_expr(e)) == e


def test_build_examples():
    tri = build_geometric(parse_expr("P_1(P_1(pt))"))
    assert tuple(f_vector(tri)) == (3, 3, 1)
    c = build_geometric(parse_expr("B*_1(B*_1(B*_1(pt)))"))
    assert tuple(f_vector(c)) == (8, 12, 6, 1)
    assert set(c.vertices) == {tuple(F(x) for x in (a, b, cc))
                               for a in (0, 1) for b in (0, 1) for cc in (0, 1)}
    with pytest.raises(NotRealizable):
        build_geometric(parse_expr("P0(pt)"))


def test_pyramid_f_effect_any_height():
    base = parse_expr("B*(P^2)")
    fq = f_vector(build_geometric(base))
    for h in (F(1, 3), F(1), F(7)):
        fp = f_vector(build_geometric(Pyramid(base, h)))
        assert all(fp.get(i) == fq.get(i) + fq.get(i - 1) for i in range(fp.d + 1))


def test_exact_examples():
    assert tuple(exact_alpha_f("P0^2(P(pt))").alpha) == (F(1, 2), F(3, 2), 2, 1)
    assert tuple(exact_alpha_f("Pinf^2(P(pt))").alpha) == (F(1, 4), F(5, 4), 2, 1)
    for d in range(2, 9):
        e = family_theorem5(d)[0]
        g = tuple(gamma_from_alpha(exact_alpha_f(e).alpha))
        assert g == (0,) + (F(1, 2),) * (d - 1) + (1,)


def test_exact_rejects_finite_pyramid_in_dim3():
    with pytest.raises(UnsupportedExact):
        exact_alpha_f("P^3")


def test_cyclic_and_bipyramid():
    assert tuple(f_vector(cyclic_polytope(3, 5))) == (5, 9, 6, 1)
    assert tuple(f_vector(cyclic_polytope(4, 6))) == (6, 15, 18, 9, 1)
    assert tuple(f_vector(cyclic_polytope(2, 5))) == (5, 5, 1)
    b = glued_tetra_bipyramid()
    assert b.n_vertices == 5
    assert len(b.facets) == 6 and all(len(fa.vertex_set) == 3 for fa in b.facets)


def test_families():
    assert [format_expr(e) for e in family_theorem5(3)] == ["P0^2(P(pt))", "Pinf^2(P(pt))"]
    assert len(family_theorem5(5)) == 3
    for d in range(1, 9):
        fam = family_theorem5(d)
        assert len(fam) == (d - 1) // 2 + 1
        for e in fam:
            assert tuple(exact_f(e)) == tuple(comb(d + 1, i + 1) for i in range(d + 1))
    t8 = family_theorem8(2)
    rows = [tuple(concat(gamma_from_alpha(exact_alpha_f(e).alpha), exact_f(e))) for e in t8]
    assert rows == [(0, F(1, 2), 1, 3, 3, 1), (0, 1, 1, 4, 4, 1)]
    assert len(family_theorem8(3)) == 4
    fam4 = family_theorem8(4)
    assert len(fam4) == 6
    assert sum(isinstance(e, Prism) for e in fam4) == 2


def test_duplication_note():
    for k in range(1, 5):
        a = exact_alpha_f(parse_expr(f"Pinf(B*^{k}(P(pt)))")).alpha
        b = exact_alpha_f(parse_expr(f"B*^{k}(P^2)")).alpha
        assert a == b


# random expressions -------------------------------------------------------

def _random_expr(rng, n_nodes, limits=True):
    e = Point()
    for i in range(n_nodes):
        r = rng.random()
        if r < 0.35:
            e = Prism(e, F(rng.randint(1, 4), rng.randint(1, 3)))
        elif limits and i > 0 and r < 0.7:
            e = Pyramid(e, rng.choice([ZERO, INF]))
        elif not limits:
            e = Pyramid(e, F(rng.randint(1, 4), rng.randint(1, 3)))
        else:
            e = Pyramid(e, INF if i == 0 else rng.choice([ZERO, INF]))
    return e


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_geometric_matches_combinatorial_lattice(seed, n):
    e = _random_expr(random.Random(seed), n, limits=False)
    p = build_geometric(e)
    assert set(p.lattice.all_faces()) == combinatorial_lattice(e)
    assert f_vector(p) == exact_f(e)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_exact_invariants_random(seed, n):
    e = _random_expr(random.Random(seed), n)
    res = exact_alpha_f(e)
    a, f = res.alpha, res.f
    assert sum((-1) ** i * x for i, x in enumerate(a)) == 0
    assert sum((-1) ** i * x for i, x in enumerate(f)) == 1
    assert a[a.d - 1] == F(f[f.d - 1], 2)
    # prism height invariance
    def reheight(x):
        if isinstance(x, Point):
            return x
        if isinstance(x, Prism):
            return Prism(reheight(x.base), x.height * 3 + 1)
        return Pyramid(reheight(x.base), x.height)
    assert exact_alpha_f(reheight(e)).alpha == a
    # gamma(B* e) = (gamma(e), 1)
    g_prism = tuple(gamma_from_alpha(exact_alpha_f(Prism(e)).alpha))
    assert g_prism == tuple(gamma_from_alpha(a)) + (1,)
    # h(P e) = (h(e), 1)
    assert tuple(h_from_f(exact_f(Pyramid(e)))) == tuple(h_from_f(f)) + (1,)
