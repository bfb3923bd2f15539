"""Acceptance criteria, one check per criterion.

Run under pytest (lines appear in the terminal summary) or directly:

    python3 tests/test_acceptance.py
"""

import json
import math
import os
import sys
import tempfile
import time
from fractions import Fraction as F

import pytest

from polyangle.angles import (alpha_vector_closed_form, alpha_vector_estimate, derive_seed,
                              interior_angle_mc)
from polyangle.cli import main as cli_main
from polyangle.constructions import (INF, ZERO, Point, Prism, Pyramid, cube, cyclic_polytope,
                                     exact_alpha_f, family_theorem5, family_theorem8,
                                     glued_tetra_bipyramid, octahedron, parse_expr,
                                     regular_tetrahedron)
from polyangle.geometry import f_vector
from polyangle.relations import (dehn_sommerville_all, euler_residual, gram_residual, judge,
                                 perles_all)
from polyangle.spans import (lemma7_check, verify_theorem5, verify_theorem6, verify_theorem8)
from polyangle.vecalg import Estimate, concat, gamma_from_alpha

# pinned tolerances and budgets
SIGMA = 4.0
EPSILON = 0.05
SAMPLES = 100_000
EXACT_BUDGET_S = 1.0
T5_NUMERIC_BUDGET_S = 120.0
T8_NUMERIC_BUDGET_S = 300.0
T6_BUDGET_S = 600.0
TETRA_EDGE = math.acos(1 / 3) / (2 * math.pi)     # 0.195913...
SEED = 20240601


def _exprs(n_nodes):
    if n_nodes == 0:
        yield Point()
        return
    for base in _exprs(n_nodes - 1):
        yield Prism(base)
        yield Pyramid(base, ZERO)
        yield Pyramid(base, INF)


def ac1():
    worst, count, bad = 0.0, 0, []
    for n in range(0, 7):
        for q in _exprs(n):
            t = time.perf_counter()
            ex = exact_alpha_f(q)
            gq = tuple(gamma_from_alpha(ex.alpha))
            ok = euler_residual(ex.f).value == 0
            # the bare point has alpha = (1); Gram is a statement about d >= 1
            ok &= ex.d == 0 or gram_residual(ex.alpha).value == 0
            # gamma(B* Q) = (gamma(Q), 1)
            ok &= tuple(gamma_from_alpha(exact_alpha_f(Prism(q)).alpha)) == gq + (1,)
            if ex.d >= 1:
                # gamma(Pinf Q) = ((0, gamma(Q)) + (gamma(Q), 1)) / 2
                want = tuple((a + b) / 2 for a, b in zip((0,) + gq, gq + (1,)))
                ok &= tuple(gamma_from_alpha(exact_alpha_f(Pyramid(q, INF)).alpha)) == want
            worst = max(worst, time.perf_counter() - t)
            count += 1
            if not ok:
                bad.append(q)
    ok = not bad and worst < EXACT_BUDGET_S
    return ok, f"{count} expressions, {len(bad)} failures, slowest {worst * 1e3:.1f} ms"


def ac2():
    bad = 0
    for d in range(2, 9):
        for e in family_theorem5(d):
            g = gamma_from_alpha(exact_alpha_f(e).alpha)
            bad += not all(g[i] + g[d - i] == 1 for i in range(d + 1))
    return bad == 0, f"d = 2..8, {bad} members violating symmetry"


def ac3():
    t = time.perf_counter()
    exact_ok = all(verify_theorem5(d).computed_dim == (d - 1) // 2 for d in range(1, 9))
    t_exact = time.perf_counter() - t
    t = time.perf_counter()
    nums = [verify_theorem5(d, "numeric", samples=SAMPLES, seed=SEED, epsilon=EPSILON)
            for d in (3, 4)]
    t_num = time.perf_counter() - t
    num_ok = all(v.computed_dim == v.expected_dim and v.report.margin > 1 and v.ok for v in nums)
    ok = exact_ok and num_ok and t_exact < EXACT_BUDGET_S and t_num < T5_NUMERIC_BUDGET_S
    margins = ", ".join(f"{v.report.margin:.2f}" for v in nums)
    return ok, f"exact d=1..8 {t_exact:.2f}s; numeric d=3,4 margins {margins} in {t_num:.1f}s"


def ac4():
    t = time.perf_counter()
    exact_ok = all(verify_theorem8(d).computed_dim == 2 * d - 3 for d in range(2, 7))
    t_exact = time.perf_counter() - t
    rows = [tuple(concat(gamma_from_alpha(exact_alpha_f(e).alpha), exact_alpha_f(e).f))
            for e in family_theorem8(2)]
    rows_ok = rows == [(0, F(1, 2), 1, 3, 3, 1), (0, 1, 1, 4, 4, 1)]
    t = time.perf_counter()
    v = verify_theorem8(3, "numeric", samples=SAMPLES, seed=SEED, epsilon=EPSILON)
    t_num = time.perf_counter() - t
    ok = (exact_ok and rows_ok and v.computed_dim == 3 and v.ok
          and t_exact < EXACT_BUDGET_S and t_num < T8_NUMERIC_BUDGET_S)
    return ok, (f"exact d=2..6 {t_exact:.2f}s; d=2 rows match: {rows_ok}; numeric d=3 "
                f"computed {v.computed_dim} margin {v.report.margin:.2f} in {t_num:.1f}s")


def ac5():
    t = time.perf_counter()
    vs = [verify_theorem6(d, samples=SAMPLES, seed=SEED) for d in (3, 4)]
    dt = time.perf_counter() - t
    ok = all(v.computed_dim == v.d - 1 and v.report.margin > 1 and v.ok for v in vs)
    ok &= dt < T6_BUDGET_S
    detail = "; ".join(f"d={v.d}: {v.computed_dim} (margin {v.report.margin:.2f})" for v in vs)
    return ok, f"{detail} in {dt:.1f}s"


def ac6():
    qs = {"segment": parse_expr("P(pt)"), "triangle": parse_expr("P^2"), "cube": cube(3),
          "cyclic(3,5)": cyclic_polytope(3, 5)}
    res = {k: lemma7_check(q) for k, q in qs.items()}
    ok = all(r.ok for r in res.values())
    return ok, ", ".join(f"{k} {r.before}->{r.after}" for k, r in res.items())


def ac7():
    t = regular_tetrahedron()
    edge = t.lattice.grade(1)[0]
    e = interior_angle_mc(t, edge, SAMPLES, derive_seed(SEED, edge))
    edge_ok = abs(e.mean - TETRA_EDGE) <= SIGMA * e.std_error
    a = alpha_vector_estimate(t, SAMPLES, SEED, closed_forms=False).alpha
    g = gram_residual(a).value
    gram_ok = a[2] == 2 and a[3] == 1 and abs(g.mean) < SIGMA * g.se
    c = alpha_vector_estimate(cube(3), SAMPLES, SEED, closed_forms=False).alpha
    cube_ok = all(abs(x.mean - w) <= SIGMA * x.se if isinstance(x, Estimate) else x == w
                  for x, w in zip(c, (1, 3, 3, 1)))
    ngon_ok = all(alpha_vector_estimate(cyclic_polytope(2, n), 10, SEED).alpha[0] == F(n - 2, 2)
                  for n in range(3, 9))
    ok = edge_ok and gram_ok and cube_ok and ngon_ok
    return ok, (f"edge {e.mean:.5f}+-{e.std_error:.5f} vs {TETRA_EDGE:.6f}; "
                f"gram {g.mean:+.5f} ({abs(g.mean) / g.se:.2f} sigma); "
                f"cube alpha_0 {c[0].mean:.4f}; n-gons exact: {ngon_ok}")


def ac8():
    t = time.perf_counter()
    g1 = tuple(gamma_from_alpha(alpha_vector_closed_form(glued_tetra_bipyramid())))
    g2 = tuple(gamma_from_alpha(alpha_vector_closed_form(glued_tetra_bipyramid())))
    dt = time.perf_counter() - t
    m = [x.mean if isinstance(x, Estimate) else float(x) for x in g1]
    non_mono = m[1] > m[2] or m[2] > m[3]
    ok = non_mono and g1 == g2 and dt < EXACT_BUDGET_S
    return ok, f"gamma = ({', '.join(f'{x:.5f}' for x in m)}), non-monotone: {non_mono}, {dt:.2f}s"


def _cli_bytes(args):
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "out.json")
        code = cli_main(list(args) + ["--out", path])
        with open(path, "rb") as fh:
            return code, fh.read()


def ac9():
    cmds = [
        ["span", "--theorem", "5", "--d", "3", "--mode", "numeric", "--seed", "7"],
        ["span", "--theorem", "6", "--d", "3", "--seed", "7"],
        ["span", "--theorem", "8", "--d", "3", "--mode", "numeric", "--seed", "7"],
    ]
    same = True
    for c in cmds:
        outs = {_cli_bytes(c + ["--threads", str(k)]) for k in (1, 1, 2, 3)}
        same &= len(outs) == 1
    return same, f"{len(cmds)} commands x 4 runs (threads 1,1,2,3): byte-identical = {same}"


def ac10():
    t = time.perf_counter()
    o, c = octahedron(), cube(3)
    ds_oct = all(r.value == 0 for r in dehn_sommerville_all(f_vector(o)))
    ds_cube_fails = any(r.value != 0 for r in dehn_sommerville_all(f_vector(c)))
    dt = time.perf_counter() - t
    a = alpha_vector_estimate(o, SAMPLES, SEED).alpha
    perles = perles_all(a, f_vector(o))
    perles_ok = all(judge(r, max_sigma=SIGMA) for r in perles)
    ok = ds_oct and ds_cube_fails and perles_ok and dt < EXACT_BUDGET_S
    return ok, (f"octahedron D-S {ds_oct}, Perles (MC) {perles_ok}; "
                f"cube fails D-S {ds_cube_fails}; exact part {dt:.3f}s")


CRITERIA = [
    ("AC1", "exact identities over expressions of <= 6 nodes", ac1),
    ("AC2", "gamma symmetry of limiting simplices", ac2),
    ("AC3", "Theorem 5 exact and numeric", ac3),
    ("AC4", "Theorem 8 exact and numeric", ac4),
    ("AC5", "Theorem 6 with sampled non-simplices", ac5),
    ("AC6", "Lemma 7 alternating sums", ac6),
    ("AC7", "angle oracles", ac7),
    ("AC8", "non-monotone bipyramid gamma", ac8),
    ("AC9", "determinism across runs and threads", ac9),
    ("AC10", "Dehn-Sommerville / Perles discrimination", ac10),
]


def _line(tag, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {tag} {title}: {detail}"


@pytest.mark.parametrize("tag,title,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(tag, title, fn, report_line):
    ok, detail = fn()
    line = _line(tag, title, ok, detail)
    report_line(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for tag, title, fn in CRITERIA:
        ok, detail = fn()
        print(_line(tag, title, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
