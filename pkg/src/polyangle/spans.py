"""Affine rank of vector families and the span-dimension checks.

Exact families are ranked by rational row reduction.  Families containing
sampled entries are ranked by an SVD with a noise-scaled threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .angles import DEFAULT_SAMPLES, alpha_vector_estimate, derive_seed
from .constructions import (INF, Limit, NotRealizable, Point, Prism, Pyramid, alpha_step,
                            as_expr, build_geometric, cyclic_polytope, exact_alpha_f, exact_f,
                            f_step, family_theorem5, family_theorem8, format_expr, octahedron,
                            prism)
from .geometry import VPolytope, f_vector
from .vecalg import (AlphaVector, FVector, apply_pinf_matrix,
                     apply_pyramid_matrix_inverse, concat, gamma_from_alpha, h_from_f,
                     is_exact, mean_of, se_of)

__all__ = [
    "VectorFamily", "RankReport", "Verdict", "BackoffConfig", "BackoffResult",
    "affine_rank_exact", "affine_rank_numeric", "family_rows",
    "verify_theorem5", "verify_theorem6", "verify_theorem8",
    "lemma4_backoff", "lemma5_check", "lemma7_check", "theorem6_extras",
]

KINDS = ("alpha", "alpha_f", "gamma_h", "gamma_f")


@dataclass
class VectorFamily:
    kind: str
    rows: list
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        self.rows = [tuple(r) for r in self.rows]
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("rows have different lengths")

    @property
    def mode(self) -> str:
        return "exact" if all(is_exact(x) for r in self.rows for x in r) else "estimate"


@dataclass
class RankReport:
    affine_dim: int
    mode: str
    singular_values: Optional[list] = None
    threshold: Optional[float] = None
    margin: Optional[float] = None

    @property
    def confident(self) -> bool:
        return self.mode == "exact" or (self.margin is not None and self.margin > 1)


def affine_rank_exact(fam: VectorFamily) -> RankReport:
    if fam.mode != "exact":
        raise ValueError("exact rank needs an all-rational family")
    if not fam.rows:
        raise ValueError("empty family")
    r0 = fam.rows[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(r, r0)] for r in fam.rows[1:]]
    return RankReport(linalg.rank(diffs) if diffs else 0, "exact")


def affine_rank_numeric(fam: VectorFamily, c: float = 10.0, floor: float = 1e-9) -> RankReport:
    """SVD rank of the row-centered matrix.

    Rows are centered on their mean rather than on the first row so the
    singular values, and hence the verdict, do not depend on row order.

    Columns with no sampling error anywhere (f, h entries and exact angle
    entries) are divided by their largest magnitude first.  Singular values
    above ``c * max_row_sigma * sqrt(n_rows)`` are retained, where a row's
    sigma is the root-sum-square of its entry errors.
    """
    if not fam.rows:
        raise ValueError("empty family")
    means = np.array([[mean_of(x) for x in r] for r in fam.rows], dtype=float)
    ses = np.array([[se_of(x) for x in r] for r in fam.rows], dtype=float)
    scale = np.ones(means.shape[1])
    for j in range(means.shape[1]):
        top = np.max(np.abs(means[:, j]))
        if not ses[:, j].any() and top > 0:
            scale[j] = top
    means /= scale
    ses /= scale
    n_rows = len(fam.rows)
    row_sigma = float(np.max(np.sqrt(np.sum(ses ** 2, axis=1))))
    threshold = max(c * row_sigma * math.sqrt(n_rows), floor)
    if n_rows == 1:
        return RankReport(0, "numeric", [], threshold, math.inf)
    s = np.linalg.svd(means - means.mean(axis=0), compute_uv=False)[:n_rows - 1]
    kept = s[s > threshold]
    if len(kept):
        margin = float(kept.min() / threshold)
    else:
        margin = float(threshold / s.max()) if s.max() > 0 else math.inf
    return RankReport(int(len(kept)), "numeric", [float(x) for x in s], threshold, margin)


def _rank(fam: VectorFamily) -> RankReport:
    return affine_rank_exact(fam) if fam.mode == "exact" else affine_rank_numeric(fam)


def family_rows(kind: str, alphas, fs) -> list:
    rows = []
    for a, f in zip(alphas, fs):
        if kind == "alpha":
            rows.append(tuple(a))
        elif kind == "alpha_f":
            rows.append(concat(a, f))
        elif kind == "gamma_f":
            rows.append(concat(gamma_from_alpha(a), f))
        elif kind == "gamma_h":
            rows.append(concat(gamma_from_alpha(a), h_from_f(f)))
        else:
            raise ValueError(f"unknown kind {kind!r}")
    return rows


@dataclass
class Verdict:
    theorem: str
    d: int
    expected_dim: int
    report: RankReport
    family: list
    checks: dict = field(default_factory=dict)

    @property
    def computed_dim(self) -> int:
        return self.report.affine_dim

    @property
    def mode(self) -> str:
        return self.report.mode

    @property
    def ok(self) -> bool:
        return (self.computed_dim == self.expected_dim and self.report.confident
                and all(self.checks.values()))

    def to_json(self) -> dict:
        m = self.report.margin
        return {
            "theorem": self.theorem,
            "d": self.d,
            "expected_dim": self.expected_dim,
            "computed_dim": self.computed_dim,
            "mode": self.mode,
            "margin": None if m is None or math.isinf(m) else m,
            "family": list(self.family),
        }


# --------------------------------------------------------------------------
# backing off limiting pyramids


@dataclass(frozen=True)
class BackoffConfig:
    epsilon: float = 0.05
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    max_doublings: int = 12
    sigma_allowance: float = 4.0
    threads: int = 1


@dataclass
class BackoffResult:
    limits: list
    realized: list            # expressions with finite heights
    polytopes: list
    alphas: list              # estimated AlphaVectors of the realized polytopes
    f_vectors: list
    within_epsilon: list
    f_match: list
    report: Optional[RankReport] = None
    exact_report: Optional[RankReport] = None
    samples: int = 0

    @property
    def ok(self) -> bool:
        rank_ok = (self.report is None or self.exact_report is None
                   or self.report.affine_dim == self.exact_report.affine_dim)
        return all(self.within_epsilon) and all(self.f_match) and rank_ok


def _chain(e) -> list:
    nodes = []
    while not isinstance(e, Point):
        nodes.append(e)
        e = e.base
    return nodes[::-1]          # innermost first


def _rebuild(nodes, heights: dict, upto: int):
    e = Point()
    for i, node in enumerate(nodes[:upto]):
        h = heights.get(i, node.height)
        e = Prism(e, h) if isinstance(node, Prism) else Pyramid(e, h)
    return e


def _deviation(alpha, target: AlphaVector, allowance: float) -> float:
    return max(abs(mean_of(x) - float(t)) + allowance * se_of(x) for x, t in zip(alpha, target))


def _backoff_one(e, cfg: BackoffConfig, seed: int):
    """Innermost-first height search for one expression.

    Limit nodes are fixed one at a time.  While fixing node ``m`` the part
    below it (nodes ``<= m``) is realized and sampled, and the part above is
    carried by the exact recursions; node ``m`` may use ``m+1`` shares of
    the ``epsilon`` budget out of ``K``.  Deeper infinite heights bound later
    ones from below.
    """
    nodes = _chain(e)
    target = exact_alpha_f(e).alpha
    limit_idx = [i for i, n in enumerate(nodes)
                 if isinstance(n, Pyramid) and isinstance(n.height, Limit)]
    heights = {}

    def sampled(upto):
        poly = build_geometric(_rebuild(nodes, heights, upto))
        est = alpha_vector_estimate(poly, cfg.samples, seed, threads=cfg.threads)
        return poly, est.alpha

    def hybrid(upto):
        _, alpha = sampled(upto)
        a = list(alpha)
        f = exact_f(_rebuild(nodes, heights, upto))
        for node in nodes[upto:]:
            a = alpha_step(node, a, f)
            f = f_step(node, f)
        return a

    last_inf = Fraction(1)
    k_total = len(limit_idx)
    for m, idx in enumerate(limit_idx):
        budget = cfg.epsilon * (m + 1) / k_total
        is_inf = nodes[idx].height is INF
        h = last_inf * 2 if is_inf else Fraction(1, 2)
        for _ in range(cfg.max_doublings):
            heights[idx] = h
            if _deviation(hybrid(idx + 1), target, cfg.sigma_allowance) < budget:
                break
            h = h * 2 if is_inf else h / 2
        if is_inf:
            last_inf = heights[idx]

    return _rebuild(nodes, heights, len(nodes))


def lemma4_backoff(family, epsilon: float = 0.05, samples: int = DEFAULT_SAMPLES,
                   seed: int = 0, kind: str = "alpha", max_doublings: int = 12,
                   threads: int = 1, max_sample_doublings: int = 4) -> BackoffResult:
    """Realize a limiting family by finite heights and re-rank it.

    After the height search, if the numeric rank falls short of the exact one
    the per-face sample count of the final estimates is doubled (at most
    ``max_sample_doublings`` times); heights are not revisited.
    """
    cfg = BackoffConfig(epsilon, samples, seed, max_doublings, threads=threads)
    family = [as_expr(e) for e in family]
    seeds = [derive_seed(seed, (i,)) for i in range(len(family))]
    realized = [_backoff_one(e, cfg, s) for e, s in zip(family, seeds)]
    polys = [build_geometric(e) for e in realized]
    exact = [exact_alpha_f(e) for e in family]
    exact_report = affine_rank_exact(
        VectorFamily(kind, family_rows(kind, [x.alpha for x in exact], [x.f for x in exact])))
    fs = [f_vector(p) for p in polys]
    n = samples
    for _ in range(max_sample_doublings + 1):
        alphas = [alpha_vector_estimate(p, n, s, threads=threads).alpha
                  for p, s in zip(polys, seeds)]
        report = affine_rank_numeric(VectorFamily(kind, family_rows(kind, alphas, fs)))
        if report.affine_dim >= exact_report.affine_dim:
            break
        n *= 2
    return BackoffResult(
        limits=family, realized=realized, polytopes=polys, alphas=alphas, f_vectors=fs,
        within_epsilon=[_deviation(a, x.alpha, cfg.sigma_allowance) < epsilon
                        for a, x in zip(alphas, exact)],
        f_match=[f == x.f for f, x in zip(fs, exact)],
        report=report, exact_report=exact_report, samples=n)


# --------------------------------------------------------------------------
# theorem drivers


def _gamma_symmetric(alpha: AlphaVector) -> bool:
    g = gamma_from_alpha(alpha)
    d = alpha.d
    return all(g[i] + g[d - i] == 1 for i in range(d + 1))


def verify_theorem5(d: int, mode: str = "exact", samples: int = DEFAULT_SAMPLES,
                    seed: int = 0, epsilon: float = 0.05, threads: int = 1) -> Verdict:
    fam = family_theorem5(d)
    names = [format_expr(e) for e in fam]
    exact = [exact_alpha_f(e) for e in fam]
    checks = {"gamma_symmetry": all(_gamma_symmetric(x.alpha) for x in exact)}
    if mode == "exact":
        report = affine_rank_exact(VectorFamily("alpha", [tuple(x.alpha) for x in exact], names))
    elif mode == "numeric":
        res = lemma4_backoff(fam, epsilon, samples, seed, kind="alpha", threads=threads)
        report = res.report
        checks.update(within_epsilon=all(res.within_epsilon), f_match=all(res.f_match))
        names = [format_expr(e) for e in res.realized]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Verdict("5", d, (d - 1) // 2, report, names, checks)


def verify_theorem8(d: int, mode: str = "exact", samples: int = DEFAULT_SAMPLES,
                    seed: int = 0, epsilon: float = 0.05, threads: int = 1) -> Verdict:
    fam = family_theorem8(d)
    names = [format_expr(e) for e in fam]
    checks = {}
    if mode == "exact":
        exact = [exact_alpha_f(e) for e in fam]
        rows = family_rows("gamma_f", [x.alpha for x in exact], [x.f for x in exact])
        report = affine_rank_exact(VectorFamily("gamma_f", rows, names))
    elif mode == "numeric":
        res = lemma4_backoff(fam, epsilon, samples, seed, kind="gamma_f", threads=threads)
        report = res.report
        checks.update(within_epsilon=all(res.within_epsilon), f_match=all(res.f_match))
        names = [format_expr(e) for e in res.realized]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Verdict("8", d, 2 * d - 3, report, names, checks)


def theorem6_extras(d: int) -> list:
    """Simplicial non-simplices used for the combinatorial directions."""
    if d == 3:
        return [octahedron()]
    return [cyclic_polytope(d, n) for n in range(d + 2, d + 2 + d // 2)]


def _is_simplicial(p: VPolytope) -> bool:
    return all(len(fa.vertex_set) == p.dim for fa in p.facets)


def verify_theorem6(d: int, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                    threads: int = 1, extras=None) -> Verdict:
    if d < 2:
        raise ValueError("d must be >= 2")
    simplices = family_theorem5(d)
    extras = theorem6_extras(d) if extras is None else list(extras)
    exact = [exact_alpha_f(e) for e in simplices]
    rows = family_rows("gamma_h", [x.alpha for x in exact], [x.f for x in exact])
    names = [format_expr(e) for e in simplices]
    fs = [f_vector(p) for p in extras]
    for i, p in enumerate(extras):
        est = alpha_vector_estimate(p, samples, derive_seed(seed, (i,)), threads=threads)
        rows += family_rows("gamma_h", [est.alpha], [fs[i]])
        names.append(p.name or f"extra[{i}]")
    h_rows = [tuple(h_from_f(exact[0].f))] + [tuple(h_from_f(f)) for f in fs]
    checks = {
        "extras_simplicial": all(_is_simplicial(p) for p in extras),
        "h_independent": linalg.rank([[a - b for a, b in zip(r, h_rows[0])]
                                      for r in h_rows[1:]]) == len(extras),
    }
    report = affine_rank_numeric(VectorFamily("gamma_h", rows, names))
    return Verdict("6", d, d - 1, report, names, checks)


# --------------------------------------------------------------------------
# lemma checks


@dataclass(frozen=True)
class LemmaCheck:
    before: object
    after: object
    ok: bool


def lemma5_check(rows) -> LemmaCheck:
    """Linear rank of ``(gamma, 1)`` rows before and after the P-infinity map."""
    ext = [tuple(r) + (Fraction(1),) for r in rows]
    mapped = [tuple(apply_pinf_matrix(r, extend=False)) for r in ext]
    before = linalg.rank(ext)
    after = linalg.rank(mapped)
    return LemmaCheck(before, after, before == after)


def _alt_sum(xs) -> int:
    return sum((-1) ** i * x for i, x in enumerate(xs))


def lemma7_check(q) -> LemmaCheck:
    """Alternating sums of pyramid-inverse images for ``Q`` and ``B* Q``."""
    if isinstance(q, FVector):
        f_q = q
        f_star = f_step(Prism(Point()), q)
    elif isinstance(q, VPolytope):
        f_q = f_vector(q)
        f_star = f_vector(prism(q))
    else:
        e = as_expr(q)
        try:
            poly = build_geometric(e)
        except NotRealizable:
            f_q, f_star = exact_f(e), exact_f(Prism(e))
        else:
            f_q, f_star = f_vector(poly), f_vector(prism(poly))
    before = _alt_sum(apply_pyramid_matrix_inverse(f_q.extended())[1:])
    after = _alt_sum(apply_pyramid_matrix_inverse(f_star.extended())[1:])
    return LemmaCheck(before, after, after == before + 1)

