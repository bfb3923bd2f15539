"""Command-line front end.

    polyangle build    INPUT            vertex JSON of a realizable input
    polyangle vectors  INPUT            f, h, alpha, gamma and combined vectors
    polyangle check    INPUT            relation residuals (exit 2 on violation)
    polyangle span     --theorem T --d D

INPUT is a builtin name (tetra, cube(d), octahedron, glued_bipyramid,
cyclic(d,n)), a polytope JSON file, or a construction expression.
Exit status: 0 pass, 2 check mismatch, 1 usage or IO error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .angles import DEFAULT_SAMPLES, alpha_vector_estimate
from .constructions import (NotRealizable, ParseError, UnsupportedExact, build_geometric,
                            cube, cyclic_polytope, exact_alpha_f, format_expr,
                            glued_tetra_bipyramid, has_limits, octahedron, parse_expr,
                            regular_tetrahedron)
from .geometry import VPolytope, f_vector, load_polytope, polytope_to_json
from .relations import (dehn_sommerville_all, euler_residual, gamma_h_all, gram_residual,
                        judge, perles_all)
from .spans import verify_theorem5, verify_theorem6, verify_theorem8
from .vecalg import (Estimate, concat, gamma_from_alpha, h_from_f, mean_of, scalar_to_json,
                     se_of)

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2
RELATIONS = ("euler", "dehn_sommerville", "gram", "perles", "gamma_h")
MAX_D = {"exact": 8, "numeric": 5}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    epsilon: float = 0.05
    max_sigma: float = 4.0
    fmt: str = "json"
    out: Optional[str] = None
    threads: int = 1
    mode: Optional[str] = None
    relations: tuple = RELATIONS
    theorem: Optional[str] = None
    d: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not self.epsilon > 0:
            raise UsageError("--epsilon must be > 0")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")


# --------------------------------------------------------------------------
# inputs

_BUILTINS = {
    r"tetra": lambda: regular_tetrahedron(),
    r"octahedron": lambda: octahedron(),
    r"glued_bipyramid": lambda: glued_tetra_bipyramid(),
    r"cube(?:\((\d+)\))?": lambda d=None: cube(int(d) if d else 3),
    r"cyclic\((\d+),\s*(\d+)\)": lambda d, n: cyclic_polytope(int(d), int(n)),
}


def resolve_input(text: str):
    """Builtin polytope, polytope file or construction expression."""
    text = text.strip()
    for pattern, make in _BUILTINS.items():
        m = re.fullmatch(pattern, text)
        if m:
            try:
                return make(*m.groups())
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
    if os.path.isfile(text):
        try:
            return load_polytope(text)
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read polytope file {text}: {exc}") from exc
    try:
        return parse_expr(text)
    except ParseError as exc:
        raise UsageError(f"not a builtin, file or expression: {exc}") from exc


def _label(obj, text: str) -> str:
    return text if isinstance(obj, VPolytope) else format_expr(obj)


# --------------------------------------------------------------------------
# vectors


@dataclass
class VectorReport:
    source: str
    exact: bool
    f: object
    alpha: object
    samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def d(self) -> int:
        return self.f.d

    def named(self) -> dict:
        g = gamma_from_alpha(self.alpha)
        h = h_from_f(self.f)
        return {
            "f": tuple(self.f), "h": tuple(h), "alpha": tuple(self.alpha), "gamma": tuple(g),
            "gamma_f": tuple(concat(g, self.f)), "gamma_h": tuple(concat(g, h)),
        }


def compute_vectors(obj, label: str, cfg: RunConfig) -> VectorReport:
    mode = cfg.mode
    if not isinstance(obj, VPolytope):
        if mode != "numeric":
            try:
                res = exact_alpha_f(obj)
            except UnsupportedExact:
                if mode == "exact":
                    raise UsageError(f"{label}: no exact angle data (finite pyramid of dim >= 3)")
            else:
                return VectorReport(label, True, res.f, res.alpha)
        if has_limits(obj):
            raise UsageError(f"{label}: limiting expression cannot be sampled, use --mode exact")
        obj = build_geometric(obj)
    elif mode == "exact":
        raise UsageError("exact mode needs a construction expression")
    est = alpha_vector_estimate(obj, cfg.samples, cfg.seed, threads=cfg.threads)
    return VectorReport(label, False, f_vector(obj), est.alpha, cfg.samples, cfg.seed)


def _scalar_cells(x):
    """(value, se, exact) as CSV-ready cells."""
    if isinstance(x, Estimate):
        return repr(float(x.mean)), repr(float(x.se)), ""
    return repr(float(x)), repr(0.0), str(Fraction(x))


def _vectors_json(rep: VectorReport) -> dict:
    out = {"input": rep.source, "exact": rep.exact, "d": rep.d}
    for name, vec in rep.named().items():
        out[name] = [scalar_to_json(x) for x in vec]
    out["samples_per_face"] = rep.samples
    out["seed"] = rep.seed
    return out


def _vectors_csv(rep: VectorReport) -> list:
    rows = [("vector", "index", "value", "se", "exact")]
    for name, vec in rep.named().items():
        for i, x in enumerate(vec):
            rows.append((name, i) + _scalar_cells(x))
    return rows


# --------------------------------------------------------------------------
# relation checks


def relation_rows(rep: VectorReport, names=RELATIONS) -> list:
    out = []
    for name in names:
        if name == "euler":
            out.append(euler_residual(rep.f))
        elif name == "dehn_sommerville":
            out += dehn_sommerville_all(rep.f)
        elif name == "gram":
            out.append(gram_residual(rep.alpha))
        elif name == "perles":
            out += perles_all(rep.alpha, rep.f)
        elif name == "gamma_h":
            out += gamma_h_all(rep.alpha, h_from_f(rep.f))
        else:
            raise UsageError(f"unknown relation {name!r}")
    return out


def gamma_probe(alpha, max_sigma: float = 4.0) -> str:
    """'non-monotone' if some gamma_i exceeds gamma_{i+1} beyond noise."""
    g = gamma_from_alpha(alpha)
    for a, b in zip(list(g)[1:], list(g)[2:]):
        gap = mean_of(a) - mean_of(b)
        noise = max_sigma * (se_of(a) ** 2 + se_of(b) ** 2) ** 0.5
        if gap > max(noise, 1e-9):
            return "non-monotone"
    return "monotone"


# --------------------------------------------------------------------------
# commands


def cmd_build(cfg: RunConfig):
    obj = resolve_input(cfg.input)
    if not isinstance(obj, VPolytope):
        try:
            obj = build_geometric(obj)
        except NotRealizable as exc:
            raise UsageError(f"not realizable: {exc}") from exc
    f = f_vector(obj)
    if cfg.fmt == "json":
        body = _dump_json(polytope_to_json(obj))
    else:
        body = _dump_csv([tuple(f"x{i}" for i in range(obj.ambient_dim))]
                         + [tuple(str(x) for x in v) for v in obj.vertices])
    note = "f = (" + ",".join(str(x) for x in f) + ")"
    if cfg.out:
        _write(cfg.out, body)
        print(note)
    else:
        sys.stdout.write(body)
        print(note, file=sys.stderr)
    return EXIT_OK


def cmd_vectors(cfg: RunConfig):
    obj = resolve_input(cfg.input)
    rep = compute_vectors(obj, _label(obj, cfg.input), cfg)
    body = _dump_json(_vectors_json(rep)) if cfg.fmt == "json" else _dump_csv(_vectors_csv(rep))
    _emit(cfg, body)
    return EXIT_OK


def cmd_check(cfg: RunConfig):
    obj = resolve_input(cfg.input)
    rep = compute_vectors(obj, _label(obj, cfg.input), cfg)
    rows = relation_rows(rep, cfg.relations)
    verdicts = [judge(r, cfg.max_sigma) for r in rows]
    probe = gamma_probe(rep.alpha, cfg.max_sigma)
    if cfg.fmt == "json":
        table = [dict(r.to_json(), passed=ok) for r, ok in zip(rows, verdicts)]
        body = _dump_json({"input": rep.source, "exact": rep.exact, "residuals": table,
                           "gamma_probe": probe, "passed": all(verdicts)})
    else:
        table = [("relation", "k", "residual", "sigma_ratio", "passed")]
        for r, ok in zip(rows, verdicts):
            j = r.to_json()
            res = j["residual"] if isinstance(j["residual"], str) else repr(j["residual"])
            sr = "" if j["sigma_ratio"] is None else repr(j["sigma_ratio"])
            table.append((j["relation"], "" if j["k"] is None else j["k"], res, sr, ok))
        table.append(("gamma_probe", "", probe, "", ""))
        body = _dump_csv(table)
    _emit(cfg, body)
    return EXIT_OK if all(verdicts) else EXIT_MISMATCH


def cmd_span(cfg: RunConfig):
    theorem, d = cfg.theorem, cfg.d
    mode = "numeric" if theorem == "6" else (cfg.mode or "exact")
    low = 1 if theorem == "5" else 2
    if not low <= d <= MAX_D[mode]:
        raise UsageError(f"theorem {theorem} in {mode} mode supports {low} <= d <= {MAX_D[mode]}")
    common = dict(samples=cfg.samples, seed=cfg.seed, threads=cfg.threads)
    if theorem == "5":
        v = verify_theorem5(d, mode, epsilon=cfg.epsilon, **common)
    elif theorem == "8":
        v = verify_theorem8(d, mode, epsilon=cfg.epsilon, **common)
    else:
        v = verify_theorem6(d, **common)
    data = v.to_json()
    if cfg.fmt == "json":
        body = _dump_json(data)
    else:
        rows = [("key", "value")]
        for k, x in data.items():
            if isinstance(x, list):
                x = ";".join(x)
            elif isinstance(x, float):
                x = repr(x)
            rows.append((k, "" if x is None else x))
        body = _dump_csv(rows)
    _emit(cfg, body)
    return EXIT_OK if v.ok else EXIT_MISMATCH


# --------------------------------------------------------------------------
# output


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _dump_csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _write(path, body: str):
    try:
        with open(path, "w") as fh:
            fh.write(body)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _emit(cfg: RunConfig, body: str):
    if cfg.out:
        _write(cfg.out, body)
    else:
        sys.stdout.write(body)


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser):
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="MC directions per face")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $POLYANGLE_SEED, else 0)")
    p.add_argument("--epsilon", type=float, default=0.05, help="backoff tolerance")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--mode", choices=("exact", "numeric"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyangle", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write the vertices of a realizable input")
    p.add_argument("input")
    _common(p)

    p = sub.add_parser("vectors", help="angle-sum and face-count vectors")
    p.add_argument("input")
    _common(p)

    p = sub.add_parser("check", help="residuals of the linear relations")
    p.add_argument("input")
    p.add_argument("--relations", default=",".join(RELATIONS),
                   help="comma-separated subset of " + ",".join(RELATIONS))
    p.add_argument("--max-sigma", type=float, default=4.0,
                   help="sigma ratio accepted for sampled residuals")
    _common(p)

    p = sub.add_parser("span", help="dimension of a spanning family")
    p.add_argument("--theorem", required=True, choices=("5", "6", "8"))
    p.add_argument("--d", type=int, required=True)
    _common(p)
    return parser


def _seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("POLYANGLE_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"POLYANGLE_SEED must be an integer, got {env!r}") from exc


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    rel = RELATIONS
    if getattr(ns, "relations", None):
        rel = tuple(x.strip() for x in ns.relations.split(",") if x.strip())
        bad = [x for x in rel if x not in RELATIONS]
        if bad:
            raise UsageError(f"unknown relation(s): {', '.join(bad)}")
    return RunConfig(
        command=ns.command, input=getattr(ns, "input", None), samples=ns.samples,
        seed=_seed(ns.seed), epsilon=ns.epsilon, max_sigma=getattr(ns, "max_sigma", 4.0),
        fmt=ns.fmt, out=ns.out, threads=ns.threads, mode=ns.mode, relations=rel,
        theorem=getattr(ns, "theorem", None), d=getattr(ns, "d", None))


COMMANDS = {"build": cmd_build, "vectors": cmd_vectors, "check": cmd_check, "span": cmd_span}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"polyangle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
