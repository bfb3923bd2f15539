"""Exact rational V-polytopes.

Facets are found by brute force over vertex subsets with exact arithmetic;
faces are intersections of facet vertex sets.  Targets desk-scale inputs
(up to roughly 16 vertices in dimension 6).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from . import linalg
from .vecalg import FVector

__all__ = [
    "Facet", "FaceLattice", "TangentCone", "VPolytope", "FullFaceError",
    "affine_dim", "facet_enumeration", "face_lattice", "f_vector", "tangent_cone",
    "polytope_to_json", "polytope_from_json", "load_polytope", "save_polytope",
]


class FullFaceError(ValueError):
    """Raised when a tangent cone is requested at the polytope itself."""


def _frac_point(p) -> tuple:
    return tuple(Fraction(x) for x in p)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v) -> tuple:
    """Scale a nonzero rational vector to coprime integers, keeping its direction."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(Fraction(x // g) for x in ints)


def affine_dim(points) -> int:
    return linalg.affine_rank([_frac_point(p) for p in points])


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``<normal, x> <= offset`` with its vertex indices.

    ``normal`` is outward, lies in the direction space of the polytope's
    affine hull and has coprime integer entries.
    """

    normal: tuple
    offset: Fraction
    vertex_set: frozenset


@dataclass
class FaceLattice:
    """Faces graded by dimension ``-1..d``, each a frozenset of vertex indices."""

    faces: dict
    facets_of: dict

    @property
    def d(self) -> int:
        return max(self.faces)

    def grade(self, i: int) -> list:
        return self.faces.get(i, [])

    def all_faces(self):
        for i in sorted(self.faces):
            yield from self.faces[i]

    def dim_of(self, face) -> int:
        for i, fs in self.faces.items():
            if face in fs:
                return i
        raise KeyError(f"not a face: {sorted(face)}")


@dataclass(frozen=True)
class TangentCone:
    apex_face: frozenset
    halfspaces: tuple           # ((normal, offset), ...), one per incident facet
    base_point: tuple


class VPolytope:
    """Convex hull of distinct, extreme, exact rational vertices.

    Construction rejects repeated and non-extreme points; facets are computed
    eagerly (they are needed for the extremeness test), the face lattice on
    first use.
    """

    def __init__(self, vertices, name: Optional[str] = None):
        verts = tuple(_frac_point(v) for v in vertices)
        if not verts:
            raise ValueError("a polytope needs at least one vertex")
        dims = {len(v) for v in verts}
        if len(dims) != 1:
            raise ValueError(f"vertices have mixed ambient dimensions {sorted(dims)}")
        if len(set(verts)) != len(verts):
            raise ValueError("repeated vertices")
        self.vertices = verts
        self.ambient_dim = dims.pop()
        self.name = name
        self._basis = _direction_basis(verts)
        self.dim = len(self._basis)
        self.facets = _enumerate_facets(verts, self._basis)
        self._check_extreme()
        self._lattice = None

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<VPolytope{label} dim={self.dim} n={len(self.vertices)} ambient={self.ambient_dim}>"

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def direction_basis(self) -> list:
        """Rational basis of the linear space parallel to the affine hull."""
        return [list(b) for b in self._basis]

    @property
    def lattice(self) -> FaceLattice:
        if self._lattice is None:
            self._lattice = _build_lattice(self)
        return self._lattice

    def _check_extreme(self):
        if self.dim == 0:
            return
        everything = frozenset(range(len(self.vertices)))
        for i, v in enumerate(self.vertices):
            common = everything
            for fa in self.facets:
                if i in fa.vertex_set:
                    common = common & fa.vertex_set
            if common != {i}:
                raise ValueError(f"vertex {i} = {[str(x) for x in v]} is not extreme")


def _direction_basis(verts) -> list:
    p0 = verts[0]
    basis = []
    for v in verts[1:]:
        diff = [a - b for a, b in zip(v, p0)]
        if linalg.rank(basis + [diff]) > len(basis):
            basis.append(diff)
    return basis


def _enumerate_facets(verts, basis) -> list:
    k = len(basis)
    if k == 0:
        return []
    # common positive scaling keeps all dot products integral
    den = 1
    for v in verts:
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [tuple(int(x * den) for x in v) for v in verts]
    ibasis = [_primitive(b) for b in basis]
    n = len(verts)
    found = []
    seen = set()
    for subset in combinations(range(n), k):
        if any(set(subset) <= fs for fs in seen):
            continue
        s0 = ints[subset[0]]
        m = [[_dot(b, [a - c for a, c in zip(ints[s], s0)]) for b in ibasis] for s in subset[1:]]
        ns = linalg.nullspace(m, n_cols=k)
        if len(ns) != 1:
            continue
        normal = [sum(c * b[j] for c, b in zip(ns[0], ibasis)) for j in range(len(s0))]
        normal = _primitive(normal)
        ref = _dot(normal, s0)
        vals = [_dot(normal, w) - ref for w in ints]
        if all(x <= 0 for x in vals):
            pass
        elif all(x >= 0 for x in vals):
            normal = tuple(-x for x in normal)
        else:
            continue
        vs = frozenset(i for i, x in enumerate(vals) if x == 0)
        seen.add(vs)
        found.append(Facet(normal, _dot(normal, verts[subset[0]]), vs))
    found.sort(key=lambda fa: sorted(fa.vertex_set))
    return found


def facet_enumeration(p: VPolytope) -> list:
    return list(p.facets)


def _build_lattice(p: VPolytope) -> FaceLattice:
    full = frozenset(range(p.n_vertices))
    facet_sets = [fa.vertex_set for fa in p.facets]
    faces = {full}
    frontier = set(facet_sets)
    faces |= frontier
    while frontier:
        new = set()
        for a in frontier:
            for b in facet_sets:
                c = a & b
                if c not in faces:
                    new.add(c)
        faces |= new
        frontier = {c for c in new if c}
    faces.add(frozenset())
    graded = {}
    for fc in faces:
        dim = -1 if not fc else affine_dim([p.vertices[i] for i in fc])
        graded.setdefault(dim, []).append(fc)
    for dim in graded:
        graded[dim].sort(key=sorted)
    facets_of = {
        fc: frozenset(j for j, fs in enumerate(facet_sets) if fc <= fs and fc != full)
        for fc in faces
    }
    return FaceLattice(dict(sorted(graded.items())), facets_of)


def face_lattice(p: VPolytope) -> FaceLattice:
    return p.lattice


def f_vector(p: VPolytope) -> FVector:
    lat = p.lattice
    return FVector(tuple(len(lat.grade(i)) for i in range(p.dim + 1)))


def tangent_cone(p: VPolytope, face) -> TangentCone:
    face = frozenset(face)
    if not face:
        raise ValueError("the empty face has no tangent cone")
    if len(face) == p.n_vertices:
        raise FullFaceError("interior angle at P itself is 1; no cone")
    incident = p.lattice.facets_of.get(face)
    if incident is None:
        raise ValueError(f"{sorted(face)} is not a face")
    pts = [p.vertices[i] for i in sorted(face)]
    base = tuple(sum(c) / len(pts) for c in zip(*pts))
    hs = tuple((p.facets[j].normal, p.facets[j].offset) for j in sorted(incident))
    return TangentCone(face, hs, base)


# --------------------------------------------------------------------------
# file format


def polytope_to_json(p: VPolytope) -> dict:
    return {
        "ambient_dim": p.ambient_dim,
        "vertices": [[str(x) for x in v] for v in p.vertices],
    }


def polytope_from_json(data: dict) -> VPolytope:
    verts = [[Fraction(x) for x in v] for v in data["vertices"]]
    p = VPolytope(verts)
    if p.ambient_dim != int(data["ambient_dim"]):
        raise ValueError(f"ambient_dim {data['ambient_dim']} does not match vertex length {p.ambient_dim}")
    return p


def save_polytope(p: VPolytope, path):
    with open(path, "w") as fh:
        json.dump(polytope_to_json(p), fh, indent=1)
        fh.write("\n")


def load_polytope(path) -> VPolytope:
    with open(path) as fh:
        return polytope_from_json(json.load(fh))
