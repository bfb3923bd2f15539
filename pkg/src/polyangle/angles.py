"""Interior angles of faces and their per-dimension sums.

Two routes:

* Monte Carlo over the tangent cone: isotropic Gaussian directions in the
  affine hull, counted when they satisfy every incident facet inequality.
* Closed forms: facets (1/2), faces of codimension 2 (planar / dihedral angle
  between the two incident facet normals) and faces of codimension 3 (area of
  the spherical polygon cut out by the normal slice of the cone, from its
  dihedral angles, which are the angles at the codimension-2 faces above).

Per-face seeds come from :func:`derive_seed`, so results do not depend on the
order in which faces are visited or on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .geometry import VPolytope, tangent_cone
from .vecalg import AlphaVector, Estimate

__all__ = [
    "AngleEstimate", "AlphaEstimateVector", "UnsupportedClosedForm",
    "DEFAULT_SAMPLES", "derive_seed", "splitmix64",
    "interior_angle_mc", "interior_angle_exact_lowdim",
    "alpha_vector_estimate", "alpha_vector_closed_form", "gram_check_driver",
]

DEFAULT_SAMPLES = 100_000
_CHUNK = 1 << 16
_MASK = (1 << 64) - 1


class UnsupportedClosedForm(ValueError):
    pass


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(seed: int, face) -> int:
    """64-bit seed for one face: splitmix64 folded over its sorted vertex indices."""
    x = splitmix64(seed & _MASK)
    x = splitmix64(x ^ len(face))
    for i in sorted(face):
        x = splitmix64(x ^ (i + 1))
    return x


@dataclass(frozen=True)
class AngleEstimate:
    mean: float
    std_error: float
    n_samples: int = 0
    seed: Optional[int] = None
    exact: Optional[Fraction] = None

    def scalar(self):
        """As a vecalg scalar: Fraction if known exactly, else an Estimate."""
        if self.exact is not None:
            return self.exact
        return Estimate(self.mean, self.std_error)

    @classmethod
    def of_exact(cls, value) -> "AngleEstimate":
        value = Fraction(value)
        return cls(float(value), 0.0, exact=value)


# --------------------------------------------------------------------------
# Monte Carlo


def _frame(p: VPolytope) -> np.ndarray:
    """Orthonormal basis (ambient x dim) of the direction space of the hull."""
    if p.dim == p.ambient_dim:
        return np.eye(p.ambient_dim)
    basis = np.array([[float(x) for x in b] for b in p.direction_basis]).T
    q, _ = np.linalg.qr(basis)
    return q


def _cone_normals(p: VPolytope, face) -> np.ndarray:
    cone = tangent_cone(p, face)
    normals = np.array([[float(x) for x in n] for n, _ in cone.halfspaces])
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return normals @ _frame(p)


def interior_angle_mc(p: VPolytope, face, n_samples: int = DEFAULT_SAMPLES,
                      seed: int = 0) -> AngleEstimate:
    face = frozenset(face)
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    if len(face) == p.n_vertices:
        return AngleEstimate.of_exact(1)
    if p.lattice.dim_of(face) == p.dim - 1:
        return AngleEstimate.of_exact(Fraction(1, 2))
    normals = _cone_normals(p, face)
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    left = n_samples
    while left:
        m = min(left, _CHUNK)
        # direction length is irrelevant to the sign test, so no normalization
        z = rng.standard_normal((m, p.dim))
        hits += int(np.count_nonzero(np.all(z @ normals.T <= 0.0, axis=1)))
        left -= m
    mean = hits / n_samples
    se = math.sqrt(mean * (1 - mean) / n_samples)
    return AngleEstimate(mean, se, n_samples, seed)


# --------------------------------------------------------------------------
# closed forms

# cos^2 of the angle between normals -> angle / pi, for acute angles.
# Niven: these are the only rational cos^2 with a rational angle / pi.
_RATIONAL_ANGLES = {
    Fraction(0): Fraction(1, 2),
    Fraction(1, 4): Fraction(1, 3),
    Fraction(1, 2): Fraction(1, 4),
    Fraction(3, 4): Fraction(1, 6),
}


def _ridge_angle(n1, n2) -> AngleEstimate:
    """Interior angle fraction of the wedge ``<n1,x> <= 0, <n2,x> <= 0``."""
    dot = sum(a * b for a, b in zip(n1, n2))
    nn = sum(a * a for a in n1) * sum(b * b for b in n2)
    cos2 = dot * dot / nn
    if cos2 in _RATIONAL_ANGLES:
        r = _RATIONAL_ANGLES[cos2]
        between = r if dot >= 0 else 1 - r
        return AngleEstimate.of_exact((1 - between) / 2)
    between = math.atan2(math.sqrt(float(nn - dot * dot)), float(dot))
    return AngleEstimate((math.pi - between) / (2 * math.pi), 0.0)


def interior_angle_exact_lowdim(p: VPolytope, face) -> AngleEstimate:
    """Closed-form interior angle.

    Supported: the polytope itself and faces of codimension 1, 2 or 3.
    """
    face = frozenset(face)
    if len(face) == p.n_vertices:
        return AngleEstimate.of_exact(1)
    lat = p.lattice
    k = lat.dim_of(face)
    if k == p.dim - 1:
        return AngleEstimate.of_exact(Fraction(1, 2))
    if k == p.dim - 2:
        n1, n2 = (p.facets[j].normal for j in sorted(lat.facets_of[face]))
        return _ridge_angle(n1, n2)
    if k == p.dim - 3:
        ridges = [g for g in lat.grade(k + 1) if face <= g]
        parts = [interior_angle_exact_lowdim(p, g) for g in ridges]
        # spherical polygon area: sum of its angles minus (m - 2) pi, over 4 pi
        m = len(ridges)
        if all(a.exact is not None for a in parts):
            return AngleEstimate.of_exact((2 * sum(a.exact for a in parts) - (m - 2)) / 4)
        return AngleEstimate((2 * sum(a.mean for a in parts) - (m - 2)) / 4, 0.0)
    raise UnsupportedClosedForm(
        f"no closed form for a {k}-face of a {p.dim}-polytope")


def _polygon_vertex_sum(p: VPolytope):
    """Exact vertex-angle sum of a polygon in the plane, or None.

    The product of ``(a.b) + i|a x b|`` over the vertices, with ``a, b`` the
    edge vectors, has argument equal to the angle sum; when it is real the sum
    is a multiple of pi and the multiple is read from the float sum.
    """
    if p.dim != 2 or p.ambient_dim != 2:
        return None
    lat = p.lattice
    re, im = Fraction(1), Fraction(0)
    total = 0.0
    for v in lat.grade(0):
        (i,) = v
        nbrs = [next(iter(e - v)) for e in lat.grade(1) if v <= e]
        a = [x - y for x, y in zip(p.vertices[nbrs[0]], p.vertices[i])]
        b = [x - y for x, y in zip(p.vertices[nbrs[1]], p.vertices[i])]
        dot = a[0] * b[0] + a[1] * b[1]
        cross = abs(a[0] * b[1] - a[1] * b[0])
        re, im = re * dot - im * cross, re * cross + im * dot
        total += math.atan2(float(cross), float(dot))
    if im != 0:
        return None
    k = round(total / math.pi)
    if (k % 2 == 0) != (re > 0):
        return None
    return Fraction(k, 2)


# --------------------------------------------------------------------------
# angle sums


@dataclass
class AlphaEstimateVector:
    alpha: AlphaVector
    per_face: dict = field(default_factory=dict)
    n_samples: int = 0
    seed: int = 0

    @property
    def d(self) -> int:
        return self.alpha.d

    def to_json(self) -> dict:
        rows = []
        for x in self.alpha:
            if isinstance(x, Estimate):
                rows.append({"mean": x.mean, "se": x.se, "exact": None})
            else:
                rows.append({"mean": float(x), "se": 0.0, "exact": str(Fraction(x))})
        return {"alpha": rows, "samples_per_face": self.n_samples, "seed": self.seed}


def _grade_sum(estimates):
    if all(a.exact is not None for a in estimates):
        return sum((a.exact for a in estimates), Fraction(0))
    mean = math.fsum(a.mean for a in estimates)
    se = math.sqrt(math.fsum(a.std_error ** 2 for a in estimates))
    return Estimate(mean, se)


def _closed_form_applies(p: VPolytope, k: int) -> bool:
    # vertex sums are always sampled once dim >= 3, so the sampler stays in use
    return k >= p.dim - 2 or (k == p.dim - 3 and k >= 1)


def alpha_vector_estimate(p: VPolytope, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                          closed_forms: bool = True, threads: int = 1) -> AlphaEstimateVector:
    """Angle sums with error bars.

    Facets and ``P`` itself are always exact.  With ``closed_forms`` faces of
    codimension 2, and non-vertex faces of codimension 3, use closed forms;
    everything else is sampled with ``n_samples`` directions per face.
    """
    lat = p.lattice
    jobs = []
    per_face = {}
    for k in range(p.dim + 1):
        for face in lat.grade(k):
            if k >= p.dim - 1 or (closed_forms and _closed_form_applies(p, k)):
                per_face[face] = interior_angle_exact_lowdim(p, face)
            else:
                jobs.append(face)

    def run(face):
        return interior_angle_mc(p, face, n_samples, derive_seed(seed, face))

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(face) for face in jobs]
    per_face.update(zip(jobs, results))

    entries = [_grade_sum([per_face[fc] for fc in lat.grade(k)]) for k in range(p.dim + 1)]
    if closed_forms and p.dim == 2:
        exact0 = _polygon_vertex_sum(p)
        if exact0 is not None:
            entries[0] = exact0
    return AlphaEstimateVector(AlphaVector(tuple(entries)), per_face, n_samples, seed)


def alpha_vector_closed_form(p: VPolytope) -> AlphaVector:
    """Angle sums of a polytope of dimension <= 3 from closed forms only."""
    if p.dim > 3:
        raise UnsupportedClosedForm("closed forms cover dimension <= 3 only")
    lat = p.lattice
    entries = [_grade_sum([interior_angle_exact_lowdim(p, fc) for fc in lat.grade(k)])
               for k in range(p.dim + 1)]
    if p.dim == 2:
        exact0 = _polygon_vertex_sum(p)
        if exact0 is not None:
            entries[0] = exact0
    return AlphaVector(tuple(entries))


def gram_check_driver(p: VPolytope, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      closed_forms: bool = True, threads: int = 1):
    from .relations import gram_residual

    est = alpha_vector_estimate(p, n_samples, seed, closed_forms=closed_forms, threads=threads)
    return gram_residual(est.alpha)
