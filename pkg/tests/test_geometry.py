import json
import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from polyangle.constructions import cube, cyclic_polytope, glued_tetra_bipyramid, regular_tetrahedron
from polyangle.geometry import (FullFaceError, VPolytope, affine_dim, facet_enumeration,
                                f_vector, load_polytope, polytope_from_json, polytope_to_json,
                                save_polytope, tangent_cone)
from oracles import gale_facets


def test_affine_dim():
    assert affine_dim([(0, 0), (1, 0), (1, 1), (0, 1)]) == 2
    assert affine_dim([(3, 4, 5)]) == 0
    assert affine_dim(cube(3).vertices) == 3


def test_facets_cube_and_simplex():
    fs = facet_enumeration(cube(3))
    assert len(fs) == 6 and all(len(fa.vertex_set) == 4 for fa in fs)
    fs = facet_enumeration(regular_tetrahedron())
    assert len(fs) == 4 and all(len(fa.vertex_set) == 3 for fa in fs)


@pytest.mark.parametrize("d,n", [(4, 7), (4, 6), (3, 6), (5, 8), (2, 6)])
def test_cyclic_facets_match_gale_evenness(d, n):
    got = {fa.vertex_set for fa in facet_enumeration(cyclic_polytope(d, n))}
    assert got == gale_facets(d, n)


def test_cyclic_4_7_has_14_simplex_facets():
    fs = facet_enumeration(cyclic_polytope(4, 7))
    assert len(fs) == 14 and all(len(fa.vertex_set) == 4 for fa in fs)


def test_f_vectors():
    assert tuple(f_vector(cube(3))) == (8, 12, 6, 1)
    assert tuple(f_vector(regular_tetrahedron())) == (4, 6, 4, 1)
    assert tuple(f_vector(glued_tetra_bipyramid())) == (5, 9, 6, 1)


def test_facet_invariants():
    for p in (cube(3), glued_tetra_bipyramid(), cyclic_polytope(4, 6)):
        for fa in p.facets:
            vals = [sum(a * b for a, b in zip(fa.normal, v)) for v in p.vertices]
            assert all(x <= fa.offset for x in vals)
            assert {i for i, x in enumerate(vals) if x == fa.offset} == fa.vertex_set
            assert all(x.denominator == 1 for x in fa.normal)


def test_facets_invariant_under_vertex_permutation():
    p = cyclic_polytope(4, 7)
    rng = random.Random(0)
    perm = list(range(p.n_vertices))
    rng.shuffle(perm)
    q = VPolytope([p.vertices[i] for i in perm])
    mapped = {frozenset(perm[i] for i in fa.vertex_set) for fa in q.facets}
    assert mapped == {fa.vertex_set for fa in p.facets}


def test_lower_dimensional_embedding():
    # a square in a plane of R^3
    sq = VPolytope([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)])
    assert sq.dim == 2 and tuple(f_vector(sq)) == (4, 4, 1)
    assert len(facet_enumeration(VPolytope([(1, 2)]))) == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        VPolytope([(0, 0), (1, 0), (0, 0)])
    with pytest.raises(ValueError):
        VPolytope([(0, 0), (2, 0), (0, 2), (F(1, 2), F(1, 2))])
    with pytest.raises(ValueError):
        VPolytope([(0, 0), (1, 0, 0)])


def test_euler_on_lattices():
    for p in (cube(4), cyclic_polytope(5, 8), glued_tetra_bipyramid()):
        f = f_vector(p)
        assert sum((-1) ** i * x for i, x in enumerate(f)) == 1


def test_lattice_closed_under_intersection():
    lat = cyclic_polytope(3, 6).lattice
    faces = set(lat.all_faces())
    assert frozenset() in faces and frozenset(range(6)) in faces
    for a, b in combinations(faces, 2):
        assert a & b in faces


def test_simplicial_subsets_are_faces():
    p = cyclic_polytope(4, 7)
    faces = set(p.lattice.all_faces())
    for fa in p.facets:
        for k in range(1, 4):
            for sub in combinations(sorted(fa.vertex_set), k):
                assert frozenset(sub) in faces


def test_tangent_cones():
    sq = VPolytope([(0, 0), (1, 0), (1, 1), (0, 1)])
    facet = sq.facets[0].vertex_set
    assert len(tangent_cone(sq, facet).halfspaces) == 1
    cone = tangent_cone(sq, {0})
    (n1, _), (n2, _) = cone.halfspaces
    assert sum(a * b for a, b in zip(n1, n2)) == 0
    assert cone.base_point == (0, 0)
    c = cube(3)
    edge = c.lattice.grade(1)[0]
    (n1, _), (n2, _) = tangent_cone(c, edge).halfspaces
    assert sum(a * b for a, b in zip(n1, n2)) == 0
    with pytest.raises(FullFaceError):
        tangent_cone(c, range(8))


def test_file_round_trip(tmp_path):
    p = glued_tetra_bipyramid()
    path = tmp_path / "b.json"
    save_polytope(p, path)
    q = load_polytope(path)
    assert q.vertices == p.vertices
    text = path.read_text()
    save_polytope(q, tmp_path / "c.json")
    assert (tmp_path / "c.json").read_text() == text
    assert json.loads(text)["vertices"][4] == ["-5/3", "-5/3", "-5/3"]
    with pytest.raises(ValueError):
        polytope_from_json({"ambient_dim": 2, "vertices": [["0", "0", "0"]]})
    assert polytope_to_json(q)["ambient_dim"] == 3
