from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeUniverse, Schema, canonical_cover, declared_cover
from fdtopo.homology import (
    SimplicialComplex,
    boundary_matrix,
    dependency_complex,
    faces,
    h1_cycle_basis,
    induced,
    intersection,
    is_snf,
    mv_exactness_audit,
    reduced_betti_profile,
    union,
)

# -- oracle: explicit enumeration of chain vectors over GF(2) -------------------------------


def oracle_faces(maximal: list[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    found: set[tuple[int, ...]] = set()
    for m in maximal:
        for r in range(1, len(m) + 1):
            found.update(combinations(sorted(m), r))
    top = max((len(f) for f in found), default=0)
    return [sorted(f for f in found if len(f) == n + 1) for n in range(top)]


def oracle_matrix(rows: list[tuple[int, ...]], cols: list[tuple[int, ...]]) -> np.ndarray:
    index = {f: i for i, f in enumerate(rows)}
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, f in enumerate(cols):
        for facet in combinations(f, len(f) - 1):
            m[index[facet], j] = 1
    return m


def all_vectors(m: int) -> np.ndarray:
    codes = np.arange(1 << m, dtype=np.int64)
    return (codes[:, None] >> np.arange(m)) & 1


def kernel_dim(mat: np.ndarray) -> int:
    vecs = all_vectors(mat.shape[1])
    zero = ~((vecs @ mat.T) % 2).any(axis=1)
    return int(np.log2(int(zero.sum())))


def image_dim(mat: np.ndarray) -> int:
    if mat.shape[1] == 0:
        return 0
    imgs = (all_vectors(mat.shape[1]) @ mat.T) % 2
    packed = imgs @ (1 << np.arange(mat.shape[0], dtype=np.int64))
    return int(np.log2(len(np.unique(packed))))


def oracle_betti(maximal: list[tuple[int, ...]]) -> list[int]:
    """Reduced Betti numbers from counting kernel and image vectors one by one."""
    fl = oracle_faces(maximal)
    # augmented boundary on vertices: every vertex maps to the single (-1)-cell
    mats = [np.ones((1, len(fl[0])), dtype=np.int64)]
    mats += [oracle_matrix(fl[n - 1], fl[n]) for n in range(1, len(fl))]
    out = []
    for n in range(len(fl)):
        nxt = image_dim(mats[n + 1]) if n + 1 < len(fl) else 0
        out.append(kernel_dim(mats[n]) - nxt)
    return out


def gf2_rank(mat: np.ndarray) -> int:
    m = mat.copy() % 2
    r = 0
    for c in range(m.shape[1]):
        pivot = next((i for i in range(r, m.shape[0]) if m[i, c]), None)
        if pivot is None:
            continue
        m[[r, pivot]] = m[[pivot, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def padded(profile: tuple[int, ...], n: int) -> list[int]:
    return list(profile) + [0] * (n - len(profile))


HOLLOW = SimplicialComplex(3, [(0, 1), (1, 2), (0, 2)], "ABC")
FILLED = SimplicialComplex(3, [(0, 1, 2)], "ABC")
TETRA_BOUNDARY = SimplicialComplex(4, list(combinations(range(4), 3)))


def open_triangle_complex() -> SimplicialComplex:
    s = Schema.build("ABCD", [("A", "B"), ("B", "C"), ("AC", "D")])
    return dependency_complex(declared_cover(s), s.universe)


def named(k: SimplicialComplex, fs) -> list[str]:
    return ["".join(k.labels[v] for v in f) for f in fs]


def random_complex(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    gens = [tuple(rng.sample(range(n), rng.randint(1, min(4, n)))) for _ in range(rng.randint(1, 6))]
    return SimplicialComplex(n, gens)


# -- examples ---------------------------------------------------------------------------------


def test_dependency_complex_examples():
    k = open_triangle_complex()
    assert named(k, k.maximal_faces) == ["AB", "ACD", "BC"]

    u = AttributeUniverse(("A", "B"))
    assert named(dependency_complex([], u), dependency_complex([], u).maximal_faces) == ["A", "B"]

    s = Schema.build("ABC", [("A", "B"), ("B", "C"), ("C", "A"), ("AB", "C")])
    k2 = dependency_complex(declared_cover(s), s.universe)
    assert named(k2, k2.maximal_faces) == ["ABC"]


def test_support_only_leaves_out_unused_attributes():
    s = Schema.build("ABCE", [("A", "B")])
    full = dependency_complex(canonical_cover(s), s.universe)
    assert named(full, full.maximal_faces) == ["AB", "C", "E"]
    bare = dependency_complex(canonical_cover(s), s.universe, support_only=True)
    assert named(bare, bare.maximal_faces) == ["AB"]


def test_induced_examples():
    k = open_triangle_complex()
    u = AttributeUniverse(tuple("ABCD"))
    sub = induced(k, u.set("ABC"))
    # AC lies in ACD, so it survives next to AB and BC
    assert named(sub, sub.maximal_faces) == ["AB", "AC", "BC"]
    assert induced(k, u.full()) == k
    assert named(induced(k, u.set("AD")), induced(k, u.set("AD")).maximal_faces) == ["AD"]


def test_face_enumeration():
    k = open_triangle_complex()
    assert named(k, faces(k, 1)) == ["AB", "AC", "AD", "BC", "CD"]
    assert faces(k, 5) == []
    assert faces(HOLLOW, 2) == []
    assert k.f_vector() == (4, 5, 1)


def test_boundary_matrix_examples():
    m = boundary_matrix(HOLLOW, 1).to_dense()
    assert len(m) == 3 and len(m[0]) == 3
    assert all(sum(row[j] for row in m) == 2 for j in range(3))
    assert boundary_matrix(FILLED, 2).to_dense() == [[1], [1], [1]]
    k = open_triangle_complex()
    b2 = boundary_matrix(k, 2)
    rows = named(k, b2.rows)
    ones = [rows[i] for i, row in enumerate(b2.to_dense()) if row[0]]
    assert named(k, b2.cols) == ["ACD"] and ones == ["AC", "AD", "CD"]


def test_betti_examples():
    assert reduced_betti_profile(HOLLOW).reduced_betti[:2] == (0, 1)
    assert reduced_betti_profile(FILLED).b1 == 0
    p = reduced_betti_profile(TETRA_BOUNDARY)
    assert (p.b0, p.b1, p.b2) == (0, 0, 1)
    with pytest.raises(InvalidInput):
        reduced_betti_profile(SimplicialComplex(3, []))


def test_snf_examples():
    assert is_snf(FILLED).snf
    assert not is_snf(HOLLOW).snf
    assert is_snf(SimplicialComplex(1, [(0,)])).snf


def test_cycle_basis_examples():
    assert [named(HOLLOW, c) for c in h1_cycle_basis(HOLLOW)] == [["AB", "AC", "BC"]]
    assert h1_cycle_basis(FILLED) == []
    two = SimplicialComplex(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    cycles = h1_cycle_basis(two)
    assert sorted({v for e in c for v in e} for c in cycles) == [{0, 1, 2}, {3, 4, 5}]


def test_open_triangle_has_an_unfilled_triangle():
    k = open_triangle_complex()
    assert reduced_betti_profile(k).b1 == 1
    assert [named(k, c) for c in h1_cycle_basis(k)] == [["AB", "AC", "BC"]]


def test_mv_examples():
    rep = mv_exactness_audit(FILLED, FILLED)
    assert rep.passed and not rep.degenerate

    k1 = SimplicialComplex(3, [(0, 1), (1, 2)])
    k2 = SimplicialComplex(3, [(1, 2), (0, 2)])
    assert mv_exactness_audit(k1, k2).passed

    k1 = SimplicialComplex(3, [(0, 1), (1, 2)])
    k2 = SimplicialComplex(3, [(0, 2)])
    rep = mv_exactness_audit(k1, k2)
    assert rep.passed
    assert rep.profiles["A∪B"].b1 == 1 and rep.profiles["A∩B"].b0 == 1
    # the union's loop is sent by the connecting map onto the two-point intersection
    assert rep.ranks["d"][1] == 1


def test_mv_disjoint_degenerates_to_additivity():
    k1 = SimplicialComplex(6, [(0, 1), (1, 2), (0, 2)])
    k2 = SimplicialComplex(6, [(3, 4, 5)])
    rep = mv_exactness_audit(k1, k2)
    assert rep.degenerate and rep.passed


def test_mv_point_intersection_is_additive():
    k1 = SimplicialComplex(5, [(0, 1), (1, 2), (0, 2)])
    k2 = SimplicialComplex(5, [(2, 3), (3, 4), (2, 4)])
    rep = mv_exactness_audit(k1, k2)
    assert rep.passed
    assert rep.profiles["A∪B"].b1 == rep.profiles["A"].b1 + rep.profiles["B"].b1 == 2


def test_union_and_intersection():
    k1 = SimplicialComplex(3, [(0, 1), (1, 2)])
    k2 = SimplicialComplex(3, [(0, 2)])
    assert union(k1, k2) == HOLLOW
    assert intersection(k1, k2).maximal_faces == ((0,), (2,))


# -- properties ----------------------------------------------------------------------------


def test_boundary_of_boundary_vanishes():
    rng = random.Random(3)
    for _ in range(300):
        k = random_complex(rng)
        for n in range(2, k.dimension + 1):
            a = np.array(boundary_matrix(k, n - 1).to_dense(), dtype=np.int64)
            b = np.array(boundary_matrix(k, n).to_dense(), dtype=np.int64)
            assert not ((a @ b) % 2).any()


def test_euler_poincare_on_500_complexes():
    rng = random.Random(5)
    for _ in range(500):
        k = random_complex(rng)
        chi = sum((-1) ** n * c for n, c in enumerate(k.f_vector()))
        betti = reduced_betti_profile(k).reduced_betti
        assert chi == 1 + sum((-1) ** n * b for n, b in enumerate(betti))


def antichains(n_vertices: int, max_faces: int):
    subsets = [s for r in range(1, n_vertices + 1) for s in combinations(range(n_vertices), r)]
    for k in range(1, max_faces + 1):
        for family in combinations(subsets, k):
            sets = [set(f) for f in family]
            if any(a < b for a in sets for b in sets):
                continue
            yield family


def test_betti_matches_enumeration_oracle_exhaustively():
    checked = 0
    cache: dict[tuple, list[int]] = {}
    for family in antichains(5, 4):
        k = SimplicialComplex(5, family)
        # relabel by first appearance so isomorphic families share one oracle run
        order: dict[int, int] = {}
        for f in family:
            for v in f:
                order.setdefault(v, len(order))
        key = tuple(sorted(tuple(sorted(order[v] for v in f)) for f in family))
        if key not in cache:
            cache[key] = oracle_betti(list(key))
        want = cache[key]
        got = padded(reduced_betti_profile(k).reduced_betti, len(want))
        assert got == want, family
        checked += 1
    assert checked == 3426


def test_oracle_agrees_on_known_spaces():
    assert oracle_betti([(0, 1), (1, 2), (0, 2)]) == [0, 1]
    assert oracle_betti(list(combinations(range(4), 3))) == [0, 0, 1]
    assert oracle_betti([(0,), (1,)]) == [1]


def test_cycle_basis_is_a_basis_of_h1():
    rng = random.Random(9)
    for _ in range(300):
        k = random_complex(rng)
        if k.dimension < 1:
            continue
        cycles = h1_cycle_basis(k)
        assert len(cycles) == reduced_betti_profile(k).b1
        edges = list(faces(k, 1))
        d1 = np.array(boundary_matrix(k, 1).to_dense(), dtype=np.int64)
        vecs = np.zeros((len(edges), len(cycles)), dtype=np.int64)
        for j, c in enumerate(cycles):
            for e in c:
                vecs[edges.index(tuple(e)), j] = 1
            assert not ((d1 @ vecs[:, j]) % 2).any()
        d2 = np.array(boundary_matrix(k, 2).to_dense(), dtype=np.int64) if k.dimension >= 2 else np.zeros((len(edges), 0), dtype=np.int64)
        assert gf2_rank(np.hstack([d2, vecs])) == gf2_rank(d2) + len(cycles)


def test_cycle_basis_is_deterministic():
    k = SimplicialComplex(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 4), (4, 0)])
    assert h1_cycle_basis(k) == h1_cycle_basis(SimplicialComplex(5, list(reversed(k.maximal_faces))))


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=6),
    st.sets(st.integers(0, 6)),
    st.sets(st.integers(0, 6)),
)
def test_induced_composes(gens, w1, w2):
    k = SimplicialComplex(7, [tuple(g) for g in gens])
    assert induced(induced(k, w1), w2) == induced(k, w1 & w2)


def test_face_tables_are_shared_across_threads():
    from concurrent.futures import ThreadPoolExecutor

    k = SimplicialComplex(8, [tuple(range(8))])
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda n: k.faces(n % 8), range(64)))
    assert all(len(r) == len(list(combinations(range(8), (n % 8) + 1))) for n, r in enumerate(results))
