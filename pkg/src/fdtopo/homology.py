"""Abstract simplicial complexes and their GF(2) homology.

A complex is stored by its maximal faces; faces of a given dimension are
generated on demand in lexicographic order, which fixes the row/column
layout of every boundary matrix.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from fdtopo import gf2
from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeSet, AttributeUniverse, CanonicalCover, FunctionalDependency

Simplex = tuple[int, ...]


def _mask(face: Iterable[int]) -> int:
    m = 0
    for v in face:
        m |= 1 << v
    return m


def _antichain(generators: Iterable[Iterable[int]]) -> tuple[Simplex, ...]:
    faces = {tuple(sorted(set(g))) for g in generators}
    faces.discard(())
    kept: list[tuple[int, Simplex]] = []
    for face in sorted(faces, key=lambda f: (-len(f), f)):
        m = _mask(face)
        if not any(m & k == m for k, _ in kept):
            kept.append((m, face))
    return tuple(sorted(f for _, f in kept))


class SimplicialComplex:
    """Downward-closed family of faces over vertices ``0..n_vertices-1``.

    ``labels`` names the vertices for reporting; it plays no part in equality.
    """

    def __init__(
        self,
        n_vertices: int,
        generators: Iterable[Iterable[int]] = (),
        labels: Sequence[str] | None = None,
    ):
        self.n_vertices = n_vertices
        self.maximal_faces = _antichain(generators)
        for face in self.maximal_faces:
            if face[0] < 0 or face[-1] >= n_vertices:
                raise InvalidInput(f"face {face} uses a vertex outside 0..{n_vertices - 1}")
        if labels is not None and len(labels) != n_vertices:
            raise InvalidInput("need exactly one label per vertex")
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n_vertices))
        self._face_cache: dict[int, tuple[Simplex, ...]] = {}
        self._lock = threading.Lock()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.maximal_faces == other.maximal_faces

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.maximal_faces))

    def __repr__(self) -> str:
        shown = ", ".join("{" + ",".join(self.labels[v] for v in f) + "}" for f in self.maximal_faces)
        return f"SimplicialComplex([{shown}])"

    @property
    def dimension(self) -> int:
        """Largest face dimension; -1 for the empty complex."""
        return max((len(f) - 1 for f in self.maximal_faces), default=-1)

    @property
    def is_empty(self) -> bool:
        return not self.maximal_faces

    def faces(self, n: int) -> tuple[Simplex, ...]:
        if n < 0:
            raise InvalidInput("face dimension must be >= 0")
        cached = self._face_cache.get(n)
        if cached is not None:
            return cached
        with self._lock:
            if n not in self._face_cache:
                found: set[Simplex] = set()
                for face in self.maximal_faces:
                    if len(face) > n:
                        found.update(combinations(face, n + 1))
                self._face_cache[n] = tuple(sorted(found))
            return self._face_cache[n]

    def all_faces(self) -> list[Simplex]:
        return [f for n in range(self.dimension + 1) for f in self.faces(n)]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces(n)) for n in range(self.dimension + 1))

    def contains(self, face: Iterable[int]) -> bool:
        m = _mask(face)
        return m != 0 and any(m & _mask(f) == m for f in self.maximal_faces)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for (v,) in self.faces(0)) if not self.is_empty else ()

    def name(self, face: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.labels[v] for v in face)


def dependency_complex(
    cover: CanonicalCover | Iterable[FunctionalDependency],
    universe: AttributeUniverse,
    *,
    support_only: bool = False,
) -> SimplicialComplex:
    """Complex generated by ``lhs ∪ {rhs}`` for every FD of ``cover``.

    Every attribute of ``universe`` is a vertex unless ``support_only`` is set,
    in which case attributes no FD mentions are left out.
    """
    generators: list[Iterable[int]] = []
    for f in cover:
        if f.universe != universe:
            raise InvalidInput(f"FD {f} belongs to a different universe")
        generators.append(f.support.positions)
    if not support_only:
        generators.extend((v,) for v in range(len(universe)))
    return SimplicialComplex(len(universe), generators, universe.names)


def _as_mask(w: AttributeSet | Iterable[int]) -> int:
    if isinstance(w, AttributeSet):
        return w.bits
    return _mask(w)


def induced(k: SimplicialComplex, w: AttributeSet | Iterable[int]) -> SimplicialComplex:
    """``K[W]``: the faces of ``k`` lying entirely inside ``w``."""
    wm = _as_mask(w)
    if wm >> k.n_vertices:
        raise InvalidInput("vertex subset reaches outside the complex's vertex range")
    gens = [tuple(v for v in face if wm >> v & 1) for face in k.maximal_faces]
    return SimplicialComplex(k.n_vertices, gens, k.labels)


def union(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    _same_vertices(k1, k2)
    return SimplicialComplex(k1.n_vertices, k1.maximal_faces + k2.maximal_faces, k1.labels)


def intersection(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    _same_vertices(k1, k2)
    gens = [tuple(sorted(set(a) & set(b))) for a in k1.maximal_faces for b in k2.maximal_faces]
    return SimplicialComplex(k1.n_vertices, gens, k1.labels)


def _same_vertices(k1: SimplicialComplex, k2: SimplicialComplex) -> None:
    if k1.n_vertices != k2.n_vertices:
        raise InvalidInput("complexes live on different vertex ranges")


def faces(k: SimplicialComplex, n: int) -> list[Simplex]:
    return list(k.faces(n))


@dataclass(frozen=True)
class BoundaryMatrix:
    """``∂_n`` over GF(2); ``columns[j]`` has bit ``i`` set iff ``rows[i]`` is a facet of ``cols[j]``."""

    dimension: int
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    columns: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dense(self) -> list[list[int]]:
        return [[c >> i & 1 for c in self.columns] for i in range(len(self.rows))]

    def rank(self) -> int:
        return gf2.rank(self.columns)


def _boundary_columns(k: SimplicialComplex, n: int) -> list[int]:
    row_index = {f: i for i, f in enumerate(k.faces(n - 1))}
    cols = []
    for face in k.faces(n):
        bits = 0
        for facet in combinations(face, n):
            bits |= 1 << row_index[facet]
        cols.append(bits)
    return cols


def boundary_matrix(k: SimplicialComplex, n: int) -> BoundaryMatrix:
    if n < 1:
        raise InvalidInput("boundary matrices start at dimension 1")
    return BoundaryMatrix(n, k.faces(n - 1), k.faces(n), tuple(_boundary_columns(k, n)))


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Betti numbers ``(b~0, b1, b2, ...)`` up to the complex's dimension, over GF(2)."""

    reduced_betti: tuple[int, ...]
    field: str = "GF(2)"

    def betti(self, n: int) -> int:
        return self.reduced_betti[n] if 0 <= n < len(self.reduced_betti) else 0

    @property
    def b0(self) -> int:
        return self.betti(0)

    @property
    def b1(self) -> int:
        return self.betti(1)

    @property
    def b2(self) -> int:
        return self.betti(2)

    def positive(self) -> tuple[int, ...]:
        return self.reduced_betti[1:]


def _require_nonempty(k: SimplicialComplex) -> None:
    if k.is_empty:
        raise InvalidInput("homology of the empty complex is not defined here")


def reduced_betti_profile(k: SimplicialComplex) -> HomologyProfile:
    _require_nonempty(k)
    top = k.dimension
    ranks = [0] + [gf2.rank(_boundary_columns(k, n)) for n in range(1, top + 1)] + [0]
    betti = []
    for n in range(top + 1):
        betti.append(len(k.faces(n)) - ranks[n] - ranks[n + 1])
    betti[0] -= 1
    return HomologyProfile(tuple(betti))


@dataclass(frozen=True)
class SnfVerdict:
    snf: bool
    profile: HomologyProfile


def is_snf(k: SimplicialComplex) -> SnfVerdict:
    """Homological acyclicity in positive degrees: every ``b_n`` with ``n >= 1`` vanishes."""
    profile = reduced_betti_profile(k)
    return SnfVerdict(all(b == 0 for b in profile.positive()), profile)


def h1_cycle_basis(k: SimplicialComplex) -> list[tuple[Simplex, ...]]:
    """Representatives of a basis of ``H_1`` as sets of edges.

    Fundamental cycles of a lexicographic spanning forest, taken in order of
    their closing edge and kept when independent of the boundaries and of the
    cycles already kept.
    """
    _require_nonempty(k)
    edges = k.faces(1)
    edge_index = {e: i for i, e in enumerate(edges)}
    parent = list(range(k.n_vertices))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    adjacency: dict[int, list[int]] = {v: [] for v in range(k.n_vertices)}
    closing: list[Simplex] = []
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            closing.append((a, b))
        else:
            parent[ra] = rb
            adjacency[a].append(b)
            adjacency[b].append(a)

    basis = gf2.XorBasis(_boundary_columns(k, 2)) if k.dimension >= 2 else gf2.XorBasis()
    cycles: list[tuple[Simplex, ...]] = []
    for a, b in closing:
        path = _tree_path(adjacency, a, b)
        cycle = [(a, b)] + [tuple(sorted(p)) for p in zip(path, path[1:])]
        vec = 0
        for e in cycle:
            vec |= 1 << edge_index[e]
        if basis.add(vec):
            cycles.append(tuple(sorted(cycle)))
    return cycles


def _tree_path(adjacency: dict[int, list[int]], start: int, goal: int) -> list[int]:
    previous = {start: start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(adjacency[v]):
                if u not in previous:
                    previous[u] = v
                    nxt.append(u)
        frontier = nxt
    path = [goal]
    while path[-1] != start:
        path.append(previous[path[-1]])
    return path[::-1]


def cycle_vertices(edges: Sequence[Simplex]) -> tuple[int, ...]:
    """Walk a simple edge cycle, starting at its smallest vertex towards the smaller neighbour."""
    adjacency: dict[int, list[int]] = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    if any(len(n) != 2 for n in adjacency.values()):
        raise InvalidInput("edge set is not a simple cycle")
    start = min(adjacency)
    walk = [start, min(adjacency[start])]
    while len(walk) < len(adjacency):
        a, b = adjacency[walk[-1]]
        walk.append(b if a == walk[-2] else a)
    return tuple(walk)


# -- Mayer-Vietoris -----------------------------------------------------------


@dataclass(frozen=True)
class MVIdentity:
    position: str
    degree: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class MVReport:
    """Exactness checks of the reduced Mayer-Vietoris sequence of ``A ∪ B``.

    ``ranks`` holds, per degree, the ranks of ``i: H(A∩B) -> H(A)⊕H(B)``,
    ``j: H(A)⊕H(B) -> H(A∪B)`` and the connecting map ``d: H_n(A∪B) -> H_{n-1}(A∩B)``,
    each computed directly at chain level.
    """

    profiles: dict[str, HomologyProfile]
    identities: tuple[MVIdentity, ...]
    ranks: dict[str, tuple[int, ...]] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return all(i.holds for i in self.identities)


class _Chains:
    """Cycle and boundary subspaces of a subcomplex, in the ambient face indexing."""

    def __init__(self, sub: SimplicialComplex, ambient_index: list[dict[Simplex, int]], top: int):
        self.faces = [sub.faces(n) if n <= sub.dimension else () for n in range(top + 2)]
        self.masks = []
        for n in range(top + 2):
            m = 0
            for f in self.faces[n]:
                m |= 1 << ambient_index[n][f]
            self.masks.append(m)
        self.cycles: list[list[int]] = []
        self.boundaries: list[list[int]] = []
        for n in range(top + 1):
            cols = [_ambient_boundary(f, ambient_index) for f in self.faces[n]]
            z = []
            for combo in gf2.kernel_basis(cols):
                vec = 0
                for j in gf2.bits_of(combo):
                    vec |= 1 << ambient_index[n][self.faces[n][j]]
                z.append(vec)
            self.cycles.append(z)
            self.boundaries.append([_ambient_boundary(f, ambient_index) for f in self.faces[n + 1]])

    def betti(self, n: int) -> int:
        return len(self.cycles[n]) - gf2.rank(self.boundaries[n])


def _ambient_boundary(face: Simplex, ambient_index: list[dict[Simplex, int]]) -> int:
    # augmented: a vertex maps to the single (-1)-cell, bit 0
    if len(face) == 1:
        return 1
    n = len(face) - 1
    bits = 0
    for facet in combinations(face, n):
        bits |= 1 << ambient_index[n - 1][facet]
    return bits


MV_DEGREES = (0, 1, 2)


def mv_exactness_audit(k1: SimplicialComplex, k2: SimplicialComplex) -> MVReport:
    _same_vertices(k1, k2)
    _require_nonempty(k1)
    _require_nonempty(k2)
    u = union(k1, k2)
    c = intersection(k1, k2)
    if c.is_empty:
        return _disjoint_additivity(k1, k2, u)

    top = max(MV_DEGREES) + 1
    ambient_index = [{f: i for i, f in enumerate(u.faces(n))} for n in range(top + 2)]
    ch = {name: _Chains(x, ambient_index, top) for name, x in (("A", k1), ("B", k2), ("A∩B", c), ("A∪B", u))}
    profiles = {
        "A": reduced_betti_profile(k1),
        "B": reduced_betti_profile(k2),
        "A∩B": reduced_betti_profile(c),
        "A∪B": reduced_betti_profile(u),
    }

    rank_i, rank_j, rank_d = [], [], []
    for n in range(top + 1):
        width = len(ambient_index[n])
        ba, bb, bu = (gf2.rank(ch[x].boundaries[n]) for x in ("A", "B", "A∪B"))
        diag = [z | z << width for z in ch["A∩B"].cycles[n]]
        rank_i.append(gf2.rank(diag + ch["A"].boundaries[n] + [b << width for b in ch["B"].boundaries[n]]) - ba - bb)
        rank_j.append(gf2.rank(ch["A"].cycles[n] + ch["B"].cycles[n] + ch["A∪B"].boundaries[n]) - bu)
        if n == 0:
            rank_d.append(0)
        else:
            images = [_ambient_chain_boundary(z & ch["A"].masks[n], n, ambient_index) for z in ch["A∪B"].cycles[n]]
            prev_bc = gf2.rank(ch["A∩B"].boundaries[n - 1])
            rank_d.append(gf2.rank(images + ch["A∩B"].boundaries[n - 1]) - prev_bc)

    identities: list[MVIdentity] = []
    for n in MV_DEGREES:
        for name in ("A", "B", "A∩B", "A∪B"):
            identities.append(MVIdentity(f"chain-level b~{n}({name}) = profile", n, ch[name].betti(n), profiles[name].betti(n)))
        identities.append(MVIdentity("H(A∩B): rank d + rank i = b~(A∩B)", n, rank_d[n + 1] + rank_i[n], profiles["A∩B"].betti(n)))
        identities.append(
            MVIdentity("H(A)⊕H(B): rank i + rank j = b~(A) + b~(B)", n, rank_i[n] + rank_j[n], profiles["A"].betti(n) + profiles["B"].betti(n))
        )
        identities.append(MVIdentity("H(A∪B): rank j + rank d = b~(A∪B)", n, rank_j[n] + rank_d[n], profiles["A∪B"].betti(n)))
    return MVReport(profiles, tuple(identities), {"i": tuple(rank_i), "j": tuple(rank_j), "d": tuple(rank_d)})


def _ambient_chain_boundary(chain: int, n: int, ambient_index: list[dict[Simplex, int]]) -> int:
    faces_n = list(ambient_index[n])
    out = 0
    for j in gf2.bits_of(chain):
        out ^= _ambient_boundary(faces_n[j], ambient_index)
    return out


def _disjoint_additivity(k1: SimplicialComplex, k2: SimplicialComplex, u: SimplicialComplex) -> MVReport:
    p1, p2, pu = reduced_betti_profile(k1), reduced_betti_profile(k2), reduced_betti_profile(u)
    identities = [MVIdentity("disjoint: b~0(A∪B) = b~0(A) + b~0(B) + 1", 0, pu.b0, p1.b0 + p2.b0 + 1)]
    for n in MV_DEGREES[1:]:
        identities.append(MVIdentity("disjoint: b~n(A∪B) = b~n(A) + b~n(B)", n, pu.betti(n), p1.betti(n) + p2.betti(n)))
    return MVReport({"A": p1, "B": p2, "A∪B": pu}, tuple(identities), degenerate=True)
