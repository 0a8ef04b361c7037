"""Decomposition covers: binary lossless test, nerves, GYO reduction and join trees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Literal, Sequence

from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeSet, AttributeUniverse, FunctionalDependency, implies
from fdtopo.homology import (
    SimplicialComplex,
    Simplex,
    cycle_vertices,
    h1_cycle_basis,
    reduced_betti_profile,
)


@dataclass(frozen=True)
class Cover:
    """Components ``U_1..U_k`` whose union is the whole universe.

    ``names`` label the components for reports (default ``R1..Rk``).
    """

    universe: AttributeUniverse
    components: tuple[AttributeSet, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidInput("a cover needs at least one component")
        covered = 0
        for i, c in enumerate(comps):
            if c.universe != self.universe:
                raise InvalidInput(f"component {i + 1} is over a different universe")
            if not c:
                raise InvalidInput(f"component {i + 1} is empty")
            covered |= c.bits
        missing = self.universe.full() - AttributeSet(self.universe, covered)
        if missing:
            raise InvalidInput(f"components do not cover attributes {missing}")
        names = tuple(self.names) or tuple(f"R{i + 1}" for i in range(len(comps)))
        if len(names) != len(comps) or len(set(names)) != len(names):
            raise InvalidInput("component names must be unique, one per component")
        object.__setattr__(self, "names", names)

    @classmethod
    def of(cls, universe: AttributeUniverse, components: Sequence, names: Sequence[str] = ()) -> Cover:
        return cls(universe, tuple(universe.set(c) for c in components), tuple(names))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[AttributeSet]:
        return iter(self.components)

    def __getitem__(self, i: int) -> AttributeSet:
        return self.components[i]

    def index_of(self, name_or_number: str) -> int:
        """Resolve ``R2``-style names or 1-based numbers to a 0-based index."""
        if name_or_number in self.names:
            return self.names.index(name_or_number)
        if name_or_number.isdigit() and 1 <= int(name_or_number) <= len(self):
            return int(name_or_number) - 1
        raise InvalidInput(f"unknown component {name_or_number!r}")


# -- binary lossless criterion -------------------------------------------------

KeyedSide = Literal["none", "left", "right", "both"]


@dataclass(frozen=True)
class BinaryVerdict:
    lossless: bool
    keyed_side: KeyedSide
    intersection: AttributeSet


def binary_lossless(u1: AttributeSet, u2: AttributeSet, fds: Sequence[FunctionalDependency]) -> BinaryVerdict:
    """Lossless iff ``U1 ∩ U2`` determines ``U1`` or ``U2``."""
    if (u1 | u2).bits != u1.universe.full().bits:
        raise InvalidInput(f"{u1} and {u2} do not cover the universe")
    common = u1 & u2
    left = implies(fds, common, u1)
    right = implies(fds, common, u2)
    side: KeyedSide = "both" if left and right else "left" if left else "right" if right else "none"
    return BinaryVerdict(left or right, side, common)


# -- nerve -------------------------------------------------------------------

NerveMode = Literal["attribute", "complex"]


@dataclass(frozen=True)
class Nerve:
    """Nerve on component indices ``0..k-1``; ``witness[face]`` is a vertex shared by every member."""

    complex: SimplicialComplex
    witness: dict[Simplex, int]
    mode: NerveMode


def nerve(cover: Cover, mode: NerveMode = "attribute", k_f: SimplicialComplex | None = None) -> Nerve:
    """Attribute mode: faces are subfamilies with a common attribute.  Complex mode:
    subfamilies whose induced subcomplexes of ``k_f`` share a face, i.e. a vertex of ``k_f``."""
    if mode == "attribute":
        shared = range(len(cover.universe))
    elif mode == "complex":
        if k_f is None:
            raise InvalidInput("complex-level nerve needs the dependency complex")
        if k_f.n_vertices != len(cover.universe):
            raise InvalidInput("dependency complex does not match the cover's universe")
        shared = k_f.vertices
    else:
        raise InvalidInput(f"unknown nerve mode {mode!r}")

    stars: dict[int, tuple[int, ...]] = {}
    for v in shared:
        stars[v] = tuple(i for i, c in enumerate(cover) if v in c)
    cx = SimplicialComplex(len(cover), [s for s in stars.values() if s], cover.names)
    witness: dict[Simplex, int] = {}
    for face in cx.all_faces():
        members = set(face)
        witness[face] = min(v for v, s in stars.items() if members <= set(s))
    return Nerve(cx, witness, mode)


@dataclass(frozen=True)
class NerveObstruction:
    b1: int
    cycles: tuple[tuple[int, ...], ...]


def nerve_obstruction(cover: Cover, mode: NerveMode = "attribute", k_f: SimplicialComplex | None = None) -> NerveObstruction:
    """First Betti number of the nerve and one component-index cycle (0-based) per ``H_1`` generator."""
    cx = nerve(cover, mode, k_f).complex
    b1 = reduced_betti_profile(cx).b1
    cycles = tuple(cycle_vertices(c) for c in h1_cycle_basis(cx))
    return NerveObstruction(b1, cycles)


# -- GYO reduction -------------------------------------------------------------


@dataclass(frozen=True)
class GyoStep:
    kind: Literal["remove_attribute", "absorb", "drop_empty"]
    component: int
    attribute: int | None = None
    into: int | None = None


@dataclass(frozen=True)
class GyoTrace:
    steps: tuple[GyoStep, ...]
    residual: tuple[tuple[int, AttributeSet], ...]


@dataclass(frozen=True)
class GyoResult:
    acyclic: bool
    trace: GyoTrace


def gyo_reduce(cover: Cover) -> GyoResult:
    """Ear removal until stuck; acyclic iff nothing is left.

    Each round takes the first applicable rule: the lowest attribute that occurs
    in exactly one live component, then the first (component, container) pair by
    index, then dropping a lone empty component.
    """
    live: dict[int, int] = {i: c.bits for i, c in enumerate(cover)}
    steps: list[GyoStep] = []
    n = len(cover.universe)
    while live:
        step = _next_gyo_step(live, n)
        if step is None:
            break
        _apply_gyo_step(live, step)
        steps.append(step)
    residual = tuple((i, AttributeSet(cover.universe, bits)) for i, bits in sorted(live.items()))
    return GyoResult(not live, GyoTrace(tuple(steps), residual))


def _next_gyo_step(live: dict[int, int], n_attributes: int) -> GyoStep | None:
    for a in range(n_attributes):
        holders = [i for i, bits in live.items() if bits >> a & 1]
        if len(holders) == 1:
            return GyoStep("remove_attribute", holders[0], attribute=a)
    order = sorted(live)
    for i in order:
        for j in order:
            if i != j and live[i] & ~live[j] == 0:
                return GyoStep("absorb", i, into=j)
    if len(live) == 1 and live[order[0]] == 0:
        return GyoStep("drop_empty", order[0])
    return None


def _apply_gyo_step(live: dict[int, int], step: GyoStep) -> None:
    if step.component not in live:
        raise InvalidInput(f"GYO step {step} refers to a removed component")
    if step.kind == "remove_attribute":
        assert step.attribute is not None
        holders = [i for i, bits in live.items() if bits >> step.attribute & 1]
        if holders != [step.component]:
            raise InvalidInput(f"GYO step {step}: attribute is not unique to the component")
        live[step.component] &= ~(1 << step.attribute)
    elif step.kind == "absorb":
        if step.into not in live or step.into == step.component or live[step.component] & ~live[step.into]:
            raise InvalidInput(f"GYO step {step}: component is not contained in its target")
        del live[step.component]
    elif step.kind == "drop_empty":
        if live[step.component]:
            raise InvalidInput(f"GYO step {step}: component is not empty")
        del live[step.component]
    else:
        raise InvalidInput(f"unknown GYO step kind {step.kind!r}")


def replay_gyo(cover: Cover, steps: Sequence[GyoStep]) -> tuple[tuple[int, AttributeSet], ...]:
    """Apply a recorded trace to ``cover``, checking every step, and return the residual."""
    live = {i: c.bits for i, c in enumerate(cover)}
    for step in steps:
        _apply_gyo_step(live, step)
    return tuple((i, AttributeSet(cover.universe, bits)) for i, bits in sorted(live.items()))


# -- join trees ------------------------------------------------------------------


@dataclass(frozen=True)
class JoinEdge:
    a: int
    b: int
    separator: AttributeSet


@dataclass(frozen=True)
class JoinTree:
    n_nodes: int
    edges: tuple[JoinEdge, ...]

    def neighbours(self) -> dict[int, list[tuple[int, AttributeSet]]]:
        adj: dict[int, list[tuple[int, AttributeSet]]] = {i: [] for i in range(self.n_nodes)}
        for e in self.edges:
            adj[e.a].append((e.b, e.separator))
            adj[e.b].append((e.a, e.separator))
        for lst in adj.values():
            lst.sort(key=lambda t: t[0])
        return adj

    @classmethod
    def from_pairs(cls, cover: Cover, pairs: Sequence[tuple[int, int]]) -> JoinTree:
        return cls(len(cover), tuple(JoinEdge(a, b, cover[a] & cover[b]) for a, b in pairs))


def check_tree_shape(tree: JoinTree) -> None:
    """Raise :class:`InvalidInput` unless ``tree`` is a tree on ``0..n_nodes-1``."""
    if tree.n_nodes < 1:
        raise InvalidInput("a join tree needs at least one node")
    if len(tree.edges) != tree.n_nodes - 1:
        raise InvalidInput(f"a tree on {tree.n_nodes} nodes has {tree.n_nodes - 1} edges, got {len(tree.edges)}")
    parent = list(range(tree.n_nodes))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in tree.edges:
        if not (0 <= e.a < tree.n_nodes and 0 <= e.b < tree.n_nodes) or e.a == e.b:
            raise InvalidInput(f"bad join-tree edge {e.a}-{e.b}")
        ra, rb = find(e.a), find(e.b)
        if ra == rb:
            raise InvalidInput(f"join-tree edge {e.a}-{e.b} closes a cycle")
        parent[ra] = rb


def verify_running_intersection(tree: JoinTree, cover: Cover) -> bool:
    """True iff, for every attribute, the components holding it form a connected subtree."""
    check_tree_shape(tree)
    if tree.n_nodes != len(cover):
        raise InvalidInput("join tree nodes do not match the cover's components")
    for e in tree.edges:
        if e.separator != cover[e.a] & cover[e.b]:
            raise InvalidInput(f"edge {e.a}-{e.b} separator {e.separator} is not the components' intersection")
    adj = tree.neighbours()
    for a in range(len(cover.universe)):
        holders = {i for i, c in enumerate(cover) if a in c}
        if not holders:
            continue
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u, _ in adj[v]:
                if u in holders and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if seen != holders:
            return False
    return True


def build_join_tree(cover: Cover) -> JoinTree | None:
    """Maximum-weight spanning tree of the intersection graph, kept only if it has the
    running-intersection property.  Ties go to the lexicographically smaller index pair."""
    k = len(cover)
    candidates = sorted(
        ((i, j) for i, j in combinations(range(k), 2)),
        key=lambda p: (-len(cover[p[0]] & cover[p[1]]), p),
    )
    parent = list(range(k))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    chosen: list[tuple[int, int]] = []
    for i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
    tree = JoinTree.from_pairs(cover, chosen)
    return tree if verify_running_intersection(tree, cover) else None
