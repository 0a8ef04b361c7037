"""Attribute universes, functional dependencies, closures and canonical covers.

Attribute sets are bitsets over the positions of an :class:`AttributeUniverse`;
bit ``i`` stands for ``universe.names[i]``.  Every FD has a single dependent
attribute, multi-attribute right-hand sides are split when a :class:`Schema`
is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from fdtopo.errors import BudgetExceeded, InvalidInput

DEFAULT_PROJECTION_BUDGET = 2**20


@dataclass(frozen=True)
class AttributeUniverse:
    names: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for name in names:
            if not isinstance(name, str) or not name:
                raise InvalidInput(f"attribute names must be non-empty strings, got {name!r}")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise InvalidInput(f"duplicate attribute names: {', '.join(dupes)}")
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.names)

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise InvalidInput(f"unknown attribute {name!r}") from None

    def set(self, names: Iterable[str] | str = ()) -> AttributeSet:
        """Build an attribute set; a plain string is read one character per attribute
        when every character is a declared attribute ("AB" -> {A, B})."""
        if isinstance(names, str):
            names = self._split(names)
        bits = 0
        for n in names:
            bits |= 1 << self.position(n)
        return AttributeSet(self, bits)

    def from_positions(self, positions: Iterable[int]) -> AttributeSet:
        bits = 0
        for p in positions:
            if not 0 <= p < len(self.names):
                raise InvalidInput(f"attribute position {p} outside universe of size {len(self)}")
            bits |= 1 << p
        return AttributeSet(self, bits)

    def full(self) -> AttributeSet:
        return AttributeSet(self, (1 << len(self.names)) - 1)

    def empty(self) -> AttributeSet:
        return AttributeSet(self, 0)

    def _split(self, text: str) -> list[str]:
        if text in self.index:
            return [text]
        if text and all(ch in self.index for ch in text):
            return list(text)
        raise InvalidInput(f"unknown attribute {text!r}")


@dataclass(frozen=True)
class AttributeSet:
    universe: AttributeUniverse
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> len(self.universe.names):
            raise InvalidInput("attribute set has members outside its universe")

    def _check(self, other: AttributeSet) -> None:
        if other.universe is not self.universe and other.universe != self.universe:
            raise InvalidInput("attribute sets come from different universes")

    def __or__(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits | other.bits)

    def __and__(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits & other.bits)

    def __sub__(self, other: AttributeSet) -> AttributeSet:
        self._check(other)
        return AttributeSet(self.universe, self.bits & ~other.bits)

    def __le__(self, other: AttributeSet) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: AttributeSet) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: AttributeSet) -> bool:
        return other <= self

    def __gt__(self, other: AttributeSet) -> bool:
        return other < self

    def __contains__(self, attribute: int | str) -> bool:
        if isinstance(attribute, str):
            attribute = self.universe.position(attribute)
        return bool(self.bits >> attribute & 1)

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.universe.names[i] for i in self)

    def __str__(self) -> str:
        return "{" + ",".join(self.names) + "}"

    def __repr__(self) -> str:
        return f"AttributeSet({str(self)})"


@dataclass(frozen=True)
class FunctionalDependency:
    lhs: AttributeSet
    rhs: int

    def __post_init__(self) -> None:
        if not self.lhs:
            raise InvalidInput("functional dependency needs a non-empty left-hand side")
        if not 0 <= self.rhs < len(self.lhs.universe):
            raise InvalidInput(f"dependent attribute position {self.rhs} outside universe")

    @property
    def universe(self) -> AttributeUniverse:
        return self.lhs.universe

    @property
    def support(self) -> AttributeSet:
        """``lhs ∪ {rhs}``: the simplex this FD contributes to the dependency complex."""
        return AttributeSet(self.lhs.universe, self.lhs.bits | 1 << self.rhs)

    @property
    def is_trivial(self) -> bool:
        return self.rhs in self.lhs

    def __str__(self) -> str:
        return "".join(self.lhs.names) + "->" + self.universe.names[self.rhs]


def fd(universe: AttributeUniverse, lhs: Iterable[str] | str, rhs: str) -> FunctionalDependency:
    return FunctionalDependency(universe.set(lhs), universe.position(rhs))


@dataclass(frozen=True)
class Schema:
    """``R(U, F)`` with singleton right-hand sides.

    ``provenance[i]`` is the index of the declared (possibly multi-rhs) FD that
    ``fds[i]`` was split from.
    """

    universe: AttributeUniverse
    fds: tuple[FunctionalDependency, ...]
    provenance: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "fds", tuple(self.fds))
        if not self.provenance:
            object.__setattr__(self, "provenance", tuple(range(len(self.fds))))
        if len(self.provenance) != len(self.fds):
            raise InvalidInput("provenance must have one entry per FD")
        for f in self.fds:
            if f.universe != self.universe:
                raise InvalidInput(f"FD {f} references attributes outside the schema")

    @classmethod
    def build(
        cls,
        attributes: Sequence[str],
        fds: Iterable[tuple[Iterable[str] | str, Iterable[str] | str]] = (),
    ) -> Schema:
        """Build from attribute names and ``(lhs, rhs)`` name lists, splitting each rhs."""
        universe = AttributeUniverse(tuple(attributes))
        out: list[FunctionalDependency] = []
        prov: list[int] = []
        for i, (lhs, rhs) in enumerate(fds):
            left = universe.set(lhs)
            right = universe.set(rhs)
            if not right:
                raise InvalidInput(f"FD #{i} has an empty right-hand side")
            for a in right:
                out.append(FunctionalDependency(left, a))
                prov.append(i)
        return cls(universe, tuple(out), tuple(prov))


@dataclass(frozen=True)
class CanonicalCover:
    fds: tuple[FunctionalDependency, ...]
    provenance: tuple[tuple[int, ...], ...]
    warnings: tuple[str, ...] = ()

    def __iter__(self) -> Iterator[FunctionalDependency]:
        return iter(self.fds)

    def __len__(self) -> int:
        return len(self.fds)


def _same_universe(universe: AttributeUniverse, fds: Iterable[FunctionalDependency]) -> None:
    for f in fds:
        if f.universe is not universe and f.universe != universe:
            raise InvalidInput(f"FD {f} belongs to a different universe")


def _closure_bits(bits: int, fds: Sequence[tuple[int, int]]) -> int:
    # fds as (lhs bits, rhs bit) pairs
    changed = True
    while changed:
        changed = False
        for lhs, rhs in fds:
            if lhs & bits == lhs and not bits & rhs:
                bits |= rhs
                changed = True
    return bits


def _pairs(fds: Iterable[FunctionalDependency]) -> list[tuple[int, int]]:
    return [(f.lhs.bits, 1 << f.rhs) for f in fds]


def closure(x: AttributeSet, fds: Iterable[FunctionalDependency]) -> AttributeSet:
    """Least fixpoint of ``x`` under repeated application of ``fds``."""
    fds = list(fds)
    _same_universe(x.universe, fds)
    return AttributeSet(x.universe, _closure_bits(x.bits, _pairs(fds)))


def implies(fds: Iterable[FunctionalDependency], x: AttributeSet, y: AttributeSet) -> bool:
    x._check(y)
    return y <= closure(x, fds)


def is_key(x: AttributeSet, u: AttributeSet, fds: Iterable[FunctionalDependency]) -> bool:
    """True iff ``x`` determines every attribute of ``u`` (``x`` must lie inside ``u``)."""
    if not x <= u:
        raise InvalidInput(f"{x} is not a subset of {u}")
    return implies(fds, x, u)


def canonical_cover(schema: Schema) -> CanonicalCover:
    """Minimal cover of ``schema.fds``.

    Deterministic: trivial FDs are dropped first, then extraneous left-hand
    attributes are removed FD by FD in input order (attributes tried in index
    order), then redundant FDs are removed in input order.
    """
    universe = schema.universe
    warnings: list[str] = []
    work: list[list] = []  # [lhs bits, rhs bit, provenance set]
    for f, p in zip(schema.fds, schema.provenance):
        if f.is_trivial:
            warnings.append(f"dropped trivial FD {f} (declared FD #{p})")
            continue
        work.append([f.lhs.bits, 1 << f.rhs, {p}])

    def current() -> list[tuple[int, int]]:
        return [(lhs, rhs) for lhs, rhs, _ in work]

    for entry in work:
        for b in AttributeSet(universe, entry[0]).positions:
            lhs = entry[0]
            if lhs == 1 << b:
                break
            reduced = lhs & ~(1 << b)
            if _closure_bits(reduced, current()) & entry[1]:
                entry[0] = reduced

    i = 0
    while i < len(work):
        lhs, rhs, prov = work[i]
        others = current()
        del others[i]
        if _closure_bits(lhs, others) & rhs:
            del work[i]
            for other in work:
                if other[0] == lhs and other[1] == rhs:
                    other[2] |= prov
                    break
        else:
            i += 1

    fds = tuple(
        FunctionalDependency(AttributeSet(universe, lhs), rhs.bit_length() - 1) for lhs, rhs, _ in work
    )
    return CanonicalCover(fds, tuple(tuple(sorted(p)) for _, _, p in work), tuple(warnings))


def declared_cover(schema: Schema) -> CanonicalCover:
    """Take the schema's FDs verbatim as the cover (trivial FDs and exact duplicates dropped).

    Used when a document declares its FD list to *be* the cover to encode; the
    result need not be minimal.  :func:`cover_defects` lists what canonicalization
    would change.
    """
    warnings: list[str] = []
    seen: dict[tuple[int, int], int] = {}
    fds: list[FunctionalDependency] = []
    prov: list[set[int]] = []
    for f, p in zip(schema.fds, schema.provenance):
        if f.is_trivial:
            warnings.append(f"dropped trivial FD {f} (declared FD #{p})")
            continue
        key = (f.lhs.bits, f.rhs)
        if key in seen:
            prov[seen[key]].add(p)
            continue
        seen[key] = len(fds)
        fds.append(f)
        prov.append({p})
    return CanonicalCover(tuple(fds), tuple(tuple(sorted(s)) for s in prov), tuple(warnings))


def cover_defects(fds: Sequence[FunctionalDependency]) -> list[str]:
    """Human-readable reasons why ``fds`` is not a canonical cover (empty if it is)."""
    problems = []
    pairs = _pairs(fds)
    for i, f in enumerate(fds):
        if f.is_trivial:
            problems.append(f"{f} is trivial")
            continue
        others = pairs[:i] + pairs[i + 1 :]
        if _closure_bits(f.lhs.bits, others) & (1 << f.rhs):
            problems.append(f"{f} is redundant")
        if len(f.lhs) > 1:
            for b in f.lhs:
                if _closure_bits(f.lhs.bits & ~(1 << b), pairs) & (1 << f.rhs):
                    problems.append(f"{f} has extraneous attribute {f.universe.names[b]}")
    return problems


def project_fds(
    fds: Sequence[FunctionalDependency],
    w: AttributeSet,
    budget: int = DEFAULT_PROJECTION_BUDGET,
) -> list[FunctionalDependency]:
    """FDs ``X -> A`` with ``X ∪ {A} ⊆ w`` implied by ``fds``, minimal left-hand sides only.

    Enumerates all subsets of ``w``; raises :class:`BudgetExceeded` when
    ``2**|w|`` exceeds ``budget``.
    """
    fds = list(fds)
    _same_universe(w.universe, fds)
    needed = 1 << len(w)
    if needed > budget:
        raise BudgetExceeded(
            f"projecting onto {w} needs {needed} subsets, budget is {budget}", needed, budget
        )
    pairs = _pairs(fds)
    members = w.positions
    found: dict[int, list[int]] = {}
    out: list[FunctionalDependency] = []
    for size in range(1, len(members) + 1):
        for combo in combinations(members, size):
            lhs = 0
            for p in combo:
                lhs |= 1 << p
            implied = _closure_bits(lhs, pairs) & w.bits & ~lhs
            for a in AttributeSet(w.universe, implied):
                smaller = found.setdefault(a, [])
                if any(y & lhs == y for y in smaller):
                    continue
                smaller.append(lhs)
                out.append(FunctionalDependency(AttributeSet(w.universe, lhs), a))
    return out


def is_dependency_preserving(
    cover: Iterable[AttributeSet],
    fds: Sequence[FunctionalDependency],
    budget: int = DEFAULT_PROJECTION_BUDGET,
) -> bool:
    """True iff the union of the projections of ``fds`` onto the components implies every FD."""
    components = list(cover)
    if not components:
        raise InvalidInput("dependency preservation needs at least one component")
    universe = components[0].universe
    _same_universe(universe, fds)
    union = universe.empty()
    for c in components:
        union = union | c
    for f in fds:
        if not f.support <= union:
            raise InvalidInput(f"FD {f} mentions attributes outside the decomposition")
    projected: list[FunctionalDependency] = []
    for c in components:
        projected.extend(project_fds(fds, c, budget))
    pairs = _pairs(projected)
    return all(_closure_bits(f.lhs.bits, pairs) >> f.rhs & 1 for f in fds)
