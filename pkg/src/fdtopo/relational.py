"""In-memory relations with set semantics: natural join, projection, semijoin."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Sequence

from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeSet, AttributeUniverse

Row = tuple[Hashable, ...]


@dataclass(frozen=True)
class RelationInstance:
    """Tuples are value tuples ordered by ascending attribute position of ``attrs``.

    The name is a label only; two instances with equal attributes and tuples are equal.
    """

    name: str = field(compare=False)
    attrs: AttributeSet
    tuples: frozenset[Row]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", frozenset(self.tuples))
        width = len(self.attrs)
        for t in self.tuples:
            if len(t) != width:
                raise InvalidInput(f"relation {self.name}: tuple {t} does not bind exactly {self.attrs}")

    @classmethod
    def from_rows(
        cls,
        name: str,
        universe: AttributeUniverse,
        columns: Sequence[str],
        rows: Iterable[Sequence[Hashable]],
    ) -> RelationInstance:
        """Rows given in ``columns`` order; stored in attribute-position order."""
        positions = [universe.position(c) for c in columns]
        if len(set(positions)) != len(positions):
            raise InvalidInput(f"relation {name}: repeated column")
        attrs = universe.from_positions(positions)
        order = [positions.index(p) for p in attrs]
        tuples = set()
        for r in rows:
            if len(r) != len(columns):
                raise InvalidInput(f"relation {name}: row {list(r)} has {len(r)} values, expected {len(columns)}")
            tuples.add(tuple(r[i] for i in order))
        return cls(name, attrs, frozenset(tuples))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.tuples)

    def rows(self) -> list[dict[str, Hashable]]:
        names = self.attrs.names
        return [dict(zip(names, t)) for t in sorted(self.tuples, key=repr)]

    def renamed(self, name: str) -> RelationInstance:
        return RelationInstance(name, self.attrs, self.tuples)


def _picker(attrs: AttributeSet, sub: AttributeSet) -> list[int]:
    pos = attrs.positions
    return [pos.index(p) for p in sub]


def natural_join(r: RelationInstance, s: RelationInstance) -> RelationInstance:
    shared = r.attrs & s.attrs
    out_attrs = r.attrs | s.attrs
    rk, sk = _picker(r.attrs, shared), _picker(s.attrs, shared)
    index: dict[Row, list[Row]] = {}
    for t in s.tuples:
        index.setdefault(tuple(t[i] for i in sk), []).append(t)
    # each output column comes from r when r has it, else from s
    r_pos, s_pos = r.attrs.positions, s.attrs.positions
    plan = [(0, r_pos.index(p)) if p in r.attrs else (1, s_pos.index(p)) for p in out_attrs]
    result = set()
    for t in r.tuples:
        for u in index.get(tuple(t[i] for i in rk), ()):
            pair = (t, u)
            result.add(tuple(pair[side][i] for side, i in plan))
    return RelationInstance(f"{r.name}⋈{s.name}", out_attrs, frozenset(result))


def project(r: RelationInstance, w: AttributeSet) -> RelationInstance:
    if not w <= r.attrs:
        raise InvalidInput(f"cannot project {r.name}{r.attrs} onto {w}")
    pick = _picker(r.attrs, w)
    return RelationInstance(f"π{w}({r.name})", w, frozenset(tuple(t[i] for i in pick) for t in r.tuples))


def semijoin(r: RelationInstance, s: RelationInstance, sep: AttributeSet) -> RelationInstance:
    """``{t ∈ r : π_sep(t) ∈ π_sep(s)}``."""
    if not (sep <= r.attrs and sep <= s.attrs):
        raise InvalidInput(f"separator {sep} is not shared by {r.name} and {s.name}")
    rk, sk = _picker(r.attrs, sep), _picker(s.attrs, sep)
    keys = {tuple(t[i] for i in sk) for t in s.tuples}
    return RelationInstance(r.name, r.attrs, frozenset(t for t in r.tuples if tuple(t[i] for i in rk) in keys))


@dataclass(frozen=True)
class Database:
    relations: tuple[RelationInstance, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "relations", tuple(self.relations))
        names = [r.name for r in self.relations]
        if len(set(names)) != len(names):
            raise InvalidInput("relation names in a database must be unique")

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self) -> Iterator[RelationInstance]:
        return iter(self.relations)

    def __getitem__(self, key: int | str) -> RelationInstance:
        if isinstance(key, int):
            return self.relations[key]
        for r in self.relations:
            if r.name == key:
                return r
        raise InvalidInput(f"no relation named {key!r}")


def load_relation(path: str | Path, universe: AttributeUniverse, name: str | None = None) -> RelationInstance:
    """Read a header + rows text file: first line attribute names, then comma-separated values."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidInput(f"{path}: empty relation file") from None
        rows = [[v.strip() for v in row] for row in reader if row and any(v.strip() for v in row)]
    return RelationInstance.from_rows(name or path.stem, universe, header, rows)


def dump_relation(r: RelationInstance) -> str:
    lines = [",".join(r.attrs.names)]
    for t in sorted(r.tuples, key=lambda t: tuple(map(str, t))):
        lines.append(",".join(str(v) for v in t))
    return "\n".join(lines) + "\n"
