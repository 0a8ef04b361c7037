"""Tableau chase for k-way lossless-join testing under FDs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from fdtopo.decomposition import Cover
from fdtopo.errors import InvalidInput
from fdtopo.fd import FunctionalDependency

DISTINGUISHED = 0


@dataclass(frozen=True)
class Tableau:
    """One row per component.  Cell value 0 is the distinguished symbol ``a_col``;
    value ``s > 0`` is the subscripted symbol ``b_{s,col}`` first placed in row ``s - 1``."""

    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def initial(cls, cover: Cover) -> Tableau:
        n = len(cover.universe)
        return cls(tuple(tuple(0 if a in c else i + 1 for a in range(n)) for i, c in enumerate(cover)))

    def all_distinguished_rows(self) -> list[int]:
        return [i for i, row in enumerate(self.rows) if not any(row)]

    def class_count(self) -> int:
        return sum(len({row[c] for row in self.rows}) for c in range(len(self.rows[0]))) if self.rows else 0

    def render(self, names: Sequence[str]) -> list[list[str]]:
        return [[f"a{names[c]}" if s == 0 else f"b{s}{names[c]}" for c, s in enumerate(row)] for row in self.rows]


@dataclass(frozen=True)
class ChaseResult:
    lossless: bool
    final: Tableau
    steps: int
    class_counts: tuple[int, ...]


def chase_lossless(cover: Cover, fds: Sequence[FunctionalDependency]) -> ChaseResult:
    """Chase the cover's tableau with ``fds`` to a fixpoint.

    Rounds sweep the FDs in order and, for each, row pairs ``(i, j)`` with
    ``i < j``.  Equal left-hand sides with different dependents merge the two
    symbols: the distinguished one wins, otherwise the lower subscript.
    ``class_counts`` records the number of distinct symbols after each merge.
    """
    for f in fds:
        if f.universe != cover.universe:
            raise InvalidInput(f"FD {f} is over a different universe than the cover")
    rows = [list(r) for r in Tableau.initial(cover).rows]
    k = len(rows)
    lhs_cols = [tuple(f.lhs) for f in fds]
    counts = [Tableau(tuple(map(tuple, rows))).class_count()]
    steps = 0
    changed = True
    while changed:
        changed = False
        for f, cols in zip(fds, lhs_cols):
            col = f.rhs
            for i in range(k):
                for j in range(i + 1, k):
                    ri, rj = rows[i], rows[j]
                    if ri[col] == rj[col] or any(ri[c] != rj[c] for c in cols):
                        continue
                    keep, drop = sorted((ri[col], rj[col]))
                    for row in rows:
                        if row[col] == drop:
                            row[col] = keep
                    steps += 1
                    counts.append(Tableau(tuple(map(tuple, rows))).class_count())
                    changed = True
    final = Tableau(tuple(tuple(r) for r in rows))
    return ChaseResult(bool(final.all_distinguished_rows()), final, steps, tuple(counts))


def tableau_instance(final: Tableau) -> list[tuple[int, ...]]:
    """Read a chased tableau as a relation instance over ``0..`` (symbol -> value).

    The instance satisfies the chased FDs; for a lossy cover the join of its
    projections contains the all-distinguished tuple ``(0, ..., 0)``, which it lacks.
    """
    return sorted(set(final.rows))
