"""Yannakakis-style semijoin plans over a join tree, with exact cardinality accounting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from fdtopo.decomposition import JoinTree, check_tree_shape
from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeSet
from fdtopo.relational import Database, RelationInstance, natural_join, semijoin

Passes = Literal["bottomup", "full"]


@dataclass(frozen=True)
class SemijoinStep:
    """``target := target ⋉_separator source``."""

    target: int
    source: int
    separator: AttributeSet


@dataclass(frozen=True)
class JoinPlan:
    tree: JoinTree
    root: int
    passes: Passes
    reduction: tuple[SemijoinStep, ...]
    join_order: tuple[int, ...]
    components: tuple[AttributeSet, ...] | None = None


def _rooted(tree: JoinTree, root: int) -> tuple[list[int], dict[int, tuple[int, AttributeSet]]]:
    adj = tree.neighbours()
    order = [root]
    parent: dict[int, tuple[int, AttributeSet]] = {}
    stack = [root]
    seen = {root}
    # iterative pre-order, children in ascending index order
    while stack:
        v = stack.pop()
        if v != root:
            order.append(v)
        kids = [(u, sep) for u, sep in adj[v] if u not in seen]
        for u, sep in kids:
            seen.add(u)
            parent[u] = (v, sep)
        stack.extend(u for u, _ in reversed(kids))
    return order, parent


def yannakakis_plan(
    tree: JoinTree,
    root: int,
    passes: Passes = "bottomup",
    components: tuple[AttributeSet, ...] | None = None,
) -> JoinPlan:
    """Semijoin reduction plus a root-directed join order.

    ``bottomup`` filters every non-root relation by its (already filtered)
    parent, walking away from the root in pre-order; each step shrinks a
    relation using the separator it shares with the part of the tree joined
    before it.  ``full`` is the complete reducer: parents filtered by
    children in post-order, followed by the ``bottomup`` pass.

    ``components`` optionally pins the attribute set each relation must have
    when the plan is executed.
    """
    check_tree_shape(tree)
    if not 0 <= root < tree.n_nodes:
        raise InvalidInput(f"root {root} is not a node of the join tree")
    if passes not in ("bottomup", "full"):
        raise InvalidInput(f"unknown pass mode {passes!r}")
    if components is not None and len(components) != tree.n_nodes:
        raise InvalidInput("need one component attribute set per tree node")
    preorder, parent = _rooted(tree, root)
    outward = [SemijoinStep(v, parent[v][0], parent[v][1]) for v in preorder[1:]]
    steps: list[SemijoinStep] = []
    if passes == "full":
        postorder = _postorder(preorder, parent, root)
        steps.extend(SemijoinStep(parent[v][0], v, parent[v][1]) for v in postorder if v != root)
    steps.extend(outward)
    return JoinPlan(tree, root, passes, tuple(steps), tuple(preorder), components)


def _postorder(preorder: list[int], parent: dict[int, tuple[int, AttributeSet]], root: int) -> list[int]:
    children: dict[int, list[int]] = {v: [] for v in preorder}
    for v in preorder[1:]:
        children[parent[v][0]].append(v)
    out: list[int] = []

    def visit(v: int) -> None:
        for c in children[v]:
            visit(c)
        out.append(v)

    visit(root)
    return out


@dataclass(frozen=True)
class StepCost:
    kind: Literal["semijoin", "join"]
    target: str
    source: str
    input_sizes: tuple[int, int]
    output_size: int


@dataclass(frozen=True)
class CostReport:
    steps: tuple[StepCost, ...]
    peak_intermediate: int
    tuples_touched: int


@dataclass(frozen=True)
class Execution:
    result: RelationInstance
    cost: CostReport
    reduced: tuple[RelationInstance, ...]


def execute_plan(plan: JoinPlan, db: Database) -> Execution:
    """Run the reduction steps, then join in ``plan.join_order``.

    ``peak_intermediate`` is the largest accumulator size during the join
    phase, counting the root relation it starts from.
    """
    if len(db) != plan.tree.n_nodes:
        raise InvalidInput(f"plan has {plan.tree.n_nodes} relations, database has {len(db)}")
    if plan.components is not None:
        for rel, attrs in zip(db, plan.components):
            if rel.attrs != attrs:
                raise InvalidInput(f"relation {rel.name} has attributes {rel.attrs}, plan expects {attrs}")
    for e in plan.tree.edges:
        if not (e.separator <= db[e.a].attrs and e.separator <= db[e.b].attrs):
            raise InvalidInput(f"separator {e.separator} is not shared by {db[e.a].name} and {db[e.b].name}")

    current = list(db.relations)
    costs: list[StepCost] = []
    touched = 0
    for step in plan.reduction:
        t, s = current[step.target], current[step.source]
        out = semijoin(t, s, step.separator)
        costs.append(StepCost("semijoin", t.name, s.name, (len(t), len(s)), len(out)))
        touched += len(t) + len(s)
        current[step.target] = out

    acc = current[plan.root]
    peak = len(acc)
    for v in plan.join_order[1:]:
        nxt = natural_join(acc, current[v])
        costs.append(StepCost("join", acc.name, current[v].name, (len(acc), len(current[v])), len(nxt)))
        touched += len(acc) + len(current[v])
        acc = nxt
        peak = max(peak, len(acc))
    return Execution(acc, CostReport(tuple(costs), peak, touched), tuple(current))


def naive_join(db: Database) -> RelationInstance:
    """Left-fold natural join in database order."""
    if not len(db):
        raise InvalidInput("cannot join an empty database")
    acc = db[0]
    for r in db.relations[1:]:
        acc = natural_join(acc, r)
    return acc


def left_fold_sizes(db: Database) -> list[int]:
    """Accumulator sizes of :func:`naive_join`, starting with the first relation."""
    acc = db[0]
    sizes = [len(acc)]
    for r in db.relations[1:]:
        acc = natural_join(acc, r)
        sizes.append(len(acc))
    return sizes
