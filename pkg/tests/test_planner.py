from __future__ import annotations

import random

import pytest

from conftest import fixture_path
from fdtopo.audit import GeneratorParams, random_database
from fdtopo.cli import load_database, load_document
from fdtopo.decomposition import Cover, JoinTree, build_join_tree
from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeUniverse
from fdtopo.planner import execute_plan, left_fold_sizes, naive_join, yannakakis_plan
from fdtopo.relational import Database, RelationInstance, project


def random_acyclic_cover(rng: random.Random) -> Cover:
    """Grow a tree of components; each child shares a few of its parent's attributes."""
    k = rng.randint(1, 5)
    comps: list[set[int]] = [set(range(rng.randint(1, 3)))]
    fresh = len(comps[0])
    for _ in range(k - 1):
        parent = rng.choice(comps)
        shared = set(rng.sample(sorted(parent), rng.randint(1, len(parent))))
        new = set(range(fresh, fresh + rng.randint(0, 2)))
        fresh += len(new)
        comps.append(shared | new)
    u = AttributeUniverse(tuple(f"X{i}" for i in range(fresh)))
    return Cover(u, tuple(u.from_positions(c) for c in comps))


def chain_fixture():
    doc = load_document(fixture_path("five_relations.json"))
    cover = doc.decomposition
    return cover, load_database(doc, cover)


def adjacent_order(plan) -> bool:
    joined = {plan.join_order[0]}
    adj = plan.tree.neighbours()
    for v in plan.join_order[1:]:
        if not any(u in joined for u, _ in adj[v]):
            return False
        joined.add(v)
    return len(joined) == plan.tree.n_nodes


def test_two_node_plan():
    u = AttributeUniverse(tuple("ABC"))
    c = Cover(u, (u.set("AB"), u.set("BC")))
    plan = yannakakis_plan(JoinTree.from_pairs(c, [(0, 1)]), 0)
    assert [(s.target, s.source, str(s.separator)) for s in plan.reduction] == [(1, 0, "{B}")]
    assert plan.join_order == (0, 1)


def test_single_node_plan():
    u = AttributeUniverse(tuple("AB"))
    c = Cover(u, (u.full(),))
    plan = yannakakis_plan(JoinTree(1, ()), 0)
    assert plan.reduction == () and plan.join_order == (0,)
    r = RelationInstance.from_rows("R1", u, ["A", "B"], [(1, 2), (3, 4)])
    assert execute_plan(plan, Database((r,))).result == r
    assert naive_join(Database((r,))) == r


def test_plan_rejects_bad_roots_and_shapes():
    u = AttributeUniverse(tuple("ABC"))
    c = Cover(u, (u.set("AB"), u.set("BC")))
    tree = JoinTree.from_pairs(c, [(0, 1)])
    with pytest.raises(InvalidInput):
        yannakakis_plan(tree, 2)
    with pytest.raises(InvalidInput):
        yannakakis_plan(JoinTree.from_pairs(c, []), 0)
    with pytest.raises(InvalidInput):
        execute_plan(yannakakis_plan(tree, 0, components=(u.set("AB"), u.set("AC"))), Database(()))


def test_full_reducer_runs_upward_then_downward():
    cover, _ = chain_fixture()
    tree = build_join_tree(cover)
    plan = yannakakis_plan(tree, 1, "full")
    half = len(plan.reduction) // 2
    up, down = plan.reduction[:half], plan.reduction[half:]
    assert len(plan.reduction) == 2 * (len(cover) - 1)
    assert {(s.target, s.source) for s in up} == {(s.source, s.target) for s in down}
    assert adjacent_order(plan)
    assert {s.target for s in down} == set(range(len(cover))) - {1}


def test_empty_relation_empties_everything_under_full_reduction():
    cover, db = chain_fixture()
    rels = list(db)
    rels[3] = RelationInstance(rels[3].name, rels[3].attrs, frozenset())
    db = Database(tuple(rels))
    run = execute_plan(yannakakis_plan(build_join_tree(cover), 0, "full"), db)
    assert all(len(r) == 0 for r in run.reduced)
    assert len(run.result) == 0 and len(naive_join(db)) == 0


def test_naive_join_is_fold_order_independent():
    _, db = chain_fixture()
    base = naive_join(db)
    rng = random.Random(4)
    for _ in range(10):
        rels = list(db)
        rng.shuffle(rels)
        assert naive_join(Database(tuple(rels))) == base


def test_seeded_fixture_matches_naive_and_costs_less():
    cover, db = chain_fixture()
    naive = naive_join(db)
    assert len(naive) > 0
    for root in range(len(cover)):
        run = execute_plan(yannakakis_plan(build_join_tree(cover), root, "full"), db)
        assert run.result == naive
        assert run.cost.peak_intermediate <= max(left_fold_sizes(db))


def test_cost_report_counts_are_exact():
    cover, db = chain_fixture()
    plan = yannakakis_plan(build_join_tree(cover), 1, "bottomup")
    run = execute_plan(plan, db)
    current = {r.name: r for r in db}
    touched = 0
    for step, cost in zip(plan.reduction, run.cost.steps):
        t, s = db[step.target].name, db[step.source].name
        assert cost.input_sizes == (len(current[t]), len(current[s]))
        keys = {x for x in project(current[s], step.separator).tuples}
        pos = current[t].attrs.positions
        filtered = {x for x in current[t].tuples if tuple(dict(zip(pos, x))[p] for p in step.separator) in keys}
        assert cost.output_size == len(filtered)
        touched += sum(cost.input_sizes)
        current[t] = RelationInstance(t, current[t].attrs, frozenset(filtered))
    join_costs = run.cost.steps[len(plan.reduction):]
    touched += sum(sum(c.input_sizes) for c in join_costs)
    assert run.cost.tuples_touched == touched
    assert run.cost.peak_intermediate == max([len(current[db[plan.root].name])] + [c.output_size for c in join_costs])


def test_plan_soundness_on_500_random_databases():
    rng = random.Random(2024)
    for i in range(500):
        cover = random_acyclic_cover(rng)
        tree = build_join_tree(cover)
        assert tree is not None
        db = random_database(cover, GeneratorParams(seed=i), rng, size=rng.randint(0, 5), domain=3)
        naive = naive_join(db)
        root = rng.randrange(len(cover))
        for passes in ("bottomup", "full"):
            plan = yannakakis_plan(tree, root, passes)
            assert adjacent_order(plan)
            assert {s.target for s in plan.reduction} >= set(range(len(cover))) - {root}
            run = execute_plan(plan, db)
            assert run.result == naive
            if passes == "full":
                # every surviving tuple contributes to some output tuple
                for r in run.reduced:
                    assert project(run.result, r.attrs).tuples == r.tuples


def test_fixture_databases_give_500_sound_runs():
    cover, db = chain_fixture()
    tree = build_join_tree(cover)
    rng = random.Random(77)
    for _ in range(500):
        rels = [
            RelationInstance(r.name, r.attrs, frozenset(tuple(rng.randrange(3) for _ in r.attrs) for _ in range(rng.randint(1, 4))))
            for r in db
        ]
        d = Database(tuple(rels))
        plan = yannakakis_plan(tree, rng.randrange(len(cover)), rng.choice(["bottomup", "full"]))
        assert execute_plan(plan, d).result == naive_join(d)
