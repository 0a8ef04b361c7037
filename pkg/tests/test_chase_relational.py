from __future__ import annotations

import random
from pathlib import Path

import pytest

from fdtopo.audit import GeneratorParams, random_cover, random_instance, random_schema
from fdtopo.chase import Tableau, chase_lossless, tableau_instance
from fdtopo.decomposition import Cover, binary_lossless
from fdtopo.errors import InvalidInput
from fdtopo.fd import AttributeUniverse, fd
from fdtopo.relational import (
    Database,
    RelationInstance,
    dump_relation,
    load_relation,
    natural_join,
    project,
    semijoin,
)

U = AttributeUniverse(tuple("ABC"))


def rel(cols: str, *rows) -> RelationInstance:
    return RelationInstance.from_rows("r", U, list(cols), rows)


# -- oracles ------------------------------------------------------------------------------


def dict_rows(r: RelationInstance) -> list[dict]:
    names = r.attrs.names
    return [dict(zip(names, t)) for t in r.tuples]


def join_oracle(rs: list[list[dict]]) -> set[frozenset]:
    acc = [{}]
    for rows in rs:
        acc = [
            {**a, **b}
            for a in acc
            for b in rows
            if all(a[k] == v for k, v in b.items() if k in a)
        ]
    return {frozenset(a.items()) for a in acc}


def satisfies(rows: list[tuple], fds) -> bool:
    for f in fds:
        seen = {}
        for r in rows:
            key = tuple(r[c] for c in f.lhs)
            if seen.setdefault(key, r[f.rhs]) != r[f.rhs]:
                return False
    return True


def projections_join(rows: list[tuple], cover: Cover) -> set[tuple]:
    n = len(cover.universe)
    parts = [[{c: r[c] for c in comp} for r in {tuple(r[c] for c in comp): r for r in rows}.values()] for comp in cover]
    return {tuple(dict(t)[c] for c in range(n)) for t in join_oracle(parts)}


# -- relational kernel ----------------------------------------------------------------------


def test_join_examples():
    assert natural_join(rel("AB", (1, 2)), rel("BC", (2, 3))) == rel("ABC", (1, 2, 3))
    prod = natural_join(rel("A", (1,), (2,)), rel("C", (5,), (6,)))
    assert len(prod) == 4 and prod.attrs == U.set("AC")
    assert len(natural_join(rel("AB", (1, 2)), rel("BC", (9, 3)))) == 0


def test_project_examples():
    assert project(rel("AB", (1, 2), (1, 3)), U.set("A")) == rel("A", (1,))
    r = rel("AB", (1, 2), (4, 5))
    assert project(r, U.set("AB")) == r
    assert len(project(rel("AB"), U.set("A"))) == 0
    with pytest.raises(InvalidInput):
        project(r, U.set("C"))


def test_semijoin_examples():
    r = rel("AB", (1, 2), (2, 9))
    s = rel("BC", (2, 3))
    assert semijoin(r, s, U.set("B")) == rel("AB", (1, 2))
    assert semijoin(r, s, U.empty()) == r
    assert len(semijoin(r, rel("BC"), U.set("B"))) == 0
    with pytest.raises(InvalidInput):
        semijoin(r, s, U.set("C"))


def test_columns_are_reordered_by_position():
    r = RelationInstance.from_rows("r", U, ["B", "A"], [(2, 1)])
    assert r.tuples == frozenset({(1, 2)}) and r.rows() == [{"A": 1, "B": 2}]


def test_join_and_semijoin_match_oracles():
    rng = random.Random(13)
    for _ in range(300):
        a = rng.choice(["AB", "BC", "AC", "A", "ABC"])
        b = rng.choice(["AB", "BC", "AC", "C", "ABC"])
        r = rel(a, *[tuple(rng.randrange(3) for _ in a) for _ in range(rng.randint(0, 5))])
        s = rel(b, *[tuple(rng.randrange(3) for _ in b) for _ in range(rng.randint(0, 5))])
        got = {frozenset(d.items()) for d in dict_rows(natural_join(r, s))}
        assert got == join_oracle([dict_rows(r), dict_rows(s)])
        sep = r.attrs & s.attrs
        keys = {tuple(d[x] for x in sep.names) for d in dict_rows(s)}
        want = {frozenset(d.items()) for d in dict_rows(r) if tuple(d[x] for x in sep.names) in keys}
        assert {frozenset(d.items()) for d in dict_rows(semijoin(r, s, sep))} == want


def test_csv_round_trip(tmp_path: Path):
    r = rel("AC", (1, 2), (3, 4))
    path = tmp_path / "R.csv"
    path.write_text(dump_relation(RelationInstance("R", r.attrs, frozenset((str(a), str(b)) for a, b in r.tuples))))
    back = load_relation(path, U)
    assert back.name == "R" and back.tuples == frozenset({("1", "2"), ("3", "4")})
    (tmp_path / "bad.csv").write_text("A,Q\n1,2\n")
    with pytest.raises(InvalidInput):
        load_relation(tmp_path / "bad.csv", U)


def test_database_names_are_unique():
    with pytest.raises(InvalidInput):
        Database((rel("A", (1,)), rel("B", (2,))))


# -- chase --------------------------------------------------------------------------------------


def test_chase_examples():
    c = Cover(U, (U.set("AB"), U.set("AC")))
    assert chase_lossless(c, [fd(U, "A", "B")]).lossless
    assert not chase_lossless(Cover(U, (U.set("AB"), U.set("BC"), U.set("AC"))), []).lossless
    res = chase_lossless(Cover(U, (U.full(),)), [])
    assert res.lossless and res.steps == 0


def test_initial_tableau_and_render():
    t = Tableau.initial(Cover(U, (U.set("AB"), U.set("AC"))))
    assert t.rows == ((0, 0, 1), (0, 2, 0))
    assert t.render(U.names) == [["aA", "aB", "b1C"], ["aA", "b2B", "aC"]]


def test_chase_agrees_with_binary_criterion():
    params = GeneratorParams(max_attributes=7, max_fds=8, max_lhs=2, seed=21)
    rng = random.Random(21)
    for _ in range(1000):
        s = random_schema(params, rng)
        c = random_cover(s.universe, params, rng, k=2)
        assert chase_lossless(c, s.fds).lossless == binary_lossless(c[0], c[1], s.fds).lossless


def test_chase_verdict_is_order_independent():
    params = GeneratorParams(max_attributes=6, max_fds=8, max_lhs=2, max_components=4, seed=5)
    rng = random.Random(5)
    for _ in range(500):
        s = random_schema(params, rng)
        c = random_cover(s.universe, params, rng)
        fds = list(s.fds)
        base = chase_lossless(c, fds).lossless
        rng.shuffle(fds)
        comps = list(c)
        rng.shuffle(comps)
        assert chase_lossless(Cover(c.universe, tuple(comps)), fds).lossless == base
        assert chase_lossless(c, list(reversed(fds))).lossless == base


def test_chase_terminates_with_shrinking_class_count():
    params = GeneratorParams(max_attributes=6, max_fds=10, max_lhs=2, max_components=4, seed=8)
    rng = random.Random(8)
    for _ in range(300):
        s = random_schema(params, rng)
        c = random_cover(s.universe, params, rng)
        res = chase_lossless(c, s.fds)
        symbols = len(c) * len(c.universe)
        assert res.steps <= symbols
        assert len(res.class_counts) == res.steps + 1
        assert all(b < a for a, b in zip(res.class_counts, res.class_counts[1:]))
        assert res.class_counts[-1] == res.final.class_count()


def test_lossless_covers_reproduce_instances_and_lossy_ones_have_witnesses():
    params = GeneratorParams(max_attributes=5, max_fds=6, max_lhs=2, max_components=3, seed=17)
    rng = random.Random(17)
    lossless_seen = lossy_seen = 0
    for _ in range(60):
        s = random_schema(params, rng)
        c = random_cover(s.universe, params, rng)
        res = chase_lossless(c, s.fds)
        if res.lossless:
            lossless_seen += 1
            for _ in range(100):
                r = random_instance(s.universe, list(s.fds), rng, rng.randint(1, 6), domain=4)
                rows = list(r.tuples)
                assert satisfies(rows, s.fds)
                assert projections_join(rows, c) == set(rows)
        else:
            lossy_seen += 1
            witness = tableau_instance(res.final)
            assert satisfies(witness, s.fds)
            joined = projections_join(witness, c)
            assert set(witness) < joined
            assert tuple([0] * len(s.universe)) in joined - set(witness)
    assert lossless_seen and lossy_seen


def test_random_search_finds_lossy_witness():
    c = Cover(U, (U.set("AB"), U.set("AC")))
    rng = random.Random(0)
    found = None
    for _ in range(200):
        rows = list({tuple(rng.randrange(4) for _ in range(3)) for _ in range(3)})
        if projections_join(rows, c) > set(rows):
            found = rows
            break
    assert found is not None and not chase_lossless(c, []).lossless


def test_chase_rejects_foreign_fds():
    other = AttributeUniverse(tuple("AB"))
    with pytest.raises(InvalidInput):
        chase_lossless(Cover(U, (U.full(),)), [fd(other, "A", "B")])
