"""Seeded and exhaustive audits of the topological diagnostics against exact oracles.

Every violation is stored as plain JSON-ready data (inputs plus the values
computed from them) so that :func:`replay` can recompute it.
"""

from __future__ import annotations

import json
import random
import string
import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Any, Callable

from fdtopo.chase import chase_lossless
from fdtopo.decomposition import (
    Cover,
    binary_lossless,
    build_join_tree,
    gyo_reduce,
    nerve,
)
from fdtopo.errors import BudgetExceeded, InvalidInput
from fdtopo.fd import (
    AttributeSet,
    AttributeUniverse,
    FunctionalDependency,
    Schema,
    canonical_cover,
    implies,
    is_dependency_preserving,
)
from fdtopo.homology import (
    SimplicialComplex,
    dependency_complex,
    induced,
    mv_exactness_audit,
    reduced_betti_profile,
)
from fdtopo.relational import Database, RelationInstance

ComplexBuilder = Callable[[Schema], SimplicialComplex]

ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class GeneratorParams:
    max_attributes: int = 6
    max_fds: int = 8
    max_lhs: int = 2
    max_components: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("max_attributes", "max_fds", "max_lhs", "max_components"):
            if getattr(self, name) < 1:
                raise InvalidInput(f"{name} must be at least 1")


def attribute_names(n: int) -> tuple[str, ...]:
    letters = string.ascii_uppercase
    if n <= len(letters):
        return tuple(letters[:n])
    return tuple(f"A{i}" for i in range(n))


def _rng(params: GeneratorParams, rng: random.Random | None) -> random.Random:
    return rng if rng is not None else random.Random(params.seed)


def random_schema(params: GeneratorParams, rng: random.Random | None = None) -> Schema:
    rng = _rng(params, rng)
    n = rng.randint(1, params.max_attributes)
    universe = AttributeUniverse(attribute_names(n))
    fds: list[FunctionalDependency] = []
    if n > 1:
        for _ in range(rng.randint(0, params.max_fds)):
            size = rng.randint(1, min(params.max_lhs, n - 1))
            lhs = rng.sample(range(n), size)
            rhs = rng.choice([a for a in range(n) if a not in lhs])
            fds.append(FunctionalDependency(universe.from_positions(lhs), rhs))
    return Schema(universe, tuple(fds))


def random_cover(
    universe: AttributeUniverse,
    params: GeneratorParams,
    rng: random.Random | None = None,
    k: int | None = None,
) -> Cover:
    """``k`` random components (default: 1..max_components) that jointly cover ``universe``."""
    rng = _rng(params, rng)
    n = len(universe)
    k = k if k is not None else rng.randint(1, params.max_components)
    comps = [{a for a in range(n) if rng.random() < 0.5} for _ in range(k)]
    for a in range(n):
        if not any(a in c for c in comps):
            comps[rng.randrange(k)].add(a)
    for c in comps:
        if not c:
            c.add(rng.randrange(n))
    return Cover(universe, tuple(universe.from_positions(c) for c in comps))


def repair(rows: list[list[int]], fds: list[tuple[list[int], int]]) -> list[list[int]]:
    """Enforce FDs (given as column lists over ``rows``) by lowering dependent values to the
    smallest one in each left-hand-side group.  Terminates since the value sum only drops."""
    changed = True
    while changed:
        changed = False
        for lhs, rhs in fds:
            low: dict[tuple, int] = {}
            for r in rows:
                key = tuple(r[c] for c in lhs)
                low[key] = min(low.get(key, r[rhs]), r[rhs])
            for r in rows:
                v = low[tuple(r[c] for c in lhs)]
                if r[rhs] != v:
                    r[rhs] = v
                    changed = True
    return rows


def random_instance(
    universe: AttributeUniverse,
    fds: list[FunctionalDependency],
    rng: random.Random,
    size: int,
    domain: int = 4,
) -> RelationInstance:
    """Universal relation over ``universe`` satisfying ``fds``, values in ``0..domain-1``."""
    n = len(universe)
    rows = [[rng.randrange(domain) for _ in range(n)] for _ in range(size)]
    repair(rows, [(list(f.lhs), f.rhs) for f in fds])
    return RelationInstance("r", universe.full(), frozenset(map(tuple, rows)))


def random_database(
    cover: Cover,
    params: GeneratorParams,
    rng: random.Random | None = None,
    fds: list[FunctionalDependency] | tuple = (),
    size: int = 3,
    domain: int = 4,
) -> Database:
    """One independently drawn relation per component; FDs that fit inside a component are enforced."""
    rng = _rng(params, rng)
    relations = []
    for name, comp in zip(cover.names, cover):
        cols = comp.positions
        local = [([cols.index(a) for a in f.lhs], cols.index(f.rhs)) for f in fds if f.support <= comp]
        rows = [[rng.randrange(domain) for _ in cols] for _ in range(size)]
        repair(rows, local)
        relations.append(RelationInstance(name, comp, frozenset(map(tuple, rows))))
    return Database(tuple(relations))


def random_complex(rng: random.Random, n_vertices: int, n_faces: int, max_face: int) -> SimplicialComplex:
    """Random complex containing every vertex plus ``n_faces`` random faces of size 2..max_face."""
    gens: list[tuple[int, ...]] = [(v,) for v in range(n_vertices)]
    top = min(max_face, n_vertices)
    for _ in range(n_faces if top >= 2 else 0):
        gens.append(tuple(rng.sample(range(n_vertices), rng.randint(2, top))))
    return SimplicialComplex(n_vertices, gens)


# -- serialization -------------------------------------------------------------


def schema_to_dict(schema: Schema) -> dict[str, Any]:
    names = schema.universe.names
    return {
        "attributes": list(names),
        "fds": [{"lhs": list(f.lhs.names), "rhs": [names[f.rhs]]} for f in schema.fds],
    }


def schema_from_dict(doc: dict[str, Any]) -> Schema:
    return Schema.build(doc["attributes"], [(d["lhs"], d["rhs"]) for d in doc["fds"]])


def cover_to_list(cover: Cover) -> list[list[str]]:
    return [list(c.names) for c in cover]


def complex_to_dict(k: SimplicialComplex) -> dict[str, Any]:
    return {"n_vertices": k.n_vertices, "maximal_faces": [list(f) for f in k.maximal_faces]}


def complex_from_dict(doc: dict[str, Any]) -> SimplicialComplex:
    return SimplicialComplex(doc["n_vertices"], doc["maximal_faces"])


@dataclass(frozen=True)
class AuditReport:
    claim: str
    trials: int
    checked: int
    violations: tuple[dict[str, Any], ...]
    seed: int
    notes: dict[str, Any] = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form; ``elapsed`` is left out so equal runs serialize identically."""
        return {
            "claim": self.claim,
            "trials": self.trials,
            "checked": self.checked,
            "violations": list(self.violations),
            "seed": self.seed,
            "notes": dict(self.notes),
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> AuditReport:
        return cls(doc["claim"], doc["trials"], doc["checked"], tuple(doc["violations"]), doc["seed"], doc["notes"])


def _canonical(violations: list[dict[str, Any]]) -> tuple[dict[str, Any], ...]:
    return tuple(sorted(violations, key=lambda v: json.dumps(v, sort_keys=True)))


def _trial_seeds(seed: int, trials: int) -> list[int]:
    master = random.Random(seed)
    return [master.getrandbits(32) for _ in range(trials)]


# -- binary criterion vs chase ---------------------------------------------------------


def _binary_values(schema: Schema, cover: Cover) -> dict[str, Any]:
    chase = chase_lossless(cover, schema.fds).lossless
    verdict = binary_lossless(cover[0], cover[1], schema.fds)
    return {"chase": chase, "criterion": verdict.lossless, "keyed_side": verdict.keyed_side}


def audit_binary_equivalence(params: GeneratorParams, trials: int) -> AuditReport:
    """Chase verdict versus the intersection-key criterion on random binary decompositions."""
    start = time.perf_counter()
    violations = []
    for t, s in enumerate(_trial_seeds(params.seed, trials)):
        rng = random.Random(s)
        schema = random_schema(params, rng)
        cover = random_cover(schema.universe, params, rng, k=2)
        values = _binary_values(schema, cover)
        if values["chase"] != values["criterion"]:
            violations.append({"trial": t, "trial_seed": s, "schema": schema_to_dict(schema), "cover": cover_to_list(cover), "values": values})
    return AuditReport("binary-equivalence", trials, trials, _canonical(violations), params.seed, elapsed=time.perf_counter() - start)


# -- keyed side vs intersection homology -------------------------------------------------------

KEYED_REGRESSION = {
    "schema": {
        "attributes": ["A", "B", "C", "D"],
        "fds": [{"lhs": ["A"], "rhs": ["B"]}, {"lhs": ["B"], "rhs": ["C"]}, {"lhs": ["C"], "rhs": ["A"]}],
    },
    "cover": [["A", "B", "C"], ["A", "D"]],
}


def default_complex(schema: Schema) -> SimplicialComplex:
    return dependency_complex(canonical_cover(schema), schema.universe)


def _positive(profile_betti: tuple[int, ...], top: int) -> list[int]:
    return [profile_betti[n] if n < len(profile_betti) else 0 for n in range(1, top + 1)]


def _keyed_values(schema: Schema, cover: Cover, builder: ComplexBuilder = default_complex) -> list[dict[str, Any]]:
    """One entry per side whose key condition holds under a dependency-preserving split."""
    k = builder(schema)
    u1, u2 = cover[0], cover[1]
    common = u1 & u2
    if not common:
        return []
    fds = list(canonical_cover(schema).fds)
    preserving = is_dependency_preserving([u1, u2], fds)
    out = []
    for side, comp in (("left", u1), ("right", u2)):
        if not implies(fds, common, comp):
            continue
        keyed = reduced_betti_profile(induced(k, comp)).reduced_betti
        inter = reduced_betti_profile(induced(k, common)).reduced_betti
        top = max(len(keyed), len(inter)) - 1
        out.append(
            {
                "keyed_side": side,
                "dependency_preserving": preserving,
                "betti_keyed": _positive(keyed, max(top, 1)),
                "betti_intersection": _positive(inter, max(top, 1)),
            }
        )
    return out


def _keyed_violations(schema: Schema, cover: Cover, builder: ComplexBuilder) -> list[dict[str, Any]]:
    return [
        v
        for v in _keyed_values(schema, cover, builder)
        if v["dependency_preserving"] and v["betti_keyed"] != v["betti_intersection"]
    ]


def audit_keyed_homology(params: GeneratorParams, trials: int, complex_builder: ComplexBuilder | None = None) -> AuditReport:
    """Does a keyed side have the same positive-degree homology as the intersection?

    Checked on dependency-preserving binary splits where the intersection is a key
    for a side, plus the fixed regression instance.  ``complex_builder`` swaps the
    schema-to-complex encoding.
    """
    builder = complex_builder or default_complex
    start = time.perf_counter()
    violations: list[dict[str, Any]] = []
    checked = 0

    schema = schema_from_dict(KEYED_REGRESSION["schema"])
    cover = Cover.of(schema.universe, KEYED_REGRESSION["cover"])
    for v in _keyed_violations(schema, cover, builder):
        violations.append({"trial": "regression", "trial_seed": None, **KEYED_REGRESSION, "values": v})
    checked += sum(v["dependency_preserving"] for v in _keyed_values(schema, cover, builder))

    for t, s in enumerate(_trial_seeds(params.seed, trials)):
        rng = random.Random(s)
        schema = random_schema(params, rng)
        cover = random_cover(schema.universe, params, rng, k=2)
        values = _keyed_values(schema, cover, builder)
        checked += sum(v["dependency_preserving"] for v in values)
        for v in values:
            if v["dependency_preserving"] and v["betti_keyed"] != v["betti_intersection"]:
                violations.append({"trial": t, "trial_seed": s, "schema": schema_to_dict(schema), "cover": cover_to_list(cover), "values": v})
    notes = {
        "falsified": bool(violations),
        "statement": "keyed side and intersection have equal reduced Betti numbers in degrees >= 1",
    }
    return AuditReport("keyed-homology", trials, checked, _canonical(violations), params.seed, notes, time.perf_counter() - start)


# -- join tree vs nerve homology ------------------------------------------------------------------


def _nerve_gyo_values(cover: Cover) -> dict[str, Any]:
    gyo = gyo_reduce(cover).acyclic
    tree = build_join_tree(cover) is not None
    b1 = reduced_betti_profile(nerve(cover).complex).b1
    return {"gyo_acyclic": gyo, "join_tree": tree, "nerve_b1": b1}


def enumeration_size(max_attributes: int, max_components: int, min_size: int = 2, max_size: int = 3) -> int:
    total = 0
    for n in range(1, max_attributes + 1):
        subsets = sum(comb(n, s) for s in range(min_size, max_size + 1))
        total += sum(comb(subsets + k - 1, k) for k in range(1, max_components + 1))
    return total


def exhaustive_covers(max_attributes: int, max_components: int, min_size: int = 2, max_size: int = 3):
    """Every multiset of 1..max_components components of size min_size..max_size that covers
    its universe, for universes of 1..max_attributes attributes."""
    for n in range(1, max_attributes + 1):
        universe = AttributeUniverse(attribute_names(n))
        full = (1 << n) - 1
        subsets = [
            sum(1 << a for a in combo)
            for size in range(min_size, min(max_size, n) + 1)
            for combo in combinations(range(n), size)
        ]
        for k in range(1, max_components + 1):
            for family in combinations_with_replacement(subsets, k):
                bits = 0
                for b in family:
                    bits |= b
                if bits == full:
                    yield Cover(universe, tuple(AttributeSet(universe, b) for b in family))


def audit_nerve_gyo(
    bounds: GeneratorParams,
    *,
    min_size: int = 2,
    max_size: int = 3,
    stop_on_violation: bool = True,
    limit: int = ENUMERATION_LIMIT,
) -> AuditReport:
    """Exhaustively check that GYO-acyclic covers (and covers with a join tree) have a nerve
    with trivial ``H_1``, and that GYO and join-tree construction agree."""
    needed = enumeration_size(bounds.max_attributes, bounds.max_components, min_size, max_size)
    if needed > limit:
        raise BudgetExceeded(f"exhaustive enumeration needs up to {needed} covers, limit is {limit}", needed, limit)
    start = time.perf_counter()
    violations: list[dict[str, Any]] = []
    counts = {"acyclic": 0, "cyclic": 0, "cyclic_with_trivial_nerve_h1": 0}
    checked = 0
    for cover in exhaustive_covers(bounds.max_attributes, bounds.max_components, min_size, max_size):
        checked += 1
        v = _nerve_gyo_values(cover)
        counts["acyclic" if v["gyo_acyclic"] else "cyclic"] += 1
        if not v["gyo_acyclic"] and v["nerve_b1"] == 0:
            counts["cyclic_with_trivial_nerve_h1"] += 1
        problems = []
        if v["gyo_acyclic"] and v["nerve_b1"] > 0:
            problems.append("gyo-acyclic cover with nontrivial nerve H1")
        if v["join_tree"] and v["nerve_b1"] > 0:
            problems.append("join tree exists but nerve H1 is nontrivial")
        if v["gyo_acyclic"] != v["join_tree"]:
            problems.append("GYO verdict and join-tree construction disagree")
        if problems:
            violations.append({"cover": cover_to_list(cover), "attributes": list(cover.universe.names), "values": v, "problems": problems})
            if stop_on_violation:
                break
    notes = {"halted_early": bool(violations) and stop_on_violation, **counts}
    return AuditReport("nerve-gyo", checked, checked, _canonical(violations), bounds.seed, notes, time.perf_counter() - start)


# -- Mayer-Vietoris exactness -------------------------------------------------------------------------


def _mv_values(k1: SimplicialComplex, k2: SimplicialComplex) -> dict[str, Any]:
    report = mv_exactness_audit(k1, k2)
    return {
        "degenerate": report.degenerate,
        "failed": [[i.position, i.degree, i.lhs, i.rhs] for i in report.identities if not i.holds],
        "checked": len(report.identities),
    }


def audit_mv_exactness(params: GeneratorParams, trials: int) -> AuditReport:
    """Random complexes split into two induced subcomplexes; every exactness identity must hold."""
    start = time.perf_counter()
    violations = []
    for t, s in enumerate(_trial_seeds(params.seed, trials)):
        rng = random.Random(s)
        n = rng.randint(2, max(2, params.max_attributes))
        k = random_complex(rng, n, rng.randint(1, params.max_fds), params.max_lhs + 1)
        side = [rng.randrange(3) for _ in range(n)]  # 0: left only, 1: right only, 2: both
        if 0 not in side and 2 not in side:
            side[0] = 2
        if 1 not in side and 2 not in side:
            side[-1] = 2
        w1 = [v for v in range(n) if side[v] != 1]
        w2 = [v for v in range(n) if side[v] != 0]
        k1, k2 = induced(k, w1), induced(k, w2)
        values = _mv_values(k1, k2)
        if values["failed"]:
            violations.append({"trial": t, "trial_seed": s, "k1": complex_to_dict(k1), "k2": complex_to_dict(k2), "values": values})
    return AuditReport("mv-exactness", trials, trials, _canonical(violations), params.seed, elapsed=time.perf_counter() - start)


# -- replay -----------------------------------------------------------------------------------------


def replay(claim: str, violation: dict[str, Any]) -> Any:
    """Recompute the ``values`` recorded in a violation from its serialized inputs."""
    if claim == "binary-equivalence":
        schema = schema_from_dict(violation["schema"])
        return _binary_values(schema, Cover.of(schema.universe, violation["cover"]))
    if claim == "keyed-homology":
        schema = schema_from_dict(violation["schema"])
        cover = Cover.of(schema.universe, violation["cover"])
        side = violation["values"]["keyed_side"]
        return next(v for v in _keyed_values(schema, cover) if v["keyed_side"] == side)
    if claim == "nerve-gyo":
        universe = AttributeUniverse(tuple(violation["attributes"]))
        return _nerve_gyo_values(Cover.of(universe, violation["cover"]))
    if claim == "mv-exactness":
        return _mv_values(complex_from_dict(violation["k1"]), complex_from_dict(violation["k2"]))
    raise InvalidInput(f"unknown audit claim {claim!r}")
