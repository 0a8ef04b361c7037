"""Command-line front end.

Exit status: 0 when the analysis ran (whatever its verdict), 2 on input
errors, 3 when an enumeration budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from fdtopo import audit as audits
from fdtopo.chase import chase_lossless
from fdtopo.decomposition import (
    Cover,
    JoinTree,
    binary_lossless,
    build_join_tree,
    check_tree_shape,
    gyo_reduce,
    nerve,
    nerve_obstruction,
    verify_running_intersection,
)
from fdtopo.errors import BudgetExceeded, InvalidInput
from fdtopo.fd import (
    DEFAULT_PROJECTION_BUDGET,
    CanonicalCover,
    Schema,
    canonical_cover,
    closure,
    cover_defects,
    declared_cover,
    is_dependency_preserving,
)
from fdtopo.homology import (
    SimplicialComplex,
    dependency_complex,
    h1_cycle_basis,
    induced,
    is_snf,
    reduced_betti_profile,
)
from fdtopo.planner import JoinPlan, execute_plan, left_fold_sizes, naive_join, yannakakis_plan
from fdtopo.relational import Database, RelationInstance, load_relation

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3

HOMOLOGY_CAVEAT = (
    "homology-caveat: a keyed side need not have the same positive-degree homology as the "
    "intersection; the homology shown is diagnostic only (run `fdtopo audit keyed-homology`)"
)


# -- documents -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SchemaDocument:
    schema: Schema
    cover_mode: str
    decomposition: Cover | None
    relations: dict[str, Path]
    source: Path | None = None


def parse_document(doc: Any, base: Path | None = None) -> SchemaDocument:
    if not isinstance(doc, dict):
        raise InvalidInput("schema document must be a JSON object")
    attributes = doc.get("attributes")
    if not isinstance(attributes, list) or not attributes:
        raise InvalidInput("schema document needs a non-empty 'attributes' list")
    fds = []
    for i, entry in enumerate(doc.get("fds", [])):
        if not isinstance(entry, dict) or "lhs" not in entry or "rhs" not in entry:
            raise InvalidInput(f"FD #{i} must be an object with 'lhs' and 'rhs' name lists")
        lhs, rhs = entry["lhs"], entry["rhs"]
        if isinstance(lhs, str) or isinstance(rhs, str) or not lhs or not rhs:
            raise InvalidInput(f"FD #{i}: 'lhs' and 'rhs' must be non-empty name lists")
        fds.append((lhs, rhs))
    schema = Schema.build(attributes, fds)

    mode = doc.get("cover", "canonical")
    if mode not in ("canonical", "declared"):
        raise InvalidInput("'cover' must be 'canonical' or 'declared'")

    decomposition = None
    if "decomposition" in doc:
        comps, names = [], []
        for i, entry in enumerate(doc["decomposition"]):
            if isinstance(entry, dict):
                names.append(entry.get("name", f"R{i + 1}"))
                entry = entry.get("attributes", [])
            else:
                names.append(f"R{i + 1}")
            if not isinstance(entry, list):
                raise InvalidInput(f"decomposition component {i + 1} must list attribute names")
            comps.append(entry)
        decomposition = Cover.of(schema.universe, comps, names)

    relations = {}
    for name, path in (doc.get("relations") or {}).items():
        p = Path(path)
        relations[name] = p if p.is_absolute() or base is None else base / p
    return SchemaDocument(schema, mode, decomposition, relations, base)


def load_document(path: str | Path) -> SchemaDocument:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    return parse_document(doc, path.parent)


# -- reports ------------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any]
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        # reports carry JSON values only, so emit/parse is lossless
        self.inputs = json.loads(json.dumps(self.inputs))
        self.results = json.loads(json.dumps(self.results))
        self.warnings = list(self.warnings)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        doc = json.loads(text)
        return cls(doc["command"], doc["inputs"], doc["results"], doc["warnings"])

    def to_text(self) -> str:
        lines = [f"== {self.command} =="]
        lines.extend(_render(self.results, 0))
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def _render(value: Any, depth: int) -> list[str]:
    pad = "  " * depth
    out: list[str] = []
    if isinstance(value, dict):
        for key, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{pad}{key}:")
                out.extend(_render(v, depth + 1))
            else:
                out.append(f"{pad}{key}: {_inline(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict) and v:
                body = _render(v, depth + 1)
                out.append(f"{pad}- " + body[0].lstrip())
                out.extend(body[1:])
            elif isinstance(v, list) and not _flat(v):
                out.append(f"{pad}-")
                out.extend(_render(v, depth + 1))
            else:
                out.append(f"{pad}- {_inline(v)}")
    else:
        out.append(f"{pad}{_inline(value)}")
    return out


def _flat(v: Any) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x)) for x in v)


def _inline(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


# -- shared analysis helpers --------------------------------------------------------------


def _cover(doc: SchemaDocument, mode: str | None) -> tuple[CanonicalCover, list[str]]:
    mode = mode or doc.cover_mode
    if mode == "declared":
        cover = declared_cover(doc.schema)
        notes = [f"declared cover is not canonical: {d}" for d in cover_defects(list(cover.fds))]
        return cover, list(cover.warnings) + notes
    cover = canonical_cover(doc.schema)
    return cover, list(cover.warnings)


def _complex(doc: SchemaDocument, args: argparse.Namespace) -> tuple[SimplicialComplex, CanonicalCover, list[str]]:
    cover, warnings = _cover(doc, getattr(args, "cover", None))
    k = dependency_complex(cover, doc.schema.universe, support_only=getattr(args, "support_only", False))
    if k.is_empty:
        raise InvalidInput("dependency complex is empty (no FDs and --support-only)")
    return k, cover, warnings


def _faces(k: SimplicialComplex, faces) -> list[list[str]]:
    return [list(k.name(f)) for f in faces]


def _profile(k: SimplicialComplex) -> list[int] | None:
    return None if k.is_empty else list(reduced_betti_profile(k).reduced_betti)


def _need_decomposition(doc: SchemaDocument) -> Cover:
    if doc.decomposition is None:
        raise InvalidInput("this command needs a 'decomposition' in the schema document")
    return doc.decomposition


def _tree_from_file(path: str, cover: Cover) -> JoinTree:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    edges = spec.get("edges") if isinstance(spec, dict) else None
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise InvalidInput(f"{path}: expected an object with 'edges': [[component, component], ...]")
    pairs = [(cover.index_of(str(a)), cover.index_of(str(b))) for a, b in edges]
    return JoinTree.from_pairs(cover, pairs)


def _tree_payload(tree: JoinTree, cover: Cover) -> list[dict[str, Any]]:
    return [
        {"between": [cover.names[e.a], cover.names[e.b]], "separator": list(e.separator.names)}
        for e in tree.edges
    ]


def _resolve_tree(args: argparse.Namespace, cover: Cover) -> JoinTree | None:
    if getattr(args, "tree", None):
        tree = _tree_from_file(args.tree, cover)
        if not verify_running_intersection(tree, cover):
            raise InvalidInput(f"{args.tree}: tree violates the running-intersection property")
        return tree
    return build_join_tree(cover)


def _plan(args: argparse.Namespace, cover: Cover) -> JoinPlan | None:
    tree = _resolve_tree(args, cover)
    if tree is None:
        return None
    root = cover.index_of(args.root) if args.root else 0
    return yannakakis_plan(tree, root, args.passes, cover.components)


def _plan_payload(plan: JoinPlan, cover: Cover) -> dict[str, Any]:
    return {
        "root": cover.names[plan.root],
        "passes": plan.passes,
        "reduction": [
            {"target": cover.names[s.target], "source": cover.names[s.source], "separator": list(s.separator.names)}
            for s in plan.reduction
        ],
        "join_order": [cover.names[i] for i in plan.join_order],
        "tree": _tree_payload(plan.tree, cover),
    }


def _relation_payload(r: RelationInstance) -> dict[str, Any]:
    rows = sorted(([str(v) for v in t] for t in r.tuples))
    return {"attributes": list(r.attrs.names), "rows": rows, "cardinality": len(r)}


def load_database(doc: SchemaDocument, cover: Cover) -> Database:
    relations = []
    for name, comp in zip(cover.names, cover):
        if name not in doc.relations:
            raise InvalidInput(f"no relation file given for component {name}")
        rel = load_relation(doc.relations[name], doc.schema.universe, name)
        if rel.attrs != comp:
            raise InvalidInput(f"relation file for {name} has attributes {rel.attrs}, component is {comp}")
        relations.append(rel)
    return Database(tuple(relations))


# -- commands -----------------------------------------------------------------------------


def cmd_closure(doc: SchemaDocument, args: argparse.Namespace) -> tuple[dict, list[str]]:
    universe = doc.schema.universe
    x = universe.empty()
    for token in args.attributes:
        x = x | universe.set(token)
    return {"attributes": list(x.names), "closure": list(closure(x, doc.schema.fds).names)}, []


def cmd_cover(doc, args):
    cover, warnings = _cover(doc, args.cover)
    fds = [{"lhs": list(f.lhs.names), "rhs": doc.schema.universe.names[f.rhs], "from": list(p)} for f, p in zip(cover.fds, cover.provenance)]
    return {"mode": args.cover or doc.cover_mode, "fds": fds}, warnings


def cmd_complex(doc, args):
    k, _, warnings = _complex(doc, args)
    return {
        "maximal_faces": _faces(k, k.maximal_faces),
        "dimension": k.dimension,
        "f_vector": list(k.f_vector()),
    }, warnings


def cmd_betti(doc, args):
    k, _, warnings = _complex(doc, args)
    return {"reduced_betti": _profile(k), "field": "GF(2)"}, warnings


def cmd_snf(doc, args):
    k, _, warnings = _complex(doc, args)
    verdict = is_snf(k)
    return {"snf": verdict.snf, "profile": list(verdict.profile.reduced_betti)}, warnings


def cmd_cycles(doc, args):
    k, _, warnings = _complex(doc, args)
    cycles = h1_cycle_basis(k)
    return {"b1": len(cycles), "cycles": [_faces(k, c) for c in cycles]}, warnings


def cmd_lossless(doc, args):
    cover = _need_decomposition(doc)
    if len(cover) != 2:
        raise InvalidInput(f"binary lossless test needs exactly 2 components, got {len(cover)}")
    verdict = binary_lossless(cover[0], cover[1], doc.schema.fds)
    k, _, warnings = _complex(doc, args)
    homology = {"left": _profile(induced(k, cover[0])), "right": _profile(induced(k, cover[1]))}
    if verdict.intersection:
        homology["intersection"] = _profile(induced(k, verdict.intersection))
    return {
        "lossless": verdict.lossless,
        "keyed_side": verdict.keyed_side,
        "intersection": list(verdict.intersection.names),
        "reduced_betti": homology,
    }, warnings + [HOMOLOGY_CAVEAT]


def cmd_chase(doc, args):
    cover = _need_decomposition(doc)
    res = chase_lossless(cover, doc.schema.fds)
    return {
        "lossless": res.lossless,
        "steps": res.steps,
        "all_distinguished_rows": [cover.names[i] for i in res.final.all_distinguished_rows()],
        "final": res.final.render(doc.schema.universe.names),
    }, []


def cmd_preserve(doc, args):
    cover = _need_decomposition(doc)
    ok = is_dependency_preserving(list(cover), doc.schema.fds, args.budget)
    return {"dependency_preserving": ok}, []


def cmd_nerve(doc, args):
    cover = _need_decomposition(doc)
    k_f = None
    if args.mode == "complex":
        k_f, _, _ = _complex(doc, args)
    nv = nerve(cover, args.mode, k_f)
    obs = nerve_obstruction(cover, args.mode, k_f)
    names = doc.schema.universe.names
    return {
        "mode": args.mode,
        "components": list(cover.names),
        "maximal_faces": [[i + 1 for i in f] for f in nv.complex.maximal_faces],
        "witnesses": [{"face": [i + 1 for i in f], "attribute": names[w]} for f, w in sorted(nv.witness.items(), key=lambda t: (len(t[0]), t[0]))],
        "reduced_betti": _profile(nv.complex),
        "b1": obs.b1,
        "cycles": [[i + 1 for i in c] for c in obs.cycles],
        "join_tree_possible": obs.b1 == 0,
    }, []


def cmd_gyo(doc, args):
    cover = _need_decomposition(doc)
    res = gyo_reduce(cover)
    names = doc.schema.universe.names
    steps = []
    for s in res.trace.steps:
        entry = {"kind": s.kind, "component": cover.names[s.component]}
        if s.attribute is not None:
            entry["attribute"] = names[s.attribute]
        if s.into is not None:
            entry["into"] = cover.names[s.into]
        steps.append(entry)
    residual = [{"component": cover.names[i], "attributes": list(a.names)} for i, a in res.trace.residual]
    return {"acyclic": res.acyclic, "steps": steps, "residual": residual}, []


def cmd_jointree(doc, args):
    cover = _need_decomposition(doc)
    if args.tree:
        tree = _tree_from_file(args.tree, cover)
        ok = verify_running_intersection(tree, cover)
        return {"source": "given", "running_intersection": ok, "tree": _tree_payload(tree, cover)}, []
    tree = build_join_tree(cover)
    if tree is None:
        return {"source": "constructed", "tree": None, "running_intersection": False}, ["cover is cyclic: no join tree exists"]
    return {"source": "constructed", "running_intersection": True, "tree": _tree_payload(tree, cover)}, []


def cmd_plan(doc, args):
    cover = _need_decomposition(doc)
    plan = _plan(args, cover)
    if plan is None:
        return {"plan": None}, ["cover is cyclic: no join tree, so no semijoin plan"]
    return {"plan": _plan_payload(plan, cover)}, []


def cmd_exec(doc, args):
    cover = _need_decomposition(doc)
    db = load_database(doc, cover)
    plan = _plan(args, cover)
    naive = naive_join(db)
    naive_sizes = left_fold_sizes(db)
    results: dict[str, Any] = {"naive": {"result": _relation_payload(naive), "peak_intermediate": max(naive_sizes), "sizes": naive_sizes}}
    if plan is None:
        results["plan"] = None
        return results, ["cover is cyclic: no join tree, so no semijoin plan"]
    run = execute_plan(plan, db)
    results["plan"] = _plan_payload(plan, cover)
    results["result"] = _relation_payload(run.result)
    results["matches_naive"] = run.result == naive
    results["cost"] = {
        "peak_intermediate": run.cost.peak_intermediate,
        "tuples_touched": run.cost.tuples_touched,
        "steps": [
            {"kind": s.kind, "target": s.target, "source": s.source, "inputs": list(s.input_sizes), "output": s.output_size}
            for s in run.cost.steps
        ],
    }
    return results, []


AUDITS = ("binary", "keyed-homology", "nerve-gyo", "mv")


def cmd_audit(args: argparse.Namespace) -> tuple[dict, list[str]]:
    params = audits.GeneratorParams(args.max_attributes, args.max_fds, args.max_lhs, args.max_components, args.seed)
    which = AUDITS if args.which == "all" else (args.which,)
    reports = {}
    warnings = []
    for name in which:
        if name == "binary":
            rep = audits.audit_binary_equivalence(params, args.trials)
        elif name == "keyed-homology":
            rep = audits.audit_keyed_homology(params, args.trials)
            if rep.notes.get("falsified"):
                warnings.append(f"keyed-homology: {len(rep.violations)} counterexample(s); keyed-side homology claim fails")
        elif name == "nerve-gyo":
            rep = audits.audit_nerve_gyo(audits.GeneratorParams(min(args.max_attributes, 5), args.max_fds, args.max_lhs, min(args.max_components, 4), args.seed))
        else:
            rep = audits.audit_mv_exactness(params, args.trials)
        reports[rep.claim] = rep.to_dict()
    return {"audits": reports}, warnings


# -- DOT export ---------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_complex(k: SimplicialComplex, cover: CanonicalCover) -> str:
    lines = ["graph complex {"]
    for (v,) in k.faces(0):
        lines.append(f"  {_q(k.labels[v])};")
    for a, b in k.faces(1) if k.dimension >= 1 else ():
        sources = [str(f) for f in cover.fds if a in f.support and b in f.support]
        lines.append(f"  {_q(k.labels[a])} -- {_q(k.labels[b])} [label={_q(', '.join(sources))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_nerve(cover: Cover, mode: str = "attribute", k_f: SimplicialComplex | None = None) -> str:
    nv = nerve(cover, mode, k_f)
    names = cover.universe.names
    lines = ["graph nerve {"]
    for i, name in enumerate(cover.names):
        lines.append(f"  {_q(str(i + 1))} [label={_q(f'{i + 1}: {name}')}];")
    for a, b in nv.complex.faces(1) if nv.complex.dimension >= 1 else ():
        lines.append(f"  {_q(str(a + 1))} -- {_q(str(b + 1))} [label={_q(names[nv.witness[(a, b)]])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_join_tree(tree: JoinTree | None, cover: Cover) -> str:
    lines = ["graph join_tree {"]
    if tree is None:
        lines.append("  // cover is cyclic: no join tree")
    else:
        for name, comp in zip(cover.names, cover):
            lines.append(f"  {_q(name)} [shape=box, label={_q(name + '(' + ','.join(comp.names) + ')')}];")
        for e in tree.edges:
            lines.append(f"  {_q(cover.names[e.a])} -- {_q(cover.names[e.b])} [label={_q(str(e.separator))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(doc, args):
    if args.target == "complex":
        k, cover, warnings = _complex(doc, args)
        return {"target": "complex", "dot": dot_complex(k, cover)}, warnings
    decomposition = _need_decomposition(doc)
    if args.target == "nerve":
        k_f = _complex(doc, args)[0] if args.mode == "complex" else None
        return {"target": "nerve", "dot": dot_nerve(decomposition, args.mode, k_f)}, []
    if args.tree:
        tree = _tree_from_file(args.tree, decomposition)
        check_tree_shape(tree)
    else:
        tree = build_join_tree(decomposition)
    return {"target": "jointree", "dot": dot_join_tree(tree, decomposition)}, []


# -- argument parsing ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")

    doc_args = argparse.ArgumentParser(add_help=False, parents=[common])
    doc_args.add_argument("schema", help="schema document (JSON)")
    doc_args.add_argument("--cover", choices=("canonical", "declared"), help="override the document's cover mode")
    doc_args.add_argument("--support-only", action="store_true", help="leave attributes no FD mentions out of the complex")

    parser = argparse.ArgumentParser(prog="fdtopo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", parents=[doc_args], help="attribute closure")
    p.add_argument("attributes", nargs="+", help="attribute names (\"AB\" is read as A, B)")
    for name, help_ in (
        ("cover", "canonical or declared cover"),
        ("complex", "maximal faces of the dependency complex"),
        ("betti", "reduced Betti numbers over GF(2)"),
        ("snf", "homological acyclicity verdict"),
        ("cycles", "H1 cycle representatives"),
        ("lossless", "binary lossless-join criterion"),
        ("chase", "tableau chase for k-way lossless join"),
        ("gyo", "GYO reduction trace"),
    ):
        sub.add_parser(name, parents=[doc_args], help=help_)

    p = sub.add_parser("preserve", parents=[doc_args], help="dependency preservation")
    p.add_argument("--budget", type=int, default=DEFAULT_PROJECTION_BUDGET, help="max subsets per projection")

    p = sub.add_parser("nerve", parents=[doc_args], help="nerve of the decomposition and its H1")
    p.add_argument("--mode", choices=("attribute", "complex"), default="attribute")

    p = sub.add_parser("jointree", parents=[doc_args], help="build or verify a join tree")
    p.add_argument("--tree", help="JSON file with 'edges' to verify instead of building")

    for name, help_ in (("plan", "semijoin reduction plan"), ("exec", "execute a plan against relation files")):
        p = sub.add_parser(name, parents=[doc_args], help=help_)
        p.add_argument("--root", help="root component (name or 1-based number)")
        p.add_argument("--passes", choices=("bottomup", "full"), default="bottomup")
        p.add_argument("--tree", help="JSON file with 'edges' to use instead of the built tree")

    p = sub.add_parser("export-dot", parents=[doc_args], help="Graphviz rendering")
    p.add_argument("--target", choices=("complex", "nerve", "jointree"), required=True)
    p.add_argument("--mode", choices=("attribute", "complex"), default="attribute")
    p.add_argument("--tree", help="JSON file with 'edges' (jointree target)")

    p = sub.add_parser("audit", parents=[common], help="randomized and exhaustive audits")
    p.add_argument("which", choices=AUDITS + ("all",))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-attributes", type=int, default=6)
    p.add_argument("--max-fds", type=int, default=8)
    p.add_argument("--max-lhs", type=int, default=2)
    p.add_argument("--max-components", type=int, default=4)
    return parser


COMMANDS = {
    "closure": cmd_closure,
    "cover": cmd_cover,
    "complex": cmd_complex,
    "betti": cmd_betti,
    "snf": cmd_snf,
    "cycles": cmd_cycles,
    "lossless": cmd_lossless,
    "chase": cmd_chase,
    "preserve": cmd_preserve,
    "nerve": cmd_nerve,
    "gyo": cmd_gyo,
    "jointree": cmd_jointree,
    "plan": cmd_plan,
    "exec": cmd_exec,
    "export-dot": cmd_export_dot,
}


def _echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "command")}


@dataclass
class Outcome:
    code: int
    report: Report | None = None
    error: str = ""
    format: str = "text"


def run(argv: Sequence[str]) -> Outcome:
    """Parse and dispatch without printing anything."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return Outcome(int(exc.code or 0))
    try:
        if args.command == "audit":
            results, warnings = cmd_audit(args)
        else:
            doc = load_document(args.schema)
            results, warnings = COMMANDS[args.command](doc, args)
    except BudgetExceeded as exc:
        return Outcome(EXIT_BUDGET, error=str(exc), format=args.format)
    except InvalidInput as exc:
        return Outcome(EXIT_INPUT, error=str(exc), format=args.format)
    return Outcome(EXIT_OK, Report(args.command, _echo(args), results, warnings), format=args.format)


def main(argv: Sequence[str] | None = None) -> int:
    out = run(sys.argv[1:] if argv is None else argv)
    if out.error:
        print(f"fdtopo: error: {out.error}", file=sys.stderr)
    if out.report is None:
        return out.code
    if out.format == "json":
        sys.stdout.write(out.report.to_json())
    elif out.report.command == "export-dot":
        sys.stdout.write(out.report.results["dot"])
    else:
        sys.stdout.write(out.report.to_text())
    return out.code


if __name__ == "__main__":
    sys.exit(main())
