"""Command line surface: file ingestion, verdict computation, report emission.

Exit status 0 means a verdict was computed (whatever its boolean value),
2 an input problem (parse or schema), 3 an internal invariant violation.
Reports are JSON by default with deterministically ordered keys; --output
table prints flat key/value lines instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .category import (
    CategoryError,
    NonCancellative,
    RelationEndpointMismatch,
    RelationLengthMismatch,
    SchemaError,
    UnknownObject,
    category_to_json,
    load_category,
    skeletalize,
    validate,
)
from .homology import RATIONALS, Field
from .koszul import ExtQuery, ext_simples, is_koszul, quadratic_sufficient, quadraticity_verdict
from .posets import FaceNotInComplex, NotGraded, is_locally_CM, poset_from_json, poset_to_json
from .rs import (
    AxiomsNotVerified,
    FunctorData,
    NotAFunctor,
    NotAlmostDiscrete,
    NotAPartition,
    NotSurjectiveOnMorphisms,
    is_almost_discrete_fibration,
    is_discrete_fibration,
    relation_from_json,
    rs_quotient,
    verify_rs_axioms,
)
from .toric import CapExceeded, NotPointed, load_toric_spec, toric_report, toric_spec_to_json


class ParseError(CategoryError):
    """Input file is not well-formed JSON/TOML; message carries line/column."""


# errors reflecting a bad or mismatched input document (exit 2), as opposed
# to internal invariant violations (exit 3)
INPUT_ERRORS = (
    ParseError,
    SchemaError,
    UnknownObject,
    RelationEndpointMismatch,
    RelationLengthMismatch,
    NonCancellative,
    NotGraded,
    FaceNotInComplex,
    NotAPartition,
    AxiomsNotVerified,
    NotAFunctor,
    NotSurjectiveOnMorphisms,
    NotAlmostDiscrete,
    NotPointed,
    CapExceeded,
)


COMMANDS = (
    "validate",
    "ext",
    "koszul",
    "quadratic",
    "cm",
    "rs-verify",
    "rs-quotient",
    "fibration",
    "toric",
    "emit-fixtures",
)


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    field: Field = RATIONALS
    max_length: Optional[int] = None
    output: str = "json"
    witness_limit: int = 10
    ext_from: Optional[str] = None
    ext_to: Optional[str] = None
    ext_degree: Optional[int] = None
    fixtures_dir: Optional[str] = None


def _read_document(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if p.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_category_input(doc: dict, config: RunConfig, raw: bool = False):
    """Load, then collapse indiscrete degree-0 components and insist on a
    valid category; `raw` skips both (the validate command reports instead)."""
    if config.max_length is not None and "vertices" in doc:
        doc = dict(doc)
        doc["max_length"] = config.max_length
    cat = load_category(doc)
    if raw:
        return cat
    if any(m.length == 0 and not cat.is_identity(i) for i, m in enumerate(cat.morphisms)):
        try:
            cat = skeletalize(cat)
        except CategoryError as exc:
            raise SchemaError(str(exc)) from exc
    rep = validate(cat)
    if not rep.ok:
        first = rep.violations[0]
        raise SchemaError(f"input category violates invariants: {first.kind} {first.message}")
    return cat


def _witness_json(w) -> dict:
    return {
        "morphism": w.label,
        "length": w.length,
        "degree": w.degree,
        "betti": w.betti,
    }


def _functor_from_json(doc: dict) -> FunctorData:
    for key in ("domain", "codomain", "object_map", "morphism_map"):
        if key not in doc:
            raise SchemaError(f"fibration document missing key {key!r}")
    dom = load_category(doc["domain"])
    cod = load_category(doc["codomain"])
    omap = []
    for lab in dom.object_labels:
        if lab not in doc["object_map"]:
            raise SchemaError(f"object_map missing entry for {lab!r}")
        omap.append(cod.object_index(str(doc["object_map"][lab])))
    mmap = []
    for f in range(dom.num_morphisms):
        lab = dom.label(f)
        if lab in doc["morphism_map"]:
            mmap.append(cod.morphism_index(str(doc["morphism_map"][lab])))
        elif dom.is_identity(f):
            mmap.append(cod.identities[omap[dom.source(f)]])
        else:
            raise SchemaError(f"morphism_map missing entry for {lab!r}")
    return FunctorData(dom, cod, tuple(omap), tuple(mmap))


def run(config: RunConfig) -> tuple[int, dict]:
    """Dispatch a RunConfig; returns (exit_status, report)."""
    report: dict = {"tool_version": __version__, "command": config.command}
    try:
        if config.command == "emit-fixtures":
            target = Path(config.fixtures_dir or "fixtures")
            written = emit_fixtures(target)
            report["directory"] = str(target)
            report["files"] = sorted(written)
            return 0, report
        if config.input_path is None:
            raise SchemaError("this command requires an input file")
        doc = _read_document(config.input_path)
        k = config.field

        if config.command == "validate":
            cat = _load_category_input(doc, config, raw=True)
            rep = validate(cat)
            report["valid"] = rep.ok
            report["violations"] = [
                {"kind": v.kind, "witness": list(v.witness), "message": v.message}
                for v in rep.violations[: config.witness_limit]
            ]
            report["objects"] = cat.num_objects
            report["morphisms"] = cat.num_morphisms
        elif config.command == "ext":
            cat = _load_category_input(doc, config)
            if config.ext_from is None or config.ext_to is None:
                raise SchemaError("ext requires --from and --to object labels")
            w = cat.object_index(config.ext_from)
            v = cat.object_index(config.ext_to)
            degrees = (
                [config.ext_degree]
                if config.ext_degree is not None
                else list(range(cat.max_length() + 1))
            )
            if len(degrees) == 1:
                table = ext_simples(cat, ExtQuery(w, v, degrees[0]), k)
                report["ext"] = {str(i): d for i, d in table.items()}
            else:
                report["ext"] = {
                    str(n): {str(i): d for i, d in ext_simples(cat, ExtQuery(w, v, n), k).items()}
                    for n in degrees
                }
            report["from"] = config.ext_from
            report["to"] = config.ext_to
        elif config.command == "koszul":
            cat = _load_category_input(doc, config)
            verdict = is_koszul(cat, k, config.witness_limit)
            report["koszul"] = verdict.koszul
            report["checked_up_to"] = verdict.checked_up_to
            report["witnesses"] = [_witness_json(w) for w in verdict.witnesses]
        elif config.command == "quadratic":
            cat = _load_category_input(doc, config)
            verdict = quadraticity_verdict(cat, k)
            report["verdict"] = verdict.verdict
            report["witness"] = verdict.witness
            report["sufficient_check"] = quadratic_sufficient(cat, k)
        elif config.command == "cm":
            P = poset_from_json(doc)
            ok, witness = is_locally_CM(P, k)
            report["locally_cohen_macaulay"] = ok
            if witness is not None:
                a, b = witness.interval
                report["witness"] = {
                    "interval": [P.labels[a], P.labels[b]],
                    "face": [P.labels[x] for x in witness.face],
                    "degree": witness.degree,
                    "betti": witness.betti,
                }
        elif config.command in ("rs-verify", "rs-quotient"):
            if "poset" not in doc:
                raise SchemaError("document must contain a 'poset' key")
            P = poset_from_json(doc["poset"])
            rel = relation_from_json(P, doc)
            axioms = verify_rs_axioms(P, rel, config.witness_limit)
            report["axioms_ok"] = axioms.ok
            report["a1_failures"] = [repr(x) for x in axioms.a1_failures]
            report["a2_failures"] = [repr(x) for x in axioms.a2_failures]
            report["a4_failures"] = [repr(x) for x in axioms.a4_failures]
            report["tau_order_preserving"] = not axioms.tau_non_monotone
            report["classes"] = rel.num_classes
            if config.command == "rs-quotient":
                Q = rs_quotient(P, rel)
                report["category"] = category_to_json(Q)
                report["objects"] = Q.num_objects
                report["morphisms"] = Q.num_morphisms
        elif config.command == "fibration":
            F = _functor_from_json(doc)
            almost, aw = is_almost_discrete_fibration(F)
            disc, dw = is_discrete_fibration(F)
            report["almost_discrete_fibration"] = almost
            report["discrete_fibration"] = disc
            if aw is not None:
                p, cell, lifts = aw
                report["almost_witness"] = {
                    "morphism": F.domain.label(p),
                    "factorization": None if cell is None else [F.codomain.label(f) for f in cell],
                    "lifts": [[F.domain.label(f) for f in lift] for lift in lifts],
                }
            if dw is not None:
                E, f, lifts = dw
                report["discrete_witness"] = {
                    "object": F.domain.object_labels[E],
                    "morphism": F.codomain.label(f),
                    "lifts": [F.domain.label(g) for g in lifts],
                }
        elif config.command == "toric":
            spec = load_toric_spec(doc)
            report.update(toric_report(spec, k))
        else:
            raise SchemaError(f"unknown command {config.command!r}")
        return 0, report
    except INPUT_ERRORS as exc:
        report["error"] = str(exc)
        report["error_kind"] = type(exc).__name__
        return 2, report
    except Exception as exc:  # internal invariant violation
        report["error"] = str(exc)
        report["error_kind"] = type(exc).__name__
        return 3, report


# ---------- fixture emission ----------

def _f1_toml() -> str:
    lines = [
        "free_rank = 2",
        "torsion = []",
        "max_total_degree = 10",
        "collection = [[0, 0], [1, 0], [0, 1], [1, 1]]",
        "",
    ]
    for name, degree in (("x1", [1, 0]), ("x2", [-1, 1]), ("x3", [1, 0]), ("x4", [0, 1])):
        lines += ["[[variables]]", f'name = "{name}"', f"degree = {degree}", ""]
    return "\n".join(lines)


def _functor_to_json(F: FunctorData) -> dict:
    return {
        "domain": category_to_json(F.domain),
        "codomain": category_to_json(F.codomain),
        "object_map": {
            lab: F.codomain.object_labels[F.object_map[i]]
            for i, lab in enumerate(F.domain.object_labels)
        },
        "morphism_map": {
            F.domain.label(f): F.codomain.label(F.morphism_map[f])
            for f in range(F.domain.num_morphisms)
        },
    }


def _quiver_doc(pres) -> dict:
    return {
        "vertices": list(pres.vertices),
        "arrows": [
            {"label": lab, "src": src, "tgt": tgt, "len": length}
            for lab, src, tgt, length in pres.arrows
        ],
        "relations": [[list(p), list(q)] for p, q in pres.relation_pairs],
        "max_length": pres.max_length,
    }


def emit_fixtures(target: Path) -> list[str]:
    """Write the bundled worked examples and a manifest of expected verdicts."""
    from . import fixtures as fx

    target.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    def put(name: str, payload) -> None:
        path = target / name
        if isinstance(payload, str):
            path.write_text(payload)
        else:
            path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        written.append(name)

    hp = fx.hexagon_poset()
    put("beilinson-p1.json", _quiver_doc(fx.beilinson_p1_quiver()))
    put("beilinson-p2.json", _quiver_doc(fx.beilinson_p2_quiver()))
    put("hexagon-quiver.json", _quiver_doc(fx.hexagon_quiver()))
    put("kx-trunc6.json", _quiver_doc(fx.truncated_kx_quiver(6)))
    put("square-category.json", category_to_json(fx.square_category()))
    put("diamond-poset.json", poset_to_json(fx.diamond_poset()))
    put("hexagon-poset.json", poset_to_json(hp))
    put(
        "v-poset-rs.json",
        {"poset": poset_to_json(fx.v_poset()), "classes": [[["b", "b"], ["c", "c"]]]},
    )
    put(
        "hexagon-rs.json",
        {
            "poset": poset_to_json(hp),
            "classes": [[["a", "b"], ["a", "c"]], [["b", "b"], ["c", "c"]]],
        },
    )
    put("diamond-to-3chain.json", _functor_to_json(fx.diamond_to_3chain()))
    put("diamond-to-doubled.json", _functor_to_json(fx.diamond_to_doubled()))
    put("f1.toml", _f1_toml())
    put("f2.json", toric_spec_to_json(fx.hirzebruch_collection(2)))
    put("f3.json", toric_spec_to_json(fx.hirzebruch_collection(3)))
    put("p2-collection.json", toric_spec_to_json(fx.p2_collection()))
    put("p1xp1.json", toric_spec_to_json(fx.p1xp1_collection()))
    put("weighted-p112.json", toric_spec_to_json(fx.weighted_p112_collection()))

    manifest = [
        {"file": "beilinson-p1.json", "command": "koszul", "expected": {"koszul": True}},
        {"file": "beilinson-p2.json", "command": "koszul", "expected": {"koszul": True}},
        {
            "file": "beilinson-p2.json",
            "command": "ext",
            "args": {"from": "v3", "to": "v1", "degree": 2},
            "expected": {"ext": {"2": 3}},
        },
        {"file": "hexagon-quiver.json", "command": "koszul", "expected": {"koszul": False}},
        {
            "file": "kx-trunc6.json",
            "command": "koszul",
            "expected": {"koszul": True, "checked_up_to": 6},
        },
        {"file": "square-category.json", "command": "koszul", "expected": {"koszul": True}},
        {"file": "diamond-poset.json", "command": "cm", "expected": {"locally_cohen_macaulay": True}},
        {"file": "hexagon-poset.json", "command": "cm", "expected": {"locally_cohen_macaulay": False}},
        {"file": "v-poset-rs.json", "command": "rs-verify", "expected": {"axioms_ok": True}},
        {"file": "hexagon-rs.json", "command": "rs-verify", "expected": {"axioms_ok": True}},
        {
            "file": "diamond-to-3chain.json",
            "command": "fibration",
            "expected": {"almost_discrete_fibration": False, "discrete_fibration": False},
        },
        {
            "file": "diamond-to-doubled.json",
            "command": "fibration",
            "expected": {"almost_discrete_fibration": True, "discrete_fibration": False},
        },
        {"file": "f1.toml", "command": "toric", "expected": {"koszul": False}},
        {"file": "f2.json", "command": "toric", "expected": {"koszul": True}},
        {"file": "f3.json", "command": "toric", "expected": {"koszul": True}},
        {"file": "p2-collection.json", "command": "toric", "expected": {"koszul": True}},
        {
            "file": "p1xp1.json",
            "command": "toric",
            "expected": {"koszul": True, "dual_collection_strong_conditional": True},
        },
        {
            "file": "weighted-p112.json",
            "command": "toric",
            "expected": {
                "koszul": True,
                "dual_collection_strong_conditional": False,
            },
        },
    ]
    put("manifest.json", manifest)
    return written


# ---------- argument parsing ----------

def _flatten(prefix: str, value, lines: list[str]):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    elif isinstance(value, list):
        lines.append(f"{prefix}: {json.dumps(value, sort_keys=True)}")
    else:
        lines.append(f"{prefix}: {value}")


def format_report(report: dict, output: str) -> str:
    if output == "table":
        lines: list[str] = []
        _flatten("", report, lines)
        return "\n".join(lines)
    return json.dumps(report, indent=2, sort_keys=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koszulity",
        description="Koszulity of finite graded category algebras, decided topologically.",
    )
    parser.add_argument("--version", action="version", version=f"koszulity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input file (JSON; .toml accepted for toric)")
        p.add_argument("--char", type=int, default=0, metavar="P", help="prime field characteristic (default: rationals)")
        p.add_argument("--output", choices=("json", "table"), default="json")
        p.add_argument("--witness-limit", type=int, default=10)
        p.add_argument("--max-length", type=int, default=None, help="override quiver truncation bound")

    for name in ("validate", "koszul", "quadratic", "cm", "rs-verify", "rs-quotient", "fibration", "toric"):
        common(sub.add_parser(name))
    ext = sub.add_parser("ext")
    common(ext)
    ext.add_argument("--from", dest="ext_from", required=True, metavar="OBJ")
    ext.add_argument("--to", dest="ext_to", required=True, metavar="OBJ")
    ext.add_argument("--degree", dest="ext_degree", type=int, default=None, metavar="N")
    emit = sub.add_parser("emit-fixtures")
    emit.add_argument("--dir", dest="fixtures_dir", default="fixtures")
    emit.add_argument("--output", choices=("json", "table"), default="json")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    field = Field(getattr(args, "char", 0))
    max_length = getattr(args, "max_length", None)
    if max_length is not None and max_length < 1:
        raise SchemaError("--max-length must be >= 1")
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        field=field,
        max_length=max_length,
        output=getattr(args, "output", "json"),
        witness_limit=getattr(args, "witness_limit", 10),
        ext_from=getattr(args, "ext_from", None),
        ext_to=getattr(args, "ext_to", None),
        ext_degree=getattr(args, "ext_degree", None),
        fixtures_dir=getattr(args, "fixtures_dir", None),
    )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (SchemaError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    status, report = run(config)
    print(format_report(report, config.output))
    return status


if __name__ == "__main__":
    sys.exit(main())
