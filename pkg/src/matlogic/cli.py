"""Batch command-line front end.

One subcommand per public operation.  Matrices and atlases come either
from presets (``--preset L3``, ``--preset G4``) or from a JSON workspace
file (``--file ws.json --matrix M``).  Exit codes: 0 yes/valid/proved,
1 no/invalid/unprovable, 2 usage or input error, 3 resource cap exceeded.

Workspace schema::

    {"signature": {"connectives": [{"name": str, "arity": nat}]},
     "algebras":  {name: {"elements": [str], "operations": {name: nested}}},
     "matrices":  {name: {"algebra": str, "designated": [str]}},
     "atlases":   {name: {"algebra": str, "filters": [[str]]}},
     "options":   {"max_clone": nat, "max_tuples": nat, "memo_limit": nat}}

An arity-k operation is a k-times nested array over element names; an
arity-0 operation is a bare element name.  Reports are deterministic:
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import algebra as alg_mod
from . import decide, eqlogic, intprover, lindenbaum
from . import matrices as mat_mod
from .lang import Formula, ParseError, Signature, parse_formula
from .limits import CapExceeded, ResourceCaps


class WorkspaceError(ValueError):
    """Schema violation or dangling reference, with a JSON-pointer location."""

    def __init__(self, pointer: str, message: str) -> None:
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@dataclass
class WorkspaceSpec:
    signature: Signature
    algebras: Dict[str, alg_mod.FiniteAlgebra]
    matrices: Dict[str, mat_mod.Matrix]
    atlases: Dict[str, mat_mod.Atlas]
    caps: ResourceCaps


def _expect(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise WorkspaceError(pointer, message)


def _parse_table(
    raw: Any, arity: int, elements: Sequence[str], pointer: str
) -> np.ndarray:
    index = {e: i for i, e in enumerate(elements)}
    k = len(elements)

    def go(node: Any, depth: int, ptr: str) -> Any:
        if depth == 0:
            _expect(isinstance(node, str), ptr, "expected an element name")
            _expect(node in index, ptr, f"unknown element {node!r}")
            return index[node]
        _expect(isinstance(node, list), ptr, "expected an array")
        _expect(
            len(node) == k, ptr, f"row has {len(node)} entries, expected {k}"
        )
        return [go(x, depth - 1, f"{ptr}/{i}") for i, x in enumerate(node)]

    return np.array(go(raw, arity, pointer), dtype=np.int64)


def load_spec(path: str) -> WorkspaceSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise WorkspaceError("/", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise WorkspaceError("/", f"invalid JSON: {exc}")
    _expect(isinstance(doc, dict), "/", "top level must be an object")
    known = {"signature", "algebras", "matrices", "atlases", "options"}
    for key in doc:
        _expect(key in known, f"/{key}", "unknown top-level key")

    sig_doc = doc.get("signature")
    _expect(isinstance(sig_doc, dict), "/signature", "missing or not an object")
    conns = sig_doc.get("connectives")
    _expect(isinstance(conns, list), "/signature/connectives", "missing or not an array")
    ops: Dict[str, int] = {}
    for i, c in enumerate(conns):
        ptr = f"/signature/connectives/{i}"
        _expect(isinstance(c, dict), ptr, "expected an object")
        _expect(isinstance(c.get("name"), str), f"{ptr}/name", "expected a string")
        _expect(
            isinstance(c.get("arity"), int) and c["arity"] >= 0,
            f"{ptr}/arity",
            "expected a nonnegative integer",
        )
        _expect(c["name"] not in ops, f"{ptr}/name", "duplicate connective")
        ops[c["name"]] = c["arity"]
    try:
        signature = Signature.of(ops)
    except ValueError as exc:
        raise WorkspaceError("/signature", str(exc))

    algebras: Dict[str, alg_mod.FiniteAlgebra] = {}
    for name, adoc in (doc.get("algebras") or {}).items():
        ptr = f"/algebras/{name}"
        _expect(isinstance(adoc, dict), ptr, "expected an object")
        elements = adoc.get("elements")
        _expect(
            isinstance(elements, list) and all(isinstance(e, str) for e in elements),
            f"{ptr}/elements",
            "expected an array of strings",
        )
        operations = adoc.get("operations")
        _expect(isinstance(operations, dict), f"{ptr}/operations", "expected an object")
        tables: Dict[str, np.ndarray] = {}
        for op_name, arity in signature.operations:
            _expect(
                op_name in operations,
                f"{ptr}/operations/{op_name}",
                "missing operation table",
            )
            tables[op_name] = _parse_table(
                operations[op_name], arity, elements, f"{ptr}/operations/{op_name}"
            )
        for op_name in operations:
            _expect(
                op_name in signature,
                f"{ptr}/operations/{op_name}",
                "operation not in signature",
            )
        try:
            algebras[name] = alg_mod.FiniteAlgebra(signature, elements, tables)
        except ValueError as exc:
            raise WorkspaceError(ptr, str(exc))

    matrices: Dict[str, mat_mod.Matrix] = {}
    for name, mdoc in (doc.get("matrices") or {}).items():
        ptr = f"/matrices/{name}"
        _expect(isinstance(mdoc, dict), ptr, "expected an object")
        aref = mdoc.get("algebra")
        _expect(aref in algebras, f"{ptr}/algebra", f"unknown algebra {aref!r}")
        alg = algebras[aref]
        des = mdoc.get("designated")
        _expect(isinstance(des, list), f"{ptr}/designated", "expected an array")
        idxs = set()
        for i, e in enumerate(des):
            _expect(
                isinstance(e, str) and e in alg.elements,
                f"{ptr}/designated/{i}",
                f"{e!r} is not a carrier element",
            )
            idxs.add(alg.element_index(e))
        matrices[name] = mat_mod.Matrix(alg, frozenset(idxs))

    atlases: Dict[str, mat_mod.Atlas] = {}
    for name, adoc in (doc.get("atlases") or {}).items():
        ptr = f"/atlases/{name}"
        _expect(isinstance(adoc, dict), ptr, "expected an object")
        aref = adoc.get("algebra")
        _expect(aref in algebras, f"{ptr}/algebra", f"unknown algebra {aref!r}")
        alg = algebras[aref]
        filters_doc = adoc.get("filters")
        _expect(
            isinstance(filters_doc, list) and filters_doc,
            f"{ptr}/filters",
            "expected a nonempty array",
        )
        fams = []
        for fi, fdoc in enumerate(filters_doc):
            _expect(isinstance(fdoc, list), f"{ptr}/filters/{fi}", "expected an array")
            idxs = set()
            for i, e in enumerate(fdoc):
                _expect(
                    isinstance(e, str) and e in alg.elements,
                    f"{ptr}/filters/{fi}/{i}",
                    f"{e!r} is not a carrier element",
                )
                idxs.add(alg.element_index(e))
            fams.append(frozenset(idxs))
        atlases[name] = mat_mod.Atlas(alg, tuple(fams))

    opts = doc.get("options") or {}
    _expect(isinstance(opts, dict), "/options", "expected an object")
    caps_kwargs = {}
    for key in ("max_clone", "max_tuples", "memo_limit"):
        if key in opts:
            _expect(
                isinstance(opts[key], int) and opts[key] > 0,
                f"/options/{key}",
                "expected a positive integer",
            )
            caps_kwargs[key] = opts[key]
    for key in opts:
        _expect(
            key in ("max_clone", "max_tuples", "memo_limit"),
            f"/options/{key}",
            "unknown option",
        )
    caps = ResourceCaps(**caps_kwargs)
    return WorkspaceSpec(signature, algebras, matrices, atlases, caps)


# ---------------------------------------------------------------------------
# operand resolution

_PRESET_RE = re.compile(r"^(B2c?|L3|L3modal|G([2-9]|[1-9][0-9]+)|LC([2-9]|[1-9][0-9]+))$")


def resolve_preset(name: str) -> mat_mod.Matrix:
    m = _PRESET_RE.match(name)
    if not m:
        raise WorkspaceError("/preset", f"unknown preset {name!r}")
    if name.startswith("G") and name not in ("Gn",):
        return mat_mod.make_preset("Gn", int(name[1:]))
    if name.startswith("LC"):
        return mat_mod.make_preset("LCchain", int(name[2:]))
    return mat_mod.make_preset(name)


@dataclass
class _Operands:
    """Matrix/atlas operands in the order given on the command line."""

    matrices: List[mat_mod.Matrix]
    atlases: List[mat_mod.Atlas]
    workspace: Optional[WorkspaceSpec]
    caps: ResourceCaps


def _gather_operands(args: argparse.Namespace, argv: Sequence[str]) -> _Operands:
    workspace = load_spec(args.file) if getattr(args, "file", None) else None
    caps = workspace.caps if workspace else ResourceCaps()
    matrices: List[mat_mod.Matrix] = []
    atlases: List[mat_mod.Atlas] = []
    # walk argv to preserve interleaved operand order
    i = 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in ("--preset", "--matrix", "--atlas") and i + 1 < len(argv):
            value = argv[i + 1]
            if tok == "--preset":
                m = resolve_preset(value)
                matrices.append(m)
                atlases.append(m.as_atlas())
            elif tok == "--matrix":
                if workspace is None or value not in workspace.matrices:
                    raise WorkspaceError("/matrices", f"unknown matrix {value!r}")
                matrices.append(workspace.matrices[value])
                atlases.append(workspace.matrices[value].as_atlas())
            else:
                if workspace is None or value not in workspace.atlases:
                    raise WorkspaceError("/atlases", f"unknown atlas {value!r}")
                atlases.append(workspace.atlases[value])
            i += 2
        else:
            i += 1
    return _Operands(matrices, atlases, workspace, caps)


def _parse_assignment(text: str, alg: alg_mod.FiniteAlgebra) -> Dict[int, int]:
    out: Dict[int, int] = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise WorkspaceError("/assign", f"bad binding {part!r} (want pN=element)")
        lhs, rhs = part.split("=", 1)
        lhs = lhs.strip()
        m = re.match(r"^p([1-9][0-9]*)$", lhs)
        if not m:
            raise WorkspaceError("/assign", f"bad variable {lhs!r}")
        out[int(m.group(1))] = alg.element_index(rhs.strip())
    return out


def _fmt_assignment(
    assignment: Optional[Tuple[Tuple[int, int], ...]], alg: alg_mod.FiniteAlgebra
) -> Optional[Dict[str, str]]:
    if assignment is None:
        return None
    return {f"p{v}": alg.elements[e] for v, e in assignment}


# ---------------------------------------------------------------------------
# report plumbing

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["command", "answer"],
    "properties": {
        "command": {"type": "string"},
        "answer": {"type": "string", "enum": ["yes", "no", "cap-exceeded", "info"]},
        "witness": {},
        "stats": {"type": "object"},
    },
    "additionalProperties": False,
}

_ANSWER_EXIT = {"yes": 0, "info": 0, "no": 1, "cap-exceeded": 3}


@dataclass
class Report:
    command: str
    answer: str  # yes | no | cap-exceeded | info
    lines: List[str]
    witness: Any = None
    stats: Optional[Dict[str, Any]] = None

    def exit_code(self) -> int:
        return _ANSWER_EXIT[self.answer]

    def render(self, as_json: bool) -> str:
        if as_json:
            doc: Dict[str, Any] = {"command": self.command, "answer": self.answer}
            if self.witness is not None:
                doc["witness"] = self.witness
            if self.stats:
                doc["stats"] = _jsonable(self.stats)
            return json.dumps(doc, ensure_ascii=False, sort_keys=True)
        return "\n".join(self.lines)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = list(value)
        if isinstance(value, (set, frozenset)):
            items = sorted(items, key=str)
        return [_jsonable(v) for v in items]
    if isinstance(value, Formula):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _decision_to_report(rep: decide.DecisionReport, command: str) -> Report:
    lines = [f"{command}: {rep.answer}"]
    witness: Any = None
    if rep.witness is not None:
        if isinstance(rep.witness, tuple) and len(rep.witness) == 2 and isinstance(
            rep.witness[0], tuple
        ):
            premises, concl = rep.witness
            seq_text = f"{', '.join(str(p) for p in premises)} => {concl}"
            lines.append(f"counterexample sequent: {seq_text}")
            witness = {
                "premises": [str(p) for p in premises],
                "conclusion": str(concl),
            }
        else:
            lines.append(f"witness: {rep.witness}")
            witness = str(rep.witness)
    stats = _jsonable(rep.stats)
    return Report(command, rep.answer, lines, witness, stats)


# ---------------------------------------------------------------------------
# commands


def _cmd_presets(args, argv) -> Report:
    lines = ["available presets:"]
    lines.append("  B2       two-element Boolean matrix")
    lines.append("  B2c      B2 with constants ⊤ and ⊥")
    lines.append("  L3       three-valued Lukasiewicz matrix")
    lines.append("  L3modal  L3 with □ and ◇")
    lines.append("  G<n>     n-element chain matrix (e.g. G4)")
    lines.append("  LC<n>    chain presentation alias (e.g. LC5)")
    return Report("presets", "info", lines, ["B2", "B2c", "L3", "L3modal", "G<n>", "LC<n>"])


def _one_matrix(ops: _Operands) -> mat_mod.Matrix:
    if len(ops.matrices) != 1:
        raise WorkspaceError("/", "exactly one matrix operand required")
    return ops.matrices[0]


def _one_target(ops: _Operands):
    """Matrix if one was named, else a bare atlas."""
    if len(ops.matrices) == 1:
        return ops.matrices[0]
    if len(ops.atlases) == 1:
        return ops.atlases[0]
    raise WorkspaceError("/", "exactly one matrix or atlas operand required")


def _cmd_eval(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m = _one_matrix(ops)
    f = parse_formula(args.formula, m.algebra.signature)
    assignment = _parse_assignment(args.assign or "", m.algebra)
    value = alg_mod.evaluate_term(m.algebra, f, assignment)
    name = m.algebra.elements[value]
    designated = value in m.designated
    answer = "yes" if designated else "no"
    lines = [f"eval: {f} = {name}" + (" (designated)" if designated else " (not designated)")]
    return Report("eval", answer, lines, name, {"designated": designated})


def _cmd_valid(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    target = _one_target(ops)
    alg = target.algebra
    f = parse_formula(args.formula, alg.signature)
    res = mat_mod.is_valid(target, f, ops.caps)
    if res.valid:
        return Report("valid", "yes", [f"valid: {f}"])
    shown = _fmt_assignment(res.assignment, alg)
    lines = [f"invalid: {f}", f"refuting assignment: {shown}"]
    stats = {"assignment": shown, "filter_index": res.filter_index}
    return Report("valid", "no", lines, shown, stats)


def _cmd_conseq(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    target = _one_target(ops)
    alg = target.algebra
    premises = [parse_formula(p, alg.signature) for p in (args.premise or [])]
    conclusion = parse_formula(args.formula, alg.signature)
    res = mat_mod.consequence(target, premises, conclusion, ops.caps)
    if res.holds:
        return Report("conseq", "yes", ["consequence holds"])
    shown = _fmt_assignment(res.assignment, alg)
    lines = ["consequence fails", f"separator: {shown} with filter index {res.filter_index}"]
    return Report(
        "conseq", "no", lines, shown, {"assignment": shown, "filter_index": res.filter_index}
    )


def _cmd_trivial(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    rep = decide.has_theorems(_one_matrix(ops), ops.caps)
    out = _decision_to_report(rep, "trivial")
    if rep.answer == "no":
        out.lines = ["trivial: no theorems"]
    return out


def _two_matrices(ops: _Operands) -> Tuple[mat_mod.Matrix, mat_mod.Matrix]:
    if len(ops.matrices) != 2:
        raise WorkspaceError("/", "exactly two matrix operands required")
    return ops.matrices[0], ops.matrices[1]


def _cmd_weq(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m1, m2 = _two_matrices(ops)
    return _decision_to_report(decide.weak_equivalence(m1, m2, ops.caps, args.n), "weq")


def _cmd_incl(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m1, m2 = _two_matrices(ops)
    return _decision_to_report(decide.theorem_inclusion(m1, m2, ops.caps, args.n), "incl")


def _two_atlases(ops: _Operands) -> Tuple[mat_mod.Atlas, mat_mod.Atlas]:
    if len(ops.atlases) != 2:
        raise WorkspaceError("/", "exactly two atlas operands required")
    return ops.atlases[0], ops.atlases[1]


def _cmd_atlas_incl(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    a1, a2 = _two_atlases(ops)
    return _decision_to_report(decide.atlas_inclusion(a1, a2, ops.caps, args.m), "atlas-incl")


def _cmd_atlas_eq(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    a1, a2 = _two_atlases(ops)
    return _decision_to_report(decide.atlas_equivalence(a1, a2, ops.caps, args.m), "atlas-eq")


def _cmd_reps(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m = _one_matrix(ops)
    reps = lindenbaum.representatives(m.algebra, args.n, ops.caps)
    lines = [f"representatives of {args.n}-variable formulas: {len(reps)}"]
    for tf in reps.entries:
        theorem = all(v in m.designated for v in tf.table)
        mark = "  [theorem]" if theorem else ""
        lines.append(f"  {tf.witness}{mark}")
    witness = [str(tf.witness) for tf in reps.entries]
    return Report("reps", "info", lines, witness, {"count": len(reps), "n": args.n})


def _cmd_free_algebra(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m = _one_matrix(ops)
    free, reps = lindenbaum.free_matrix_algebra(m, args.n, ops.caps)
    lines = [
        f"free matrix algebra on {args.n} variables: {free.algebra.size} elements",
        f"designated: {sorted(free.designated_names())}",
    ]
    stats = {
        "size": free.algebra.size,
        "designated": sorted(free.designated_names()),
        "elements": list(free.algebra.elements),
    }
    return Report("free-algebra", "info", lines, list(free.algebra.elements), stats)


def _cmd_congruence(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    target = _one_target(ops)
    cong = mat_mod.greatest_compatible_congruence(target)
    alg = target.algebra
    blocks = [[alg.elements[e] for e in block] for block in cong.blocks()]
    lines = ["greatest compatible congruence blocks:"]
    for block in blocks:
        lines.append("  {" + ", ".join(block) + "}")
    return Report("congruence", "info", lines, blocks, {"blocks": len(blocks)})


def _matrix_to_doc(m: mat_mod.Matrix, name: str) -> Dict[str, Any]:
    alg = m.algebra

    def table_doc(t: np.ndarray, arity: int) -> Any:
        if arity == 0:
            return alg.elements[int(t)]

        def go(node, depth):
            if depth == 0:
                return alg.elements[int(node)]
            return [go(x, depth - 1) for x in node]

        return go(t, arity)

    return {
        "signature": {
            "connectives": [
                {"name": n, "arity": a} for n, a in alg.signature.operations
            ]
        },
        "algebras": {
            name: {
                "elements": list(alg.elements),
                "operations": {
                    n: table_doc(alg.table(n), a) for n, a in alg.signature.operations
                },
            }
        },
        "matrices": {
            name: {
                "algebra": name,
                "designated": [alg.elements[e] for e in sorted(m.designated)],
            }
        },
    }


def _cmd_combine(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    m1, m2 = _two_matrices(ops)
    combined = mat_mod.combine_matrices(args.kind, m1, m2)
    doc = _matrix_to_doc(combined, f"{args.kind}")
    text = json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2)
    return Report("combine", "info", [text], doc, {"kind": args.kind, "size": combined.algebra.size})


def _eq_signature(ops: _Operands) -> Signature:
    if ops.matrices:
        return ops.matrices[0].algebra.signature
    if ops.workspace is not None:
        return ops.workspace.signature
    return mat_mod.make_preset("B2c").algebra.signature


def _eq_algebras(args, ops: _Operands) -> List[alg_mod.FiniteAlgebra]:
    algebras = [m.algebra for m in ops.matrices]
    if ops.workspace is not None:
        for name in getattr(args, "algebra", None) or []:
            if name not in ops.workspace.algebras:
                raise WorkspaceError("/algebras", f"unknown algebra {name!r}")
            algebras.append(ops.workspace.algebras[name])
    elif getattr(args, "algebra", None):
        raise WorkspaceError("/algebras", "--algebra needs --file")
    if not algebras:
        raise WorkspaceError("/", "at least one algebra operand required")
    return algebras


def _cmd_eq_conseq(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    algebras = _eq_algebras(args, ops)
    sig = algebras[0].signature
    premises = [eqlogic.parse_equality(p, sig) for p in (args.premise or [])]
    goal = eqlogic.parse_equality(args.equality, sig)
    res = eqlogic.eq_consequence(args.mode, algebras, premises, goal, ops.caps)
    if res.holds:
        return Report("eq conseq", "yes", [f"eq conseq ({args.mode}): yes"])
    alg = algebras[res.algebra_index or 0]
    shown = _fmt_assignment(res.assignment, alg)
    lines = [
        f"eq conseq ({args.mode}): no",
        f"witness: algebra #{res.algebra_index}, assignment {shown}",
    ]
    return Report(
        "eq conseq",
        "no",
        lines,
        {"algebra_index": res.algebra_index, "assignment": shown},
        {"mode": args.mode},
    )


def _load_derivation(path: str, sig: Signature) -> Tuple[eqlogic.EDerivation, List[eqlogic.Equality]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise WorkspaceError("/", f"cannot read derivation: {exc}")
    _expect(isinstance(doc, dict), "/", "derivation must be an object")
    system = doc.get("system")
    _expect(system in eqlogic.SYSTEMS, "/system", f"unknown system {system!r}")
    premises = [
        eqlogic.parse_equality(p, sig) for p in doc.get("premises", [])
    ]
    steps = []
    for i, sdoc in enumerate(doc.get("steps", [])):
        ptr = f"/steps/{i}"
        _expect(isinstance(sdoc, dict), ptr, "expected an object")
        eq = eqlogic.parse_equality(sdoc.get("equality", ""), sig)
        occurrences = []
        for odoc in sdoc.get("occurrences", []):
            path = (odoc["path"]["side"], tuple(odoc["path"]["at"]))
            occurrences.append((path, int(odoc["ref"])))
        subst = None
        if "substitution" in sdoc:
            from .lang import Substitution

            mapping = {}
            for key, text in sdoc["substitution"].items():
                m = re.match(r"^p([1-9][0-9]*)$", key)
                _expect(m is not None, f"{ptr}/substitution", f"bad variable {key!r}")
                mapping[int(m.group(1))] = parse_formula(text, sig)
            subst = Substitution.of(mapping)
        steps.append(
            eqlogic.Step(
                eq,
                sdoc.get("rule", ""),
                tuple(int(r) for r in sdoc.get("refs", [])),
                tuple(occurrences),
                sdoc.get("connective"),
                subst,
            )
        )
    return eqlogic.EDerivation(system, tuple(steps)), premises


def _cmd_eq_derive_check(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    sig = _eq_signature(ops)
    deriv, premises = _load_derivation(args.derivation, sig)
    extra = [eqlogic.parse_equality(p, sig) for p in (args.premise or [])]
    res = eqlogic.check_e_derivation(deriv, premises + extra)
    if res.ok:
        return Report("eq derive-check", "yes", ["derivation checks"])
    lines = [f"derivation fails at step {res.step_index}: {res.reason}"]
    return Report(
        "eq derive-check",
        "no",
        lines,
        {"step": res.step_index, "reason": res.reason},
    )


def _cmd_eq_ground(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    sig = _eq_signature(ops)
    premises = [eqlogic.parse_equality(p, sig) for p in (args.premise or [])]
    goal = eqlogic.parse_equality(args.equality, sig)
    ok, labels = eqlogic.decide_ground_equational(premises, goal)
    classes: Dict[int, List[str]] = {}
    for t, c in labels.items():
        classes.setdefault(c, []).append(str(t))
    partition = [sorted(v) for _, v in sorted(classes.items())]
    if ok:
        return Report("eq ground", "yes", ["ground consequence: yes"], None, {"classes": partition})
    lines = ["ground consequence: no", f"closure classes: {partition}"]
    return Report("eq ground", "no", lines, partition, {"classes": partition})


def _cmd_eq_bridge(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    sig = _eq_signature(ops)
    premises = [eqlogic.parse_equality(p, sig) for p in (args.premise or [])]
    goal = eqlogic.parse_equality(args.equality, sig)
    res = eqlogic.bridge_implicational(args.target, premises, goal, ops.caps)
    answer = "yes" if res.holds else "no"
    lines = [
        f"bridge {args.target}: {answer}",
        f"translated goal: {res.translated_goal}",
    ]
    return Report(
        "eq bridge",
        answer,
        lines,
        str(res.translated_goal),
        {"target": args.target, "premises": [str(p) for p in res.translated_premises]},
    )


def _int_formula(text: str) -> Formula:
    from .lang import CLASSICAL_SIGNATURE

    return intprover.expand_iff(parse_formula(text, CLASSICAL_SIGNATURE))


def _cmd_int_prove(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    f = _int_formula(args.formula)
    tree = intprover.g3_prove((), f, ops.caps)
    if tree is None:
        return Report("int prove", "no", [f"unprovable: {f}"])
    if not intprover.check_proof(tree):
        raise AssertionError("proof failed re-verification")
    return Report(
        "int prove", "yes", [f"proved: {f}"], None, {"proof_size": tree.size()}
    )


def _cmd_int_relation(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    f = _int_formula(args.formula)
    g = _int_formula(args.other)
    rel = intprover.int_relation(f, g, ops.caps)
    lines = [f"relation between {f} and {g}:"]
    for key in ("leq", "geq", "sim", "ll", "incomparable"):
        lines.append(f"  {key}: {rel[key]}")
    return Report("int relation", "info", lines, rel, rel)


def _cmd_int_rn(args, argv) -> Report:
    index: Any = args.index
    if index != "omega":
        index = int(index)
    f = intprover.rn_power(index)
    return Report("int rn", "info", [f"ladder {args.index}: {f}"], str(f))


def _cmd_int_classify(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    f = _int_formula(args.formula)
    cls = intprover.rn_classify(f, caps=ops.caps)
    if cls is None:
        return Report("int classify", "no", [f"no ladder class found for {f}"])
    return Report(
        "int classify", "info", [f"ladder class of {f}: {cls}"], cls, {"class": cls}
    )


def _cmd_int_glivenko(args, argv) -> Report:
    ops = _gather_operands(args, argv)
    from .lang import CLASSICAL_SIGNATURE

    f = parse_formula(args.formula, CLASSICAL_SIGNATURE)
    res = intprover.glivenko_check(f, ops.caps)
    answer = "yes" if res["agree"] else "no"
    lines = [
        f"classically valid: {res['classically_valid']}",
        f"double negation provable: {res['double_negation_provable']}",
        f"agree: {res['agree']}",
    ]
    return Report("int glivenko", answer, lines, res, res)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matlogic", description=__doc__)
    sub = p.add_subparsers(dest="command")

    def common(sp, operands=True):
        sp.add_argument("--json", action="store_true")
        if operands:
            sp.add_argument("--file")
            sp.add_argument("--preset", action="append", default=[])
            sp.add_argument("--matrix", action="append", default=[])
            sp.add_argument("--atlas", action="append", default=[])

    sp = sub.add_parser("presets")
    common(sp, operands=False)
    sp.set_defaults(func=_cmd_presets)

    sp = sub.add_parser("eval")
    common(sp)
    sp.add_argument("formula")
    sp.add_argument("--assign", default="")
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("valid")
    common(sp)
    sp.add_argument("formula")
    sp.set_defaults(func=_cmd_valid)

    sp = sub.add_parser("conseq")
    common(sp)
    sp.add_argument("formula")
    sp.add_argument("--premise", action="append", default=[])
    sp.set_defaults(func=_cmd_conseq)

    sp = sub.add_parser("trivial")
    common(sp)
    sp.set_defaults(func=_cmd_trivial)

    sp = sub.add_parser("weq")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=_cmd_weq)

    sp = sub.add_parser("incl")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=_cmd_incl)

    sp = sub.add_parser("atlas-incl")
    common(sp)
    sp.add_argument("--m", type=int)
    sp.set_defaults(func=_cmd_atlas_incl)

    sp = sub.add_parser("atlas-eq")
    common(sp)
    sp.add_argument("--m", type=int)
    sp.set_defaults(func=_cmd_atlas_eq)

    sp = sub.add_parser("reps")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.set_defaults(func=_cmd_reps)

    sp = sub.add_parser("free-algebra")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.set_defaults(func=_cmd_free_algebra)

    sp = sub.add_parser("congruence")
    common(sp)
    sp.set_defaults(func=_cmd_congruence)

    sp = sub.add_parser("combine")
    common(sp)
    sp.add_argument("kind", choices=mat_mod.COMBINE_KINDS)
    sp.set_defaults(func=_cmd_combine)

    eq = sub.add_parser("eq")
    eq_sub = eq.add_subparsers(dest="eq_command")

    sp = eq_sub.add_parser("conseq")
    common(sp)
    sp.add_argument("equality")
    sp.add_argument("--mode", choices=("E", "EL"), default="E")
    sp.add_argument("--premise", action="append", default=[])
    sp.add_argument("--algebra", action="append", default=[])
    sp.set_defaults(func=_cmd_eq_conseq)

    sp = eq_sub.add_parser("derive-check")
    common(sp)
    sp.add_argument("derivation")
    sp.add_argument("--premise", action="append", default=[])
    sp.set_defaults(func=_cmd_eq_derive_check)

    sp = eq_sub.add_parser("ground")
    common(sp)
    sp.add_argument("equality")
    sp.add_argument("--premise", action="append", default=[])
    sp.set_defaults(func=_cmd_eq_ground)

    sp = eq_sub.add_parser("bridge")
    common(sp)
    sp.add_argument("equality")
    sp.add_argument("--target", choices=("EB", "EH"), required=True)
    sp.add_argument("--premise", action="append", default=[])
    sp.set_defaults(func=_cmd_eq_bridge)

    intp = sub.add_parser("int")
    int_sub = intp.add_subparsers(dest="int_command")

    sp = int_sub.add_parser("prove")
    common(sp)
    sp.add_argument("formula")
    sp.set_defaults(func=_cmd_int_prove)

    sp = int_sub.add_parser("relation")
    common(sp)
    sp.add_argument("formula")
    sp.add_argument("other")
    sp.set_defaults(func=_cmd_int_relation)

    sp = int_sub.add_parser("rn")
    common(sp, operands=False)
    sp.add_argument("index")
    sp.set_defaults(func=_cmd_int_rn)

    sp = int_sub.add_parser("classify")
    common(sp)
    sp.add_argument("formula")
    sp.set_defaults(func=_cmd_int_classify)

    sp = int_sub.add_parser("glivenko")
    common(sp)
    sp.add_argument("formula")
    sp.set_defaults(func=_cmd_int_glivenko)

    return p


def run_command(argv: Sequence[str]) -> Tuple[int, str]:
    """Execute one command line; returns (exit code, report text)."""
    os.environ.setdefault("MATLOGIC_THREADS", "1")
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return (2 if exc.code else 0), ""
    func = getattr(args, "func", None)
    if func is None:
        return 2, parser.format_usage().rstrip()
    try:
        report: Report = func(args, argv)
    except (WorkspaceError, ParseError, ValueError, KeyError) as exc:
        return 2, f"error: {exc}"
    except CapExceeded as exc:
        return 3, f"cap exceeded: {exc}"
    return report.exit_code(), report.render(getattr(args, "json", False))


def main() -> None:
    code, text = run_command(sys.argv[1:])
    if text:
        print(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
