"""Equational consequence: semantics, derivation checking, ground decision,
and the implicational bridges.

An equality is a pair of terms, written ``lhs ~ rhs``.  Semantic
consequence comes in two modes over a class of algebras: mode E quantifies
over valuations pointwise (premises satisfied under a valuation force the
goal under that valuation), mode EL quantifies per algebra (only algebras
validating every premise identically are required to validate the goal).

Derivations are checked, not searched, against three interchangeable rule
systems: E1 (symmetry, transitivity, congruence), E2 (simultaneous
replacement with several equations), E3 (replacement with one equation);
the s-variants add a substitution rule.  Ground equality is decided by
congruence closure.  The bridges translate an equality into the
biimplication conjunction and consult the two-element matrix (EB) or the
intuitionistic prover (EH).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .lang import (
    AND,
    IMP,
    App,
    Const,
    Formula,
    ParseError,
    Signature,
    Substitution,
    Var,
    _Parser,
    _tokenize,
    app,
    conj,
    imp,
    variables,
)
from .limits import DEFAULT_CAPS, ResourceCaps
from .matrices import Matrix, _tables_over, make_preset


@dataclass(frozen=True)
class Equality:
    lhs: Formula
    rhs: Formula

    def reversed(self) -> "Equality":
        return Equality(self.rhs, self.lhs)

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted(set(variables(self.lhs)) | set(variables(self.rhs))))

    def __str__(self) -> str:
        return f"{self.lhs} ~ {self.rhs}"


def parse_equality(text: str, signature: Signature) -> Equality:
    """Parse ``term ~ term``; the separator is the first top-level ``~``
    that splits the input into two well-formed terms."""
    tokens = _tokenize(text)
    depth = 0
    last_error: Optional[Exception] = None
    for i, (tok, _pos) in enumerate(tokens):
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
        elif tok == "~" and depth == 0 and i > 0:
            try:
                left = _Parser(tokens[:i], signature, len(text))
                lhs = left.parse_formula()
                if left.peek() is not None:
                    raise ParseError("trailing input on left of '~'", left.pos())
                right = _Parser(tokens[i + 1 :], signature, len(text))
                rhs = right.parse_formula()
                if right.peek() is not None:
                    raise ParseError("trailing input on right of '~'", right.pos())
                return Equality(lhs, rhs)
            except ParseError as exc:
                last_error = exc
    if last_error is not None:
        raise last_error
    raise ParseError("no top-level '~' separator found", 0)


# ---------------------------------------------------------------------------
# occurrences

Side = str  # "l" or "r"
Path = Tuple[Side, Tuple[int, ...]]


def subterm_at(eq: Equality, path: Path) -> Formula:
    side, pos = path
    t = eq.lhs if side == "l" else eq.rhs
    for i in pos:
        if not isinstance(t, App) or i >= len(t.args):
            raise ValueError(f"path {path} does not address a subterm")
        t = t.args[i]
    return t


def replace_at(eq: Equality, path: Path, new: Formula) -> Equality:
    side, pos = path

    def go(t: Formula, rest: Tuple[int, ...]) -> Formula:
        if not rest:
            return new
        if not isinstance(t, App) or rest[0] >= len(t.args):
            raise ValueError(f"path {path} does not address a subterm")
        args = list(t.args)
        args[rest[0]] = go(args[rest[0]], rest[1:])
        return app(t.connective, tuple(args))

    if side == "l":
        return Equality(go(eq.lhs, pos), eq.rhs)
    if side == "r":
        return Equality(eq.lhs, go(eq.rhs, pos))
    raise ValueError(f"bad side {side!r}")


def _paths_disjoint(paths: Sequence[Path]) -> bool:
    for a, b in itertools.combinations(paths, 2):
        if a[0] != b[0]:
            continue
        pa, pb = a[1], b[1]
        shorter = min(len(pa), len(pb))
        if pa[:shorter] == pb[:shorter]:
            return False
    return True


# ---------------------------------------------------------------------------
# derivations

SYSTEMS = ("E1", "E2", "E3", "E1s", "E2s", "E3s")


@dataclass(frozen=True)
class Step:
    """One line of a derivation with its justification.

    rule is one of: axiom, premise, sym, trans, cong, replace, subst.
    refs index earlier steps.  For replace, occurrences pairs a path in the
    base equality with the ref supplying the equation used there.
    """

    equality: Equality
    rule: str
    refs: Tuple[int, ...] = ()
    occurrences: Tuple[Tuple[Path, int], ...] = ()
    connective: Optional[str] = None
    substitution: Optional[Substitution] = None


@dataclass(frozen=True)
class EDerivation:
    system: str
    steps: Tuple[Step, ...]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step_index: Optional[int] = None
    reason: Optional[str] = None


def _rules_of(system: str) -> frozenset:
    base = {"axiom", "premise", "sym"}
    core = system.rstrip("s")
    if core == "E1":
        base |= {"trans", "cong"}
    elif core in ("E2", "E3"):
        base |= {"replace"}
    else:
        raise ValueError(f"unknown system {system!r}")
    if system.endswith("s"):
        base |= {"subst"}
    return frozenset(base)


def check_e_derivation(
    deriv: EDerivation, premises: Sequence[Equality]
) -> CheckResult:
    """Verify every step of a derivation against its system's rules."""
    if deriv.system not in SYSTEMS:
        raise ValueError(f"unknown system {deriv.system!r}")
    allowed = _rules_of(deriv.system)
    premise_set = set(premises)
    for i, step in enumerate(deriv.steps):
        if step.rule not in allowed:
            return CheckResult(False, i, f"rule {step.rule!r} not in system {deriv.system}")
        if any(r < 0 or r >= i for r in step.refs):
            return CheckResult(False, i, "reference to a non-preceding step")
        eq = step.equality
        if step.rule == "axiom":
            if eq.lhs != eq.rhs:
                return CheckResult(False, i, "axiom instance must equate a term with itself")
        elif step.rule == "premise":
            if eq not in premise_set:
                return CheckResult(False, i, "equality is not among the premises")
        elif step.rule == "sym":
            if len(step.refs) != 1:
                return CheckResult(False, i, "sym takes one reference")
            if deriv.steps[step.refs[0]].equality.reversed() != eq:
                return CheckResult(False, i, "sym conclusion is not the reversal")
        elif step.rule == "trans":
            if len(step.refs) != 2:
                return CheckResult(False, i, "trans takes two references")
            e1 = deriv.steps[step.refs[0]].equality
            e2 = deriv.steps[step.refs[1]].equality
            if e1.rhs != e2.lhs or eq != Equality(e1.lhs, e2.rhs):
                return CheckResult(False, i, "trans conclusion does not chain the references")
        elif step.rule == "cong":
            if step.connective is None:
                return CheckResult(False, i, "cong needs a connective")
            parts = [deriv.steps[r].equality for r in step.refs]
            if not parts:
                return CheckResult(False, i, "cong needs at least one reference")
            want = Equality(
                app(step.connective, tuple(p.lhs for p in parts)),
                app(step.connective, tuple(p.rhs for p in parts)),
            )
            if eq != want:
                return CheckResult(False, i, "cong conclusion does not apply the connective")
        elif step.rule == "replace":
            if len(step.refs) != 1:
                return CheckResult(False, i, "replace takes one base reference")
            if not step.occurrences:
                return CheckResult(False, i, "replace needs designated occurrences")
            if not _paths_disjoint([p for p, _ in step.occurrences]):
                return CheckResult(False, i, "designated occurrences overlap")
            if deriv.system.rstrip("s") == "E3":
                if len({r for _, r in step.occurrences}) != 1:
                    return CheckResult(False, i, "single-equation replacement only")
            base = deriv.steps[step.refs[0]].equality
            current = base
            try:
                for path, r in step.occurrences:
                    used = deriv.steps[r].equality
                    if r >= i:
                        return CheckResult(False, i, "reference to a non-preceding step")
                    if subterm_at(base, path) != used.lhs:
                        return CheckResult(False, i, f"occurrence at {path} is not the equation's left term")
                    current = replace_at(current, path, used.rhs)
            except ValueError as exc:
                return CheckResult(False, i, str(exc))
            if current != eq:
                return CheckResult(False, i, "replacement result differs from conclusion")
        elif step.rule == "subst":
            if len(step.refs) != 1 or step.substitution is None:
                return CheckResult(False, i, "subst takes one reference and a substitution")
            src = deriv.steps[step.refs[0]].equality
            want = Equality(step.substitution.apply(src.lhs), step.substitution.apply(src.rhs))
            if eq != want:
                return CheckResult(False, i, "subst conclusion is not the instance")
        else:
            return CheckResult(False, i, f"unknown rule {step.rule!r}")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# semantic consequence


@dataclass(frozen=True)
class EqConsequenceResult:
    holds: bool
    algebra_index: Optional[int] = None
    assignment: Optional[Tuple[Tuple[int, int], ...]] = None

    def assignment_dict(self) -> Optional[Dict[int, int]]:
        return dict(self.assignment) if self.assignment is not None else None


def _identically_valid(alg, eq: Equality, caps: ResourceCaps) -> Tuple[bool, Optional[int], Tuple[int, ...]]:
    var_order = eq.variables()
    lhs_t, rhs_t = _tables_over(alg, [eq.lhs, eq.rhs], var_order, caps)
    diff = lhs_t != rhs_t
    if not diff.any():
        return True, None, var_order
    return False, int(np.argmax(diff)), var_order


def eq_consequence(
    mode: str,
    algebras: Sequence,
    premises: Sequence[Equality],
    goal: Equality,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> EqConsequenceResult:
    """Mode "E": pointwise over valuations of each algebra.  Mode "EL":
    only algebras validating every premise must validate the goal."""
    if mode not in ("E", "EL"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "EL":
        for ai, alg in enumerate(algebras):
            if not all(_identically_valid(alg, e, caps)[0] for e in premises):
                continue
            ok, flat, var_order = _identically_valid(alg, goal, caps)
            if not ok:
                assert flat is not None
                assignment = _flat_to_assignment(flat, var_order, alg.size)
                return EqConsequenceResult(False, ai, tuple(sorted(assignment.items())))
        return EqConsequenceResult(True)

    for ai, alg in enumerate(algebras):
        vs: set[int] = set(goal.variables())
        for e in premises:
            vs.update(e.variables())
        var_order = tuple(sorted(vs))
        flat_terms: List[Formula] = []
        for e in premises:
            flat_terms.extend((e.lhs, e.rhs))
        flat_terms.extend((goal.lhs, goal.rhs))
        tables = _tables_over(alg, flat_terms, var_order, caps)
        ok = np.ones(len(tables[-1]), dtype=bool)
        for j in range(len(premises)):
            ok &= tables[2 * j] == tables[2 * j + 1]
        bad = ok & (tables[-2] != tables[-1])
        if bad.any():
            flat = int(np.argmax(bad))
            assignment = _flat_to_assignment(flat, var_order, alg.size)
            return EqConsequenceResult(False, ai, tuple(sorted(assignment.items())))
    return EqConsequenceResult(True)


def _flat_to_assignment(flat: int, var_order: Sequence[int], k: int) -> Dict[int, int]:
    n = len(var_order)
    return {v: (flat // (k ** (n - pos))) % k for pos, v in enumerate(var_order, start=1)}


# ---------------------------------------------------------------------------
# ground decision by congruence closure


class _UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[Formula, Formula] = {}

    def add(self, t: Formula) -> None:
        self.parent.setdefault(t, t)

    def find(self, t: Formula) -> Formula:
        p = self.parent[t]
        while p is not self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[t] = p
        return p

    def union(self, a: Formula, b: Formula) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra is rb:
            return False
        self.parent[ra] = rb
        return True


def _head(t: Formula) -> Tuple:
    if isinstance(t, Var):
        return ("var", t.index)
    if isinstance(t, Const):
        return ("const", t.name)
    assert isinstance(t, App)
    return ("app", t.connective)


def ground_closure(
    premises: Sequence[Equality], extra_terms: Sequence[Formula] = ()
) -> Dict[Formula, int]:
    """Congruence closure of the premises over all their subterms (plus any
    extra terms), with variables treated as opaque constants.  Returns the
    class index of every term in the universe."""
    universe: List[Formula] = []
    seen: set[Formula] = set()

    def collect(t: Formula) -> None:
        if t in seen:
            return
        seen.add(t)
        if isinstance(t, App):
            for a in t.args:
                collect(a)
        universe.append(t)

    for e in premises:
        collect(e.lhs)
        collect(e.rhs)
    for t in extra_terms:
        collect(t)

    uf = _UnionFind()
    for t in universe:
        uf.add(t)

    def parents_of() -> Dict[Formula, List[App]]:
        out: Dict[Formula, List[App]] = {}
        for t in universe:
            if isinstance(t, App):
                for a in t.args:
                    out.setdefault(uf.find(a), []).append(t)
        return out

    pending: List[Tuple[Formula, Formula]] = [(e.lhs, e.rhs) for e in premises]
    while pending:
        a, b = pending.pop()
        if uf.find(a) is uf.find(b):
            continue
        uf.union(a, b)
        # re-propagate: matching signatures force parent merges
        sig_table: Dict[Tuple, Formula] = {}
        for t in universe:
            if not isinstance(t, App):
                continue
            key = (_head(t),) + tuple(uf.find(x) for x in t.args)
            other = sig_table.get(key)
            if other is None:
                sig_table[key] = t
            elif uf.find(other) is not uf.find(t):
                pending.append((other, t))

    labels: Dict[Formula, int] = {}
    roots: Dict[Formula, int] = {}
    for t in universe:
        r = uf.find(t)
        labels[t] = roots.setdefault(r, len(roots))
    return labels


def decide_ground_equational(
    premises: Sequence[Equality], goal: Equality
) -> Tuple[bool, Dict[Formula, int]]:
    """Is the goal a ground equational consequence of the premises (variables
    read as constants)?  Also returns the closure partition as the witness."""
    labels = ground_closure(premises, (goal.lhs, goal.rhs))
    return labels[goal.lhs] == labels[goal.rhs], labels


# ---------------------------------------------------------------------------
# bridges


def s_translate(eq: Equality) -> Formula:
    """An equality as the conjunction of the two implications."""
    return conj(imp(eq.lhs, eq.rhs), imp(eq.rhs, eq.lhs))


@dataclass(frozen=True)
class BridgeResult:
    holds: bool
    translated_premises: Tuple[Formula, ...]
    translated_goal: Formula
    witness: Optional[Tuple[Tuple[int, int], ...]] = None


def bridge_implicational(
    target: str,
    premises: Sequence[Equality],
    goal: Equality,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> BridgeResult:
    """Route an equational question through the biimplication translation.

    target "EB": consequence in the two-element Boolean matrix (with
    constants).  target "EH": derivability of the translated sequent in the
    intuitionistic sequent calculus.
    """
    xs = tuple(s_translate(e) for e in premises)
    g = s_translate(goal)
    if target == "EB":
        from .matrices import consequence

        m = make_preset("B2c")
        res = consequence(m, xs, g, caps)
        return BridgeResult(res.holds, xs, g, res.assignment)
    if target == "EH":
        from .intprover import g3_prove

        tree = g3_prove(xs, g, caps)
        return BridgeResult(tree is not None, xs, g)
    raise ValueError(f"unknown bridge target {target!r}")
