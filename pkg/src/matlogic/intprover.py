"""Terminating sequent prover for propositional intuitionistic logic.

Sequents have a set antecedent and at most one succedent formula, over the
connectives ~ & | -> only.  Search is backward: invertible rules first,
then the choice rules (right disjunction, left implication, left negation),
with a loop check along the current branch and memoisation of settled
sequents.  Left rules keep their principal formula, so the search space is
the finite set of subformula-closed sequents and the search terminates.

Every returned proof is replayable: ``check_proof`` re-verifies each node
against the rule schemata with no reference to the search code paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .lang import (
    AND,
    IFF,
    IMP,
    NOT,
    OR,
    App,
    Const,
    Formula,
    Var,
    app,
    conj,
    disj,
    imp,
    neg,
    var,
    variables,
)
from .limits import DEFAULT_CAPS, CapExceeded, ResourceCaps

_ALLOWED = {NOT: 1, AND: 2, OR: 2, IMP: 2}


def _check_language(f: Formula) -> None:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Const):
            raise ValueError(f"constant {g.name!r} not supported by the prover")
        if isinstance(g, App):
            if _ALLOWED.get(g.connective) != len(g.args):
                raise ValueError(
                    f"connective {g.connective!r}/{len(g.args)} not supported by the prover"
                )
            stack.extend(g.args)


def expand_iff(f: Formula) -> Formula:
    """Replace every biconditional by the conjunction of two implications."""
    if isinstance(g := f, App):
        args = tuple(expand_iff(a) for a in g.args)
        if g.connective == IFF and len(args) == 2:
            return conj(imp(args[0], args[1]), imp(args[1], args[0]))
        return app(g.connective, args)
    return f


@dataclass(frozen=True)
class Sequent:
    antecedent: FrozenSet[Formula]
    succedent: Optional[Formula]

    def __str__(self) -> str:
        left = ", ".join(str(f) for f in _ordered(self.antecedent))
        right = str(self.succedent) if self.succedent is not None else ""
        return f"{left} => {right}".strip()


def _ordered(s: Iterable[Formula]) -> List[Formula]:
    return sorted(s, key=lambda f: (f.depth, str(f)))


@dataclass(frozen=True)
class ProofTree:
    rule: str
    sequent: Sequent
    premises: Tuple["ProofTree", ...]
    principal: Optional[Formula] = None

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


RULES = ("axiom", "→-1", "→-2", "∧-1", "∧-2", "∨-1", "∨-2", "¬-1", "¬-2")


def _is(f: Formula, name: str) -> bool:
    return isinstance(f, App) and f.connective == name


class _Prover:
    def __init__(self, caps: ResourceCaps):
        self.caps = caps
        self.success: Dict[Sequent, ProofTree] = {}
        self.failure: Dict[Sequent, bool] = {}

    def _note(self) -> None:
        self.caps.check_memo(len(self.success) + len(self.failure))

    def prove(self, seq: Sequent, path: FrozenSet[Sequent]) -> Tuple[Optional[ProofTree], bool]:
        """Returns (proof or None, clean).  A failure is clean when it did
        not rely on cutting a looping branch, and only then is it memoised."""
        cached = self.success.get(seq)
        if cached is not None:
            return cached, True
        if seq in self.failure:
            return None, True
        if seq in path:
            return None, False
        ant, suc = seq.antecedent, seq.succedent

        if suc is not None and suc in ant:
            return self._won(seq, ProofTree("axiom", seq, (), suc))

        path = path | {seq}

        # invertible steps, one at a time
        for f in _ordered(ant):
            if _is(f, AND):
                a, b = f.args  # type: ignore[union-attr]
                for piece in (a, b):
                    if piece not in ant:
                        premise = Sequent(ant | {piece}, suc)
                        sub, clean = self.prove(premise, path)
                        if sub is None:
                            return self._lost(seq, clean)
                        return self._won(seq, ProofTree("∧-2", seq, (sub,), f))
            elif _is(f, OR):
                a, b = f.args  # type: ignore[union-attr]
                if a not in ant and b not in ant:
                    left, cl = self.prove(Sequent(ant | {a}, suc), path)
                    if left is None:
                        return self._lost(seq, cl)
                    right, cr = self.prove(Sequent(ant | {b}, suc), path)
                    if right is None:
                        return self._lost(seq, cr)
                    return self._won(seq, ProofTree("∨-2", seq, (left, right), f))

        if suc is not None and _is(suc, IMP):
            a, b = suc.args  # type: ignore[union-attr]
            sub, clean = self.prove(Sequent(ant | {a}, b), path)
            if sub is None:
                return self._lost(seq, clean)
            return self._won(seq, ProofTree("→-1", seq, (sub,), suc))
        if suc is not None and _is(suc, NOT):
            (a,) = suc.args  # type: ignore[union-attr]
            sub, clean = self.prove(Sequent(ant | {a}, None), path)
            if sub is None:
                return self._lost(seq, clean)
            return self._won(seq, ProofTree("¬-1", seq, (sub,), suc))
        if suc is not None and _is(suc, AND):
            a, b = suc.args  # type: ignore[union-attr]
            left, cl = self.prove(Sequent(ant, a), path)
            if left is None:
                return self._lost(seq, cl)
            right, cr = self.prove(Sequent(ant, b), path)
            if right is None:
                return self._lost(seq, cr)
            return self._won(seq, ProofTree("∧-1", seq, (left, right), suc))

        # choice points
        all_clean = True
        if suc is not None and _is(suc, OR):
            for piece in suc.args:  # type: ignore[union-attr]
                sub, clean = self.prove(Sequent(ant, piece), path)
                if sub is not None:
                    return self._won(seq, ProofTree("∨-1", seq, (sub,), suc))
                all_clean &= clean
        for f in _ordered(ant):
            if _is(f, IMP):
                a, b = f.args  # type: ignore[union-attr]
                if b in ant:
                    continue  # second premise would repeat the conclusion
                first, c1 = self.prove(Sequent(ant, a), path)
                if first is None:
                    all_clean &= c1
                    continue
                second, c2 = self.prove(Sequent(ant | {b}, suc), path)
                if second is None:
                    all_clean &= c2
                    continue
                return self._won(seq, ProofTree("→-2", seq, (first, second), f))
            elif _is(f, NOT):
                (a,) = f.args  # type: ignore[union-attr]
                if suc == a:
                    continue  # premise would repeat the conclusion
                sub, clean = self.prove(Sequent(ant, a), path)
                if sub is not None:
                    return self._won(seq, ProofTree("¬-2", seq, (sub,), f))
                all_clean &= clean
        return self._lost(seq, all_clean)

    def _won(self, seq: Sequent, tree: ProofTree) -> Tuple[ProofTree, bool]:
        self.success[seq] = tree
        self._note()
        return tree, True

    def _lost(self, seq: Sequent, clean: bool) -> Tuple[None, bool]:
        if clean:
            self.failure[seq] = True
            self._note()
        return None, clean


def g3_prove(
    antecedent: Sequence[Formula],
    succedent: Optional[Formula],
    caps: ResourceCaps = DEFAULT_CAPS,
    prover: Optional[_Prover] = None,
) -> Optional[ProofTree]:
    for f in list(antecedent) + ([succedent] if succedent is not None else []):
        _check_language(f)
    seq = Sequent(frozenset(antecedent), succedent)
    engine = prover if prover is not None else _Prover(caps)
    tree, _ = engine.prove(seq, frozenset())
    return tree


def provable(f: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    return g3_prove((), f, caps) is not None


# ---------------------------------------------------------------------------
# independent proof verification


def check_proof(tree: ProofTree) -> bool:
    """Replay a proof tree against the rule schemata."""
    seq = tree.sequent
    ant, suc = seq.antecedent, seq.succedent
    kids = tree.premises
    ok = False
    if tree.rule == "axiom":
        ok = not kids and suc is not None and suc in ant
    elif tree.rule == "∧-2":
        f = tree.principal
        if len(kids) == 1 and _is(f, AND) and f in ant:
            a, b = f.args  # type: ignore[union-attr]
            k = kids[0].sequent
            ok = k.succedent == suc and k.antecedent in (ant | {a}, ant | {b})
    elif tree.rule == "∨-2":
        f = tree.principal
        if len(kids) == 2 and _is(f, OR) and f in ant:
            a, b = f.args  # type: ignore[union-attr]
            k1, k2 = kids[0].sequent, kids[1].sequent
            ok = (
                k1 == Sequent(ant | {a}, suc)
                and k2 == Sequent(ant | {b}, suc)
            )
    elif tree.rule == "→-1":
        if len(kids) == 1 and suc is not None and _is(suc, IMP):
            a, b = suc.args  # type: ignore[union-attr]
            ok = kids[0].sequent == Sequent(ant | {a}, b)
    elif tree.rule == "¬-1":
        if len(kids) == 1 and suc is not None and _is(suc, NOT):
            (a,) = suc.args  # type: ignore[union-attr]
            ok = kids[0].sequent == Sequent(ant | {a}, None)
    elif tree.rule == "∧-1":
        if len(kids) == 2 and suc is not None and _is(suc, AND):
            a, b = suc.args  # type: ignore[union-attr]
            ok = kids[0].sequent == Sequent(ant, a) and kids[1].sequent == Sequent(ant, b)
    elif tree.rule == "∨-1":
        if len(kids) == 1 and suc is not None and _is(suc, OR):
            a, b = suc.args  # type: ignore[union-attr]
            ok = kids[0].sequent in (Sequent(ant, a), Sequent(ant, b))
    elif tree.rule == "→-2":
        f = tree.principal
        if len(kids) == 2 and _is(f, IMP) and f in ant:
            a, b = f.args  # type: ignore[union-attr]
            ok = (
                kids[0].sequent == Sequent(ant, a)
                and kids[1].sequent == Sequent(ant | {b}, suc)
            )
    elif tree.rule == "¬-2":
        f = tree.principal
        if len(kids) == 1 and _is(f, NOT) and f in ant:
            (a,) = f.args  # type: ignore[union-attr]
            ok = kids[0].sequent == Sequent(ant, a)
    if not ok:
        return False
    return all(check_proof(k) for k in kids)


# ---------------------------------------------------------------------------
# provability relations


def int_leq(f: Formula, g: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """f entails g as a provable implication."""
    return provable(imp(f, g), caps)


def int_sim(f: Formula, g: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    return int_leq(f, g, caps) and int_leq(g, f, caps)


def int_ll(f: Formula, g: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """Strong order: (g -> f) -> g is provable."""
    return provable(imp(imp(g, f), g), caps)


def int_relation(f: Formula, g: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> Dict[str, bool]:
    le = int_leq(f, g, caps)
    ge = int_leq(g, f, caps)
    return {
        "leq": le,
        "geq": ge,
        "sim": le and ge,
        "ll": int_ll(f, g, caps),
        "incomparable": not le and not ge,
    }


# ---------------------------------------------------------------------------
# the one-variable ladder


def rn_power(index: Union[int, str], variable: int = 1) -> Formula:
    """The one-variable ladder formulas: 0 is p&~p, 1 is ~p, 2 is p,
    then 2n+3 = (2n+1 -> 2n) and 2n+4 = (2n+1 | 2n+2); 'omega' is p->p."""
    p = var(variable)
    if index == "omega":
        return imp(p, p)
    if not isinstance(index, int) or index < 0:
        raise ValueError(f"bad ladder index {index!r}")
    memo: Dict[int, Formula] = {0: conj(p, neg(p)), 1: neg(p), 2: p}

    def get(k: int) -> Formula:
        if k in memo:
            return memo[k]
        if k % 2 == 1:  # k = 2n+3
            n = (k - 3) // 2
            out = imp(get(2 * n + 1), get(2 * n))
        else:  # k = 2n+4
            n = (k - 4) // 2
            out = disj(get(2 * n + 1), get(2 * n + 2))
        memo[k] = out
        return out

    return get(index)


def rn_classify(
    f: Formula, max_index: int = 24, caps: ResourceCaps = DEFAULT_CAPS
) -> Optional[Union[int, str]]:
    """Ladder class of a one-variable formula: the unique index whose ladder
    formula is interprovable with it ('omega' for theses), or None if no
    match is found within the index bound."""
    vs = variables(f)
    if len(vs) > 1:
        raise ValueError("classification needs a formula in at most one variable")
    if vs and vs[0] != 1:
        from .lang import Substitution

        f = Substitution.of({vs[0]: var(1)}).apply(f)
    if provable(f, caps):
        return "omega"
    for k in range(0, max_index + 1):
        if int_sim(f, rn_power(k), caps):
            return k
    return None


# ---------------------------------------------------------------------------
# double-negation bridge to the two-element matrix


def glivenko_check(f: Formula, caps: ResourceCaps = DEFAULT_CAPS) -> Dict[str, bool]:
    """Compare two-element-matrix validity of f with provability of ~~f."""
    from .matrices import is_valid, make_preset

    expanded = expand_iff(f)
    classical = is_valid(make_preset("B2"), f, caps).valid
    intuit = provable(neg(neg(expanded)), caps)
    return {"classically_valid": classical, "double_negation_provable": intuit, "agree": classical == intuit}
