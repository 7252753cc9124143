"""Logical matrices and atlases: validity, consequence, combination.

A matrix is an algebra with one designated subset; an atlas carries a
nonempty family of designated subsets over one algebra.  Validity and
finite-premise consequence are decided by exhausting valuations; reported
counterexamples are deterministic: the first assignment in lexicographic
tuple order (p-variables ascending, element indices as digits), and for
atlases the first filter in family order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    Congruence,
    FiniteAlgebra,
    direct_product,
    greatest_congruence_below,
    quotient_by_congruence,
)
from .lang import AND, IFF, IMP, NOT, OR, Formula, Signature, variables
from .limits import DEFAULT_CAPS, ResourceCaps


@dataclass(frozen=True)
class Matrix:
    algebra: FiniteAlgebra
    designated: frozenset

    def __post_init__(self) -> None:
        for e in self.designated:
            if not (0 <= e < self.algebra.size):
                raise ValueError(f"designated index {e} out of range")

    def designated_names(self) -> Tuple[str, ...]:
        return tuple(self.algebra.elements[e] for e in sorted(self.designated))

    def as_atlas(self) -> "Atlas":
        return Atlas(self.algebra, (self.designated,))


@dataclass(frozen=True)
class Atlas:
    algebra: FiniteAlgebra
    filters: Tuple[frozenset, ...]

    def __post_init__(self) -> None:
        if not self.filters:
            raise ValueError("atlas needs at least one filter")
        seen = set()
        deduped = []
        for d in self.filters:
            for e in d:
                if not (0 <= e < self.algebra.size):
                    raise ValueError(f"filter index {e} out of range")
            if d not in seen:
                seen.add(d)
                deduped.append(frozenset(d))
        object.__setattr__(self, "filters", tuple(deduped))


# ---------------------------------------------------------------------------
# evaluation over a chosen variable tuple


def _tables_over(
    alg: FiniteAlgebra,
    formulas: Sequence[Formula],
    var_order: Sequence[int],
    caps: ResourceCaps,
) -> List[np.ndarray]:
    """Flat value tables over all assignments to the given variables, in
    lexicographic order with the first variable most significant."""
    k = alg.size
    n = len(var_order)
    size = k**n
    caps.check_tuples(size)
    idx = np.arange(size, dtype=np.int64)
    cols = {
        v: (idx // (k ** (n - pos))) % k for pos, v in enumerate(var_order, start=1)
    }
    out = []
    from .lang import App, Const, Var  # local import to avoid cycle noise

    for f in formulas:
        memo: Dict[Formula, np.ndarray] = {}

        def go(g: Formula) -> np.ndarray:
            v = memo.get(g)
            if v is not None:
                return v
            if isinstance(g, Var):
                r = cols[g.index]
            elif isinstance(g, Const):
                r = np.full(size, int(alg.table(g.name)), dtype=np.int64)
            else:
                assert isinstance(g, App)
                r = alg.table(g.connective)[tuple(go(a) for a in g.args)]
            memo[g] = r
            return r

        out.append(np.array(go(f), dtype=np.int64).reshape(size))
    return out


def _decode_assignment(flat: int, var_order: Sequence[int], k: int) -> Dict[int, int]:
    n = len(var_order)
    return {
        v: (flat // (k ** (n - pos))) % k for pos, v in enumerate(var_order, start=1)
    }


def _filter_mask(d: frozenset, k: int) -> np.ndarray:
    mask = np.zeros(k, dtype=bool)
    for e in d:
        mask[e] = True
    return mask


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    # first refuting assignment (variable index -> element index) and the
    # family position of the refuting filter, if invalid
    assignment: Optional[Tuple[Tuple[int, int], ...]] = None
    filter_index: Optional[int] = None

    def assignment_dict(self) -> Optional[Dict[int, int]]:
        return dict(self.assignment) if self.assignment is not None else None


def is_valid(
    target: "Matrix | Atlas", f: Formula, caps: ResourceCaps = DEFAULT_CAPS
) -> ValidityResult:
    atlas = target.as_atlas() if isinstance(target, Matrix) else target
    alg = atlas.algebra
    var_order = variables(f)
    (table,) = _tables_over(alg, [f], var_order, caps)
    k = alg.size
    bad_any = np.zeros(len(table), dtype=bool)
    per_filter = []
    for d in atlas.filters:
        bad = ~_filter_mask(d, k)[table]
        per_filter.append(bad)
        bad_any |= bad
    if not bad_any.any():
        return ValidityResult(True)
    flat = int(np.argmax(bad_any))
    for fi, bad in enumerate(per_filter):
        if bad[flat]:
            assignment = _decode_assignment(flat, var_order, k)
            return ValidityResult(False, tuple(sorted(assignment.items())), fi)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class ConsequenceResult:
    holds: bool
    assignment: Optional[Tuple[Tuple[int, int], ...]] = None
    filter_index: Optional[int] = None

    def assignment_dict(self) -> Optional[Dict[int, int]]:
        return dict(self.assignment) if self.assignment is not None else None


def consequence(
    target: "Matrix | Atlas",
    premises: Sequence[Formula],
    conclusion: Formula,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> ConsequenceResult:
    """Finite-premise consequence: every valuation sending all premises into
    a filter sends the conclusion there too (checked per filter)."""
    atlas = target.as_atlas() if isinstance(target, Matrix) else target
    alg = atlas.algebra
    vs: set[int] = set()
    for g in tuple(premises) + (conclusion,):
        vs.update(variables(g))
    var_order = tuple(sorted(vs))
    tables = _tables_over(alg, list(premises) + [conclusion], var_order, caps)
    concl = tables[-1]
    prem = tables[:-1]
    k = alg.size
    per_filter = []
    bad_any = np.zeros(len(concl), dtype=bool)
    for d in atlas.filters:
        mask = _filter_mask(d, k)
        ok = np.ones(len(concl), dtype=bool)
        for t in prem:
            ok &= mask[t]
        bad = ok & ~mask[concl]
        per_filter.append(bad)
        bad_any |= bad
    if not bad_any.any():
        return ConsequenceResult(True)
    flat = int(np.argmax(bad_any))
    for fi, bad in enumerate(per_filter):
        if bad[flat]:
            assignment = _decode_assignment(flat, var_order, k)
            return ConsequenceResult(False, tuple(sorted(assignment.items())), fi)
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# combinations


def _cyl_left(d: frozenset, k2: int) -> frozenset:
    return frozenset(i * k2 + j for i in d for j in range(k2))


def _cyl_right(d: frozenset, k1: int, k2: int) -> frozenset:
    return frozenset(i * k2 + j for i in range(k1) for j in d)


COMBINE_KINDS = ("lsum", "rsum", "product", "sum")


def combine_matrices(kind: str, m1: Matrix, m2: Matrix) -> Matrix:
    """Matrix combinations on the product algebra.

    lsum keeps the left designated set (cylindrified), rsum the right;
    product intersects them, sum unites them.
    """
    if kind not in COMBINE_KINDS:
        raise ValueError(f"unknown combination {kind!r}")
    alg = direct_product(m1.algebra, m2.algebra)
    k1, k2 = m1.algebra.size, m2.algebra.size
    left = _cyl_left(m1.designated, k2)
    right = _cyl_right(m2.designated, k1, k2)
    if kind == "lsum":
        designated = left
    elif kind == "rsum":
        designated = right
    elif kind == "product":
        designated = left & right
    else:
        designated = left | right
    return Matrix(alg, designated)


def combine_atlases(kind: str, a1: Atlas, a2: Atlas) -> Atlas:
    """Atlas lsum / rsum: cylindrify one side's whole filter family."""
    if kind not in ("lsum", "rsum"):
        raise ValueError(f"unknown atlas combination {kind!r}")
    alg = direct_product(a1.algebra, a2.algebra)
    k1, k2 = a1.algebra.size, a2.algebra.size
    if kind == "lsum":
        filters = tuple(_cyl_left(d, k2) for d in a1.filters)
    else:
        filters = tuple(_cyl_right(d, k1, k2) for d in a2.filters)
    return Atlas(alg, filters)


def atlas_from_family(matrices: Sequence[Matrix]) -> Atlas:
    """One atlas equivalent to a finite family of matrices: filters are the
    cylindrifications of each designated set over the product algebra."""
    if not matrices:
        raise ValueError("empty family")
    sizes = [m.algebra.size for m in matrices]
    alg = matrices[0].algebra
    for m in matrices[1:]:
        alg = direct_product(alg, m.algebra)
    total = 1
    for s in sizes:
        total *= s
    filters = []
    for i, m in enumerate(matrices):
        stride = 1
        for s in sizes[i + 1 :]:
            stride *= s
        ki = sizes[i]
        filters.append(
            frozenset(x for x in range(total) if (x // stride) % ki in m.designated)
        )
    return Atlas(alg, tuple(filters))


# ---------------------------------------------------------------------------
# compatible congruences


def greatest_compatible_congruence(target: "Matrix | Atlas") -> Congruence:
    """Greatest congruence of the algebra whose blocks do not cross any
    filter: start from the filter-membership-profile partition and refine."""
    atlas = target.as_atlas() if isinstance(target, Matrix) else target
    k = atlas.algebra.size
    profiles: Dict[Tuple[bool, ...], int] = {}
    labels = []
    for e in range(k):
        prof = tuple(e in d for d in atlas.filters)
        labels.append(profiles.setdefault(prof, len(profiles)))
    return greatest_congruence_below(atlas.algebra, Congruence.from_labels(labels))


def reduced_matrix(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Quotient by the greatest compatible congruence, with the projection."""
    cong = greatest_compatible_congruence(m)
    quotient, proj = quotient_by_congruence(m.algebra, cong)
    designated = frozenset(proj[e] for e in m.designated)
    return Matrix(quotient, designated), proj


# ---------------------------------------------------------------------------
# presets

TOP, BOT = "⊤", "⊥"

_L_SIG = Signature.of({NOT: 1, AND: 2, OR: 2, IMP: 2})
_L_SIG_IFF = Signature.of({NOT: 1, AND: 2, OR: 2, IMP: 2, IFF: 2})
_B_SIG = Signature.of({NOT: 1, AND: 2, OR: 2, IMP: 2, IFF: 2, TOP: 0, BOT: 0})
BOX, DIA = "□", "◇"
_L3M_SIG = Signature.of({NOT: 1, AND: 2, OR: 2, IMP: 2, BOX: 1, DIA: 1})


def _boolean_tables(sig: Signature) -> Dict[str, np.ndarray]:
    t: Dict[str, np.ndarray] = {}
    if NOT in sig:
        t[NOT] = np.array([1, 0])
    if AND in sig:
        t[AND] = np.array([[0, 0], [0, 1]])
    if OR in sig:
        t[OR] = np.array([[0, 1], [1, 1]])
    if IMP in sig:
        t[IMP] = np.array([[1, 1], [0, 1]])
    if IFF in sig:
        t[IFF] = np.array([[1, 0], [0, 1]])
    if TOP in sig:
        t[TOP] = np.array(1)
    if BOT in sig:
        t[BOT] = np.array(0)
    return t


def boolean_matrix(sig: Signature = _L_SIG_IFF) -> Matrix:
    """Two-element Boolean matrix over any subset of the Boolean symbols."""
    return Matrix(FiniteAlgebra(sig, ["0", "1"], _boolean_tables(sig)), frozenset({1}))


def _lukasiewicz3(signature: Signature) -> FiniteAlgebra:
    tables: Dict[str, np.ndarray] = {
        NOT: np.array([2, 1, 0]),
        AND: np.minimum.outer(np.arange(3), np.arange(3)),
        OR: np.maximum.outer(np.arange(3), np.arange(3)),
        IMP: np.array([[2, 2, 2], [1, 2, 2], [0, 1, 2]]),
    }
    if BOX in signature:
        tables[BOX] = np.array([0, 0, 2])
    if DIA in signature:
        tables[DIA] = np.array([0, 2, 2])
    return FiniteAlgebra(signature, ["0", "1/2", "1"], tables)


def godel_chain(n: int, signature: Signature = _L_SIG) -> FiniteAlgebra:
    """n-element chain with min, max, relative pseudcomplement arrow and the
    induced negation."""
    if n < 2:
        raise ValueError("chain needs at least 2 elements")
    names = [str(Fraction(i, n - 1)) for i in range(n)]
    idx = np.arange(n)
    imp_t = np.where(idx[:, None] <= idx[None, :], n - 1, idx[None, :] * np.ones((n, n), dtype=np.int64))
    imp_t = imp_t.astype(np.int64)
    tables = {
        AND: np.minimum.outer(idx, idx),
        OR: np.maximum.outer(idx, idx),
        IMP: imp_t,
        NOT: np.where(idx == 0, n - 1, 0).astype(np.int64),
    }
    if IFF in signature:
        tables[IFF] = np.minimum(imp_t, imp_t.T)
    return FiniteAlgebra(signature, names, tables)


PRESET_NAMES = ("B2", "B2c", "L3", "L3modal", "Gn", "LCchain")


def make_preset(name: str, n: Optional[int] = None) -> Matrix:
    """Built-in matrices.

    B2       two-element Boolean matrix ({¬,∧,∨,→,↔}, designated {1})
    B2c      B2 extended with constants ⊤ and ⊥
    L3       three-valued Lukasiewicz matrix, designated {1}
    L3modal  L3 plus the unary □ and ◇ operations
    Gn       n-element chain matrix, designated {1} (requires n)
    LCchain  alias family: the n-element chain presentation (requires n)
    """
    if name == "B2":
        return boolean_matrix(_L_SIG_IFF)
    if name == "B2c":
        return boolean_matrix(_B_SIG)
    if name == "L3":
        return Matrix(_lukasiewicz3(_L_SIG), frozenset({2}))
    if name == "L3modal":
        return Matrix(_lukasiewicz3(_L3M_SIG), frozenset({2}))
    if name in ("Gn", "LCchain"):
        if n is None:
            raise ValueError(f"preset {name!r} needs a size parameter")
        alg = godel_chain(n)
        return Matrix(alg, frozenset({n - 1}))
    raise ValueError(f"unknown preset {name!r}")
