"""Property-based invariants, 500 generated cases each."""

import numpy as np
from hypothesis import given, settings, strategies as st

from matlogic import (
    Matrix,
    Signature,
    Substitution,
    app,
    consequence,
    greatest_compatible_congruence,
    indistinguishable,
    is_congruence,
    make_preset,
    representatives,
    term_table,
    var,
)
from matlogic.algebra import clone_discovery_order

SIG = Signature.of({"¬": 1, "∧": 2, "∨": 2, "→": 2})

MATRICES = [
    make_preset("B2"),
    make_preset("L3"),
    make_preset("Gn", 3),
]
# drop the biconditional so all three share one signature
MATRICES[0] = Matrix(
    make_preset("Gn", 2).algebra, frozenset({1})
)


def formulas(n_vars=2, depth=3):
    base = st.integers(1, n_vars).map(var)
    return st.recursive(
        base,
        lambda kids: st.one_of(
            kids.map(lambda f: app("¬", (f,))),
            st.tuples(st.sampled_from(["∧", "∨", "→"]), kids, kids).map(
                lambda t: app(t[0], (t[1], t[2]))
            ),
        ),
        max_leaves=2**depth,
    )


matrix_st = st.sampled_from(MATRICES)


class TestConsequenceAxioms:
    @settings(max_examples=500, deadline=None)
    @given(matrix_st, st.lists(formulas(), min_size=1, max_size=3), st.data())
    def test_reflexivity(self, m, premises, data):
        concl = data.draw(st.sampled_from(premises))
        assert consequence(m, premises, concl).holds

    @settings(max_examples=500, deadline=None)
    @given(matrix_st, st.lists(formulas(), max_size=2), formulas(), formulas())
    def test_monotonicity(self, m, premises, extra, concl):
        if consequence(m, premises, concl).holds:
            assert consequence(m, premises + [extra], concl).holds


class TestIndistinguishability:
    @settings(max_examples=500, deadline=None)
    @given(matrix_st, formulas(), formulas(), st.sampled_from(["∧", "∨", "→"]))
    def test_congruence_in_each_argument(self, m, f, g, conn):
        alg = m.algebra
        if indistinguishable(alg, f, g, 2):
            assert indistinguishable(alg, app(conn, (f, var(1))), app(conn, (g, var(1))), 2)
            assert indistinguishable(alg, app(conn, (var(1), f)), app(conn, (var(1), g)), 2)
            assert indistinguishable(alg, app("¬", (f,)), app("¬", (g,)), 2)

    @settings(max_examples=500, deadline=None)
    @given(matrix_st, formulas(), formulas(), formulas(n_vars=2, depth=2))
    def test_substitution_compatibility(self, m, f, g, image):
        alg = m.algebra
        if indistinguishable(alg, f, g, 2):
            s = Substitution.of({1: image})
            assert indistinguishable(alg, s.apply(f), s.apply(g), 2)


class TestCloneClosure:
    @settings(max_examples=500, deadline=None)
    @given(matrix_st, st.data())
    def test_application_stays_inside(self, m, data):
        alg = m.algebra
        entries = clone_discovery_order(alg, 1)
        tables = {tf.table for tf in entries}
        i = data.draw(st.integers(0, len(entries) - 1))
        j = data.draw(st.integers(0, len(entries) - 1))
        conn = data.draw(st.sampled_from(["∧", "∨", "→"]))
        t = alg.table(conn)
        combined = tuple(
            int(t[entries[i].table[x], entries[j].table[x]])
            for x in range(alg.size)
        )
        assert combined in tables
        tneg = alg.table("¬")
        assert tuple(int(tneg[v]) for v in entries[i].table) in tables


class TestRepresentativeCompleteness:
    @settings(max_examples=500, deadline=None)
    @given(matrix_st, formulas(n_vars=1, depth=4))
    def test_every_formula_is_covered(self, m, f):
        alg = m.algebra
        reps = representatives(alg, 1)
        key = tuple(int(x) for x in term_table(alg, f, 1))
        assert key in {tf.table for tf in reps.entries}


def random_matrix_st():
    def build(draw_size, seed, designated_bits):
        rng = np.random.default_rng(seed)
        sig = Signature.of({"¬": 1, "→": 2})
        size = draw_size
        tables = {
            "¬": rng.integers(0, size, size=size, dtype=np.int64),
            "→": rng.integers(0, size, size=(size, size), dtype=np.int64),
        }
        from matlogic import FiniteAlgebra

        alg = FiniteAlgebra(sig, [f"e{i}" for i in range(size)], tables)
        designated = frozenset(
            i for i in range(size) if (designated_bits >> i) & 1
        )
        return Matrix(alg, designated or frozenset({0}))

    return st.builds(
        build,
        st.integers(2, 4),
        st.integers(0, 2**32 - 1),
        st.integers(1, 15),
    )


class TestGreatestCompatibleCongruence:
    @settings(max_examples=500, deadline=None)
    @given(random_matrix_st())
    def test_compatibility_exhaustive(self, m):
        cong = greatest_compatible_congruence(m)
        alg = m.algebra
        assert is_congruence(alg, cong)
        # no block crosses the designated boundary
        for block in cong.blocks():
            marks = {e in m.designated for e in block}
            assert len(marks) == 1
        # greatest: merging any two distinct blocks breaks something
        from matlogic.algebra import congruence_closure_pairs

        labels = cong.labels
        reps_of_blocks = [min(b) for b in cong.blocks()]
        for a in reps_of_blocks[:3]:
            for b in reps_of_blocks[:3]:
                if labels[a] == labels[b]:
                    continue
                bigger = congruence_closure_pairs(alg, [(a, b)] + [
                    (x, y)
                    for block in cong.blocks()
                    for x, y in zip(sorted(block), sorted(block)[1:])
                ])
                crosses = any(
                    len({e in m.designated for e in block}) > 1
                    for block in bigger.blocks()
                )
                assert crosses
