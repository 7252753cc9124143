import itertools

import pytest

from matlogic import (
    Atlas,
    CapExceeded,
    Matrix,
    ResourceCaps,
    atlas_from_family,
    combine_atlases,
    combine_matrices,
    consequence,
    enumerate_formulas,
    greatest_compatible_congruence,
    is_valid,
    make_preset,
    parse_formula,
    reduced_matrix,
    var,
)

from conftest import consequence_slow, valid_slow


def B2():
    return make_preset("B2")


def L3():
    return make_preset("L3")


class TestPresets:
    def test_preset_shapes(self):
        assert B2().algebra.size == 2
        assert make_preset("B2c").algebra.size == 2
        assert L3().algebra.size == 3
        assert make_preset("L3modal").algebra.size == 3
        assert make_preset("Gn", 4).algebra.size == 4
        assert make_preset("LCchain", 5).algebra.size == 5

    def test_chain_element_names(self):
        g4 = make_preset("Gn", 4)
        assert list(g4.algebra.elements) == ["0", "1/3", "2/3", "1"]

    def test_lukasiewicz_tables(self):
        alg = L3().algebra
        imp_t = alg.table("→")
        assert [list(r) for r in imp_t] == [[2, 2, 2], [1, 2, 2], [0, 1, 2]]
        assert list(alg.table("¬")) == [2, 1, 0]

    def test_modal_tables(self):
        alg = make_preset("L3modal").algebra
        assert list(alg.table("□")) == [0, 0, 2]
        assert list(alg.table("◇")) == [0, 2, 2]


class TestValidity:
    def test_first_refuting_assignment_is_lexicographic(self):
        m = L3()
        res = is_valid(m, parse_formula("p1 | ~p1", m.algebra.signature))
        assert not res.valid
        # p1 = 0 gives 0|1 = 1 designated, so the first refuter is p1 = 1/2
        assert res.assignment == ((1, 1),)
        assert res.filter_index == 0

    def test_matches_slow_oracle_on_enumerated_formulas(self):
        for m in (B2(), L3(), make_preset("Gn", 3)):
            sig = m.algebra.signature
            for f in enumerate_formulas(sig, n_vars=2, max_depth=2, max_count=300):
                assert is_valid(m, f).valid == valid_slow(m, f)

    def test_cap_exceeded(self):
        m = L3()
        f = parse_formula(
            "p1 & p2 & p3 & p4 & p5 & p6 & p7 & p8 & p9 & p10", m.algebra.signature
        )
        with pytest.raises(CapExceeded):
            is_valid(m, f, ResourceCaps(max_tuples=100))


class TestConsequence:
    def test_modus_ponens_in_l3(self):
        m = L3()
        sig = m.algebra.signature
        res = consequence(
            m,
            [parse_formula("p1", sig), parse_formula("p1 -> p2", sig)],
            parse_formula("p2", sig),
        )
        assert res.holds

    def test_failure_reports_first_separator(self):
        m = L3()
        sig = m.algebra.signature
        res = consequence(m, [parse_formula("p1 | p2", sig)], parse_formula("p1", sig))
        assert not res.holds
        # first assignment in p1-major order sending the premise to 1: p1=0, p2=1
        assert res.assignment == ((1, 0), (2, 2))

    def test_matches_slow_oracle(self):
        m = make_preset("Gn", 3)
        sig = m.algebra.signature
        forms = list(enumerate_formulas(sig, n_vars=2, max_depth=1, max_count=40))
        atlas = m.as_atlas()
        for prem, concl in itertools.islice(
            itertools.product(forms, forms), 0, 400
        ):
            assert (
                consequence(atlas, [prem], concl).holds
                == consequence_slow(atlas, [prem], concl)
            )

    def test_atlas_consequence_intersects_members(self):
        l3 = L3()
        alg = l3.algebra
        a = Atlas(alg, (frozenset({2}), frozenset({1, 2})))
        sig = alg.signature
        prem = [parse_formula("p1", sig), parse_formula("p1 -> p2", sig)]
        concl = parse_formula("p2", sig)
        single = [
            consequence(Matrix(alg, d), prem, concl).holds for d in a.filters
        ]
        assert consequence(a, prem, concl).holds == all(single)


class TestCombinations:
    def test_signature_mismatch_rejected(self):
        m1, m2 = make_preset("Gn", 3), B2()
        with pytest.raises(ValueError):
            combine_matrices("product", m1, m2)

    def test_sum_and_product_identities(self):
        m1, m2 = make_preset("Gn", 3), make_preset("Gn", 2)
        prod = combine_matrices("product", m1, m2)
        both = combine_matrices("sum", m1, m2)
        sig = m1.algebra.signature
        for f in enumerate_formulas(sig, n_vars=1, max_depth=2, max_count=200):
            v1, v2 = is_valid(m1, f).valid, is_valid(m2, f).valid
            assert is_valid(prod, f).valid == (v1 and v2)
            assert is_valid(both, f).valid == (v1 or v2)

    def test_lsum_rsum_keep_one_side(self):
        m1, m2 = make_preset("Gn", 3), make_preset("Gn", 2)
        lsum = combine_matrices("lsum", m1, m2)
        rsum = combine_matrices("rsum", m1, m2)
        sig = m1.algebra.signature
        for f in enumerate_formulas(sig, n_vars=1, max_depth=2, max_count=100):
            assert is_valid(lsum, f).valid == is_valid(m1, f).valid
            assert is_valid(rsum, f).valid == is_valid(m2, f).valid

    def test_atlas_from_family_agrees_with_memberwise(self):
        m1, m2 = make_preset("Gn", 3), make_preset("Gn", 2)
        fam = atlas_from_family([m1, m2])
        sig = m1.algebra.signature
        forms = list(enumerate_formulas(sig, n_vars=1, max_depth=1, max_count=20))
        for prem in forms:
            for concl in forms:
                expected = (
                    consequence(m1, [prem], concl).holds
                    and consequence(m2, [prem], concl).holds
                )
                assert consequence(fam, [prem], concl).holds == expected

    def test_combine_atlases_shapes(self):
        a1 = make_preset("Gn", 3).as_atlas()
        a2 = make_preset("Gn", 2).as_atlas()
        ls = combine_atlases("lsum", a1, a2)
        rs = combine_atlases("rsum", a1, a2)
        assert ls.algebra.size == rs.algebra.size == 6
        assert len(ls.filters) == len(a1.filters)


class TestReduction:
    def test_reduced_matrix_of_redundant_matrix(self):
        import numpy as np
        from matlogic import FiniteAlgebra, Signature

        # duplicate the Boolean matrix: elements 0,1 and mirror copies 0',1'
        sig = Signature.of({"→": 2})
        imp = np.array(
            [
                [1, 1, 3, 3],
                [0, 1, 2, 3],
                [1, 1, 3, 3],
                [0, 1, 2, 3],
            ],
            dtype=np.int64,
        )
        alg = FiniteAlgebra(sig, ["0", "1", "0x", "1x"], {"→": imp})
        m = Matrix(alg, frozenset({1, 3}))
        cong = greatest_compatible_congruence(m)
        assert cong.related(0, 2) and cong.related(1, 3)
        red, proj = reduced_matrix(m)
        assert red.algebra.size == 2
        assert is_valid(red, var(1)).valid == is_valid(m, var(1)).valid

    def test_reduced_preset_is_already_reduced(self):
        for name in ("B2", "L3"):
            m = make_preset(name)
            red, _ = reduced_matrix(m)
            assert red.algebra.size == m.algebra.size
