"""Free associative algebra: words, bracket expansion, Fox derivatives,
cyclic-word commutator test, degree-4 trace replay."""

import json
import random

import pytest

import metalie.freeassoc as fa
from metalie.lieexpr import parse_expr
from metalie.verify import commutator_row_space, random_nc_poly


def NC(rank, *terms):
    return fa.NCPoly(rank, {tuple(w): c for w, c in terms})


def rotations(word):
    return {word[k:] + word[:k] for k in range(len(word))} or {word}


class TestNCPoly:
    def test_product_of_generators(self):
        z1, z2 = fa.NCPoly.gen(2, 1), fa.NCPoly.gen(2, 2)
        assert z1 * z2 == NC(2, ((1, 2), 1))

    def test_associativity(self):
        rng = random.Random(1)
        for _ in range(25):
            p, q, r = (random_nc_poly(rng, 3, 3, 3) for _ in range(3))
            assert (p * q) * r == p * (q * r)

    def test_unit(self):
        p = NC(2, ((1, 2), 3), ((2,), -1))
        assert fa.NCPoly.one(2) * p == p
        assert p * fa.NCPoly.one(2) == p

    def test_noncommutative(self):
        z1, z2 = fa.NCPoly.gen(2, 1), fa.NCPoly.gen(2, 2)
        assert z1 * z2 != z2 * z1

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            fa.NCPoly.gen(2, 1) * fa.NCPoly.gen(3, 1)

    def test_str(self):
        p = NC(4, ((4, 2, 3), 1), ((4, 3, 2), -1))
        assert str(p) == "z4*z2*z3 - z4*z3*z2"


class TestLieToAssoc:
    def test_basic_bracket(self):
        out = fa.lie_to_assoc(parse_expr("[z1,z2]", "z"), 2)
        assert out == NC(2, ((1, 2), 1), ((2, 1), -1))

    def test_left_normed_hand_expansion(self):
        out = fa.lie_to_assoc(parse_expr("[[z1,z2],z3]", "z"), 3)
        assert out == NC(
            3, ((1, 2, 3), 1), ((2, 1, 3), -1), ((3, 1, 2), -1), ((3, 2, 1), 1)
        )

    def test_self_bracket(self):
        assert fa.lie_to_assoc(parse_expr("[z1,z1]", "z"), 2).is_zero()

    def test_images_are_commutators(self):
        rng = random.Random(2)
        for _ in range(20):
            e = parse_expr("[z1, [z2, z3]]", "z")
            out = fa.lie_to_assoc(e, 3)
            assert fa.in_commutator_subspace(out)


class TestFoxAssoc:
    def test_two_letter_word(self):
        f = NC(2, ((1, 2), 1))
        assert fa.fox_assoc(f, 2) == fa.NCPoly.gen(2, 1)
        assert fa.fox_assoc(f, 1).is_zero()

    def test_bracket(self):
        f = fa.lie_to_assoc(parse_expr("[z1,z2]", "z"), 2)
        assert fa.fox_assoc(f, 1) == -fa.NCPoly.gen(2, 2)
        assert fa.fox_assoc(f, 2) == fa.NCPoly.gen(2, 1)

    def test_degree4_source(self):
        f = fa.lie_to_assoc(fa.source_monomial(), 4)
        d1 = fa.fox_assoc(f, 1)
        assert d1 == NC(4, ((4, 2, 3), 1), ((4, 3, 2), -1))
        # equals z4 * [z2, z3]
        z4 = fa.NCPoly.gen(4, 4)
        assert d1 == z4 * fa.lie_to_assoc(parse_expr("[z2,z3]", "z"), 4)

    def test_rejects_constant_term(self):
        with pytest.raises(ValueError):
            fa.fox_assoc(fa.NCPoly.one(2), 1)

    def test_reconstruction_randomized(self):
        rng = random.Random(3)
        for _ in range(40):
            rank = rng.randint(2, 4)
            f = random_nc_poly(rng, rank, 4)
            total = fa.NCPoly.zero(rank)
            for i in range(1, rank + 1):
                total = total + fa.fox_assoc(f, i) * fa.NCPoly.gen(rank, i)
            assert total == f

    def test_degree_drop_on_homogeneous(self):
        rng = random.Random(4)
        for _ in range(20):
            rank = rng.randint(2, 4)
            d = rng.randint(2, 4)
            f = random_nc_poly(rng, rank, d, 4).homogeneous_component(d)
            for i in range(1, rank + 1):
                dfi = fa.fox_assoc(f, i)
                if not dfi.is_zero():
                    assert dfi.degree() == d - 1


class TestCyclicSignature:
    def test_commutator_cancels(self):
        p = NC(2, ((1, 2), 1), ((2, 1), -1))
        assert fa.cyclic_signature(p) == {}

    def test_inequivalent_classes(self):
        # oracle: enumerate rotations to confirm the two words are in
        # different classes before asserting the signature
        assert (2, 4, 3) not in rotations((4, 2, 3))
        p = NC(4, ((4, 2, 3), 1), ((4, 3, 2), -1))
        assert fa.cyclic_signature(p) == {(2, 3, 4): 1, (2, 4, 3): -1}

    def test_unit(self):
        assert fa.cyclic_signature(fa.NCPoly.one(2)) == {(): 1}

    def test_representative_is_least_rotation(self):
        rng = random.Random(5)
        for _ in range(40):
            word = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 6)))
            rep = fa.cyclic_representative(word)
            assert rep in rotations(word)
            assert all(rep <= r for r in rotations(word))


class TestCommutatorSubspace:
    def test_commutators_pass(self):
        rng = random.Random(6)
        for _ in range(30):
            rank = rng.randint(2, 4)
            u = random_nc_poly(rng, rank, 3, 2)
            v = random_nc_poly(rng, rank, 3, 2)
            assert fa.in_commutator_subspace(u * v - v * u)

    def test_trace_term_fails(self):
        z4 = fa.NCPoly.gen(4, 4)
        s = z4 * fa.lie_to_assoc(parse_expr("[z2,z3]", "z"), 4)
        assert not fa.in_commutator_subspace(s)

    def test_zero_passes(self):
        assert fa.in_commutator_subspace(fa.NCPoly.zero(3))

    def test_agrees_with_span_oracle(self):
        rng = random.Random(7)
        for rank in (2, 3, 4):
            for degree in (1, 2, 3, 4):
                space = commutator_row_space(rank, degree)
                for _ in range(6):
                    p = random_nc_poly(rng, rank, degree, 3).homogeneous_component(
                        degree
                    )
                    assert space.contains(p.terms) == fa.in_commutator_subspace(p)


class TestDegree4Basis:
    def test_rank2_collapses(self):
        assert fa.derived_degree4_basis(2) == []

    def test_rank3_count(self):
        assert len(fa.derived_degree4_basis(3)) == 3

    def test_rank4_count(self):
        assert len(fa.derived_degree4_basis(4)) == 15

    def test_members_are_second_derived(self):
        for e in fa.derived_degree4_basis(4):
            p = fa.lie_to_assoc(e, 4)
            assert not p.is_zero()
            assert p.degree() == 4
            assert fa.in_commutator_subspace(p)


class TestReplay:
    def test_rank_bound(self):
        with pytest.raises(ValueError):
            fa.replay(3)

    def test_parts_a_and_b(self):
        rep = fa.replay(4, include_witness=False)
        assert str(rep.derivative) == "z4*z2*z3 - z4*z3*z2"
        assert rep.in_commutators is False
        assert rep.witness is None

    def test_witness_search(self):
        rep = fa.replay(4)
        w = rep.witness
        assert w is not None
        assert w.solvable
        assert w.verified
        assert w.unknowns == 4 * 15
        assert w.null_space_dimension >= 1

    def test_witness_actually_corrects(self):
        rep = fa.replay(4)
        corrected = rep.derivative
        for i, expr in rep.witness.witness_exprs:
            corrected = corrected + fa.fox_assoc(fa.lie_to_assoc(expr, 4), i)
        assert fa.in_commutator_subspace(corrected)

    def test_deterministic_reports(self):
        a = fa.replay(4)
        b = fa.replay(4)
        assert a.to_text() == b.to_text()
        assert json.dumps(a.to_doc(), sort_keys=True) == json.dumps(
            b.to_doc(), sort_keys=True
        )

    def test_higher_rank_runs(self):
        rep = fa.replay(5)
        assert rep.witness.solvable
