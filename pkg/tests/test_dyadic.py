"""Rank-one update calculus: contraction, expansion, row relations,
residual verdict, grounding."""

import functools
import random

import pytest

import metalie.dyadic as dy
import metalie.endos as en
from metalie.polyring import PolyMatrix, parse_polynomial, row_vector, unit_column


def lam(i, j):
    return dy.lam(i, j)


def psi(i):
    return dy.psi_sym(i)


def phi(i):
    return dy.phi_sym(i)


class TestScalarPoly:
    def test_diagonal_lambda_vanishes(self):
        assert lam(1, 1).is_zero()

    def test_commutative(self):
        assert lam(1, 2) * lam(2, 3) == lam(2, 3) * lam(1, 2)

    def test_substitution(self):
        p = lam(2, 1) + lam(2, 3) * lam(2, 1)
        assert p.substituted((2, 1), 0).is_zero()
        assert p.substituted((2, 1), 1) == dy.ScalarPoly.one() + lam(2, 3)


class TestDyadMul:
    def test_two_factor_product(self):
        a = dy.DyadExpr.identity() + dy.DyadExpr.dyad(phi(1), psi(1))
        b = dy.DyadExpr.identity() + dy.DyadExpr.dyad(phi(2), psi(2))
        product = dy.dyad_mul(a, b)
        expected = (
            dy.DyadExpr.identity()
            + dy.DyadExpr.dyad(phi(1), psi(1))
            + dy.DyadExpr.dyad(phi(2), psi(2))
            + dy.DyadExpr.dyad(phi(1), psi(2), lam(1, 2))
        )
        assert product == expected

    def test_identity_is_neutral(self):
        x = dy.expand_product(3)
        assert dy.dyad_mul(x, dy.DyadExpr.identity()) == x
        assert dy.dyad_mul(dy.DyadExpr.identity(), x) == x

    def test_self_contraction_vanishes(self):
        d = dy.DyadExpr.dyad(phi(1), psi(1))
        assert dy.dyad_mul(d, d) == dy.DyadExpr()

    def test_dz_contraction_rejected(self):
        # dz * Phi never appears in the calculus
        with pytest.raises(ValueError):
            dy.dyad_mul(
                dy.DyadExpr.dyad(dy.Y_COL, dy.DZ_ROW),
                dy.DyadExpr.dyad(phi(1), psi(1)),
            )

    def test_psi_y_contracts_to_zero(self):
        out = dy.dyad_mul(
            dy.DyadExpr.dyad(phi(1), psi(1)), dy.DyadExpr.dyad(dy.Y_COL, dy.DZ_ROW)
        )
        assert out == dy.DyadExpr()


class TestExpandProduct:
    def test_single_factor(self):
        assert dy.expand_product(1) == dy.DyadExpr.identity() + dy.DyadExpr.dyad(
            phi(1), psi(1)
        )

    def test_three_factors_term_for_term(self):
        terms = dy.expand_product(3).term_list()
        expected = [
            ((), 1, phi(1), psi(1)),
            ((), 1, phi(2), psi(2)),
            ((), 1, phi(3), psi(3)),
            (((1, 2),), 1, phi(1), psi(2)),
            (((1, 3),), 1, phi(1), psi(3)),
            (((2, 3),), 1, phi(2), psi(3)),
            (((1, 2), (2, 3)), 1, phi(1), psi(3)),
        ]
        assert terms == expected

    def test_matches_folded_products(self):
        for k in range(1, 7):
            folded = functools.reduce(dy.dyad_mul, dy.factors(k))
            assert folded == dy.expand_product(k)

    def test_needs_positive_count(self):
        with pytest.raises(ValueError):
            dy.expand_product(0)


class TestRowMul:
    def lhs(self, k=3):
        return dy.expand_product(k) - dy.DyadExpr.identity()

    def test_psi1_elimination(self):
        row = dy.row_mul(1, self.lhs())
        expected = dy.RowExpr(
            {psi(2): lam(1, 2), psi(3): lam(1, 3) + lam(1, 2) * lam(2, 3)}
        )
        assert row == expected

    def test_psi2_elimination(self):
        row = dy.row_mul(2, self.lhs())
        expected = dy.RowExpr(
            {
                psi(1): lam(2, 1),
                psi(2): lam(2, 1) * lam(1, 2),
                psi(3): lam(2, 3)
                + lam(2, 1) * lam(1, 3)
                + lam(2, 1) * lam(1, 2) * lam(2, 3),
            }
        )
        assert row == expected

    def test_identity_row(self):
        assert dy.row_mul(1, dy.DyadExpr.identity()) == dy.RowExpr(
            {psi(1): dy.ScalarPoly.one()}
        )

    def test_rhs_side_vanishes(self):
        for i in (1, 2, 3):
            assert dy.row_mul(i, dy.minus_y_dz()).is_zero()


class TestReducedRelation:
    def test_value(self):
        reduced = dy.derive_reduced_relation()
        assert reduced == dy.RowExpr({psi(1): lam(2, 1), psi(3): lam(2, 3)})

    def test_no_psi2_term(self):
        assert dy.derive_reduced_relation().coefficient(psi(2)).is_zero()

    def test_substituting_away_the_residual(self):
        reduced = dy.derive_reduced_relation().substituted((2, 1), 0)
        assert reduced == dy.RowExpr({psi(3): lam(2, 3)})

    def test_two_factors_degenerate(self):
        assert dy.derive_reduced_relation(2) == dy.RowExpr({psi(1): lam(2, 1)})


class TestResidualCheck:
    def test_coefficients(self):
        report = dy.residual_check()
        assert report.psi1_coefficient == lam(2, 1)
        assert not report.psi1_coefficient.is_zero()
        assert report.reduced.coefficient(psi(3)) == lam(2, 3)
        assert report.residual_survives

    def test_trace_contains_first_elimination(self):
        report = dy.residual_check()
        text = report.to_text()
        assert "λ12*Ψ2 + λ13*Ψ3 + λ12*λ23*Ψ3" in text
        doc = report.to_doc()
        assert doc["factors"] == 3
        assert doc["psi1_coefficient"] == "λ21"

    def test_needs_two_factors(self):
        with pytest.raises(ValueError):
            dy.residual_check(1)


def lemma_pair(rng, rank, i):
    alpha = en._random_invertible_matrix(rng, rank)
    f = en.random_derived_expr(rng, rank, 2, list(range(2, rank + 1)))
    _, phi_col, psi_row = en.conjugate_elementary(alpha, f, rank)
    return phi_col, psi_row


class TestInstantiate:
    def test_identity(self):
        phi_col = unit_column(3, 3, 1)
        psi_row = row_vector(3, [parse_polynomial(s, 3) for s in ("0", "-y3", "y2")])
        out = dy.instantiate(dy.DyadExpr.identity(), {1: phi_col}, {1: psi_row})
        assert out == PolyMatrix.identity(3, 3)

    def test_expansion_matches_concrete_product(self):
        rng = random.Random(30)
        for case in range(6):
            rank = 3 + case % 2
            k = 2 + case % 2
            phis, psis = {}, {}
            for i in range(1, k + 1):
                phis[i], psis[i] = lemma_pair(rng, rank, i)
            ident = PolyMatrix.identity(rank, rank)
            concrete = ident
            for i in range(1, k + 1):
                concrete = concrete * (ident + phis[i] * psis[i])
            assert dy.instantiate(dy.expand_product(k), phis, psis) == concrete

    def test_row_mul_commutes_with_grounding(self):
        # instantiate(Psi_i * X) must equal Psi_i * instantiate(X)
        rng = random.Random(32)
        for case in range(4):
            rank, k = 3 + case % 2, 3
            phis, psis = {}, {}
            for i in range(1, k + 1):
                phis[i], psis[i] = lemma_pair(rng, rank, i)
            x = dy.expand_product(k)
            for i in (1, 2):
                symbolic = dy.instantiate(dy.row_mul(i, x), phis, psis)
                concrete = psis[i] * dy.instantiate(x, phis, psis)
                assert symbolic == concrete

    def test_row_expr_instantiation_of_reduced_relation(self):
        # grounding the reduced relation must equal Psi2*(P-E) - lam21*Psi1*(P-E)
        rng = random.Random(31)
        rank, k = 3, 3
        phis, psis = {}, {}
        for i in range(1, k + 1):
            phis[i], psis[i] = lemma_pair(rng, rank, i)
        lhs = dy.expand_product(k) - dy.DyadExpr.identity()
        reduced = dy.derive_reduced_relation(k)
        lam21 = (psis[2] * phis[1])[0, 0]
        direct = dy.instantiate(dy.row_mul(2, lhs), phis, psis) - dy.instantiate(
            dy.row_mul(1, lhs), phis, psis
        ) * lam21
        assert dy.instantiate(reduced, phis, psis) == direct

    def test_inconsistent_assignment_rejected(self):
        phi_col = unit_column(3, 3, 1)
        bad_psi = row_vector(3, [parse_polynomial(s, 3) for s in ("y1", "0", "0")])
        with pytest.raises(ValueError):
            dy.instantiate(dy.expand_product(1), {1: phi_col}, {1: bad_psi})

    def test_rhs_dyad_grounds_to_minus_y_dz(self):
        import metalie.metabelian as mb
        from metalie.lieexpr import parse_expr
        from metalie.polyring import y_column

        z = mb.evaluate(parse_expr("[x1,x2]"), 3)
        dz = mb.fox(z)
        out = dy.instantiate(dy.minus_y_dz(), {}, {}, dz_row=dz)
        assert out == (y_column(3) * dz) * -1
