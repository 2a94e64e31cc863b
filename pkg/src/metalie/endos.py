"""Endomorphisms and automorphisms of the free metabelian Lie algebra:
constructors (linear, elementary, inner, conjugates), composition, Jacobian
matrices, exact inverse construction, and the identity-modulo-degree
filtration level.

Composition convention, fixed once for the whole package:
compose(phi, psi) is the map x -> phi(psi(x)); concretely the images of psi
are rewritten with every generator replaced by the corresponding image of
phi. Under this convention the Jacobian satisfies the chain rule
J(compose(phi, psi)) = phibar(J(psi)) * J(phi), where phibar is the
polynomial-ring endomorphism induced by the linear parts of phi; on the
subgroup acting as the identity modulo brackets, J is therefore an
antimorphism into GL_n of the polynomial ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import metabelian as mb
from .lieexpr import (
    Bracket,
    Gen,
    LieExpr,
    Sum,
    generators_used,
    left_normed,
    scale_expr,
    substitute_generators,
    sum_exprs,
)
from .metabelian import MElement
from .polyring import PolyMatrix, Polynomial, as_rat, col_vector


@dataclass(frozen=True)
class Endo:
    """An endomorphism of M_n given by the images of the generators.

    `exprs`, when present, caches one bracket expression per image; it is
    carried along by the constructors so that composition never has to
    reconstruct preimages, and it never participates in equality.
    """

    rank: int
    images: Tuple[MElement, ...]
    exprs: Optional[Tuple[LieExpr, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("need exactly one image per generator")
        for img in self.images:
            if img.rank != self.rank:
                raise ValueError("image rank mismatch")
        if self.exprs is not None and len(self.exprs) != self.rank:
            raise ValueError("need exactly one cached expression per generator")

    def image_exprs(self) -> Tuple[LieExpr, ...]:
        """Cached expressions, or lifts of the normal forms."""
        if self.exprs is not None:
            return self.exprs
        return tuple(mb.lift(img) for img in self.images)

    def linear_matrix(self) -> List[List[Fraction]]:
        """Row i = linear part of the image of x_{i+1}."""
        return [list(img.linear) for img in self.images]

    def is_identity(self) -> bool:
        return all(
            img == mb.generator(self.rank, i + 1) for i, img in enumerate(self.images)
        )


def identity(rank: int) -> Endo:
    return Endo(
        rank,
        tuple(mb.generator(rank, i) for i in range(1, rank + 1)),
        tuple(Gen(i) for i in range(1, rank + 1)),
    )


def from_exprs(rank: int, exprs: Sequence[LieExpr]) -> Endo:
    """Endomorphism with image i = evaluation of exprs[i-1]."""
    exprs = tuple(exprs)
    return Endo(rank, tuple(mb.evaluate(e, rank) for e in exprs), exprs)


def elementary(rank: int, f: LieExpr, position: int = 1) -> Endo:
    """x_position -> x_position + f, every other generator fixed.

    f must avoid x_position and evaluate into the bracket subalgebra.
    """
    if not 1 <= position <= rank:
        raise ValueError(f"position {position} out of range 1..{rank}")
    used = generators_used(f)
    if position in used:
        raise ValueError(f"perturbation mentions x{position}")
    if used and max(used) > rank:
        raise ValueError(f"generator index {max(used)} out of range 1..{rank}")
    value = mb.evaluate(f, rank)
    if not mb.is_derived(value):
        raise ValueError("perturbation is not in the bracket subalgebra")
    images = []
    exprs = []
    for i in range(1, rank + 1):
        if i == position:
            images.append(mb.generator(rank, i) + value)
            exprs.append(sum_exprs([Gen(i), f]))
        else:
            images.append(mb.generator(rank, i))
            exprs.append(Gen(i))
    return Endo(rank, tuple(images), tuple(exprs))


def inner(rank: int, z: MElement) -> Endo:
    """exp(ad z) = id + ad z for a nonzero z in the bracket subalgebra."""
    if z.rank != rank:
        raise ValueError("rank mismatch")
    if z.is_zero():
        raise ValueError("z must be nonzero")
    if not mb.is_derived(z):
        raise ValueError("z must lie in the bracket subalgebra")
    z_expr = mb.lift(z)
    images = []
    exprs = []
    for i in range(1, rank + 1):
        xi = mb.generator(rank, i)
        images.append(xi + mb.bracket(z, xi))
        exprs.append(sum_exprs([Gen(i), Bracket(z_expr, Gen(i))]))
    return Endo(rank, tuple(images), tuple(exprs))


def linear(matrix: Sequence[Sequence]) -> Endo:
    """x_i -> sum_j A[i][j] x_j for an invertible rational matrix A."""
    a = [[as_rat(c) for c in row] for row in matrix]
    rank = len(a)
    for row in a:
        if len(row) != rank:
            raise ValueError("matrix must be square")
    if _rat_det(a) == 0:
        raise ValueError("matrix is singular")
    images = []
    exprs = []
    for i in range(rank):
        img = mb.zero(rank)
        terms = []
        for j, c in enumerate(a[i]):
            if c:
                img = img + mb.generator(rank, j + 1).scaled(c)
                terms.append(scale_expr(c, Gen(j + 1)))
        images.append(img)
        exprs.append(sum_exprs(terms) if terms else Sum(()))
    return Endo(rank, tuple(images), tuple(exprs))


def apply(phi: Endo, e: LieExpr) -> MElement:
    """Evaluate an expression with every generator replaced by its image."""
    return mb.eval_with(e, phi.images)


def compose(phi: Endo, psi: Endo) -> Endo:
    """The map x -> phi(psi(x))."""
    if phi.rank != psi.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    psi_exprs = psi.image_exprs()
    images = tuple(apply(phi, e) for e in psi_exprs)
    phi_exprs = phi.image_exprs()
    exprs = tuple(substitute_generators(e, phi_exprs) for e in psi_exprs)
    return Endo(phi.rank, images, exprs)


def jacobian(phi: Endo) -> PolyMatrix:
    """Row i = Fox-derivative row of the image of x_{i+1}."""
    return PolyMatrix(phi.rank, [img.tpart for img in phi.images])


def induced_poly_images(phi: Endo) -> List[Polynomial]:
    """The degree <= 1 polynomials y_i -> linear part of image i, i.e. the
    substitution data for the induced endomorphism of K[y1..yn]."""
    return [img.linear_poly() for img in phi.images]


def apply_induced(phi: Endo, target):
    """Apply the induced polynomial-ring endomorphism to a Polynomial or to
    a PolyMatrix entrywise."""
    images = induced_poly_images(phi)
    if isinstance(target, Polynomial):
        return target.substitute(images)
    if isinstance(target, PolyMatrix):
        return target.map_entries(lambda p: p.substitute(images))
    raise TypeError("expected a Polynomial or PolyMatrix")


def conjugate_elementary(alpha: Sequence[Sequence], f: LieExpr, rank: int):
    """Conjugate of the elementary map x1 -> x1 + f by the linear map alpha.

    Returns (endo, Phi, Psi) where endo = alpha o phi_f o alpha^{-1} and
    Phi (column), Psi (row) satisfy J(endo) = E + Phi*Psi with Psi*Phi = 0
    and Psi*Y = 0: Phi = A^{-1} e1 and Psi = alphabar(dfox(f)) * A.
    """
    a = [[as_rat(c) for c in row] for row in alpha]
    alpha_endo = linear(a)
    if alpha_endo.rank != rank:
        raise ValueError("alpha has the wrong rank")
    phi_f = elementary(rank, f)
    a_inv = _rat_mat_inverse(a)
    conj = compose(compose(alpha_endo, phi_f), linear(a_inv))

    phi_col = col_vector(rank, [a_inv[i][0] for i in range(rank)])
    dfox = mb.fox(mb.evaluate(f, rank))
    psi_row = apply_induced(alpha_endo, dfox) * PolyMatrix(rank, a)
    return conj, phi_col, psi_row


def inverse(phi: Endo) -> Optional[Endo]:
    """Exact two-sided inverse, or None when phi is not an automorphism.

    The linear part is peeled off first; what remains acts as the identity
    modulo brackets, so its Jacobian must be invertible over the polynomial
    ring and the inverse Jacobian prescribes candidate images (each row of
    J^{-1} - E annihilates Y and lifts to a derived element). The candidate
    is returned only after both compositions are verified to be the
    identity, so no unproven invertibility criterion is ever relied on.
    """
    n = phi.rank
    abar = phi.linear_matrix()
    if _rat_det(abar) == 0:
        return None
    lam = linear(_rat_mat_inverse(abar))
    reduced = compose(phi, lam)

    jac_inv = jacobian(reduced).inverse_over_ring()
    if jac_inv is None:
        return None
    images = []
    exprs = []
    for j in range(n):
        row = list(jac_inv.rows[j])
        row[j] = row[j] - Polynomial.one(n)
        u = MElement(n, (Fraction(0),) * n, tuple(row))
        if not mb.is_derived(u):
            return None
        images.append(mb.generator(n, j + 1) + u)
        exprs.append(sum_exprs([Gen(j + 1), mb.lift(u)]))
    candidate = compose(lam, Endo(n, tuple(images), tuple(exprs)))
    if compose(phi, candidate).is_identity() and compose(candidate, phi).is_identity():
        return candidate
    return None


def iaut_level(phi: Endo):
    """Largest i such that phi fixes everything modulo components of degree
    greater than i; the identity map gets float('inf')."""
    level = float("inf")
    for i, img in enumerate(phi.images):
        delta = img - mb.generator(phi.rank, i + 1)
        comps = mb.degree_components(delta)
        if comps:
            level = min(level, min(comps) - 1)
    return level


# ---------------------------------------------------------------------------
# deterministic pseudorandom generator corpora
# ---------------------------------------------------------------------------


def _random_invertible_matrix(rng: random.Random, n: int):
    while True:
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if _rat_det([[Fraction(v) for v in row] for row in a]) != 0:
            return a


def _random_unimodular_matrix(rng: random.Random, n: int):
    """Product of elementary integer row operations: det is +-1 and the
    inverse is integral, so conjugation stays in integer arithmetic."""
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        op = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if op == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        elif op == 1 and i != j:
            a[i], a[j] = a[j], a[i]
        elif op == 2:
            a[i] = [-x for x in a[i]]
    return a


def _random_bracket_word(rng: random.Random, letters: Sequence[int], degree: int):
    word = [rng.choice(letters), rng.choice(letters)]
    while word[0] == word[1]:
        word[1] = rng.choice(letters)
    for _ in range(rng.randint(0, max(0, degree - 2))):
        word.append(rng.choice(letters))
    return left_normed(word)


def random_derived_expr(
    rng: random.Random, rank: int, degree: int, letters: Optional[Sequence[int]] = None
) -> LieExpr:
    """Random nonzero combination of bracket monomials of degree <= degree."""
    if letters is None:
        letters = list(range(1, rank + 1))
    terms = []
    for _ in range(rng.randint(1, 2)):
        coeff = rng.choice([c for c in range(-3, 4) if c])
        terms.append(scale_expr(coeff, _random_bracket_word(rng, letters, degree)))
    return sum_exprs(terms)


def random_tame(rank: int, seed: int, length: int, degree_bound: int = 4) -> Endo:
    """Deterministic pseudorandom product of linear and elementary maps with
    coefficients in -3..3 and bracket degree <= degree_bound."""
    rng = random.Random((seed, "tame", rank, length, degree_bound).__repr__())
    acc = identity(rank)
    for _ in range(length):
        if rank >= 3 and rng.random() < 0.5:
            position = rng.randint(1, rank)
            letters = [i for i in range(1, rank + 1) if i != position]
            factor = elementary(
                rank, random_derived_expr(rng, rank, degree_bound, letters), position
            )
        else:
            factor = linear(_random_invertible_matrix(rng, rank))
        acc = compose(factor, acc)
    return acc


def random_tame_iaut(rank: int, seed: int, length: int, degree_bound: int = 4) -> Endo:
    """Deterministic pseudorandom product of linear conjugates of elementary
    maps; every factor acts as the identity modulo brackets."""
    if rank < 3:
        raise ValueError("nontrivial conjugated-elementary factors need rank >= 3")
    rng = random.Random((seed, "iaut", rank, length, degree_bound).__repr__())
    acc = identity(rank)
    for _ in range(length):
        alpha = _random_unimodular_matrix(rng, rank)
        f = random_derived_expr(rng, rank, degree_bound, list(range(2, rank + 1)))
        conj, _, _ = conjugate_elementary(alpha, f, rank)
        acc = compose(conj, acc)
    return acc


# ---------------------------------------------------------------------------
# rational matrix helpers
# ---------------------------------------------------------------------------


def _rat_det(a) -> Fraction:
    m = [[as_rat(c) for c in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv
                m[i] = [m[i][j] - f * m[k][j] for j in range(n)]
    return det


def _rat_mat_inverse(a):
    m = [[as_rat(c) for c in row] for row in a]
    n = len(m)
    aug = [m[i] + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if aug[i][k]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [v * inv for v in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [v - f * p for v, p in zip(aug[i], aug[k])]
    return [row[n:] for row in aug]
