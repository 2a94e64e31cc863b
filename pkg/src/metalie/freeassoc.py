"""The free associative algebra on z1..zn: noncommutative polynomials,
expansion of free-Lie bracket expressions, left Fox derivatives, and the
cyclic-word test for membership in the commutator subspace [U, U].

Over a field of characteristic zero an element lies in the span of all
commutators uv - vu exactly when, for every cyclic-rotation class of words,
its coefficients over that class sum to zero. The replay() entry point walks
the degree-4 trace computation: the z1-derivative of [[z1,[z2,z3]],z4] equals
z4*[z2,z3], which fails the cyclic test on its own, and an exact linear
solve over the degree-4 second-derived spanning set finds correction terms
whose diagonal Fox derivatives push the sum into [U, U].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .lieexpr import (
    Bracket,
    Gen,
    LieExpr,
    Scale,
    Sum,
    bracket_expr,
    format_expr,
    scale_expr,
    sum_exprs,
)
from .polyring import Scalar, as_coeff, solve_linear

Word = Tuple[int, ...]

_ZERO = Fraction(0)


class NCPoly:
    """Noncommutative polynomial: a sparse map word -> coefficient, where a
    word is a tuple of 1-based letter indices and () is the unit."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Word, Scalar] = ()):
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, coeff in items:
            word = tuple(word)
            if any(not 1 <= a <= rank for a in word):
                raise ValueError(f"letter out of range 1..{rank} in {word}")
            c = as_coeff(coeff)
            if not c:
                continue
            s = clean.get(word, _ZERO) + c
            if s:
                clean[word] = s
            else:
                del clean[word]
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NCPoly is immutable")

    @classmethod
    def zero(cls, rank: int) -> "NCPoly":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "NCPoly":
        return cls(rank, {(): 1})

    @classmethod
    def gen(cls, rank: int, i: int) -> "NCPoly":
        if not 1 <= i <= rank:
            raise ValueError(f"letter {i} out of range 1..{rank}")
        return cls(rank, {(i,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((), _ZERO)

    def degree(self) -> int:
        """Maximal word length; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def homogeneous_component(self, d: int) -> "NCPoly":
        return NCPoly(self.rank, {w: c for w, c in self.terms.items() if len(w) == d})

    def _check_rank(self, other: "NCPoly"):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check_rank(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, _ZERO) + c
            if s:
                out[w] = s
            else:
                del out[w]
        return NCPoly(self.rank, out)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.rank, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            self._check_rank(other)
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    s = out.get(w, _ZERO) + c1 * c2
                    if s:
                        out[w] = s
                    else:
                        del out[w]
            return NCPoly(self.rank, out)
        if isinstance(other, (int, Fraction)):
            c = as_coeff(other)
            return NCPoly(self.rank, {w: v * c for w, v in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for word, coeff in self.sorted_terms():
            body = "*".join(f"z{a}" for a in word) or "1"
            neg = coeff < 0
            mag = -coeff if neg else coeff
            if mag != 1 or not word:
                body = f"{mag}*{body}" if word else str(mag)
            if not chunks:
                chunks.append(f"-{body}" if neg else body)
            else:
                chunks.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"NCPoly({self.rank}, {self})"


def nc_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def lie_to_assoc(e: LieExpr, rank: int) -> NCPoly:
    """Expand a bracket expression in the free associative algebra via
    [u, v] = uv - vu."""
    if isinstance(e, Gen):
        return NCPoly.gen(rank, e.index)
    if isinstance(e, Bracket):
        u = lie_to_assoc(e.left, rank)
        v = lie_to_assoc(e.right, rank)
        return u * v - v * u
    if isinstance(e, Scale):
        return lie_to_assoc(e.arg, rank) * e.coeff
    if isinstance(e, Sum):
        acc = NCPoly.zero(rank)
        for p in e.parts:
            acc = acc + lie_to_assoc(p, rank)
        return acc
    raise TypeError(f"not a LieExpr: {e!r}")


def fox_assoc(f: NCPoly, i: int) -> NCPoly:
    """Left Fox derivative with respect to z_i: collect the words ending in
    z_i and strip that last letter, so that f = sum_i fox_assoc(f, i) * z_i.

    Requires a zero constant term.
    """
    if f.constant_term():
        raise ValueError("Fox derivative needs a zero constant term")
    if not 1 <= i <= f.rank:
        raise ValueError(f"letter {i} out of range 1..{f.rank}")
    return NCPoly(
        f.rank, {w[:-1]: c for w, c in f.terms.items() if w and w[-1] == i}
    )


def cyclic_representative(word: Word) -> Word:
    """Canonical representative of the rotation class: the least rotation."""
    if len(word) <= 1:
        return word
    return min(word[k:] + word[:k] for k in range(len(word)))


def cyclic_signature(p: NCPoly) -> Dict[Word, Fraction]:
    """Sum of coefficients over each cyclic-rotation class of words, keyed by
    the canonical representative; classes summing to zero are omitted."""
    sums: dict = {}
    for word, coeff in p.terms.items():
        rep = cyclic_representative(word)
        s = sums.get(rep, _ZERO) + coeff
        if s:
            sums[rep] = s
        else:
            del sums[rep]
    return sums


def in_commutator_subspace(p: NCPoly) -> bool:
    """True iff p lies in the span of all commutators uv - vu (characteristic
    zero criterion: every cyclic-class coefficient sum vanishes)."""
    return not cyclic_signature(p)


def derived_degree4_basis(n: int) -> List[LieExpr]:
    """Spanning set of the degree-4 part of the second derived subalgebra:
    all [[z_i, z_j], [z_k, z_l]] with i > j, k > l and (i, j) > (k, l);
    candidates whose associative expansion vanishes are dropped."""
    if n < 2:
        raise ValueError("need rank >= 2")
    pairs = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    out = []
    for a in range(len(pairs)):
        for b in range(a):
            (i, j), (k, l) = pairs[a], pairs[b]
            expr = bracket_expr(
                bracket_expr(Gen(i), Gen(j)), bracket_expr(Gen(k), Gen(l))
            )
            if not lie_to_assoc(expr, n).is_zero():
                out.append(expr)
    return out


# ---------------------------------------------------------------------------
# the degree-4 trace replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessSearch:
    """Exact linear solve for corrections v_1..v_n (degree-4 second-derived
    elements) making S + sum_i fox_assoc(v_i, i) land in [U, U]."""

    solvable: bool
    unknowns: int
    equations: int
    null_space_dimension: int
    witness_exprs: Tuple[Tuple[int, LieExpr], ...]
    verified: bool


@dataclass(frozen=True)
class TraceReplay:
    rank: int
    source_expr: LieExpr
    derivative: NCPoly
    signature: Tuple[Tuple[Word, Fraction], ...]
    in_commutators: bool
    witness: Optional[WitnessSearch]

    def to_text(self) -> str:
        lines = [
            f"rank n = {self.rank}",
            f"source Lie monomial: {format_expr(self.source_expr, 'z')}",
            f"d/dz1 of its expansion: {self.derivative}",
            "cyclic-class sums:",
        ]
        for word, coeff in self.signature:
            wstr = "*".join(f"z{a}" for a in word) or "1"
            lines.append(f"  class({wstr}): {coeff}")
        lines.append(
            f"in commutator subspace [U,U]: {'yes' if self.in_commutators else 'no'}"
        )
        w = self.witness
        if w is not None:
            lines.append(
                "witness search over degree-4 second-derived corrections "
                f"({w.unknowns} unknowns, {w.equations} cyclic-class equations):"
            )
            lines.append(f"  solvable: {'yes' if w.solvable else 'no'}")
            if w.solvable:
                for i, expr in w.witness_exprs:
                    lines.append(f"  v{i} = {format_expr(expr, 'z')}")
                if not w.witness_exprs:
                    lines.append("  all v_i = 0")
                lines.append(f"  corrected sum in [U,U]: "
                             f"{'verified' if w.verified else 'FAILED'}")
            lines.append(f"  null space dimension: {w.null_space_dimension}")
        return "\n".join(lines)

    def to_doc(self) -> dict:
        doc = {
            "rank": self.rank,
            "source": format_expr(self.source_expr, "z"),
            "derivative": str(self.derivative),
            "cyclic_signature": [
                {"class": "*".join(f"z{a}" for a in word) or "1", "sum": str(coeff)}
                for word, coeff in self.signature
            ],
            "in_commutator_subspace": self.in_commutators,
        }
        if self.witness is not None:
            w = self.witness
            doc["witness_search"] = {
                "solvable": w.solvable,
                "unknowns": w.unknowns,
                "equations": w.equations,
                "null_space_dimension": w.null_space_dimension,
                "witness": {
                    f"v{i}": format_expr(expr, "z") for i, expr in w.witness_exprs
                },
                "verified": w.verified,
            }
        return doc


def source_monomial() -> LieExpr:
    """[[z1, [z2, z3]], z4]."""
    return bracket_expr(
        bracket_expr(Gen(1), bracket_expr(Gen(2), Gen(3))), Gen(4)
    )


def replay(rank: int, include_witness: bool = True) -> TraceReplay:
    """Run the degree-4 trace computation at the given rank (>= 4)."""
    if rank < 4:
        raise ValueError("the replay needs rank >= 4")
    expr = source_monomial()
    s = fox_assoc(lie_to_assoc(expr, rank), 1)
    sig = tuple(sorted(cyclic_signature(s).items()))
    member = in_commutator_subspace(s)
    witness = _witness_search(rank, s) if include_witness else None
    return TraceReplay(rank, expr, s, sig, member, witness)


def _witness_search(rank: int, s: NCPoly) -> WitnessSearch:
    import itertools

    basis = derived_degree4_basis(rank)
    expansions = [lie_to_assoc(e, rank) for e in basis]
    unknowns = [(i, k) for i in range(1, rank + 1) for k in range(len(basis))]

    # one equation per cyclic class of degree-3 words
    columns = [
        cyclic_signature(fox_assoc(expansions[k], i)) for i, k in unknowns
    ]
    rhs_sig = cyclic_signature(s)
    class_list = sorted(
        {
            cyclic_representative(w)
            for w in itertools.product(range(1, rank + 1), repeat=3)
        }
    )
    a_rows = [[col.get(cls, _ZERO) for col in columns] for cls in class_list]
    b = [-rhs_sig.get(cls, _ZERO) for cls in class_list]

    solution = solve_linear(a_rows, b)
    if solution is None:
        return WitnessSearch(False, len(unknowns), len(class_list), 0, (), False)

    per_gen: Dict[int, list] = {}
    for (i, k), coeff in zip(unknowns, solution.particular):
        if coeff:
            per_gen.setdefault(i, []).append(scale_expr(coeff, basis[k]))
    witness_exprs = tuple(
        (i, sum_exprs(terms)) for i, terms in sorted(per_gen.items())
    )

    corrected = s
    for i, expr in witness_exprs:
        corrected = corrected + fox_assoc(lie_to_assoc(expr, rank), i)
    verified = in_commutator_subspace(corrected)
    return WitnessSearch(
        True,
        len(unknowns),
        len(class_list),
        len(solution.null_basis),
        witness_exprs,
        verified,
    )
