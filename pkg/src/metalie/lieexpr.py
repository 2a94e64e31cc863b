"""Bracket expression trees shared by the metabelian and free-associative
sides, plus the text grammar used everywhere an expression crosses the CLI
boundary.

Grammar (whitespace-insensitive; LETTER is 'x' or 'z' depending on context):

    element := ('+'|'-')? term (('+'|'-') term)*
    term    := (rational '*')? factor
    factor  := LETTER INT | '[' element ',' element ']' | '(' element ')'
    rational:= INT ('/' INT)?

"0" denotes the empty sum. Parsing produces trees in a fixed shape (signs
folded into scalar coefficients, one Sum node per '+/-' chain), and the
printer emits exactly that shape, so parse(print(e)) == e.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .polyring import ParseError, Scalar, _Scanner, as_rat


@dataclass(frozen=True)
class Gen:
    """Generator with 1-based index."""

    index: int


@dataclass(frozen=True)
class Bracket:
    left: "LieExpr"
    right: "LieExpr"


@dataclass(frozen=True)
class Scale:
    coeff: Fraction
    arg: "LieExpr"


@dataclass(frozen=True)
class Sum:
    parts: Tuple["LieExpr", ...]


LieExpr = Union[Gen, Bracket, Scale, Sum]

ZERO_EXPR = Sum(())


def gen(i: int) -> Gen:
    if i < 1:
        raise ValueError("generator indices are 1-based")
    return Gen(i)


def bracket_expr(a: LieExpr, b: LieExpr) -> Bracket:
    return Bracket(a, b)


def scale_expr(c: Scalar, e: LieExpr) -> LieExpr:
    c = as_rat(c)
    if c == 0:
        return ZERO_EXPR
    if c == 1:
        return e
    if isinstance(e, Scale):
        return scale_expr(c * e.coeff, e.arg)
    return Scale(c, e)


def sum_exprs(parts) -> LieExpr:
    flat = []
    for p in parts:
        if isinstance(p, Sum):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def left_normed(indices) -> LieExpr:
    """[[x_{i1}, x_{i2}], x_{i3}, ..., x_{im}] as nested brackets."""
    idx = list(indices)
    if len(idx) < 2:
        raise ValueError("need at least two generators")
    e: LieExpr = Bracket(Gen(idx[0]), Gen(idx[1]))
    for i in idx[2:]:
        e = Bracket(e, Gen(i))
    return e


def max_generator(e: LieExpr) -> int:
    if isinstance(e, Gen):
        return e.index
    if isinstance(e, Bracket):
        return max(max_generator(e.left), max_generator(e.right))
    if isinstance(e, Scale):
        return max_generator(e.arg)
    if isinstance(e, Sum):
        return max((max_generator(p) for p in e.parts), default=0)
    raise TypeError(f"not a LieExpr: {e!r}")


def generators_used(e: LieExpr) -> frozenset:
    if isinstance(e, Gen):
        return frozenset((e.index,))
    if isinstance(e, Bracket):
        return generators_used(e.left) | generators_used(e.right)
    if isinstance(e, Scale):
        return generators_used(e.arg)
    if isinstance(e, Sum):
        out = frozenset()
        for p in e.parts:
            out |= generators_used(p)
        return out
    raise TypeError(f"not a LieExpr: {e!r}")


def substitute_generators(e: LieExpr, images) -> LieExpr:
    """Graft images[i-1] in place of every generator i (pure tree rewrite)."""
    if isinstance(e, Gen):
        return images[e.index - 1]
    if isinstance(e, Bracket):
        return Bracket(
            substitute_generators(e.left, images),
            substitute_generators(e.right, images),
        )
    if isinstance(e, Scale):
        return Scale(e.coeff, substitute_generators(e.arg, images))
    if isinstance(e, Sum):
        return Sum(tuple(substitute_generators(p, images) for p in e.parts))
    raise TypeError(f"not a LieExpr: {e!r}")


# -- printing ---------------------------------------------------------------


def _format_factor(e: LieExpr, letter: str) -> str:
    if isinstance(e, Gen):
        return f"{letter}{e.index}"
    if isinstance(e, Bracket):
        return f"[{format_expr(e.left, letter)}, {format_expr(e.right, letter)}]"
    return f"({format_expr(e, letter)})"


def format_expr(e: LieExpr, letter: str = "x") -> str:
    """Canonical text form; inverse of parse_expr on parser-shaped trees."""
    terms = e.parts if isinstance(e, Sum) else (e,)
    if not terms:
        return "0"
    chunks = []
    for t in terms:
        if isinstance(t, Scale):
            c, body = t.coeff, t.arg
        else:
            c, body = Fraction(1), t
        neg = c < 0
        mag = -c if neg else c
        fstr = _format_factor(body, letter)
        piece = fstr if mag == 1 else f"{mag}*{fstr}"
        if not chunks:
            chunks.append(f"-{piece}" if neg else piece)
        else:
            chunks.append(f"- {piece}" if neg else f"+ {piece}")
    return " ".join(chunks)


# -- parsing ----------------------------------------------------------------


def parse_expr(text: str, letter: str = "x", rank: int = 0) -> LieExpr:
    """Parse the bracket-expression grammar; rank > 0 bounds generator indices."""
    sc = _Scanner(text)
    e = _parse_element(sc, letter, rank)
    if not sc.at_end():
        raise ParseError("trailing input", sc.pos)
    return e


def _parse_element(sc: _Scanner, letter: str, rank: int) -> LieExpr:
    if sc.peek() == "0":
        # lone zero is the empty sum
        mark = sc.pos
        sc.pos += 1
        nxt = sc.peek()
        if nxt in ("", ",", ")", "]"):
            return ZERO_EXPR
        sc.pos = mark
    terms = []
    sign = -1 if sc.take("-") else 1
    if sign == 1:
        sc.take("+")
    terms.append(_parse_term(sc, letter, rank, sign))
    while True:
        if sc.take("+"):
            terms.append(_parse_term(sc, letter, rank, 1))
        elif sc.take("-"):
            terms.append(_parse_term(sc, letter, rank, -1))
        else:
            break
    if len(terms) == 1:
        return terms[0]
    return Sum(tuple(terms))


def _parse_term(sc: _Scanner, letter: str, rank: int, sign: int) -> LieExpr:
    coeff = Fraction(sign)
    if sc.peek().isdigit():
        coeff *= sc.rational()
        sc.expect("*")
    factor = _parse_factor(sc, letter, rank)
    if coeff == 1:
        return factor
    return Scale(coeff, factor)


def _parse_factor(sc: _Scanner, letter: str, rank: int) -> LieExpr:
    ch = sc.peek()
    if ch == letter:
        pos = sc.pos
        sc.pos += 1
        idx = sc.integer()
        if idx < 1 or (rank and idx > rank):
            bound = rank if rank else "n"
            raise ParseError(f"generator index {idx} out of range 1..{bound}", pos)
        return Gen(idx)
    if ch == "[":
        sc.pos += 1
        left = _parse_element(sc, letter, rank)
        sc.expect(",")
        right = _parse_element(sc, letter, rank)
        sc.expect("]")
        return Bracket(left, right)
    if ch == "(":
        sc.pos += 1
        inner = _parse_element(sc, letter, rank)
        sc.expect(")")
        return inner
    raise ParseError(f"expected '{letter}<index>', '[' or '('", sc.pos)
