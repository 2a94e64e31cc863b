"""Exact arithmetic substrate: rationals, sparse multivariate polynomials,
matrices over the polynomial ring, and exact rational linear solving.

All coefficients are `fractions.Fraction`; nothing here ever rounds. A
polynomial is a sparse map from exponent tuples to nonzero coefficients over
a fixed number of variables y1..yn. The text form ("2*y1^2*y2 - y3") is
canonical -- terms are ordered by total degree (highest first), ties broken
by exponent vector -- and parse/print round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Rat = Fraction
Scalar = Union[int, Fraction]


class ParseError(ValueError):
    """Raised on malformed input text; carries the offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


def as_rat(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def as_coeff(c: Scalar):
    """Normalize an exact rational, demoting integral values to int.

    int and Fraction mix exactly under Python arithmetic and agree on
    equality and hashing, so term maps may hold either; plain ints keep the
    all-integer fast path cheap.
    """
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def _mono_key(mono: tuple) -> tuple:
    # canonical term order: highest total degree first, then higher powers of
    # the earliest variable first
    return (-sum(mono), tuple(-e for e in mono))


def _mono_order(mono: tuple) -> tuple:
    # monomial order used for exact division (graded, then lex); compatible
    # with multiplication
    return (sum(mono), mono)


class Polynomial:
    """Sparse polynomial in y1..yn with rational coefficients.

    Immutable by convention: the term map is normalized on construction and
    never mutated afterwards, so instances can be shared freely across
    threads.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Scalar] = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = tuple(mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = as_coeff(coeff)
            if c:
                prev = clean.get(mono)
                if prev is None:
                    clean[mono] = c
                else:
                    s = prev + c
                    if s:
                        clean[mono] = s
                    else:
                        del clean[mono]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        """The variable y_index, 1-based."""
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} out of range 1..{nvars}")
        mono = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, {mono: 1})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self):
        """Terms in the canonical (printing) order."""
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def homogeneous_components(self) -> dict:
        """Map total degree -> homogeneous part; zero parts omitted."""
        parts = {}
        for mono, coeff in self.terms.items():
            parts.setdefault(sum(mono), {})[mono] = coeff
        return {d: Polynomial(self.nvars, t) for d, t in sorted(parts.items())}

    # -- ring operations -----------------------------------------------------

    def _check_rank(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(f"rank mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_rank(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, _ZERO) + coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _raw_poly(self.nvars, out)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_rank(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            s = out.get(mono, _ZERO) - coeff
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _raw_poly(self.nvars, out)

    def __neg__(self):
        return _raw_poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_rank(other)
            out: dict = {}
            _mul_into(out, self.terms, other.terms)
            return _raw_poly(self.nvars, out)
        if isinstance(other, (int, Fraction)):
            c = as_coeff(other)
            if not c:
                return Polynomial.zero(self.nvars)
            return _raw_poly(self.nvars, {m: v * c for m, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- substitution --------------------------------------------------------

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending y_i to images[i-1]."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images and self.nvars == 0:
            return self
        nv = images[0].nvars
        for img in images:
            if img.nvars != nv:
                raise ValueError("images live in different rings")
        powers = [[Polynomial.one(nv), img] for img in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * cache[1])
            return cache[e]

        out: dict = {}
        for mono, coeff in self.terms.items():
            prod = Polynomial.constant(nv, coeff)
            for i, e in enumerate(mono):
                if e:
                    prod = prod * power(i, e)
            for m, c in prod.terms.items():
                s = out.get(m, _ZERO) + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return _raw_poly(nv, out)

    # -- division helpers ----------------------------------------------------

    def split_by_var(self, index: int):
        """Write self = q * y_index + r with r free of y_index; returns (q, r)."""
        if not 1 <= index <= self.nvars:
            raise ValueError(f"variable index {index} out of range 1..{self.nvars}")
        i = index - 1
        q, r = {}, {}
        for mono, coeff in self.terms.items():
            if mono[i] > 0:
                q[mono[:i] + (mono[i] - 1,) + mono[i + 1 :]] = coeff
            else:
                r[mono] = coeff
        return _raw_poly(self.nvars, q), _raw_poly(self.nvars, r)

    def leading_term(self):
        """(monomial, coefficient) maximal in the graded-lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=_mono_order)
        return mono, self.terms[mono]

    def divexact(self, divisor: "Polynomial") -> "Polynomial":
        """Exact division; raises ValueError if divisor does not divide self."""
        self._check_rank(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if divisor.is_constant():
            return self * (1 / as_rat(divisor.constant_term()))
        if self.is_zero():
            return self
        dmono, dcoeff = divisor.leading_term()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            rmono = max(rem, key=_mono_order)
            qmono = tuple(a - b for a, b in zip(rmono, dmono))
            if any(e < 0 for e in qmono):
                raise ValueError("inexact polynomial division")
            qcoeff = as_coeff(Fraction(rem[rmono]) / Fraction(dcoeff))
            quot[qmono] = qcoeff
            for mono, coeff in divisor.terms.items():
                m = tuple(a + b for a, b in zip(mono, qmono))
                s = rem.get(m, _ZERO) - coeff * qcoeff
                if s:
                    rem[m] = s
                else:
                    rem.pop(m, None)
        return _raw_poly(self.nvars, quot)

    # -- text form -----------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self})"


_ZERO = Fraction(0)


def _raw_poly(nvars: int, terms: dict) -> Polynomial:
    """Build a Polynomial from an already-normalized term dict (internal)."""
    p = object.__new__(Polynomial)
    object.__setattr__(p, "nvars", nvars)
    object.__setattr__(p, "terms", terms)
    return p


def _mul_into(acc: dict, a: Mapping, b: Mapping):
    """acc += a * b on raw term dicts."""
    if len(a) > len(b):
        a, b = b, a
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            s = acc.get(m, _ZERO) + c1 * c2
            if s:
                acc[m] = s
            else:
                del acc[m]


def format_rat(c: Fraction) -> str:
    return str(c)


def _format_mono(mono: tuple) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"y{i + 1}")
        elif e > 1:
            parts.append(f"y{i + 1}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for mono, coeff in p.sorted_terms():
        mstr = _format_mono(mono)
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mstr:
            body = format_rat(mag)
        elif mag == 1:
            body = mstr
        else:
            body = f"{format_rat(mag)}*{mstr}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


class _Scanner:
    """Tiny whitespace-insensitive tokenizer shared by the text parsers."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            raise ParseError(f"expected '{ch}'", self.pos)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.take("/"):
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", self.pos)
            return Fraction(num, den)
        return Fraction(num)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_polynomial(text: str, nvars: int, letter: str = "y") -> Polynomial:
    """Parse the canonical polynomial text form; inverse of str()."""
    sc = _Scanner(text)
    terms: dict = {}

    def parse_factor():
        sc.skip_ws()
        if sc.peek() != letter:
            raise ParseError(f"expected '{letter}<index>'", sc.pos)
        sc.pos += 1
        idx = sc.integer()
        if not 1 <= idx <= nvars:
            raise ParseError(f"variable index {idx} out of range 1..{nvars}", sc.pos)
        exp = 1
        if sc.take("^"):
            exp = sc.integer()
        return idx, exp

    def parse_term(sign: int):
        mono = [0] * nvars
        coeff = Fraction(sign)
        ch = sc.peek()
        if ch.isdigit():
            coeff *= sc.rational()
            if not sc.take("*"):
                terms[tuple(mono)] = terms.get(tuple(mono), _ZERO) + coeff
                return
        idx, exp = parse_factor()
        mono[idx - 1] += exp
        while sc.take("*"):
            idx, exp = parse_factor()
            mono[idx - 1] += exp
        key = tuple(mono)
        terms[key] = terms.get(key, _ZERO) + coeff

    sign = -1 if sc.take("-") else 1
    if sign == 1:
        sc.take("+")
    parse_term(sign)
    while True:
        if sc.take("+"):
            parse_term(1)
        elif sc.take("-"):
            parse_term(-1)
        else:
            break
    if not sc.at_end():
        raise ParseError("trailing input", sc.pos)
    return Polynomial(nvars, terms)


# ---------------------------------------------------------------------------
# Matrices over the polynomial ring
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Rectangular matrix of Polynomial entries with a fixed variable count.

    Rows and columns are plain tuples; instances are immutable. 1xn and nx1
    shapes double as row and column vectors (see `row_vector`, `col_vector`).
    """

    __slots__ = ("nvars", "rows")

    def __init__(self, nvars: int, rows: Iterable[Iterable]):
        grid = []
        width = None
        for row in rows:
            entries = []
            for entry in row:
                if isinstance(entry, Polynomial):
                    if entry.nvars != nvars:
                        raise ValueError("entry has wrong variable count")
                    entries.append(entry)
                else:
                    entries.append(Polynomial.constant(nvars, entry))
            if width is None:
                width = len(entries)
            elif len(entries) != width:
                raise ValueError("ragged rows")
            grid.append(tuple(entries))
        if not grid or width == 0:
            raise ValueError("matrix must be nonempty")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "rows", tuple(grid))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, nvars: int, n: int) -> "PolyMatrix":
        return cls(nvars, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, nvars: int, nrows: int, ncols: int) -> "PolyMatrix":
        return cls(nvars, [[0] * ncols for _ in range(nrows)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key) -> Polynomial:
        i, j = key
        return self.rows[i][j]

    def row(self, i: int) -> "PolyMatrix":
        return PolyMatrix(self.nvars, [self.rows[i]])

    def col(self, j: int) -> "PolyMatrix":
        return PolyMatrix(self.nvars, [[r[j]] for r in self.rows])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.nvars, list(zip(*self.rows)))

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.nvars == other.nvars and self.rows == other.rows

    def __hash__(self):
        return hash((self.nvars, self.rows))

    def _check_same_shape(self, other: "PolyMatrix"):
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return PolyMatrix(
            self.nvars,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return PolyMatrix(
            self.nvars,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return PolyMatrix(self.nvars, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.nvars != other.nvars:
                raise ValueError("variable-count mismatch")
            if self.ncols != other.nrows:
                raise ValueError(
                    f"dimension mismatch: {self.shape} times {other.shape}"
                )
            cols = other.transpose().rows
            out = []
            for r in self.rows:
                line = []
                for c in cols:
                    acc: dict = {}
                    for a, b in zip(r, c):
                        if a.terms and b.terms:
                            _mul_into(acc, a.terms, b.terms)
                    line.append(_raw_poly(self.nvars, acc))
                out.append(line)
            return PolyMatrix(self.nvars, out)
        if isinstance(other, (int, Fraction, Polynomial)):
            return PolyMatrix(self.nvars, [[a * other for a in r] for r in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return PolyMatrix(self.nvars, [[other * a for a in r] for r in self.rows])
        return NotImplemented

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.nvars, [[fn(a) for a in r] for r in self.rows])

    # -- determinant and inverse ---------------------------------------------

    def det(self) -> Polynomial:
        """Exact determinant: cofactor expansion for n <= 4, Bareiss above."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows <= 4:
            return _det_cofactor(self.rows, self.nvars)
        return _det_bareiss(self.rows, self.nvars)

    def inverse_over_ring(self) -> Optional["PolyMatrix"]:
        """Inverse over the polynomial ring, or None.

        A square matrix over K[y1..yn] is invertible over the ring iff its
        determinant is a nonzero constant; then the inverse is the adjugate
        divided by the determinant.
        """
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        d = self.det()
        if d.is_zero() or not d.is_constant():
            return None
        scale = 1 / as_rat(d.constant_term())
        n = self.nrows
        if n == 1:
            return PolyMatrix(self.nvars, [[Polynomial.constant(self.nvars, scale)]])
        # adjugate via one subset-DP pass per deleted row, sharing sub-minors
        minors = [self._row_deleted_minors(j) for j in range(n)]
        adj = [
            [
                minors[j][i] * (scale if (i + j) % 2 == 0 else -scale)
                for j in range(n)
            ]
            for i in range(n)
        ]
        return PolyMatrix(self.nvars, adj)

    def _row_deleted_minors(self, skip_row: int):
        """All (n-1)x(n-1) minors that avoid `skip_row`: entry c is the
        determinant of the submatrix on the remaining rows and the columns
        other than c. Computed by Laplace expansion over column subsets, so
        shared sub-minors are evaluated once."""
        n = self.nrows
        rows = [self.rows[r] for r in range(n) if r != skip_row]
        zero = Polynomial.zero(self.nvars)
        table = {0: Polynomial.one(self.nvars)}
        for t, row in enumerate(rows):
            new_table: dict = {}
            for mask, sub in table.items():
                if sub.is_zero():
                    continue
                pos = 0
                for c in range(n):
                    bit = 1 << c
                    if mask & bit:
                        pos += 1
                        continue
                    entry = row[c]
                    if not entry.is_zero():
                        # expansion along the last row: sign (-1)^(t + pos)
                        term = entry * sub
                        if (t + pos) % 2:
                            term = -term
                        m = mask | bit
                        cur = new_table.get(m)
                        new_table[m] = term if cur is None else cur + term
            table = new_table
        full = (1 << n) - 1
        return [table.get(full ^ (1 << c), zero) for c in range(n)]

    def __str__(self):
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows)

    def __repr__(self):
        return f"PolyMatrix({self.nvars}, shape={self.shape})"


def row_vector(nvars: int, entries: Iterable) -> PolyMatrix:
    return PolyMatrix(nvars, [list(entries)])


def col_vector(nvars: int, entries: Iterable) -> PolyMatrix:
    return PolyMatrix(nvars, [[e] for e in entries])


def y_column(nvars: int) -> PolyMatrix:
    """The column (y1, ..., yn)^t."""
    return col_vector(nvars, [Polynomial.variable(nvars, i + 1) for i in range(nvars)])


def unit_column(nvars: int, n: int, index: int) -> PolyMatrix:
    """The standard basis column e_index (1-based) of length n."""
    return col_vector(nvars, [1 if i == index - 1 else 0 for i in range(n)])


def _det_cofactor(rows, nvars: int) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Polynomial.zero(nvars)
    for j, entry in enumerate(rows[0]):
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = entry * _det_cofactor(minor, nvars)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss(rows, nvars: int) -> Polynomial:
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = Polynomial.one(nvars)
    for k in range(n - 1):
        piv = k
        while piv < n and m[piv][k].is_zero():
            piv += 1
        if piv == n:
            return Polynomial.zero(nvars)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = Polynomial.zero(nvars)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


# ---------------------------------------------------------------------------
# Exact rational linear algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSolution:
    """One exact solution of A x = b plus a basis of the null space of A."""

    particular: tuple
    null_basis: tuple


def solve_linear(a_rows: Sequence[Sequence[Scalar]], b: Sequence[Scalar]):
    """Exact Gauss-Jordan elimination over the rationals.

    Returns a LinearSolution, or None when the system is inconsistent. The
    particular solution sets every free variable to zero; the null basis has
    one vector per free column, in column order.
    """
    m = [[as_rat(c) for c in row] for row in a_rows]
    rhs = [as_rat(c) for c in b]
    if len(m) != len(rhs):
        raise ValueError("row count of A must match length of b")
    nrows = len(m)
    if nrows == 0:
        return LinearSolution((), ())
    ncols = len(m[0])
    for row in m:
        if len(row) != ncols:
            raise ValueError("ragged matrix")

    pivot_cols = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        rhs[r] = rhs[r] * inv
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * p for a, p in zip(m[i], m[r])]
                rhs[i] = rhs[i] - f * rhs[r]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rhs[i]:
            return None

    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivot_cols):
        particular[c] = rhs[i]
    free_cols = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, c in enumerate(pivot_cols):
            vec[c] = -m[i][fc]
        basis.append(tuple(vec))
    return LinearSolution(tuple(particular), tuple(basis))


class RowSpace:
    """Incremental exact row-echelon accumulator over sparse rational rows.

    Rows are dicts mapping totally ordered, hashable column keys to nonzero
    Fractions. Each stored pivot row is normalized to coefficient 1 at its
    minimal key, so reduction strictly increases the minimal key of the
    remainder and terminates.
    """

    def __init__(self):
        self._pivots = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, row: Mapping) -> dict:
        rem = {k: as_rat(c) for k, c in row.items() if c}
        while rem:
            k = min(rem)
            pivot = self._pivots.get(k)
            if pivot is None:
                return rem
            f = rem[k]
            for kk, cc in pivot.items():
                s = rem.get(kk, _ZERO) - f * cc
                if s:
                    rem[kk] = s
                else:
                    rem.pop(kk, None)
        return rem

    def add(self, row: Mapping) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        rem = self.reduce(row)
        if not rem:
            return False
        k = min(rem)
        inv = 1 / rem[k]
        self._pivots[k] = {kk: cc * inv for kk, cc in rem.items()}
        return True

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)
