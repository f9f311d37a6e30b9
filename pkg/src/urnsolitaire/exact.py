"""Exact arithmetic foundation.

Rationals (stdlib Fraction), binomial coefficients, sparse polynomials in the
fixed variables (m, n), dense rational matrices and an exact nullspace.

Everything here is exact: no floating point appears anywhere in this module.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

# The universal exact value type.  fractions.Fraction already guarantees the
# canonical form we need: positive denominator, gcd(|num|, den) = 1, 0 == 0/1.
Rational = Fraction

# Global variable order for all polynomials.
VARIABLES = ("m", "n")


class MissingVariableError(KeyError):
    """An evaluation assignment does not cover a variable of the polynomial."""


def binomial(a: int, b: int) -> int:
    """C(a, b), with C(a, b) = 0 whenever b < 0 or b > a."""
    if a < 0:
        raise ValueError(f"binomial: first argument must be nonnegative, got {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def format_rational(x: Fraction) -> str:
    """Serialize as "p/q" in lowest terms, or plain "p" when q = 1."""
    return str(x)


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# Sparse polynomials in (m, n)
# ---------------------------------------------------------------------------

class Poly:
    """Sparse polynomial over Rational in the fixed variables (m, n).

    `terms` maps exponent pairs (e_m, e_n) to nonzero coefficients.  Instances
    are treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("terms",)
    variables = VARIABLES

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for exp, coef in terms.items():
                if len(exp) != len(VARIABLES):
                    raise ValueError(f"exponent vector {exp!r} has wrong length")
                coef = Fraction(coef)
                if coef:
                    clean[(int(exp[0]), int(exp[1]))] = coef
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        if name not in VARIABLES:
            raise ValueError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in VARIABLES)
        return cls({exp: Fraction(1)})

    @classmethod
    def monomial(cls, exp: tuple[int, int], coef) -> "Poly":
        return cls({exp: Fraction(coef)})

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + c
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[tuple[int, int], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1])
                terms[exp] = terms.get(exp, Fraction(0)) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: str) -> int:
        """Largest exponent of `var`; -1 for the zero polynomial."""
        i = VARIABLES.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_term(self) -> tuple[tuple[int, int], Fraction] | None:
        """Term with the lexicographically largest exponent vector."""
        if not self.terms:
            return None
        exp = max(self.terms)
        return exp, self.terms[exp]

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(VARIABLES)
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei:
                    used[i] = True
        return tuple(v for v, u in zip(VARIABLES, used) if u)

    def eval(self, assignment: Mapping[str, Fraction | int]) -> Fraction:
        """Exact evaluation by substitution.

        Raises MissingVariableError if a variable actually appearing in the
        polynomial is absent from the assignment.
        """
        for v in self.used_variables():
            if v not in assignment:
                raise MissingVariableError(v)
        vals = [Fraction(assignment.get(v, 0)) for v in VARIABLES]
        total = Fraction(0)
        for exp, coef in self.terms.items():
            term = coef
            for x, e in zip(vals, exp):
                if e:
                    term *= x ** e
            total += term
        return total

    __call__ = eval

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            coef = self.terms[exp]
            factors = []
            for v, e in zip(VARIABLES, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                parts.append(str(coef))
            elif coef == 1:
                parts.append("*".join(factors))
            elif coef == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(coef) + "*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    # -- serialization -----------------------------------------------------

    def to_obj(self) -> list[dict]:
        """JSON object form: term list sorted by exponent, descending lex."""
        return [
            {"exp": list(exp), "coef": format_rational(self.terms[exp])}
            for exp in sorted(self.terms, reverse=True)
        ]

    @classmethod
    def from_obj(cls, obj: Iterable[Mapping]) -> "Poly":
        return cls({tuple(t["exp"]): parse_rational(t["coef"]) for t in obj})


# Convenience generators.
M = Poly.variable("m")
N = Poly.variable("n")


# ---------------------------------------------------------------------------
# Dense rational matrices and exact nullspace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major, Fractions

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(Fraction(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def mul_vector(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols)),
                Fraction(0))
            for i in range(self.rows)
        ]


def _exact_number_type():
    """gmpy2.mpq when available (much faster on big operands), else Fraction.

    Override with URNSOLITAIRE_EXACT_BACKEND=fractions|gmpy2.
    """
    choice = os.environ.get("URNSOLITAIRE_EXACT_BACKEND", "auto")
    if choice not in ("auto", "gmpy2", "fractions"):
        raise ValueError(f"bad URNSOLITAIRE_EXACT_BACKEND: {choice!r}")
    if choice in ("auto", "gmpy2"):
        try:
            from gmpy2 import mpq
            return mpq
        except ImportError:
            if choice == "gmpy2":
                raise
    return Fraction


def _bitsize(x) -> int:
    return int(x.numerator).bit_length() + int(x.denominator).bit_length()


def _rref(mat: Matrix):
    """Reduced row echelon form; returns (rows, pivot column list).

    Pivot choice within each column: the nonzero candidate of smallest
    numerator+denominator bit length, to limit coefficient growth.
    """
    num = _exact_number_type()
    rows = [[num(x.numerator, x.denominator) for x in mat.row(i)]
            for i in range(mat.rows)]
    zero = num(0)
    pivots: list[int] = []
    r = 0
    for c in range(mat.cols):
        if r == len(rows):
            break
        best = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v != zero:
                sz = _bitsize(v)
                if best is None or sz < best[0]:
                    best = (sz, i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f != zero:
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(mat: Matrix) -> int:
    return len(_rref(mat)[1])


def _primitive(vec: list[Fraction]) -> list[Fraction]:
    """Scale to coprime integers with the first nonzero entry positive."""
    den_lcm = 1
    for x in vec:
        den_lcm = den_lcm * x.denominator // math.gcd(den_lcm, x.denominator)
    ints = [int(x * den_lcm) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return [Fraction(v) for v in ints]


def nullspace(mat: Matrix) -> list[list[Fraction]]:
    """Basis of the exact right nullspace, via rational Gaussian elimination.

    Every returned vector v satisfies mat . v = 0 exactly; vectors are scaled
    to coprime integers with positive leading entry.
    """
    rows, pivots = _rref(mat)
    pivot_set = set(pivots)
    basis = []
    for free in range(mat.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * mat.cols
        v[free] = Fraction(1)
        for prow, pc in enumerate(pivots):
            x = rows[prow][free]
            v[pc] = -Fraction(int(x.numerator), int(x.denominator))
        basis.append(_primitive(v))
    return basis
