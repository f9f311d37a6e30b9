"""Exact dynamic-programming engines for the two urn games.

Quantities (all exact rationals, computed bottom-up over the full rectangle):

  win_prob              P(m,n)  returning game, P(m,0)=1, P(0,n)=0
  expected_rounds       E(m,n)  returning game, E(m,0)=E(0,n)=0
  second_moment         second moment of the round count, returning game
  simple_expected       F(m,n)  non-returning game, F(m,0)=F(0,n)=0
  simple_prob           G(m,n)  non-returning game, G(m,0)=1, G(0,n)=0
  simple_second_moment  second moment of the round count, non-returning game

A round from state (m, n) is a maximal run of k same-color balls followed by
one ball of the other color.  In the returning game the round-ending ball goes
back into the urn; in the simple game it is removed as well.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import binomial, format_rational, parse_rational

GREEN = "green"
RED = "red"

QUANTITIES = (
    "win_prob",
    "expected_rounds",
    "second_moment",
    "simple_expected",
    "simple_prob",
    "simple_second_moment",
)

# Guard against accidentally huge table requests.
CELL_CAP = 10_000_000


class UrnDomainError(ValueError):
    """State or argument outside the defined domain of an operation."""


class TableSizeError(ValueError):
    """Requested table exceeds the configured cell cap."""


@dataclass(frozen=True)
class UrnState:
    green: int
    red: int

    def __post_init__(self):
        if self.green < 0 or self.red < 0:
            raise UrnDomainError(f"negative ball count in state {self!r}")

    @property
    def total(self) -> int:
        return self.green + self.red


@dataclass
class ValueTable:
    """Complete exact table of one quantity over 0 <= m <= max_m, 0 <= n <= max_n."""

    quantity: str
    max_m: int
    max_n: int
    values: dict = field(repr=False)

    def get(self, m: int, n: int) -> Fraction:
        return self.values[(m, n)]

    def diagonal_length(self) -> int:
        return min(self.max_m, self.max_n)

    # row-major over m = 0..max_m, n = 0..max_n
    def to_obj(self) -> dict:
        flat = [
            format_rational(self.values[(m, n)])
            for m in range(self.max_m + 1)
            for n in range(self.max_n + 1)
        ]
        return {"quantity": self.quantity, "max_m": self.max_m,
                "max_n": self.max_n, "values": flat}

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_obj(cls, obj: dict) -> "ValueTable":
        max_m, max_n = obj["max_m"], obj["max_n"]
        flat = obj["values"]
        values = {}
        i = 0
        for m in range(max_m + 1):
            for n in range(max_n + 1):
                values[(m, n)] = parse_rational(flat[i])
                i += 1
        return cls(obj["quantity"], max_m, max_n, values)

    @classmethod
    def from_json(cls, s: str) -> "ValueTable":
        return cls.from_obj(json.loads(s))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "value"])
        for m in range(self.max_m + 1):
            for n in range(self.max_n + 1):
                w.writerow([m, n, format_rational(self.values[(m, n)])])
        return buf.getvalue()


def transition_weight(m: int, n: int, k: int, color: str) -> Fraction:
    """Exact probability that a round from (m, n) is a run of k `color` balls
    followed by one ball of the other color: C(c,k)/C(m+n,k) * o/(m+n-k)."""
    if m <= 0 or n <= 0:
        raise UrnDomainError(f"transition from ({m},{n}) needs both colors present")
    if color == GREEN:
        c, o = m, n
    elif color == RED:
        c, o = n, m
    else:
        raise UrnDomainError(f"unknown color {color!r}")
    if not 1 <= k <= c:
        raise UrnDomainError(f"run length {k} out of range for {color} at ({m},{n})")
    return Fraction(binomial(c, k), binomial(m + n, k)) * Fraction(o, m + n - k)


# ---------------------------------------------------------------------------
# Table builders
# ---------------------------------------------------------------------------

def _returning_sum(vals, m, n, bump):
    """RHS of the returning-game recurrence at interior (m, n).

    bump is the per-round additive term contributed by each transition
    (0 for P, 1 for E, 1 + 2*E(next) for the second moment -- passed as a
    callable on the successor state)."""
    total = Fraction(0)
    for k in range(1, m + 1):
        w = transition_weight(m, n, k, GREEN)
        total += w * (bump(m - k, n) + vals[(m - k, n)])
    for k in range(1, n + 1):
        w = transition_weight(m, n, k, RED)
        total += w * (bump(m, n - k) + vals[(m, n - k)])
    return total


def _build_win_prob(max_m, max_n):
    vals = {(0, 0): Fraction(0)}  # placeholder; (0,0) has no defined winner
    for m in range(1, max_m + 1):
        vals[(m, 0)] = Fraction(1)
    for n in range(1, max_n + 1):
        vals[(0, n)] = Fraction(0)
    zero = lambda *_: Fraction(0)
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = _returning_sum(vals, m, n, zero)
    return vals


def _build_expected(max_m, max_n):
    vals = {}
    for m in range(max_m + 1):
        vals[(m, 0)] = Fraction(0)
    for n in range(max_n + 1):
        vals[(0, n)] = Fraction(0)
    zero = lambda *_: Fraction(0)
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = 1 + _returning_sum(vals, m, n, zero)
    return vals


def _build_second_moment(max_m, max_n):
    e = _build_expected(max_m, max_n)
    vals = {}
    for m in range(max_m + 1):
        vals[(m, 0)] = Fraction(0)
    for n in range(max_n + 1):
        vals[(0, n)] = Fraction(0)
    # rounds = 1 + rounds(next), so M2 = sum_t p_t (1 + 2 E(next) + M2(next))
    bump = lambda mm, nn: 1 + 2 * e[(mm, nn)]
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = _returning_sum(vals, m, n, bump)
    return vals


def _simple_sum(succ_value, m, n):
    """RHS sum of the non-returning recurrences; successors are
    (m-k, n-1) after a green run and (m-1, n-k) after a red run."""
    total = Fraction(0)
    for k in range(1, m + 1):
        w = transition_weight(m, n, k, GREEN)
        total += w * succ_value(m - k, n - 1, GREEN)
    for k in range(1, n + 1):
        w = transition_weight(m, n, k, RED)
        total += w * succ_value(m - 1, n - k, RED)
    return total


def _build_simple_expected(max_m, max_n):
    vals = {}
    for m in range(max_m + 1):
        vals[(m, 0)] = Fraction(0)
    for n in range(max_n + 1):
        vals[(0, n)] = Fraction(0)
    succ = lambda mm, nn, _run: 1 + vals[(mm, nn)]
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = _simple_sum(succ, m, n)
    return vals


def _build_simple_prob(max_m, max_n):
    vals = {(0, 0): Fraction(0)}  # placeholder, see succ below
    for m in range(1, max_m + 1):
        vals[(m, 0)] = Fraction(1)
    for n in range(1, max_n + 1):
        vals[(0, n)] = Fraction(0)

    def succ(mm, nn, run):
        # The urn may empty out exactly at round end; the winner is then the
        # color of the round-ending ball, i.e. the opposite of the run color.
        if mm == 0 and nn == 0:
            return Fraction(1) if run == RED else Fraction(0)
        return vals[(mm, nn)]

    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = _simple_sum(succ, m, n)
    return vals


def _build_simple_second_moment(max_m, max_n):
    f = _build_simple_expected(max_m, max_n)
    vals = {}
    for m in range(max_m + 1):
        vals[(m, 0)] = Fraction(0)
    for n in range(max_n + 1):
        vals[(0, n)] = Fraction(0)
    succ = lambda mm, nn, _run: 1 + 2 * f[(mm, nn)] + vals[(mm, nn)]
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            vals[(m, n)] = _simple_sum(succ, m, n)
    return vals


_BUILDERS = {
    "win_prob": _build_win_prob,
    "expected_rounds": _build_expected,
    "second_moment": _build_second_moment,
    "simple_expected": _build_simple_expected,
    "simple_prob": _build_simple_prob,
    "simple_second_moment": _build_simple_second_moment,
}


@lru_cache(maxsize=64)
def _cached_table(quantity: str, max_m: int, max_n: int) -> ValueTable:
    return ValueTable(quantity, max_m, max_n, _BUILDERS[quantity](max_m, max_n))


def build_table(quantity: str, max_m: int, max_n: int,
                cell_cap: int = CELL_CAP) -> ValueTable:
    """Complete bottom-up DP table for `quantity` over the full rectangle."""
    if quantity not in _BUILDERS:
        raise UrnDomainError(f"unknown quantity {quantity!r}")
    if max_m < 0 or max_n < 0:
        raise UrnDomainError("table bounds must be nonnegative")
    if (max_m + 1) * (max_n + 1) > cell_cap:
        raise TableSizeError(
            f"table of {(max_m + 1) * (max_n + 1)} cells exceeds cap {cell_cap}")
    return _cached_table(quantity, max_m, max_n)


# ---------------------------------------------------------------------------
# Scalar front ends
# ---------------------------------------------------------------------------

def win_probability(m: int, n: int) -> Fraction:
    """P(m, n) for the returning game; equals 1/2 whenever m, n > 0."""
    if m == 0 and n == 0:
        raise UrnDomainError("win probability undefined at (0, 0)")
    return build_table("win_prob", m, n).get(m, n)


def expected_rounds(m: int, n: int) -> Fraction:
    """E(m, n): expected number of rounds of the returning game."""
    return build_table("expected_rounds", m, n).get(m, n)


def simple_expected_rounds(m: int, n: int) -> Fraction:
    """F(m, n): expected number of rounds of the non-returning game."""
    return build_table("simple_expected", m, n).get(m, n)


def simple_win_probability(m: int, n: int) -> Fraction:
    """G(m, n) for the non-returning game; equals m/(m+n)."""
    if m == 0 and n == 0:
        raise UrnDomainError("win probability undefined at (0, 0)")
    return build_table("simple_prob", m, n).get(m, n)


def rounds_second_moment(m: int, n: int, variant: str = "returning") -> Fraction:
    quantity = {"returning": "second_moment",
                "simple": "simple_second_moment"}.get(variant)
    if quantity is None:
        raise UrnDomainError(f"unknown variant {variant!r}")
    return build_table(quantity, m, n).get(m, n)


def rounds_variance(m: int, n: int, variant: str = "returning") -> Fraction:
    m2 = rounds_second_moment(m, n, variant)
    e = expected_rounds(m, n) if variant == "returning" else simple_expected_rounds(m, n)
    return m2 - e * e


def verify_trivial_identity(m: int, n: int) -> bool:
    """Exactly check the binomial identity obtained by substituting P = 1/2
    into the win-probability recurrence:

      1/2 = (1/2) sum_{k=1}^{m-1} C(m,k)/C(m+n,k) * n/(m+n-k)
          + (1/2) sum_{k=1}^{n-1} C(n,k)/C(m+n,k) * m/(m+n-k)
          + 1/C(m+n,n)
    """
    if m <= 0 or n <= 0:
        raise UrnDomainError("identity requires m > 0 and n > 0")
    total = Fraction(1, binomial(m + n, n))
    for k in range(1, m):
        total += Fraction(1, 2) * Fraction(binomial(m, k), binomial(m + n, k)) \
            * Fraction(n, m + n - k)
    for k in range(1, n):
        total += Fraction(1, 2) * Fraction(binomial(n, k), binomial(m + n, k)) \
            * Fraction(m, m + n - k)
    return total == Fraction(1, 2)
