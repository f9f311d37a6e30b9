"""Linear recurrences with polynomial coefficients: representation, forward
evaluation, exact verification against DP data, and data-driven guessing by
exact linear algebra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import M, N, Matrix, Poly, format_rational, nullspace
from .urnproc import ValueTable


class SingularStepError(ArithmeticError):
    """Forward evaluation hit an index where the leading coefficient vanishes."""

    def __init__(self, index):
        super().__init__(f"leading coefficient vanishes at index {index}")
        self.index = index


class InsufficientDataError(ValueError):
    """The requested verification range exceeds the available data."""


@dataclass(frozen=True)
class Recurrence:
    """sum_i coefficients[i](shift_var, params) * a(shift_var + i) = 0.

    coefficients has order+1 entries c_0 .. c_r; c_r must be nonzero.
    """

    shift: str
    params: tuple[str, ...]
    coefficients: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ValueError("a recurrence needs order >= 1")
        if self.coefficients[-1].is_zero():
            raise ValueError("leading coefficient must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def canonical(self) -> "Recurrence":
        """Clear denominators, divide out joint integer content, and fix the
        sign so the lex-leading coefficient of c_r is positive."""
        den_lcm = 1
        for c in self.coefficients:
            for coef in c.terms.values():
                den_lcm = den_lcm * coef.denominator // math.gcd(
                    den_lcm, coef.denominator)
        content = 0
        for c in self.coefficients:
            for coef in c.terms.values():
                content = math.gcd(content, int(coef * den_lcm))
        scale = Fraction(den_lcm, content if content else 1)
        lead = self.coefficients[-1].leading_term()[1]
        if lead < 0:
            scale = -scale
        coeffs = tuple(scale * c for c in self.coefficients)
        return Recurrence(self.shift, self.params, coeffs)

    def coefficient_values(self, index: int, params: dict) -> list[Fraction]:
        assignment = dict(params)
        assignment[self.shift] = Fraction(index)
        return [c.eval(assignment) for c in self.coefficients]

    def to_obj(self) -> dict:
        return {
            "shift": self.shift,
            "params": list(self.params),
            "order": self.order,
            "coefficients": [c.to_obj() for c in self.coefficients],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_obj(cls, obj: dict) -> "Recurrence":
        return cls(obj["shift"], tuple(obj["params"]),
                   tuple(Poly.from_obj(c) for c in obj["coefficients"]))

    @classmethod
    def from_json(cls, s: str) -> "Recurrence":
        return cls.from_obj(json.loads(s))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            arg = self.shift if i == 0 else f"{self.shift}+{i}"
            terms.append(f"({c!r}) * a({arg})")
        return " + ".join(terms) + " = 0"


def theorem1() -> Recurrence:
    """Order-4 recurrence in m (with parameter n) satisfied by the expected
    round count E(m, n) of the returning game."""
    c0 = 2 * (M + 2) * (M + 1) * (2*M*N + 2*M + 7*N + 9) * (M + 3)
    c1 = -(M + 3) * (M + 2) * (14*M**2*N + 6*M*N**2 + 14*M**2 + 83*M*N
                              + 21*N**2 + 91*M + 123*N + 128)
    c2 = (M + 3) * (18*M**3*N + 16*M**2*N**2 + 2*M*N**3 + 18*M**3
                    + 167*M**2*N + 94*M*N**2 + 7*N**3 + 169*M**2
                    + 521*M*N + 132*N**2 + 511*M + 537*N + 508)
    c3 = (-10*M**4*N - 14*M**3*N**2 - 4*M**2*N**3 - 10*M**4 - 135*M**3*N
          - 129*M**2*N**2 - 24*M*N**3 - 131*M**3 - 684*M**2*N - 393*M*N**2
          - 34*N**3 - 639*M**2 - 1535*M*N - 396*N**2 - 1380*M - 1286*N - 1116)
    c4 = (M + 3) * (2*M*N + 2*M + 5*N + 7) * (N + M + 4) * (N + M + 3)
    return Recurrence("m", ("n",), (c0, c1, c2, c3, c4)).canonical()


def theorem2() -> Recurrence:
    """Order-3 recurrence in n satisfied by the diagonal E(n, n)."""
    c0 = -2 * (18*N**4 + 159*N**3 + 528*N**2 + 779*N + 428) * (N + 1)**2 * (N + 2)
    c1 = (N + 2) * (216*N**6 + 2358*N**5 + 10485*N**4 + 24174*N**3
                    + 30251*N**2 + 19276*N + 4800)
    c2 = (-324*N**7 - 4032*N**6 - 21015*N**5 - 59334*N**4 - 97813*N**3
          - 93898*N**2 - 48288*N - 10080)
    c3 = 2 * (N + 2) * (18*N**4 + 87*N**3 + 159*N**2 + 128*N + 36) * (2*N + 5)**2
    return Recurrence("n", (), (c0, c1, c2, c3)).canonical()


@dataclass
class EvalStats:
    steps: int
    max_window: int


def eval_forward(rec: Recurrence, params: dict, initial: Sequence[Fraction],
                 start_index: int, target_index: int, instrument: bool = False):
    """Iterate the recurrence forward, solving for the highest-shift term.

    `initial` holds the r = rec.order values at indices start_index ..
    start_index + r - 1.  Memory is a sliding window of r values; with
    instrument=True, returns (value, EvalStats) where max_window certifies
    the constant-memory contract.
    """
    r = rec.order
    if len(initial) != r:
        raise ValueError(f"need exactly {r} initial values, got {len(initial)}")
    if target_index < start_index:
        raise ValueError("target precedes initial segment")
    window = [Fraction(x) for x in initial]
    params = {k: Fraction(v) for k, v in params.items()}
    steps = 0
    max_window = len(window)
    if target_index < start_index + r:
        value = window[target_index - start_index]
    else:
        for idx in range(start_index, target_index - r + 1):
            cs = rec.coefficient_values(idx, params)
            lead = cs[r]
            if lead == 0:
                raise SingularStepError(idx)
            nxt = -sum(cs[i] * window[i] for i in range(r)) / lead
            window.pop(0)
            window.append(nxt)
            steps += 1
            max_window = max(max_window, len(window))
        value = window[-1]
    if instrument:
        return value, EvalStats(steps=steps, max_window=max_window)
    return value


def eval_forward_range(rec: Recurrence, params: dict, initial: Sequence[Fraction],
                       start_index: int, target_index: int) -> list[Fraction]:
    """All values at indices start_index .. target_index, in one forward pass."""
    r = rec.order
    out = [Fraction(x) for x in initial]
    window = list(out)
    params = {k: Fraction(v) for k, v in params.items()}
    for idx in range(start_index, target_index - r + 1):
        cs = rec.coefficient_values(idx, params)
        if cs[r] == 0:
            raise SingularStepError(idx)
        nxt = -sum(cs[i] * window[i] for i in range(r)) / cs[r]
        window.pop(0)
        window.append(nxt)
        out.append(nxt)
    return out[:target_index - start_index + 1]


@dataclass
class VerificationReport:
    ok: bool
    checked: int
    witness: object = None     # first failing point (index or (m, n))
    residual: Fraction | None = None

    def to_obj(self) -> dict:
        obj = {"ok": self.ok, "checked": self.checked}
        if not self.ok:
            obj["witness"] = list(self.witness) if isinstance(
                self.witness, tuple) else self.witness
            obj["residual"] = format_rational(self.residual)
        return obj


def _table_value(table: ValueTable, m: int, n: int) -> Fraction:
    if not (0 <= m <= table.max_m and 0 <= n <= table.max_n):
        raise InsufficientDataError(
            f"point ({m},{n}) outside table bounds "
            f"({table.max_m},{table.max_n})")
    return table.get(m, n)


def verify_recurrence(rec: Recurrence, data, points: Iterable,
                      start_index: int = 1) -> VerificationReport:
    """Exactly evaluate the recurrence residual at every base point.

    data: a ValueTable (points are (m, n) pairs; the shift applies to
    rec.shift, the other coordinate is the parameter) or a sequence of
    Rationals indexed consecutively from start_index (points are integers).
    """
    checked = 0
    failures = []
    if isinstance(data, ValueTable):
        for (m, n) in points:
            if rec.shift == "m":
                idx, pvals = m, {"n": Fraction(n)}
                vals = [_table_value(data, m + i, n) for i in range(rec.order + 1)]
            else:
                idx, pvals = n, {"m": Fraction(m)}
                vals = [_table_value(data, m, n + i) for i in range(rec.order + 1)]
            cs = rec.coefficient_values(idx, pvals)
            residual = sum((c * v for c, v in zip(cs, vals)), Fraction(0))
            checked += 1
            if residual != 0:
                failures.append(((m, n), residual))
    else:
        seq = list(data)
        for idx in points:
            lo = idx - start_index
            hi = lo + rec.order
            if lo < 0 or hi >= len(seq):
                raise InsufficientDataError(
                    f"index {idx} needs data up to offset {hi}, have {len(seq)}")
            cs = rec.coefficient_values(idx, {})
            residual = sum((c * Fraction(v) for c, v in zip(cs, seq[lo:hi + 1])),
                           Fraction(0))
            checked += 1
            if residual != 0:
                failures.append((idx, residual))
    if failures:
        failures.sort(key=lambda w: w[0])
        return VerificationReport(False, checked, failures[0][0], failures[0][1])
    return VerificationReport(True, checked)


def diagonal(table: ValueTable) -> list[Fraction]:
    """Values at (1,1), (2,2), ..., up to the largest square index."""
    return [table.get(i, i) for i in range(1, table.diagonal_length() + 1)]


# ---------------------------------------------------------------------------
# Guessing
# ---------------------------------------------------------------------------

@dataclass
class GuessSpec:
    """Search parameters for recurrence guessing.

    deg_shift bounds the coefficient degree in the shift variable, deg_param
    in the parameter (bivariate only).  confirmation_margin data points are
    held out of the fit and must satisfy the candidate exactly.
    """

    order_max: int
    deg_shift: int
    deg_param: int = 0
    confirmation_margin: int = 20


def _vector_to_polys(vec, order, shift_monomials) -> list[Poly]:
    polys = []
    per = len(shift_monomials)
    for i in range(order + 1):
        terms = {}
        for j, exp in enumerate(shift_monomials):
            coef = vec[i * per + j]
            if coef:
                terms[exp] = terms.get(exp, Fraction(0)) + coef
        polys.append(Poly(terms))
    return polys


def _select_candidates(basis, order, shift_monomials, shift, params,
                       confirm) -> list[Recurrence]:
    """Turn nullspace vectors into recurrences, drop degenerate ones, keep
    only those that survive the held-out confirmation check."""
    survivors = []
    for vec in basis:
        polys = _vector_to_polys(vec, order, shift_monomials)
        if polys[-1].is_zero() or polys[0].is_zero():
            # effectively lower order; the outer minimal-order loop covers it
            continue
        cand = Recurrence(shift, params, tuple(polys)).canonical()
        if confirm(cand):
            survivors.append(cand)
    survivors.sort(key=lambda r: (r.order,
                                  max(c.total_degree() for c in r.coefficients),
                                  json.dumps(r.to_obj())))
    return survivors


def guess_univariate(seq: Sequence[Fraction], spec: GuessSpec,
                     start_index: int = 1, shift: str = "n",
                     status: dict | None = None) -> Recurrence | None:
    """Fit sum_{i,j} c_{i,j} k^j a(k+i) = 0 to the sequence by exact
    nullspace computation; confirm survivors on held-out points.

    Returns the minimal-(order, degree) canonical recurrence, or None.
    """
    if status is None:
        status = {}
    seq = [Fraction(x) for x in seq]
    shift_i = 0 if shift == "m" else 1
    status["status"] = "no recurrence found"
    for order in range(1, spec.order_max + 1):
        base = list(range(start_index, start_index + len(seq) - order))
        for deg in range(spec.deg_shift + 1):
            unknowns = (order + 1) * (deg + 1)
            margin = min(spec.confirmation_margin, len(base) - unknowns)
            if margin < 1:
                status["status"] = (
                    f"insufficient data: {len(base)} equations for "
                    f"{unknowns} unknowns at order {order}, degree {deg}")
                continue
            fit, held = base[:len(base) - margin], base[len(base) - margin:]
            rows = []
            for k in base[:len(fit)]:
                row = []
                for i in range(order + 1):
                    v = seq[k + i - start_index]
                    for j in range(deg + 1):
                        row.append(Fraction(k) ** j * v)
                rows.append(row)
            basis = nullspace(Matrix.from_rows(rows))
            if not basis:
                continue
            monomials = [tuple(j if t == shift_i else 0 for t in range(2))
                         for j in range(deg + 1)]
            confirm = lambda cand: verify_recurrence(
                cand, seq, held, start_index=start_index).ok
            survivors = _select_candidates(basis, order, monomials, shift, (),
                                           confirm)
            if survivors:
                status["status"] = "found"
                return survivors[0]
    return None


def guess_bivariate(table: ValueTable, spec: GuessSpec, shift: str = "m",
                    min_shift_index: int = 1, fit_excess: int = 20,
                    status: dict | None = None) -> Recurrence | None:
    """Fit a recurrence in `shift` with the other table coordinate as a
    symbolic parameter.  Coefficients are polynomials with monomials
    shift^j * param^k, j <= deg_shift, k <= deg_param.
    """
    if status is None:
        status = {}
    param = "n" if shift == "m" else "m"
    dm, dn = spec.deg_shift, spec.deg_param
    status["status"] = "no recurrence found"
    for order in range(1, spec.order_max + 1):
        # base points sorted small-first to keep the exact arithmetic cheap
        points = []
        if shift == "m":
            for m in range(min_shift_index, table.max_m - order + 1):
                for n in range(1, table.max_n + 1):
                    points.append((m, n))
        else:
            for m in range(1, table.max_m + 1):
                for n in range(min_shift_index, table.max_n - order + 1):
                    points.append((m, n))
        points.sort(key=lambda p: (p[0] + p[1], p))
        unknowns = (order + 1) * (dm + 1) * (dn + 1)
        need = unknowns + spec.confirmation_margin
        if len(points) < need:
            status["status"] = (
                f"insufficient data: {len(points)} equations, need {need} "
                f"at order {order}")
            continue
        n_fit = min(len(points) - spec.confirmation_margin, unknowns + fit_excess)
        fit = points[:n_fit]
        held = points[n_fit:n_fit + spec.confirmation_margin]
        rows = []
        for (m, n) in fit:
            s, p = (m, n) if shift == "m" else (n, m)
            row = []
            for i in range(order + 1):
                v = table.get(m + i, n) if shift == "m" else table.get(m, n + i)
                for j in range(dm + 1):
                    for k in range(dn + 1):
                        row.append(Fraction(s) ** j * Fraction(p) ** k * v)
            rows.append(row)
        basis = nullspace(Matrix.from_rows(rows))
        if not basis:
            continue
        if shift == "m":
            monomials = [(j, k) for j in range(dm + 1) for k in range(dn + 1)]
        else:
            monomials = [(k, j) for j in range(dm + 1) for k in range(dn + 1)]
        confirm = lambda cand: verify_recurrence(cand, table, held).ok
        survivors = _select_candidates(basis, order, monomials, shift,
                                       (param,), confirm)
        if survivors:
            status["status"] = "found"
            return survivors[0]
    return None
