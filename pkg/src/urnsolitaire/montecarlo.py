"""Seeded Monte Carlo simulation of both urn games.

Randomness is a counter-based splitmix64 stream per trial, derived from
(master seed, trial index), so results are bit-identical regardless of
execution order, worker count, or backend.

Two backends run the trial loop:

  * "numba"  - an @njit kernel (default when numba imports cleanly)
  * "python" - a pure-Python kernel with identical integer arithmetic

Select explicitly with URNSOLITAIRE_BACKEND=numba|python.  Both backends
consume the random stream in exactly the same order and produce identical
integer aggregates; benchmarks/bench_sim_backends.py compares their speed.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .urnproc import GREEN, RED, UrnDomainError, UrnState, transition_weight

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit stream; one instance per trial."""

    __slots__ = ("_state",)

    def __init__(self, state: int):
        self._state = state & _MASK

    @classmethod
    def for_trial(cls, seed: int, trial: int) -> "SplitMix64":
        return cls((seed + (trial + 1) * _GOLDEN) & _MASK)

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix64(self._state)

    def randbelow(self, bound: int) -> int:
        return self.next_u64() % bound


@dataclass(frozen=True)
class SimConfig:
    start: UrnState
    variant: str = "returning"       # returning | simple
    trials: int = 10_000
    seed: int = 0
    draw_mode: str = "balls"         # balls (faithful) | rounds (distributional)

    def __post_init__(self):
        if self.trials < 1:
            raise UrnDomainError("trials must be >= 1")
        if self.start.green <= 0 or self.start.red <= 0:
            raise UrnDomainError("simulation start needs both colors present")
        if self.variant not in ("returning", "simple"):
            raise UrnDomainError(f"unknown variant {self.variant!r}")
        if self.draw_mode not in ("balls", "rounds"):
            raise UrnDomainError(f"unknown draw mode {self.draw_mode!r}")


@dataclass
class SimStats:
    trials: int
    green_wins: int
    rounds_histogram: dict[int, int]
    mean_rounds: float
    variance_rounds: float
    std_error_mean: float
    seed: int

    def to_obj(self) -> dict:
        return {
            "trials": self.trials,
            "green_wins": self.green_wins,
            "rounds_histogram": [[r, c] for r, c in
                                 sorted(self.rounds_histogram.items())],
            "mean_rounds": float(f"{self.mean_rounds:.12g}"),
            "variance_rounds": float(f"{self.variance_rounds:.12g}"),
            "std_error_mean": float(f"{self.std_error_mean:.12g}"),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj())


# ---------------------------------------------------------------------------
# Single rounds and games (reference implementation, also the test surface)
# ---------------------------------------------------------------------------

def play_round(state: UrnState, variant: str, rng: SplitMix64):
    """One round: a run of k >= 1 same-color balls, then one opposite ball.

    Returns (next_state, draws, run_color) with draws = k + 1.
    """
    m, n = state.green, state.red
    if m <= 0 or n <= 0:
        raise UrnDomainError("a round needs both colors present")
    g, r = m, n
    x = rng.randbelow(g + r)
    run_green = x < g
    if run_green:
        g -= 1
    else:
        r -= 1
    k = 1
    while True:
        x = rng.randbelow(g + r)
        drew_green = x < g
        if drew_green:
            g -= 1
        else:
            r -= 1
        if drew_green != run_green:
            break
        k += 1
    if run_green:
        m -= k
    else:
        n -= k
    if variant == "simple":
        if run_green:
            n -= 1
        else:
            m -= 1
    return UrnState(m, n), k + 1, GREEN if run_green else RED


def play_game(start: UrnState, variant: str, rng: SplitMix64):
    """Play until one color (or, in the simple game, nothing) remains.

    Returns (rounds, winner).  In the returning game the winner is the
    surviving color; in the simple game it is the color of the last ball
    drawn (the ball that ended the final round, if the urn emptied).
    """
    state = start
    rounds = 0
    last_run = GREEN
    while state.green > 0 and state.red > 0:
        state, _, last_run = play_round(state, variant, rng)
        rounds += 1
    if state.green > 0:
        winner = GREEN
    elif state.red > 0:
        winner = RED
    else:
        winner = RED if last_run == GREEN else GREEN
    return rounds, winner


# ---------------------------------------------------------------------------
# Trial-loop kernels
# ---------------------------------------------------------------------------

def _simulate_python(m0, n0, simple, trials, seed, hist):
    green_wins = 0
    sum_rounds = 0
    sum_rounds_sq = 0
    for t in range(trials):
        s = (seed + (t + 1) * _GOLDEN) & _MASK
        m, n = m0, n0
        rounds = 0
        last_run_green = True
        while m > 0 and n > 0:
            rounds += 1
            g, r = m, n
            s = (s + _GOLDEN) & _MASK
            z = ((s ^ (s >> 30)) * _MIX1) & _MASK
            z = ((z ^ (z >> 27)) * _MIX2) & _MASK
            x = (z ^ (z >> 31)) % (g + r)
            run_green = x < g
            if run_green:
                g -= 1
            else:
                r -= 1
            k = 1
            while True:
                s = (s + _GOLDEN) & _MASK
                z = ((s ^ (s >> 30)) * _MIX1) & _MASK
                z = ((z ^ (z >> 27)) * _MIX2) & _MASK
                x = (z ^ (z >> 31)) % (g + r)
                drew_green = x < g
                if drew_green:
                    g -= 1
                else:
                    r -= 1
                if drew_green != run_green:
                    break
                k += 1
            if run_green:
                m -= k
            else:
                n -= k
            if simple:
                if run_green:
                    n -= 1
                else:
                    m -= 1
            last_run_green = run_green
        if m > 0 or (n == 0 and not last_run_green):
            green_wins += 1
        hist[rounds - 1] += 1
        sum_rounds += rounds
        sum_rounds_sq += rounds * rounds
    return green_wins, sum_rounds, sum_rounds_sq


_NUMBA_KERNEL = None


def _get_numba_kernel():
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is None:
        from numba import njit

        golden = np.uint64(_GOLDEN)
        mix1 = np.uint64(_MIX1)
        mix2 = np.uint64(_MIX2)

        @njit(cache=True)
        def kernel(m0, n0, simple, trials, seed, hist):  # pragma: no cover
            green_wins = 0
            sum_rounds = 0
            sum_rounds_sq = 0
            for t in range(trials):
                s = np.uint64(seed) + np.uint64(t + 1) * golden
                m, n = m0, n0
                rounds = 0
                last_run_green = True
                while m > 0 and n > 0:
                    rounds += 1
                    g, r = m, n
                    s = s + golden
                    z = (s ^ (s >> np.uint64(30))) * mix1
                    z = (z ^ (z >> np.uint64(27))) * mix2
                    x = int((z ^ (z >> np.uint64(31))) % np.uint64(g + r))
                    run_green = x < g
                    if run_green:
                        g -= 1
                    else:
                        r -= 1
                    k = 1
                    while True:
                        s = s + golden
                        z = (s ^ (s >> np.uint64(30))) * mix1
                        z = (z ^ (z >> np.uint64(27))) * mix2
                        x = int((z ^ (z >> np.uint64(31))) % np.uint64(g + r))
                        drew_green = x < g
                        if drew_green:
                            g -= 1
                        else:
                            r -= 1
                        if drew_green != run_green:
                            break
                        k += 1
                    if run_green:
                        m -= k
                    else:
                        n -= k
                    if simple:
                        if run_green:
                            n -= 1
                        else:
                            m -= 1
                    last_run_green = run_green
                if m > 0 or (n == 0 and not last_run_green):
                    green_wins += 1
                hist[rounds - 1] += 1
                sum_rounds += rounds
                sum_rounds_sq += rounds * rounds
            return green_wins, sum_rounds, sum_rounds_sq

        _NUMBA_KERNEL = kernel
    return _NUMBA_KERNEL


def select_backend() -> str:
    """Resolve the trial-loop backend from URNSOLITAIRE_BACKEND."""
    choice = os.environ.get("URNSOLITAIRE_BACKEND", "auto")
    if choice not in ("auto", "numba", "python"):
        raise ValueError(f"bad URNSOLITAIRE_BACKEND: {choice!r}")
    if choice == "python":
        return "python"
    try:
        _get_numba_kernel()
        return "numba"
    except ImportError:
        if choice == "numba":
            raise
        return "python"


def _round_distributions(m0, n0):
    """Cumulative float transition distributions per reachable state
    (returning game states; the simple game reuses per-state entries)."""
    cache = {}

    def dist(m, n):
        key = (m, n)
        if key not in cache:
            outcomes = []
            acc = 0.0
            for k in range(1, m + 1):
                acc += float(transition_weight(m, n, k, GREEN))
                outcomes.append((acc, k, True))
            for k in range(1, n + 1):
                acc += float(transition_weight(m, n, k, RED))
                outcomes.append((acc, k, False))
            outcomes[-1] = (1.0, outcomes[-1][1], outcomes[-1][2])
            cache[key] = outcomes
        return cache[key]

    return dist


def _simulate_rounds_mode(m0, n0, simple, trials, seed, hist):
    """Distributional draw mode: sample the run length of each round directly
    from the exact transition distribution (speed path, float thresholds)."""
    dist = _round_distributions(m0, n0)
    green_wins = 0
    sum_rounds = 0
    sum_rounds_sq = 0
    for t in range(trials):
        rng = SplitMix64.for_trial(seed, t)
        m, n = m0, n0
        rounds = 0
        last_run_green = True
        while m > 0 and n > 0:
            rounds += 1
            u = rng.next_u64() / 2.0 ** 64
            for acc, k, run_green in dist(m, n):
                if u < acc:
                    break
            if run_green:
                m -= k
            else:
                n -= k
            if simple:
                if run_green:
                    n -= 1
                else:
                    m -= 1
            last_run_green = run_green
        if m > 0 or (n == 0 and not last_run_green):
            green_wins += 1
        hist[rounds - 1] += 1
        sum_rounds += rounds
        sum_rounds_sq += rounds * rounds
    return green_wins, sum_rounds, sum_rounds_sq


def simulate(config: SimConfig) -> SimStats:
    """Run config.trials independent games and aggregate the results."""
    m0, n0 = config.start.green, config.start.red
    simple = config.variant == "simple"
    hist = np.zeros(m0 + n0 - 1, dtype=np.int64)
    if config.draw_mode == "rounds":
        agg = _simulate_rounds_mode(m0, n0, simple, config.trials,
                                    config.seed, hist)
    elif select_backend() == "numba":
        kernel = _get_numba_kernel()
        agg = kernel(m0, n0, simple, config.trials,
                     np.uint64(config.seed & _MASK), hist)
    else:
        agg = _simulate_python(m0, n0, simple, config.trials, config.seed, hist)
    green_wins, sum_rounds, sum_rounds_sq = int(agg[0]), int(agg[1]), int(agg[2])
    trials = config.trials
    mean = sum_rounds / trials
    if trials > 1:
        variance = (sum_rounds_sq - sum_rounds * sum_rounds / trials) / (trials - 1)
        variance = max(variance, 0.0)
    else:
        variance = 0.0
    stderr = math.sqrt(variance / trials)
    histogram = {i + 1: int(c) for i, c in enumerate(hist) if c}
    return SimStats(trials=trials, green_wins=green_wins,
                    rounds_histogram=histogram, mean_rounds=mean,
                    variance_rounds=variance, std_error_mean=stderr,
                    seed=config.seed)
