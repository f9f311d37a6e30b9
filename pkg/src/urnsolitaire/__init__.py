"""Exact win probabilities, expected round counts, and holonomic recurrences
for Oakley-Perry urn solitaire and its non-returning variant."""

from .exact import (Matrix, MissingVariableError, Poly, Rational, binomial,
                    format_rational, nullspace, parse_rational)
from .holonomic import (EvalStats, GuessSpec, InsufficientDataError,
                        Recurrence, SingularStepError, VerificationReport,
                        diagonal, eval_forward, eval_forward_range,
                        guess_bivariate, guess_univariate, theorem1, theorem2,
                        verify_recurrence)
from .montecarlo import (SimConfig, SimStats, SplitMix64, play_game,
                         play_round, simulate)
from .urnproc import (CELL_CAP, GREEN, QUANTITIES, RED, TableSizeError,
                      UrnDomainError, UrnState, ValueTable, build_table,
                      expected_rounds, rounds_second_moment, rounds_variance,
                      simple_expected_rounds, simple_win_probability,
                      transition_weight, verify_trivial_identity,
                      win_probability)

__version__ = "0.1.0"
