"""Independent brute-force oracle: exhaustive enumeration of complete games.

Round probabilities are computed ball-by-ball via falling factorials, not via
the binomial-ratio formula the DP uses, so the two code paths share nothing.
"""

from fractions import Fraction


def falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def run_probability(c: int, o: int, k: int) -> Fraction:
    """Probability of drawing k run-color balls then one opposite ball,
    drawing uniformly without replacement from c run-color + o opposite."""
    return Fraction(falling(c, k), falling(c + o, k)) * Fraction(o, c + o - k)


def game_paths(m: int, n: int, simple: bool):
    """Yield (probability, rounds, winner) over every complete game from
    (m, n) with m, n > 0.  winner is "green" or "red"."""
    for run_green in (True, False):
        c, o = (m, n) if run_green else (n, m)
        for k in range(1, c + 1):
            p = run_probability(c, o, k)
            if run_green:
                nm, nn = m - k, (n - 1 if simple else n)
            else:
                nm, nn = (m - 1 if simple else m), n - k
            if nm > 0 and nn > 0:
                for q, r, w in game_paths(nm, nn, simple):
                    yield p * q, r + 1, w
            else:
                if nm > 0:
                    w = "green"
                elif nn > 0:
                    w = "red"
                else:
                    # urn emptied: winner is the color of the round-ending
                    # ball, the opposite of the run color (simple game only)
                    w = "red" if run_green else "green"
                yield p, 1, w


def oracle_stats(m: int, n: int, simple: bool):
    """(total probability, E[rounds], E[rounds^2], P[green wins]), exact."""
    total = Fraction(0)
    e = Fraction(0)
    m2 = Fraction(0)
    win = Fraction(0)
    for p, r, w in game_paths(m, n, simple):
        total += p
        e += p * r
        m2 += p * r * r
        if w == "green":
            win += p
    return total, e, m2, win
