"""Exact counting for random meander graphs.

Everything here is big-integer or :class:`fractions.Fraction` arithmetic;
floats appear only in :func:`characteristic_roots` and :func:`volume_bounds`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

# Volume of the regular ideal hyperbolic tetrahedron.
V3 = 1.0149416064096536


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    if n < 0:
        raise ValueError(f"catalan needs n >= 0, got {n}")
    return math.comb(2 * n, n) // (n + 1)


def narayana(n: int, k: int) -> int:
    """Number of p-strings of length ``n`` with exactly ``k`` nestings."""
    if n < 1:
        raise ValueError(f"narayana needs n >= 1, got {n}")
    if not 1 <= k <= n:
        return 0
    return math.comb(n, k) * math.comb(n, k - 1) // n


def count_pierced_placements(v: int, k: int) -> int:
    """Ways to put ``k`` vertex-disjoint pierced circles on a path of ``v`` vertices."""
    if v < 1:
        raise ValueError(f"path needs at least one vertex, got {v}")
    return binomial(v - k, k)


def _check_sk(s: int, k: int) -> None:
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if not 0 <= k <= s:
        raise ValueError(f"k must satisfy 0 <= k <= s={s}, got {k}")


def count_O(s: int, k: int) -> int:
    """Placements of ``k`` marked pierced circles times completions of both strings."""
    _check_sk(s, k)
    return binomial(2 * s - k - 1, k) * catalan(s - k) ** 2


def count_E(s: int, k: int) -> int:
    """Number of meander graphs on ``2s-1`` vertices with exactly ``k`` pierced circles."""
    _check_sk(s, k)
    total = 0
    for m in range(k, s + 1):
        term = binomial(m, k) * count_O(s, m)
        total += -term if (m + k) % 2 else term
    if total < 0:
        raise ArithmeticError(f"inclusion-exclusion went negative at s={s}, k={k}")
    return total


@dataclass(frozen=True)
class CountTable:
    s: int
    entries: dict[int, tuple[int, int]]  # k -> (O(s,k), E(s,k))

    def check(self) -> None:
        """Raise AssertionError if any table invariant is violated."""
        es = {k: e for k, (_, e) in self.entries.items()}
        assert sum(es.values()) == catalan(self.s) ** 2
        for k, (o, e) in self.entries.items():
            assert e >= 0
            assert o == sum(binomial(m, k) * es[m] for m in range(k, self.s + 1))


def count_table(s: int) -> CountTable:
    return CountTable(s, {k: (count_O(s, k), count_E(s, k)) for k in range(s + 1)})


def expected_pierced_circles(s: int) -> Fraction:
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return Fraction(count_O(s, 1), catalan(s) ** 2)


def pierced_circles_closed_form(s: int) -> Fraction:
    """Rational closed form of the expected pierced-circle count; valid for s >= 2."""
    return Fraction(s**3 + s**2 - s - 1, 8 * s**2 - 8 * s + 2)


def expected_nestings(n: int) -> Fraction:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return Fraction(n + 1, 2)


def expected_bigons(s: int) -> Fraction:
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return 2 * expected_nestings(s)


def expected_twists(s: int, r: int) -> Fraction:
    if s < 1 or r < 1:
        raise ValueError(f"need s, r >= 1, got s={s}, r={r}")
    return Fraction((2 * s - 1) * r * r) - expected_bigons(s)


@dataclass(frozen=True)
class RecurrencePolynomials:
    """Integer polynomials in s, coefficients listed from the constant term up."""

    P0: tuple[int, ...] = (5, -8, 1, 2)
    P1: tuple[int, ...] = (-30, -82, -93, -26)
    P2: tuple[int, ...] = (-81, -226, -141, -26)
    P3: tuple[int, ...] = (16, 40, 17, 2)

    @staticmethod
    def _eval(coeffs: tuple[int, ...], s: int) -> int:
        return sum(c * s**i for i, c in enumerate(coeffs))

    def evaluate(self, s: int) -> tuple[int, int, int, int]:
        return tuple(self._eval(p, s) for p in (self.P0, self.P1, self.P2, self.P3))


RECURRENCE = RecurrencePolynomials()


def zeilberger_residual(s: int) -> int:
    """Left side of the order-3 recurrence for E(s, 0); zero when it holds."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    coeffs = RECURRENCE.evaluate(s)
    return sum(c * count_E(s + k, 0) for k, c in enumerate(coeffs))


@dataclass(frozen=True)
class RatioPoint:
    s: int
    a_s: Fraction
    e_ratio: Fraction | None


def ratio_sequence(max_s: int) -> list[RatioPoint]:
    """a_s = E(s,0)/C_s^2 and E(s+1,0)/E(s,0) for s = 1..max_s."""
    if max_s < 2:
        raise ValueError(f"max_s must be >= 2, got {max_s}")
    e0 = [count_E(s, 0) for s in range(1, max_s + 2)]
    points = []
    for s in range(1, max_s + 1):
        cur, nxt = e0[s - 1], e0[s]
        ratio = Fraction(nxt, cur) if cur else None
        points.append(RatioPoint(s, Fraction(cur, catalan(s) ** 2), ratio))
    return points


def characteristic_roots() -> tuple[float, float, float]:
    """Roots of t^3 - 13t^2 - 13t + 1, ascending. The cubic is (t+1)(t^2 - 14t + 1)."""
    r3 = 4.0 * math.sqrt(3.0)
    return (-1.0, 7.0 - r3, 7.0 + r3)


@dataclass(frozen=True)
class VolumeBounds:
    lower: float | None
    upper: float
    vacuous: bool


def volume_bounds(s: int, r: int, alternating: bool) -> VolumeBounds:
    """Bounds on expected complement volume; negative values are kept and flagged.

    The upper bound is 10 v3 ((2s-1) r^2 - s - 3) for r >= 2 and
    10 v3 (s - 3) for a single copy, i.e. 10 v3 (E[t] - 1) with E[t] = s - 2.
    """
    if s < 1 or r < 1:
        raise ValueError(f"need s, r >= 1, got s={s}, r={r}")
    c = (2 * s - 1) * r * r
    upper = 10 * V3 * (s - 3 if r == 1 else c - s - 3)
    lower = V3 * (c - s - 5) / 2 if alternating and r != 1 else None
    vacuous = upper <= 0 or (lower is not None and lower <= 0)
    return VolumeBounds(lower, upper, vacuous)
