import math
from fractions import Fraction
from itertools import product

import pytest

from meanderlink import combinatorics as cb


def _dyck_words(s):
    """Brute force: filter all 2^(2s) strings for balancedness."""
    out = []
    for bits in product("()", repeat=2 * s):
        depth = 0
        for ch in bits:
            depth += 1 if ch == "(" else -1
            if depth < 0:
                break
        else:
            if depth == 0:
                out.append("".join(bits))
    return out


def _pierced_histogram(s):
    """Independent oracle: a circle at i needs '()' at top chars i,i+1 and bottom chars i+1,i+2."""
    words = _dyck_words(s)
    hist = [0] * (s + 1)
    for top in words:
        for bottom in words:
            k = sum(
                1
                for i in range(2 * s - 2)
                if top[i : i + 2] == "()" and bottom[i + 1 : i + 3] == "()"
            )
            hist[k] += 1
    return hist


# frozen from the brute-force run above
BRUTE_FORCE = {
    1: [1, 0],
    2: [2, 2, 0],
    3: [12, 10, 3, 0],
    4: [82, 82, 28, 4, 0],
    5: [646, 738, 315, 60, 5, 0],
}


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_brute_force_oracle_is_frozen_correctly(s):
    assert _pierced_histogram(s) == BRUTE_FORCE[s]


@pytest.mark.parametrize("s", sorted(BRUTE_FORCE))
def test_count_E_matches_brute_force(s):
    assert [cb.count_E(s, k) for k in range(s + 1)] == BRUTE_FORCE[s]


def test_catalan():
    assert cb.catalan(0) == 1
    assert cb.catalan(5) == 42
    assert cb.catalan(6) == 132
    assert cb.catalan(6) == len(_dyck_words(6))
    with pytest.raises(ValueError):
        cb.catalan(-1)


def test_binomial_conventions():
    assert cb.binomial(4, 1) == 4
    assert cb.binomial(2, 3) == 0
    assert cb.binomial(-1, 0) == 0
    assert cb.binomial(3, -1) == 0
    assert cb.binomial(2 * 3 - 2 - 1, 2) == 3


def test_narayana():
    assert cb.narayana(4, 2) == 6
    assert sum(cb.narayana(4, k) for k in range(1, 5)) == 14
    assert cb.narayana(5, 2) == cb.narayana(5, 4)
    assert cb.narayana(4, 0) == 0 and cb.narayana(4, 5) == 0
    with pytest.raises(ValueError):
        cb.narayana(0, 1)


@pytest.mark.parametrize("n", range(1, 31))
def test_narayana_sums_and_symmetry(n):
    assert sum(cb.narayana(n, k) for k in range(1, n + 1)) == cb.catalan(n)
    assert all(cb.narayana(n, k) == cb.narayana(n, n - k + 1) for k in range(1, n + 1))


def _placements_brute(v, k):
    # k disjoint dominoes {i, i+1} on a path of v vertices
    count = 0
    for starts in product(range(1, v), repeat=k):
        if list(starts) == sorted(starts) and all(b - a >= 2 for a, b in zip(starts, starts[1:])):
            count += 1
    return count


def test_count_pierced_placements():
    assert cb.count_pierced_placements(7, 2) == 10
    assert cb.count_pierced_placements(5, 0) == 1
    assert cb.count_pierced_placements(3, 2) == 0
    for v in range(1, 9):
        for k in range(0, 4):
            assert cb.count_pierced_placements(v, k) == _placements_brute(v, k)


def test_count_O_examples():
    assert cb.count_O(3, 1) == 16
    assert cb.count_O(5, 3) == 80
    for s in range(1, 8):
        assert cb.count_O(s, 0) == cb.catalan(s) ** 2
    with pytest.raises(ValueError):
        cb.count_O(3, 4)


def test_count_E_examples():
    assert cb.count_E(3, 0) == 12
    assert cb.count_E(3, 1) == 10
    assert cb.count_E(3, 2) == 3
    assert sum(cb.count_E(3, k) for k in range(4)) == 25
    assert cb.count_E(1, 0) == 1
    with pytest.raises(ValueError):
        cb.count_E(2, 3)


@pytest.mark.parametrize("s", range(1, 13))
def test_count_table_invariants(s):
    table = cb.count_table(s)
    table.check()
    es = [table.entries[k][1] for k in range(s + 1)]
    assert sum(m * es[m] for m in range(1, s + 1)) == cb.count_O(s, 1)


def test_expected_pierced_circles():
    assert cb.expected_pierced_circles(2) == Fraction(1, 2)
    assert cb.expected_pierced_circles(3) == Fraction(16, 25)
    assert cb.expected_pierced_circles(6) == Fraction(245, 242)
    assert abs(cb.expected_pierced_circles(6) - Fraction(8, 8)) < Fraction(13, 1000)
    assert cb.expected_pierced_circles(20) == Fraction(931, 338)


def test_pierced_circles_closed_form_range():
    for s in range(2, 201):
        assert cb.expected_pierced_circles(s) == cb.pierced_circles_closed_form(s)


def test_pierced_circles_approach_asymptote_from_above():
    for s in (10, 50, 200):
        gap = cb.expected_pierced_circles(s) - Fraction(s + 2, 8)
        assert 0 < gap < Fraction(1, s)


def test_expected_nestings_bigons_twists():
    assert cb.expected_nestings(5) == 3
    assert cb.expected_nestings(1) == 1
    direct = Fraction(sum(k * cb.narayana(4, k) for k in range(1, 5)), cb.catalan(4))
    assert direct == cb.expected_nestings(4) == Fraction(5, 2)
    assert cb.expected_bigons(4) == 5
    assert cb.expected_bigons(1) == 2
    assert cb.expected_bigons(5) == 2 * cb.expected_nestings(5) == 6
    assert cb.expected_twists(5, 1) == 3
    assert cb.expected_twists(3, 2) == 16
    assert cb.expected_twists(1, 1) == -1


def test_recurrence_polynomials_exact():
    P = cb.RECURRENCE
    for s in range(-3, 10):
        p0, p1, p2, p3 = P.evaluate(s)
        assert p0 == 2 * s**3 + s**2 - 8 * s + 5
        assert p1 == -26 * s**3 - 93 * s**2 - 82 * s - 30
        assert p2 == -26 * s**3 - 141 * s**2 - 226 * s - 81
        assert p3 == 2 * s**3 + 17 * s**2 + 40 * s + 16


def test_zeilberger_residual_worked_examples():
    assert cb.RECURRENCE.evaluate(1) == (0, -231, -474, 75)
    assert 0 * 1 - 231 * 2 - 474 * 12 + 75 * 82 == 0
    assert cb.RECURRENCE.evaluate(2) == (9, -774, -1305, 180)
    assert [cb.count_E(s, 0) for s in range(1, 6)] == [1, 2, 12, 82, 646]
    assert cb.zeilberger_residual(1) == 0
    assert cb.zeilberger_residual(2) == 0
    assert cb.zeilberger_residual(50) == 0


def test_zeilberger_residual_detects_a_wrong_sequence():
    coeffs = cb.RECURRENCE.evaluate(3)
    perturbed = [cb.count_E(3 + k, 0) for k in range(4)]
    perturbed[2] += 1
    assert sum(c * e for c, e in zip(coeffs, perturbed)) != 0


def test_ratio_sequence_small():
    pts = cb.ratio_sequence(4)
    assert [p.a_s for p in pts] == [1, Fraction(1, 2), Fraction(12, 25), Fraction(82, 196)]
    assert pts[3].e_ratio == Fraction(646, 82)
    assert all(0 <= p.a_s <= 1 for p in pts)
    with pytest.raises(ValueError):
        cb.ratio_sequence(1)


def test_ratio_sequence_decreasing_and_threshold():
    pts = cb.ratio_sequence(60)
    for prev, cur in zip(pts[1:], pts[2:]):
        assert cur.a_s < prev.a_s
    assert all(p.e_ratio < 16 for p in pts[1:])
    # first s with a_s < 0.05, found by the exact run
    first = next(p.s for p in pts if p.a_s < Fraction(1, 20))
    assert first == 20


def test_characteristic_roots():
    roots = cb.characteristic_roots()
    assert roots[0] == -1
    assert roots[1] == pytest.approx(0.0717967697, abs=1e-10)
    assert roots[2] == pytest.approx(13.92820323, abs=1e-8)
    for t in roots:
        assert abs(t**3 - 13 * t**2 - 13 * t + 1) < 1e-9
    assert roots[2] == pytest.approx(7 + 4 * math.sqrt(3), rel=1e-15)


def test_volume_bounds():
    b = cb.volume_bounds(10, 1, alternating=False)
    assert b.lower is None and not b.vacuous
    assert b.upper == pytest.approx(10 * cb.V3 * 7, abs=1e-9)
    assert b.upper == pytest.approx(71.04591, abs=1e-5)
    b = cb.volume_bounds(3, 2, alternating=True)
    assert b.lower == pytest.approx(6 * cb.V3, abs=1e-9)
    assert b.upper == pytest.approx(140 * cb.V3, abs=1e-9)
    b = cb.volume_bounds(2, 1, alternating=True)
    assert b.upper < 0 and b.vacuous and b.lower is None
    # r >= 2 uses the crossing count directly
    assert cb.volume_bounds(2, 2, alternating=False).upper == pytest.approx(70 * cb.V3)
    assert cb.volume_bounds(3, 1, alternating=True).lower is None
