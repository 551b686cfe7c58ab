from fractions import Fraction
from math import comb

import pytest

from qholo.combinat import (chi, chi_bound, chi_bound_check, chi_table, inversions, is_alternating,
                            pair_count_bruteforce, pair_count_closed_form, pair_count_table)


def test_inversions():
    assert inversions((1, 2, 3)) == 0
    assert inversions((2, 1)) == 1
    assert inversions((4, 3, 2, 1)) == 6
    assert inversions((0, 2, 1)) == 1
    with pytest.raises(ValueError):
        inversions((1, 1, 2))


def test_alternating_examples():
    eta = (1, 1, 0, 1)
    assert is_alternating(eta, (0, 1, 0, 0))
    assert is_alternating(eta, (0, 1, 1, 0))
    assert not is_alternating(eta, (0, 0, 0, 0))
    assert is_alternating((0, 0, 0), (1, 1, 1))
    with pytest.raises(ValueError):
        is_alternating((1, 0), (1,))


def test_pair_count_small():
    assert pair_count_bruteforce(2, 1, 1) == 2
    assert pair_count_bruteforce(4, 3, 2) == 0
    with pytest.raises(ValueError):
        pair_count_bruteforce(15, 1, 1)


@pytest.mark.parametrize("n", range(1, 11))
def test_pair_count_matches_closed_form(n):
    table = pair_count_table(n)
    for k in range(n // 2 + 1):
        for m in range(n + 1):
            assert table.get((k, m), 0) == pair_count_closed_form(n, k, m)


def test_empty_eta_counts_all_nu():
    # with eta = 0 every nu is admissible, so the count is C(n, m) and not twice that
    for n in range(1, 8):
        for m in range(n + 1):
            assert pair_count_bruteforce(n, 0, m) == comb(n, m)


def test_chi_values_frozen():
    assert [chi(4, m) for m in range(1, 5)] == [8, 16, 8, Fraction(1, 2)]
    assert [chi_bound(4, m) for m in range(1, 5)] == [8, 24, 32, 16]
    assert chi(2, 2) == Fraction(1, 2)
    assert chi(1, 1) == Fraction(1, 2) == chi_bound(1, 1)


def test_chi_first_coefficient():
    for n in range(1, 31):
        assert chi(n, 1) == Fraction(n * n, 2)


def test_chi_bound_all_n():
    assert all(chi_bound_check(n) for n in range(1, 31))
    with pytest.raises(ValueError):
        chi(3, 0)


def test_chi_table_rows():
    rows = chi_table(3)
    assert [r["m"] for r in rows] == [1, 2, 3]
    assert all(r["pass"] for r in rows)
    assert Fraction(rows[0]["chi_num"], rows[0]["chi_den"]) == Fraction(9, 2)
