"""Exact combinatorics of the moment expansion: alternating pairs and chi_m."""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

BRUTE_FORCE_MAX_N = 14


def inversions(perm: Sequence[int]) -> int:
    """Number of pairs ``i < j`` with ``perm[i] > perm[j]``.

    Accepts permutations of ``0..k-1`` or ``1..k``.
    """
    k = len(perm)
    vals = sorted(perm)
    if vals != list(range(k)) and vals != list(range(1, k + 1)):
        raise ValueError(f"{perm!r} is not a permutation")
    return sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])


def is_alternating(eta: Sequence[int], nu: Sequence[int]) -> bool:
    """True iff ``nu`` restricted to the support of ``eta`` alternates."""
    if len(eta) != len(nu):
        raise ValueError("eta and nu must have equal length")
    prev = None
    for e, v in zip(eta, nu):
        if e:
            if v == prev:
                return False
            prev = v
    return True


def pair_count_closed_form(n: int, k: int, m: int) -> int:
    """``2 C(n, 2k) C(n-2k, m-k)`` for ``k >= 1``; ``C(n, m)`` when ``k == 0``."""
    if k == 0:
        return comb(n, m) if 0 <= m <= n else 0
    if 2 * k > n or m < k or m - k > n - 2 * k:
        return 0
    return 2 * comb(n, 2 * k) * comb(n - 2 * k, m - k)


def pair_count_table(n: int) -> dict[tuple[int, int], int]:
    """Exhaustive census ``{(k, m): #pairs}`` with ``|eta| = 2k``, ``nu`` alternating, ``|nu| = m``.

    Every ``nu`` in ``{0,1}^n`` is tested for each ``eta`` of even weight
    (vectorised over ``nu``).
    """
    if not 1 <= n <= BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to 1 <= n <= {BRUTE_FORCE_MAX_N}")
    nus = np.arange(1 << n, dtype=np.int64)
    weights = np.bitwise_count(nus).astype(np.int64)
    table: dict[tuple[int, int], int] = {}
    for eta in range(1 << n):
        w = eta.bit_count()
        if w % 2:
            continue
        support = [p for p in range(n) if eta >> p & 1]
        ok = np.ones(len(nus), dtype=bool)
        for p0, p1 in zip(support, support[1:]):
            ok &= ((nus >> p0) & 1) != ((nus >> p1) & 1)
        counts = np.bincount(weights[ok], minlength=n + 1)
        for m, c in enumerate(counts.tolist()):
            if c:
                table[(w // 2, m)] = table.get((w // 2, m), 0) + c
    return table


def pair_count_bruteforce(n: int, k: int, m: int) -> int:
    return pair_count_table(n).get((k, m), 0)


def chi(n: int, m: int) -> Fraction:
    """``C(n, m)/2 + sum_{k=1}^{min(m, n-m)} C(n, 2k) C(n-2k, m-k)``."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    total = Fraction(comb(n, m), 2)
    for k in range(1, min(m, n - m) + 1):
        total += comb(n, 2 * k) * comb(n - 2 * k, m - k)
    return total


def chi_bound(n: int, m: int) -> Fraction:
    """``C(n, m) (n/2)^m``."""
    return comb(n, m) * Fraction(n, 2) ** m


def chi_bound_check(n: int) -> bool:
    """``chi(n, m) <= C(n, m)(n/2)^m`` for all ``m``, with equality at ``m = 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    if chi(n, 1) != chi_bound(n, 1):
        return False
    return all(chi(n, m) <= chi_bound(n, m) for m in range(1, n + 1))


def chi_table(n: int) -> list[dict]:
    rows = []
    for m in range(1, n + 1):
        c, b = chi(n, m), chi_bound(n, m)
        rows.append({"n": n, "m": m, "chi_num": c.numerator, "chi_den": c.denominator,
                     "bound": b, "pass": c <= b})
    return rows
