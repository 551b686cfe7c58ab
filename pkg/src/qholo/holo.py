"""Holomorphic subalgebra H(I, sigma) of the doubled mixed-spin algebra.

Site ``j`` carries the two generators ``x_j = x[2j]`` and ``y_j = x[2j+1]``;
``z_j = (x_j + i y_j) / sqrt(2)`` and ``zhat_j = z_j / sqrt(2)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .combinat import is_alternating
from .scalars import imag_unit, to_scalar
from .spin import (
    AlgebraElement,
    SpinMatrix,
    adjoint,
    indices_of,
    mul,
    norm_even,
    norm_schatten,
    residual,
    trace,
)

Z = "z"
ZHAT = "zhat"
INEQ_TOL = 1e-10


def janson_time(p: float, r: float) -> float:
    """Least contraction time ``log(r / p) / 2`` on holomorphic elements."""
    return 0.5 * math.log(r / p)


@dataclass(frozen=True)
class DoubledSpin:
    """A spin matrix on sites ``I`` together with its extension to ``I x {0,1}``."""

    base: SpinMatrix
    derived: SpinMatrix = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "derived", self.base.doubled())

    @property
    def sites(self) -> int:
        return self.base.size

    @classmethod
    def clifford(cls, sites: int) -> "DoubledSpin":
        return cls(SpinMatrix.clifford(sites))

    def check_site(self, j: int):
        if not 0 <= j < self.sites:
            raise ValueError(f"site {j} out of range for {self.sites} sites")


def z_var(j: int, spin: DoubledSpin, kind: str = Z, exact: bool = False) -> AlgebraElement:
    """``z_j`` (L2-normalised) or ``zhat_j`` (operator-norm normalised)."""
    spin.check_site(j)
    if kind == ZHAT:
        half = Fraction(1, 2) if exact else 0.5
        c = to_scalar(half, exact)
    elif kind == Z:
        if exact:
            raise ValueError("z_j has irrational coefficients; use zhat in the exact backend")
        c = 2 ** -0.5
    else:
        raise ValueError(f"unknown variable kind {kind!r}")
    i = imag_unit(exact)
    return AlgebraElement(spin.derived, {1 << (2 * j): c, 1 << (2 * j + 1): i * c}, exact)


def zhat(j: int, spin: DoubledSpin, exact: bool = False) -> AlgebraElement:
    return z_var(j, spin, ZHAT, exact)


def zhat_adjoint(j: int, spin: DoubledSpin, exact: bool = False) -> AlgebraElement:
    return adjoint(z_var(j, spin, ZHAT, exact))


def xi(j: int, spin: DoubledSpin, exact: bool = False) -> AlgebraElement:
    """``xi_j = zhat_j^* zhat_j = (1 + i x_j y_j) / 2``."""
    spin.check_site(j)
    half = to_scalar(Fraction(1, 2) if exact else 0.5, exact)
    xy = 1 << (2 * j) | 1 << (2 * j + 1)
    return AlgebraElement(spin.derived, {0: half, xy: imag_unit(exact) * half}, exact)


@dataclass(frozen=True)
class HoloPoly:
    """``sum_A c_A z_A`` over square-free site sets ``A`` (bitmask over sites).

    ``z_A`` is the ordered product ``z_{a_1} ... z_{a_k}`` with ``a_1 < ... < a_k``;
    with ``normalization == "zhat"`` the factors are ``zhat`` instead.
    """

    terms: Mapping[int, object]
    spin: DoubledSpin
    normalization: str = Z

    def __post_init__(self):
        if self.normalization not in (Z, ZHAT):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        limit = 1 << self.spin.sites
        for A in self.terms:
            if not 0 <= A < limit:
                raise ValueError(f"monomial {A} invalid for {self.spin.sites} sites")
        object.__setattr__(self, "terms", {A: c for A, c in self.terms.items() if c != 0})

    @classmethod
    def constant(cls, spin: DoubledSpin, c=1, normalization: str = Z) -> "HoloPoly":
        return cls({0: c}, spin, normalization)

    @classmethod
    def monomial(cls, spin: DoubledSpin, sites: Sequence[int], c=1,
                 normalization: str = Z) -> "HoloPoly":
        A = 0
        for s in sites:
            A |= 1 << s
        return cls({A: c}, spin, normalization)

    def degree(self) -> int:
        return max((A.bit_count() for A in self.terms), default=0)

    def __add__(self, other: "HoloPoly") -> "HoloPoly":
        if other.spin != self.spin or other.normalization != self.normalization:
            raise ValueError("incompatible holomorphic polynomials")
        out = dict(self.terms)
        for A, c in other.terms.items():
            out[A] = out.get(A, 0) + c
        return HoloPoly(out, self.spin, self.normalization)


def random_holo_poly(spin: DoubledSpin, rng: np.random.Generator, degree: int | None = None,
                     normalization: str = Z) -> HoloPoly:
    """Standard complex Gaussian coefficients on all monomials of degree <= ``degree``."""
    deg = spin.sites if degree is None else degree
    keys = [A for A in range(1 << spin.sites) if A.bit_count() <= deg]
    vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return HoloPoly(dict(zip(keys, vals.tolist())), spin, normalization)


def embed(p: HoloPoly, exact: bool = False) -> AlgebraElement:
    """Expand each ``z_A`` as an ordered product inside the doubled algebra."""
    spin = p.spin
    factors = [z_var(j, spin, p.normalization, exact) for j in range(spin.sites)]
    out = AlgebraElement.zero(spin.derived, exact)
    cache: dict[int, AlgebraElement] = {0: AlgebraElement.identity(spin.derived, exact)}
    for A in sorted(p.terms):
        mono = cache.get(A)
        if mono is None:
            mono = cache[0]
            for j in indices_of(A):
                mono = mul(mono, factors[j])
            cache[A] = mono
        out = out + mono.scale(p.terms[A])
    return out


def segal_bargmann_sigma(a: AlgebraElement, spin: DoubledSpin | None = None) -> HoloPoly:
    """Relabel ``x_A -> z_A`` (unitary, commutes with the number operator)."""
    spin = spin or DoubledSpin(a.spin)
    if spin.base != a.spin:
        raise ValueError("element does not live in the base algebra of this doubled spin")
    return HoloPoly(dict(a.terms), spin, Z)


def holo_semigroup(p: HoloPoly, t: float) -> HoloPoly:
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    return HoloPoly({A: c * math.exp(-t * A.bit_count()) for A, c in p.terms.items()},
                    p.spin, p.normalization)


def decompose(a: HoloPoly, i: int) -> tuple[HoloPoly, HoloPoly]:
    """Unique ``(b, c)`` free of site ``i`` with ``a = b + zhat_i c``."""
    a.spin.check_site(i)
    base = a.spin.base
    bit = 1 << i
    lift = math.sqrt(2) if a.normalization == Z else 1
    b, c = {}, {}
    for A, coef in a.terms.items():
        if not A & bit:
            b[A] = b.get(A, 0) + coef
            continue
        # moving z_i to the front of z_A picks up sigma(a, i) for every a < i in A
        sign = 1
        for s in indices_of(A & (bit - 1)):
            sign *= base(s, i)
        rest = A ^ bit
        c[rest] = c.get(rest, 0) + sign * lift * coef
    return HoloPoly(b, a.spin, a.normalization), HoloPoly(c, a.spin, a.normalization)


@dataclass(frozen=True)
class HyperCheck:
    lhs: float
    rhs: float
    holds: bool


def hypercontractivity_check(p: HoloPoly, r: int, t: float, tol: float = INEQ_TOL) -> HyperCheck:
    """Compare ``||exp(-tN) p||_r`` with ``||p||_2``."""
    if r < 2 or r % 2:
        raise ValueError("r must be an even integer >= 2")
    lhs = norm_even(embed(holo_semigroup(p, t)), r)
    rhs = norm_even(embed(p), 2)
    return HyperCheck(lhs, rhs, lhs <= rhs + tol)


def witness(eps: float, spin: DoubledSpin | None = None, site: int = 0) -> HoloPoly:
    """``1 + eps * zhat`` at one site."""
    spin = spin or DoubledSpin.clifford(1)
    return HoloPoly({0: 1.0, 1 << site: eps}, spin, ZHAT)


def sharpness_witness(eps: float, p_norm: int) -> float:
    """``(||1 + eps zhat||_p - 1) / eps**2``; tends to ``p / 8``."""
    if not 0 < eps < 0.1:
        raise ValueError("eps must lie in (0, 0.1)")
    return (norm_even(embed(witness(eps)), p_norm) - 1.0) / eps ** 2


def least_contraction_time(r: int, eps: float = 1e-3, hi: float = 2.0,
                           xtol: float = 1e-6) -> float:
    """Bisect for the smallest ``t`` at which the witness contracts from L2 to Lr."""
    a = witness(eps)
    rhs = norm_even(embed(a), 2)

    def contracts(t):
        return norm_even(embed(holo_semigroup(a, t)), r) <= rhs

    lo = 0.0
    if not contracts(hi):
        raise RuntimeError("witness does not contract on the search interval")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if contracts(mid):
            hi = mid
        else:
            lo = mid
    return hi


# moment expansion around a site

@dataclass
class MomentExpansion:
    total: complex
    census: dict = field(default_factory=dict)
    odd_eta_total: complex = 0j
    max_nonalternating: float = 0.0


def _site_pieces(a: HoloPoly, i: int, exact: bool):
    b_poly, c_poly = decompose(a, i)
    b = embed(b_poly, exact)
    c = embed(c_poly, exact)
    zh = zhat(i, a.spin, exact)
    zs = adjoint(zh)
    x = xi(i, a.spin, exact)
    bs, cs = adjoint(b), adjoint(c)
    return {
        (0, 0): mul(bs, b),
        (0, 1): mul(x, mul(cs, c)),
        (1, 0): mul(bs, mul(zh, c)),
        (1, 1): mul(cs, mul(zs, b)),
    }


def moment_expansion_terms(a: HoloPoly, i: int, n: int, exact: bool = False,
                           full: bool = False) -> MomentExpansion:
    """Sum ``trace(v^{eta nu})`` over even ``|eta|`` and ``eta``-alternating ``nu``.

    ``census[(k, m)]`` counts the enumerated pairs with ``|eta| = 2k`` and
    ``|nu| = m``.  With ``full=True`` every pair is formed as well, recording
    the summed trace over odd ``|eta|`` and the largest L2 norm among the
    non-alternating products (both should vanish).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > 8:
        raise ValueError("moment expansion enumerates 4^n products; n <= 8")
    v = _site_pieces(a, i, exact)
    zero = to_scalar(0, exact)
    total = zero
    odd_total = zero
    worst = 0.0
    census: dict = {}
    ident = AlgebraElement.identity(a.spin.derived, exact)
    for eta in itertools.product((0, 1), repeat=n):
        weight = sum(eta)
        for nu in itertools.product((0, 1), repeat=n):
            alternating = is_alternating(eta, nu)
            wanted = weight % 2 == 0 and alternating
            if not (wanted or full):
                continue
            prod = ident
            for e, s in zip(eta, nu):
                prod = mul(prod, v[(e, s)])
            if not alternating:
                worst = max(worst, residual(prod, AlgebraElement.zero(prod.spin, exact)))
            if weight % 2:
                odd_total = odd_total + trace(prod)
            if wanted:
                total = total + trace(prod)
                key = (weight // 2, sum(nu))
                census[key] = census.get(key, 0) + 1
    return MomentExpansion(total, census, odd_total, worst)


def moment_expansion_oracle(a: HoloPoly, i: int, n: int) -> float:
    """``||a||_{2n}^{2n}`` from the (eta, nu) expansion around site ``i``."""
    return complex(moment_expansion_terms(a, i, n).total).real


def estimate_bound(us: Sequence[AlgebraElement], word: Sequence, i: int,
                   spin: DoubledSpin) -> tuple[float, float]:
    """Return ``(|trace(U)|, prod ||u_k||_s / 2)`` for a word ``U``.

    ``word`` lists factors in order: an ``int`` selects ``us[k]``, and the
    strings ``"z"``, ``"zs"``, ``"xi"`` select ``zhat_i``, ``zhat_i^*``, ``xi_i``.
    Every ``u`` must be used exactly once and at least one site factor present.
    """
    used = sorted(w for w in word if isinstance(w, int))
    if used != list(range(len(us))):
        raise ValueError("word must use every u exactly once")
    if len(used) == len(word):
        raise ValueError("word must contain at least one of zhat, zhat^*, xi")
    site = {"z": zhat(i, spin), "zs": zhat_adjoint(i, spin), "xi": xi(i, spin)}
    U = AlgebraElement.identity(spin.derived)
    for w in word:
        U = mul(U, us[w] if isinstance(w, int) else site[w])
    s = len(us)
    bound = 0.5
    for u in us:
        bound *= norm_schatten(u, s)
    return abs(complex(trace(U))), bound


def random_free_element(spin: DoubledSpin, i: int, rng: np.random.Generator) -> AlgebraElement:
    """Random element of the doubled algebra avoiding both generators of site ``i``."""
    mask = 0b11 << (2 * i)
    keys = [A for A in range(1 << spin.derived.size) if not A & mask]
    vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return AlgebraElement(spin.derived, dict(zip(keys, vals.tolist())))


__all__ = [
    "DoubledSpin", "HoloPoly", "HyperCheck", "MomentExpansion", "Z", "ZHAT",
    "decompose", "embed", "estimate_bound", "holo_semigroup", "hypercontractivity_check",
    "janson_time", "least_contraction_time",
    "moment_expansion_oracle", "moment_expansion_terms", "random_free_element",
    "random_holo_poly", "segal_bargmann_sigma", "sharpness_witness", "witness", "xi",
    "z_var", "zhat", "zhat_adjoint",
]
