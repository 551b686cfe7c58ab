"""Exact identity suite behind the ``identities`` subcommand.

Each check returns a :class:`~qholo.report.Record` whose ``lhs`` is a
residual.  With the rational backend the algebraic checks demand an exact
zero; floating-point checks use the residual tolerance.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

import numpy as np

from . import clt, combinat, holo, qfock, spin
from .holo import DoubledSpin, xi, zhat, zhat_adjoint
from .report import Record, residual_record
from .scalars import GaussianRational
from .spin import AlgebraElement, SpinMatrix, adjoint, mul, trace


def _exact_tol(exact: bool, tol: float) -> float:
    return 0.0 if exact else tol


def _res(a: AlgebraElement, b: AlgebraElement) -> float:
    return spin.residual(a, b)


def _rand(sp: SpinMatrix, rng, exact: bool, density: float = 0.6) -> AlgebraElement:
    a = AlgebraElement.random(sp, rng, density=density, exact=exact)
    if exact:
        return a
    norm = spin.norm_even(a, 2)
    return a.scale(1 / norm) if norm else a


def check_algebra_laws(rng, exact: bool, tol: float) -> list[Record]:
    worst = {"associativity": 0.0, "adjoint anti-homomorphism": 0.0, "trace symmetry": 0.0,
             "adjoint involution": 0.0}
    for _ in range(4):
        sp = SpinMatrix.random(6, float(rng.uniform(-1, 1)), rng)
        a, b, c = (_rand(sp, rng, exact) for _ in range(3))
        worst["associativity"] = max(worst["associativity"], _res(mul(mul(a, b), c), mul(a, mul(b, c))))
        worst["adjoint anti-homomorphism"] = max(worst["adjoint anti-homomorphism"],
                                                 _res(adjoint(mul(a, b)), mul(adjoint(b), adjoint(a))))
        worst["adjoint involution"] = max(worst["adjoint involution"], _res(adjoint(adjoint(a)), a))
        worst["trace symmetry"] = max(worst["trace symmetry"],
                                      abs(complex(trace(mul(a, b)) - trace(mul(b, a)))))
    t = _exact_tol(exact, tol)
    return [residual_record(k, "mixed-spin algebra laws", v, t) for k, v in worst.items()]


def check_orthonormal_basis(exact: bool, tol: float) -> Record:
    sp = SpinMatrix.random(4, 0.0, np.random.default_rng(0))
    basis = [AlgebraElement.basis(sp, spin.indices_of(A), exact=exact) for A in range(16)]
    worst = 0.0
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            worst = max(worst, abs(complex(spin.inner(a, b)) - (i == j)))
    return residual_record("basis orthonormality", "orthonormal basis x_A", worst, _exact_tol(exact, tol))


def check_z_relations(rng, exact: bool, tol: float) -> list[Record]:
    ds = DoubledSpin(SpinMatrix.random(3, 0.0, rng))
    comm = anti = 0.0
    one = AlgebraElement.identity(ds.derived, exact)
    for i, j in itertools.product(range(3), repeat=2):
        s = ds.base(i, j)
        zi, zj = zhat(i, ds, exact), zhat(j, ds, exact)
        comm = max(comm, _res(mul(zi, zj), mul(zj, zi).scale(s)))
        lhs = mul(zhat_adjoint(i, ds, exact), zj) - mul(zj, zhat_adjoint(i, ds, exact)).scale(s)
        anti = max(anti, _res(lhs, one if i == j else AlgebraElement.zero(ds.derived, exact)))
    t = _exact_tol(exact, tol)
    return [residual_record("z_i z_j = sigma z_j z_i", "holomorphic commutation relations", comm, t),
            residual_record("zhat_i^* zhat_j - sigma zhat_j zhat_i^* = delta_ij",
                            "holomorphic commutation relations", anti, t)]


def check_site_calculus(rng, exact: bool, tol: float) -> list[Record]:
    ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
    i = 0
    z, zs, x = zhat(i, ds, exact), zhat_adjoint(i, ds, exact), xi(i, ds, exact)
    zero = AlgebraElement.zero(ds.derived, exact)
    half = Fraction(1, 2) if exact else 0.5
    worst = {}
    worst["xi^2 = xi"] = _res(mul(x, x), x)
    worst["xi zhat = 0"] = _res(mul(x, z), zero)
    worst["zhat^* xi = 0"] = _res(mul(zs, x), zero)
    worst["zhat xi = zhat"] = _res(mul(z, x), z)
    worst["xi zhat^* = zhat^*"] = _res(mul(x, zs), zs)
    comm = tr = 0.0
    mask = 0b11 << (2 * i)
    for _ in range(5):
        u = _rand(ds.derived, rng, exact)
        u = AlgebraElement(ds.derived, {A: c for A, c in u.terms.items() if not A & mask}, exact)
        comm = max(comm, _res(mul(x, u), mul(u, x)))
        tr = max(tr, abs(complex(trace(mul(x, u)) - trace(u) * half)))
    worst["xi commutes with site-free u"] = comm
    worst["tau(xi u) = tau(u)/2"] = tr
    t = _exact_tol(exact, tol)
    return [residual_record(k, "site calculus for zhat and xi", v, t) for k, v in worst.items()]


def check_site_norm_factor(rng, tol: float) -> Record:
    """``||h u||_p = 2^{-1/p} ||u||_p`` for ``h`` in ``{zhat, zhat^*, xi, 1 - xi}``."""
    ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
    one = AlgebraElement.identity(ds.derived)
    hs = [zhat(0, ds), zhat_adjoint(0, ds), xi(0, ds), one - xi(0, ds)]
    worst = 0.0
    for _ in range(3):
        u = holo.random_free_element(ds, 0, rng)
        for h in hs:
            hu = mul(h, u)
            for p in (2, 4, 6):
                worst = max(worst, abs(spin.norm_even(hu, p) - 2 ** (-1 / p) * spin.norm_even(u, p)))
            worst = max(worst, abs(spin.norm_schatten(hu, 3) - 2 ** (-1 / 3) * spin.norm_schatten(u, 3)))
    return residual_record("||h u||_p = 2^(-1/p) ||u||_p", "site calculus for zhat and xi", worst,
                           max(tol, 1e-10))


def check_grading(rng, exact: bool, tol: float) -> list[Record]:
    sp = DoubledSpin(SpinMatrix.random(3, 0.0, rng)).derived
    parity = odd_trace = 0.0
    for _ in range(4):
        site = int(rng.integers(3))
        a_even, a_odd = spin.grading_split(_rand(sp, rng, exact), site)
        b_even, b_odd = spin.grading_split(_rand(sp, rng, exact), site)
        for a, pa in ((a_even, 0), (a_odd, 1)):
            for b, pb in ((b_even, 0), (b_odd, 1)):
                prod = mul(a, b)
                even, odd = spin.grading_split(prod, site)
                wrong = odd if (pa + pb) % 2 == 0 else even
                parity = max(parity, _res(wrong, AlgebraElement.zero(sp, exact)))
        odd_trace = max(odd_trace, abs(complex(trace(a_odd))))
    t = _exact_tol(exact, tol)
    return [residual_record("parity of products", "site grading", parity, t),
            residual_record("trace vanishes on odd part", "site grading", odd_trace, t)]


def check_moment_parity(rng, exact: bool, tol: float) -> list[Record]:
    ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
    odd = nonalt = census = 0.0
    for n in (2, 3):
        p = holo.random_holo_poly(ds, rng, normalization=holo.ZHAT)
        if exact:
            p = holo.HoloPoly({A: GaussianRational(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
                               for A in p.terms}, ds, holo.ZHAT)
        m = holo.moment_expansion_terms(p, 0, n, exact=exact, full=True)
        odd = max(odd, abs(complex(m.odd_eta_total)))
        nonalt = max(nonalt, m.max_nonalternating)
        table = combinat.pair_count_table(n)
        census = max(census, float(m.census != table))
    t = _exact_tol(exact, tol)
    return [residual_record("odd |eta| terms sum to zero", "moment expansion parity", odd, t),
            residual_record("non-alternating products vanish", "moment expansion parity", nonalt, t),
            residual_record("term census equals pair count", "moment expansion combinatorics", census, 0.0)]


def check_estimate(rng, tol: float) -> Record:
    ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
    worst = -np.inf
    for _ in range(6):
        s = int(rng.integers(1, 4))
        us = [holo.random_free_element(ds, 0, rng) for _ in range(s)]
        letters = [str(rng.choice(["z", "zs", "xi"])) for _ in range(int(rng.integers(1, 3)))]
        pool = list(range(s)) + letters
        word = [pool[k] for k in rng.permutation(len(pool))]
        val, bound = holo.estimate_bound(us, word, 0, ds)
        worst = max(worst, val - bound)
    return Record("|tau(U)| <= prod ||u_k||_s / 2", "trace estimate for site words",
                  float(worst), 0.0, tol, bool(worst <= tol))


def check_factorization(rng, exact: bool, tol: float) -> Record:
    worst = 0.0
    for _ in range(8):
        sp = SpinMatrix.random(4, float(rng.uniform(-1, 1)), rng)
        sites = rng.permutation(4)[: int(rng.integers(1, 4))]
        word = [(int(j), "".join(rng.choice(["b", "s"], size=int(rng.integers(1, 5))))) for j in sites]
        worst = max(worst, clt.factorization_check(word, sp, exact=exact))
    return residual_record("vacuum value factorizes over distinct sites", "factorization of beta words",
                           worst, _exact_tol(exact, tol))


def check_beta_covariance(tol: float) -> Record:
    m00, m11 = clt.beta_ops_demo(0, 3)
    sp = SpinMatrix.clifford(3)
    one = AlgebraElement.identity(sp)
    m1 = spin.inner(clt.beta(0, one), one)
    m1s = spin.inner(clt.beta_star(0, one), one)
    err = max(abs(m00), abs(m11 - 1), abs(m1), abs(m1s))
    return residual_record("(b b^* 1,1) = 0, (b^* b 1,1) = 1, (b 1,1) = 0", "beta covariance", err, tol)


def check_q_commutation(rng, tol: float) -> Record:
    worst = 0.0
    for q in (-0.9, -0.5, 0.0, 0.5, 0.9):
        for _ in range(3):
            f, g = rng.standard_normal(3), rng.standard_normal(3)
            f, g = f / np.linalg.norm(f), g / np.linalg.norm(g)
            terms = {w: complex(*rng.standard_normal(2)) for k in range(4)
                     for w in itertools.product(range(3), repeat=k) if rng.random() < 0.3}
            v = qfock.FockVector(terms, 3, cutoff=6)
            worst = max(worst, qfock.q_commutator_check(f.tolist(), g.tolist(), q, v))
    return residual_record("c^*(g)c(f) - q c(f)c^*(g) = (f,g)", "q-commutation relations", worst, tol)


def check_wick(exact: bool, tol: float) -> list[Record]:
    q = Fraction(1, 2) if exact else 0.5
    single = max(float(qfock.wick_check(n, q)) for n in range(7))
    products = [[(0, 2), (1, 1)], [(1, 3), (0, 2)], [(0, 1), (1, 2), (2, 1)], [(2, 2), (0, 1), (1, 3)]]
    prod = max(float(qfock.wick_product_check(idx, q, 3)) for idx in products)
    t = _exact_tol(exact, tol)
    return [residual_record("H_n(X(e)) Omega = e^n", "q-Hermite Wick ordering", single, t),
            residual_record("Hermite products with distinct letters", "q-Hermite Wick ordering", prod, t)]


def check_delta(rng, tol: float) -> list[Record]:
    iso = wick2 = 0.0
    for q in (-0.5, 0.0, 0.5):
        for _ in range(3):
            terms = {w: complex(*rng.standard_normal(2)) for k in range(4)
                     for w in itertools.product(range(2), repeat=k) if rng.random() < 0.4}
            v = qfock.FockVector(terms, 2, cutoff=4)
            iso = max(iso, abs(qfock.q_norm(qfock.delta_embed(v), q) - qfock.q_norm(v, q)))
        for word in [(0,), (1, 0), (0, 0, 1), (1, 0, 1)]:
            h, phi = word[0], word[1:]
            lhs = qfock.apply_op(qfock.z_op(h), qfock.delta_embed(qfock.FockVector.word(phi, 2, 4)), q)
            rhs = qfock.delta_embed(qfock.FockVector.word(word, 2, 4))
            wick2 = max(wick2, (lhs - rhs).max_abs())
    return [residual_record("delta is isometric", "diagonal embedding", iso, tol),
            residual_record("Z(h) delta(phi) = delta(h phi)", "holomorphic Wick ordering", wick2, tol)]


def check_tracial(rng, tol: float) -> Record:
    worst = 0.0
    X = [qfock.field_op(qfock.unit(a, 2)) for a in range(2)]
    for q in (-0.5, 0.3, 0.8):
        for _ in range(4):
            k = 2 * int(rng.integers(1, 4))
            w = [X[int(a)] for a in rng.integers(0, 2, size=k)]
            cut = int(rng.integers(1, k))
            a = qfock.vacuum_moment(w, q)
            b = qfock.vacuum_moment(w[cut:] + w[:cut], q)
            worst = max(worst, abs(a - b))
    return residual_record("tau_q(uv) = tau_q(vu) on field words", "vacuum state is tracial", worst, tol)


def check_circular(rng, tol: float) -> Record:
    worst = 0.0
    for _ in range(3):
        P = qfock.random_nc_poly(2, 2, rng)
        nz, nb = qfock.circular_moment_compare(P, 4)
        worst = max(worst, abs(nz - nb))
    return residual_record("||P(Z)||_4 = ||P(B)||_4 at q = 0", "circular model of the holomorphic algebra",
                           worst, max(tol, 1e-10))


def check_sb_gram(tol: float) -> Record:
    worst = 0.0
    for q in (-0.5, 0.0, 0.5):
        gp, gi = qfock.sb_gram_check(2, 4, q, distinct=True)
        worst = max(worst, float(np.abs(gp - gi).max()))
    return residual_record("Gram of Hermite products = Gram of Z-monomials (distinct letters)",
                           "Segal-Bargmann unitarity", worst, tol)


def check_semigroup(rng, tol: float) -> Record:
    worst = 0.0
    for _ in range(3):
        sample = clt.sample_spin(0.3, 3, 2, int(rng.integers(1 << 30)))
        P = qfock.random_nc_poly(2, 3, rng)
        worst = max(worst, clt.semigroup_compat_check(P, sample, float(rng.uniform(0, 1))))
    return residual_record("P_t(z) = exp(-tN) P(z)", "semigroup on substituted polynomials", worst, tol)


def run_suite(exact: bool = True, seed: int = 0, tol: float = 1e-12,
              progress: Callable[[Record], None] | None = None) -> list[Record]:
    rng = np.random.default_rng(seed)
    steps = [
        lambda: check_algebra_laws(rng, exact, tol),
        lambda: [check_orthonormal_basis(exact, tol)],
        lambda: check_z_relations(rng, exact, tol),
        lambda: check_site_calculus(rng, exact, tol),
        lambda: [check_site_norm_factor(rng, tol)],
        lambda: check_grading(rng, exact, tol),
        lambda: check_moment_parity(rng, exact, tol),
        lambda: [check_estimate(rng, 1e-10)],
        lambda: [check_factorization(rng, exact, tol)],
        lambda: [check_beta_covariance(tol)],
        lambda: [check_q_commutation(rng, tol)],
        lambda: check_wick(exact, tol),
        lambda: check_delta(rng, tol),
        lambda: [check_tracial(rng, tol)],
        lambda: [check_circular(rng, tol)],
        lambda: [check_sb_gram(tol)],
        lambda: [check_semigroup(rng, tol)],
    ]
    out: list[Record] = []
    for step in steps:
        for rec in step():
            out.append(rec)
            if progress:
                progress(rec)
    return out
