import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qholo import holo
from qholo.combinat import pair_count_table
from qholo.holo import (Z, ZHAT, DoubledSpin, HoloPoly, decompose, embed, holo_semigroup,
                        hypercontractivity_check, janson_time, moment_expansion_oracle,
                        moment_expansion_terms, random_holo_poly, segal_bargmann_sigma, xi, z_var,
                        zhat, zhat_adjoint)
from qholo.scalars import GaussianRational
from qholo.spin import (AlgebraElement, SpinMatrix, adjoint, inner, moment_even, mul, norm_even, norm_schatten,
                        residual, trace)

seeds = st.integers(0, 2**32 - 1)


def random_doubled(seed, sites):
    rng = np.random.default_rng(seed)
    return DoubledSpin(SpinMatrix.random(sites, 0.0, rng)), rng


def test_janson_time():
    assert janson_time(2, 4) == pytest.approx(0.5 * math.log(2))
    assert janson_time(2, 4) == pytest.approx(0.34657359)
    assert janson_time(2, 2) == 0


class TestVariables:
    def test_z_relations_exact(self):
        ds = DoubledSpin(SpinMatrix([[-1, 1, -1], [1, -1, 1], [-1, 1, -1]]))
        one = AlgebraElement.identity(ds.derived, exact=True)
        for i, j in itertools.product(range(3), repeat=2):
            s = ds.base(i, j)
            zi, zj = zhat(i, ds, True), zhat(j, ds, True)
            assert mul(zi, zj) == mul(zj, zi).scale(s)
            lhs = mul(zhat_adjoint(i, ds, True), zj) - mul(zj, zhat_adjoint(i, ds, True)).scale(s)
            assert lhs == (one if i == j else AlgebraElement.zero(ds.derived, True))

    def test_z_squares_vanish(self):
        ds = DoubledSpin.clifford(2)
        z = z_var(1, ds)
        assert not mul(z, z).terms

    def test_xi_calculus(self):
        ds = DoubledSpin.clifford(2)
        z, zs, x = zhat(0, ds, True), zhat_adjoint(0, ds, True), xi(0, ds, True)
        assert mul(zs, z) == x
        assert mul(x, x) == x
        assert not mul(x, z).terms and not mul(zs, x).terms
        assert mul(z, x) == z and mul(x, zs) == zs
        assert trace(x) == Fraction(1, 2)

    def test_operator_norms(self):
        ds = DoubledSpin.clifford(1)
        assert norm_schatten(zhat(0, ds), math.inf) == pytest.approx(1)
        assert norm_schatten(xi(0, ds), 3) == pytest.approx(2 ** (-1 / 3))
        assert norm_even(z_var(0, ds), 2) == pytest.approx(1)

    def test_exact_z_rejected(self):
        with pytest.raises(ValueError):
            z_var(0, DoubledSpin.clifford(1), Z, exact=True)
        with pytest.raises(ValueError):
            z_var(3, DoubledSpin.clifford(1))


class TestEmbedding:
    def test_monomials_orthonormal(self):
        ds = DoubledSpin(SpinMatrix([[-1, 1, 1], [1, -1, -1], [1, -1, -1]]))
        for A, B in itertools.product(range(8), repeat=2):
            za = embed(HoloPoly({A: 1}, ds, Z))
            zb = embed(HoloPoly({B: 1}, ds, Z))
            assert inner(za, zb) == pytest.approx(float(A == B))

    def test_zhat_monomials_scale(self):
        ds = DoubledSpin.clifford(3)
        for A in range(8):
            zh = embed(HoloPoly({A: 1}, ds, ZHAT), exact=True)
            assert inner(zh, zh) == Fraction(1, 2 ** bin(A).count("1"))

    @given(seeds)
    def test_segal_bargmann_isometry(self, seed):
        ds, rng = random_doubled(seed, 3)
        a = AlgebraElement.random(ds.base, rng)
        p = segal_bargmann_sigma(a, ds)
        assert norm_even(embed(p), 2) == pytest.approx(norm_even(a, 2))

    def test_segal_bargmann_constant(self):
        ds = DoubledSpin.clifford(2)
        p = segal_bargmann_sigma(AlgebraElement.identity(ds.base), ds)
        assert p.terms == {0: 1}


class TestDecompose:
    @given(seeds, st.integers(0, 2), st.sampled_from([Z, ZHAT]))
    def test_reconstruction(self, seed, i, norm):
        ds, rng = random_doubled(seed, 3)
        a = random_holo_poly(ds, rng, normalization=norm)
        b, c = decompose(a, i)
        assert all(not A >> i & 1 for A in b.terms) and all(not A >> i & 1 for A in c.terms)
        rebuilt = embed(b) + mul(zhat(i, ds), embed(c))
        assert residual(rebuilt, embed(a)) < 1e-12

    def test_norm_splits(self, rng):
        ds = DoubledSpin(SpinMatrix.random(3, 0.0, rng))
        a = random_holo_poly(ds, rng, normalization=ZHAT)
        b, c = decompose(a, 1)
        lhs = norm_even(embed(a), 2) ** 2
        assert lhs == pytest.approx(norm_even(embed(b), 2) ** 2 + 0.5 * norm_even(embed(c), 2) ** 2)


class TestHypercontractivity:
    def test_constant(self):
        c = hypercontractivity_check(HoloPoly.constant(DoubledSpin.clifford(1)), 4, 0.0)
        assert c.lhs == pytest.approx(1) and c.holds

    @pytest.mark.parametrize("r", [4, 6])
    def test_random_at_janson_time(self, r, rng):
        for _ in range(10):
            ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
            assert hypercontractivity_check(random_holo_poly(ds, rng), r, janson_time(2, r)).holds

    def test_witness_fails_early(self):
        w = holo.witness(1e-3)
        assert not hypercontractivity_check(w, 4, janson_time(2, 4) - 0.05).holds
        assert hypercontractivity_check(w, 4, janson_time(2, 4)).holds

    def test_odd_r_rejected(self):
        with pytest.raises(ValueError):
            hypercontractivity_check(holo.witness(0.01), 3, 0.5)

    def test_lhs_nonincreasing_in_t(self, rng):
        ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
        p = random_holo_poly(ds, rng)
        vals = [hypercontractivity_check(p, 4, t).lhs for t in np.linspace(0, 1, 6)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_semigroup_scales_by_degree(self):
        ds = DoubledSpin.clifford(2)
        p = holo_semigroup(HoloPoly({0b11: 1.0, 0b01: 1.0}, ds), 0.5)
        assert p.terms[0b11] == pytest.approx(math.exp(-1.0))
        assert p.terms[0b01] == pytest.approx(math.exp(-0.5))


class TestSharpness:
    def test_expansion_coefficient(self):
        assert holo.sharpness_witness(1e-3, 2) == pytest.approx(0.25, rel=1e-3)
        assert holo.sharpness_witness(1e-3, 4) == pytest.approx(0.5, rel=0.01)
        assert holo.sharpness_witness(1e-3, 6) == pytest.approx(0.75, rel=0.01)
        with pytest.raises(ValueError):
            holo.sharpness_witness(0.5, 2)

    def test_exact_p2_value(self):
        eps = 1e-2
        want = (math.sqrt(1 + eps ** 2 / 2) - 1) / eps ** 2
        assert holo.sharpness_witness(eps, 2) == pytest.approx(want, rel=1e-10)

    def test_least_contraction_time(self):
        assert holo.least_contraction_time(4) == pytest.approx(janson_time(2, 4), abs=1e-5)


class TestMomentExpansion:
    def test_constant(self):
        one = HoloPoly.constant(DoubledSpin.clifford(2))
        for n in (1, 2, 3):
            assert moment_expansion_oracle(one, 0, n) == pytest.approx(1)

    @given(seeds, st.integers(2, 3), st.integers(0, 1))
    def test_equals_norm_power(self, seed, n, i):
        ds, rng = random_doubled(seed, 2)
        a = random_holo_poly(ds, rng)
        want = norm_even(embed(a), 2 * n) ** (2 * n)
        assert abs(moment_expansion_oracle(a, i, n) - want) < 1e-10 * max(1.0, want)

    def test_exact_census_and_parity(self, rng):
        ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
        coeffs = {A: GaussianRational(int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for A in range(4)}
        a = HoloPoly(coeffs, ds, ZHAT)
        m = moment_expansion_terms(a, 1, 3, exact=True, full=True)
        assert m.odd_eta_total == 0
        assert m.max_nonalternating == 0
        assert m.census == pair_count_table(3)
        assert m.total == moment_even(embed(a, exact=True), 6)

    def test_guard(self):
        with pytest.raises(ValueError):
            moment_expansion_terms(HoloPoly.constant(DoubledSpin.clifford(1)), 0, 9)


class TestEstimate:
    def test_bound_holds(self, rng):
        ds = DoubledSpin(SpinMatrix.random(2, 0.0, rng))
        for word in ([0, "z", 1, "zs"], ["xi", 0], [0, 1, 2, "z", "zs"], ["zs", 0, "z"]):
            s = sum(isinstance(w, int) for w in word)
            us = [holo.random_free_element(ds, 0, rng) for _ in range(s)]
            val, bound = holo.estimate_bound(us, word, 0, ds)
            assert val <= bound + 1e-10

    def test_word_validation(self, rng):
        ds = DoubledSpin.clifford(2)
        u = holo.random_free_element(ds, 0, rng)
        with pytest.raises(ValueError):
            holo.estimate_bound([u], [0], 0, ds)
        with pytest.raises(ValueError):
            holo.estimate_bound([u, u], [0, "z"], 0, ds)

    def test_free_element_avoids_site(self, rng):
        ds = DoubledSpin.clifford(2)
        u = holo.random_free_element(ds, 1, rng)
        assert all(not A & 0b1100 for A in u.terms)
        assert residual(mul(xi(1, ds), u), mul(u, xi(1, ds))) < 1e-12
        assert abs(complex(trace(mul(xi(1, ds), u))) - 0.5 * complex(trace(u))) < 1e-12
        assert adjoint(adjoint(u)) == u
