import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qholo import clt
from qholo.clt import (CSV_COLUMNS, CltReport, CltRow, clt_moment, convergence_report, factorization_check,
                       format_poly, parse_poly, sample_spin, scaled_z, semigroup_compat_check, substitute)
from qholo.spin import SpinMatrix, adjoint, inner, mul, norm_even


class TestBeta:
    def test_demo(self):
        assert clt.beta_ops_demo(0, 3) == (0, 1)
        assert clt.beta_ops_demo(2, 3) == (0, 1)
        with pytest.raises(ValueError):
            clt.beta_ops_demo(3, 3)

    def test_adjoint_pair(self, rng):
        from qholo.spin import AlgebraElement
        sp = SpinMatrix.random(4, 0.3, rng)
        a, b = AlgebraElement.random(sp, rng), AlgebraElement.random(sp, rng)
        for j in range(4):
            assert abs(inner(clt.beta(j, a), b) - inner(a, clt.beta_star(j, b))) < 1e-12

    @pytest.mark.parametrize("word", [
        [(0, "sb"), (1, "sb")],
        [(0, "b"), (1, "s")],
        [(2, "sbsb"), (0, "sb"), (1, "ssbb")],
        [(1, "bs"), (0, "sb")],
    ])
    def test_factorization(self, word, rng):
        for q in (-1.0, 0.0, 0.6, 1.0):
            sp = SpinMatrix.random(3, q, rng)
            assert factorization_check(word, sp) == 0

    def test_factorization_validates(self):
        sp = SpinMatrix.clifford(2)
        with pytest.raises(ValueError):
            factorization_check([(0, "b"), (0, "s")], sp)
        with pytest.raises(ValueError):
            factorization_check([(0, "bx")], sp)


class TestSampling:
    def test_endpoints(self):
        assert sample_spin(1.0, 3, 2, 0).matrix == SpinMatrix.commuting(6)
        assert sample_spin(-1.0, 3, 2, 0).matrix == SpinMatrix.clifford(6)

    def test_deterministic_streams(self):
        a = sample_spin(0.3, 4, 2, 7, index=5)
        assert a.matrix == sample_spin(0.3, 4, 2, 7, index=5).matrix
        assert a.matrix != sample_spin(0.3, 4, 2, 7, index=6).matrix

    def test_off_diagonal_mean(self):
        vals = []
        for k in range(40):
            m = sample_spin(0.5, 8, 2, 1, index=k).matrix
            vals.extend(m(i, j) for i in range(16) for j in range(i + 1, 16))
        mean = float(np.mean(vals))
        # 4800 +-1 entries with mean 1/2: sd of the mean is about 0.0125
        assert abs(mean - 0.5) < 0.05

    def test_range(self):
        with pytest.raises(ValueError):
            sample_spin(1.2, 2, 2, 0)
        with pytest.raises(ValueError):
            sample_spin(0.0, 0, 2, 0)


class TestScaledVariables:
    @given(st.integers(1, 6), st.floats(-1, 1))
    def test_unit_norm(self, n, q):
        s = sample_spin(q, n, 2, 3)
        for j in range(2):
            assert norm_even(scaled_z(j, s), 2) == pytest.approx(1)

    def test_square_vanishes_off_the_diagonal_commuting(self):
        # for commuting sites z^2 keeps only cross terms with distinct sites
        s = sample_spin(1.0, 3, 1, 0)
        z = scaled_z(0, s)
        z2 = mul(z, z)
        assert inner(z2, z2) == pytest.approx(2 * (1 - 1 / 3))

    def test_square_vanishes_for_clifford(self):
        s = sample_spin(-1.0, 3, 1, 0)
        z = scaled_z(0, s)
        assert norm_even(mul(z, z), 2) < 1e-12

    def test_second_moment_is_one(self, rng):
        for _ in range(5):
            s = sample_spin(float(rng.uniform(-1, 1)), 4, 1, int(rng.integers(1000)))
            assert clt.sample_moment({(0,): 1.0}, s.q, 4, 2, s.seed[0], 0) == pytest.approx(1)

    def test_guards(self):
        s = sample_spin(0.0, 2, 2, 0)
        with pytest.raises(ValueError):
            scaled_z(2, s)
        with pytest.raises(ValueError):
            scaled_z(0, s, n=3)
        with pytest.raises(ValueError):
            substitute({(2,): 1.0}, s)
        with pytest.raises(ValueError):
            clt_moment({(0, 0, 0, 0): 1.0}, 0.0, 2, 2, 2, 0)
        with pytest.raises(ValueError):
            clt_moment({(0,): 1.0}, 0.0, 17, 2, 2, 0)
        with pytest.raises(ValueError):
            clt_moment({(0,): 1.0}, 0.0, 2, 8, 2, 0)
        with pytest.raises(ValueError):
            clt_moment({(0,): 1.0}, 0.0, 2, 4, 0, 0)

    def test_substitute_adjoint(self):
        s = sample_spin(0.2, 2, 2, 4)
        a = substitute({(0, 1): 1.0, (): 0.5}, s)
        b = mul(scaled_z(0, s), scaled_z(1, s)) + substitute({(): 0.5}, s)
        assert clt.residual(a, b) < 1e-14
        assert clt.residual(adjoint(adjoint(a)), a) < 1e-14


class TestMoments:
    def test_clifford_has_no_variance(self):
        row = clt_moment({(0, 1): 1.0}, -1.0, 3, 4, 5, 0)
        assert row.stderr == 0

    def test_workers_do_not_change_result(self):
        P = {(0, 1): 1.0}
        a = clt_moment(P, 0.5, 2, 4, 6, 11)
        b = clt_moment(P, 0.5, 2, 4, 6, 11, workers=2)
        assert a == b

    def test_semigroup_compat(self, rng):
        s = sample_spin(0.4, 3, 2, 2)
        P = {(): 1.0, (0,): 0.5, (0, 1): -1.0, (1, 0, 1): 2.0}
        for t in (0.0, 0.3, 1.1):
            assert semigroup_compat_check(P, s, t) < 1e-12

    def test_target_values(self):
        assert clt.clt_target({(0,): 1.0}, 0.5, 2) == pytest.approx(1)
        assert clt.clt_target({(0,): 1.0}, 0.0, 4) == pytest.approx(2)
        assert clt.clt_target({(0,): 1.0}, -1.0, 4) == pytest.approx(2)
        with pytest.raises(ValueError):
            clt.clt_target({(0,): 1.0}, 1.0, 4)


class TestParse:
    def test_examples(self):
        assert parse_poly("z1*z2") == {(0, 1): 1.0}
        assert parse_poly("z1*z2 + 0.5*z1 + 2") == {(0, 1): 1.0, (0,): 0.5, (): 2.0}
        assert parse_poly("z2 z1 - z1") == {(1, 0): 1.0, (0,): -1.0}
        assert parse_poly("1e-3*z1 + z1") == {(0,): 1.001}

    @pytest.mark.parametrize("bad", ["", "z0", "x1", "z1**2", "+"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_poly(bad)

    def test_round_trip(self):
        P = {(0, 1): 1.0, (0,): 0.5, (): 2.0}
        assert parse_poly(format_poly(P)) == P


class TestReport:
    def _report(self):
        rows = [CltRow(2, 3, 1.5, 0.1, 1.0, 0.5), CltRow(4, 3, 1.1, 0.05, 1.0, 0.1)]
        return CltReport("z1", 0.5, 4, 0, 1.0, rows, True, True)

    def test_json(self):
        r = self._report()
        d = json.loads(r.to_json())
        assert d["passed"] is True
        assert [row["n"] for row in d["rows"]] == [2, 4]

    def test_csv(self):
        text = self._report().to_csv()
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[1]["abs_error"] == "0.1"

    def test_small_run(self):
        rep = convergence_report({(0,): 1.0}, 0.5, 2, [1, 2], 3, 0)
        assert rep.target == pytest.approx(1)
        # the second moment is exactly one for every sample
        assert all(r.abs_error < 1e-12 for r in rep.rows)
        assert rep.passed

    def test_bit_identical_reruns(self):
        a = convergence_report({(0, 1): 1.0}, 0.5, 4, [2, 3], 4, 9).to_json()
        b = convergence_report({(0, 1): 1.0}, 0.5, 4, [2, 3], 4, 9).to_json()
        assert a == b

    def test_validation(self):
        with pytest.raises(ValueError):
            convergence_report({(0,): 1.0}, 0.5, 2, [], 3, 0)
        with pytest.raises(ValueError):
            convergence_report({(0,): 1.0}, 1.0, 2, [2], 3, 0)
