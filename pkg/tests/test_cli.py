import csv
import io
import json

import jsonschema
import pytest

from qholo import cli, identities, spin
from qholo.report import RunConfig, ReportEnvelope, load_schema, parse_t_policy

SCHEMA = load_schema()


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_meta(text):
    d = json.loads(text)
    d.pop("meta")
    return d


class TestSubcommands:
    def test_identities(self, capsys):
        code, out, _ = run_cli(capsys, "identities")
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert code == 0 and d["summary"]["ok"]
        assert d["config"]["backend"] == "rational"

    def test_identities_float(self, capsys):
        code, out, _ = run_cli(capsys, "identities", "--backend", "float", "--seed", "3")
        assert code == 0
        assert json.loads(out)["config"]["backend"] == "float"

    def test_chi(self, capsys):
        code, out, _ = run_cli(capsys, "chi", "--n-max", "10", "--n-brute", "6")
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert code == 0
        assert {"n": 4, "m": 3} .items() <= next(r for r in d["results"]["chi_table"]
                                                if r["n"] == 4 and r["m"] == 3).items()

    def test_chi_csv(self, capsys):
        code, out, _ = run_cli(capsys, "chi", "--n-max", "6", "--n-brute", "4", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert tuple(rows[0]) == cli.CHI_COLUMNS
        assert all(r["pass"] == "True" for r in rows)

    def test_hyper_spin(self, capsys):
        code, out, _ = run_cli(capsys, "hyper-spin", "--samples", "5", "--r", "4", "--d", "2")
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert code == 0

    def test_hyper_spin_before_janson_time_fails(self, capsys):
        code, _, err = run_cli(capsys, "hyper-spin", "--samples", "3", "--r", "4",
                               "--t-policy", "janson-0.05")
        assert code == 1
        assert "FAILED" in err

    def test_hyper_q(self, capsys):
        code, out, _ = run_cli(capsys, "hyper-q", "--q", "-0.5,0.5", "--degree", "2", "--r", "4",
                               "--samples", "2")
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert code == 0

    def test_clt_json_and_csv(self, capsys, tmp_path):
        args = ["clt", "--poly", "z1", "--r", "2", "--n-list", "1,2", "--samples", "3"]
        code, out, _ = run_cli(capsys, *args)
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert code == 0
        assert [r["n"] for r in d["results"]["clt"]["rows"]] == [1, 2]
        path = tmp_path / "clt.csv"
        code, out, _ = run_cli(capsys, *args, "--format", "csv", "--out", str(path))
        assert code == 0 and "-> " in out
        rows = list(csv.DictReader(path.open()))
        assert tuple(rows[0]) == ("n", "samples", "mean", "stderr", "target", "abs_error")
        assert len(rows) == 2

    def test_records_csv(self, capsys):
        code, out, _ = run_cli(capsys, "identities", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and tuple(rows[0]) == cli.RECORD_COLUMNS


class TestValidation:
    @pytest.mark.parametrize("argv", [
        ["hyper-q", "--q", "1"],
        ["hyper-q", "--q", "-1"],
        ["hyper-spin", "--r", "3"],
        ["hyper-spin", "--q", "1.5"],
        ["clt", "--n-list", "32"],
        ["clt", "--q", "0.1,0.2"],
        ["clt", "--poly", "z1**"],
        ["hyper-spin", "--t-policy", "soon"],
        ["identities", "--tol-resid", "0"],
        ["clt", "--samples", "0"],
    ])
    def test_exit_two(self, capsys, argv):
        code, _, err = run_cli(capsys, *argv)
        assert code == 2
        assert "error" in err

    def test_parser_rejects_bad_choice(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["identities", "--backend", "decimal"])
        with pytest.raises(SystemExit):
            cli.main(["clt", "--n-list", "2.5"])

    def test_t_policy(self):
        assert parse_t_policy("janson") == 0
        assert parse_t_policy("janson-0.05") == -0.05
        assert parse_t_policy("janson+0.1") == 0.1
        with pytest.raises(ValueError):
            parse_t_policy("janson0.1")

    def test_config_defaults(self):
        cfg = cli.config_from_args(cli.build_parser().parse_args(["clt"]))
        assert cfg.q == [0.5] and cfg.n_list == [2, 4, 8] and cfg.format == "json"
        with pytest.raises(ValueError):
            RunConfig("clt", r=[5]).validate()


class TestDeterminism:
    def test_reruns_match_apart_from_meta(self, capsys):
        args = ["hyper-spin", "--samples", "4", "--r", "4", "--seed", "5"]
        _, a, _ = run_cli(capsys, *args)
        _, b, _ = run_cli(capsys, *args)
        assert strip_meta(a) == strip_meta(b)

    def test_seed_matters(self, capsys):
        _, a, _ = run_cli(capsys, "hyper-spin", "--samples", "4", "--r", "4", "--seed", "1")
        _, b, _ = run_cli(capsys, "hyper-spin", "--samples", "4", "--r", "4", "--seed", "2")
        assert strip_meta(a)["records"] != strip_meta(b)["records"]


class TestEnvelope:
    def test_nonfinite_values_serialise(self):
        from qholo.report import Record
        env = ReportEnvelope({"subcommand": "chi"}, [Record("x", "a", float("inf"), 1.0, 0.0, False, {})])
        d = json.loads(env.to_json())
        assert isinstance(d["records"][0]["lhs"], str)
        assert d["summary"] == {"total": 1, "passed": 0, "failed": 1, "ok": False}


def test_suite_detects_sign_error(monkeypatch):
    """A wrong commutation sign must be caught by the exact identity suite."""
    good = spin.basis_product

    def flipped(A, B, sp):
        s, C = good(A, B, sp)
        # flip the sign whenever generators 0 and 1 are both involved
        if (A | B) & 0b11 == 0b11 and A != B:
            s = -s
        return s, C

    monkeypatch.setattr(spin, "basis_product", flipped)
    recs = identities.run_suite(exact=True, seed=0)
    assert not all(r.passed for r in recs)
