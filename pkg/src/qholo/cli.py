"""Command-line driver.

Every subcommand writes a JSON report envelope (or a CSV projection) and
exits with status 0 exactly when all of its checks pass.
"""
from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from dataclasses import asdict, fields
from typing import Callable, Sequence

import numpy as np

from . import clt, combinat, holo, identities, qfock
from .holo import DoubledSpin
from .report import (DEFAULT_TOL_INEQ, DEFAULT_TOL_RESID, Record, ReportEnvelope, RunConfig,
                     Timer, equality, inequality, parse_t_policy)
from .spin import SpinMatrix

WITNESS_EPS = 1e-3
SHARPNESS_GAP = 0.05
RECORD_COLUMNS = ("name", "anchor", "lhs", "rhs", "tolerance", "passed")
CHI_COLUMNS = ("n", "m", "chi_num", "chi_den", "bound", "pass")

DEFAULTS = {
    "hyper-spin": dict(q=[0.0], d=2, r=[4, 6], samples=100, backend="float"),
    "hyper-q": dict(q=[-0.9, -0.5, 0.0, 0.5, 0.9], d=2, degree=3, r=[4, 6], samples=25,
                    backend="float"),
    "chi": dict(n_max=30, n_brute=12, backend="rational"),
    "clt": dict(q=[0.5], r=[4], n_list=[2, 4, 8], samples=200, poly="z1*z2", backend="float"),
    "identities": dict(backend="rational"),
}


def _violation(name, anchor, lhs, rhs, tol, **detail) -> Record:
    """Passes when ``lhs > rhs + tol``: the inequality is expected to break."""
    return Record(name, anchor, float(lhs), float(rhs), tol, bool(lhs > rhs + tol),
                  {"expect": "violation", **detail})


def _worst(checks, t, **detail):
    margins = [c.lhs - c.rhs for c in checks]
    k = int(np.argmax(margins))
    return checks[k], {"t": t, "count": len(checks), "holds": sum(c.holds for c in checks),
                       "worst_margin": margins[k], **detail}


def cmd_hyper_spin(cfg: RunConfig) -> tuple[list[Record], dict]:
    if not 1 <= cfg.d <= 3:
        raise ValueError("hyper-spin needs 1 <= d <= 3 sites")
    if not cfg.r:
        raise ValueError("empty r-list")
    for q in cfg.q:
        if not -1 <= q <= 1:
            raise ValueError(f"q = {q} outside [-1, 1]")
    offset = parse_t_policy(cfg.t_policy)
    tol = cfg.tol_ineq
    rng = np.random.default_rng(cfg.seed)
    records = []
    for q in cfg.q:
        for r in cfg.r:
            t = holo.janson_time(2, r) + offset
            if t < 0:
                raise ValueError("t-policy gives a negative time")
            checks = []
            for _ in range(cfg.samples):
                ds = DoubledSpin(SpinMatrix.random(cfg.d, q, rng))
                p = holo.random_holo_poly(ds, rng, cfg.degree)
                checks.append(holo.hypercontractivity_check(p, r, t, tol))
            c, det = _worst(checks, t, q=q, r=r, sites=cfg.d)
            records.append(Record(f"hypercontractivity q={q} r={r}",
                                  "strong hypercontractivity, mixed spin", c.lhs, c.rhs, tol,
                                  det["holds"] == det["count"], det))
    for r in cfg.r:
        t = holo.janson_time(2, r) + offset
        w = holo.witness(WITNESS_EPS)
        c = holo.hypercontractivity_check(w, r, t, tol)
        records.append(inequality(f"witness contracts r={r}", "strong hypercontractivity, mixed spin",
                                  c.lhs, c.rhs, tol, t=t, eps=WITNESS_EPS))
        tb = holo.janson_time(2, r) - SHARPNESS_GAP
        c = holo.hypercontractivity_check(w, r, tb, tol)
        records.append(_violation(f"witness fails below Janson time r={r}", "sharpness of the Janson time",
                                  c.lhs, c.rhs, tol, t=tb, eps=WITNESS_EPS))
        least = holo.least_contraction_time(r)
        records.append(equality(f"least contraction time r={r}", "sharpness of the Janson time",
                                least, holo.janson_time(2, r), 1e-4))
    for p in (2, 4):
        ratio = holo.sharpness_witness(WITNESS_EPS, p)
        records.append(equality(f"witness expansion p={p}", "sharpness of the Janson time",
                                ratio, p / 8, 0.01 * p / 8))
    return records, {}


def cmd_hyper_q(cfg: RunConfig) -> tuple[list[Record], dict]:
    for q in cfg.q:
        if not -1 < q < 1:
            raise ValueError(f"q = {q} must lie in (-1, 1); q = -1 is the Clifford case of hyper-spin")
    if not 1 <= cfg.d <= 2:
        raise ValueError("hyper-q needs d <= 2")
    if not 0 <= cfg.degree <= 3:
        raise ValueError("hyper-q needs degree <= 3")
    if not cfg.r:
        raise ValueError("empty r-list")
    if max(cfg.r) > 6:
        raise ValueError("hyper-q needs r <= 6")
    offset = parse_t_policy(cfg.t_policy)
    tol = cfg.tol_ineq
    rng = np.random.default_rng(cfg.seed)
    records = []
    for q in cfg.q:
        for r in cfg.r:
            t = holo.janson_time(2, r) + offset
            if t < 0:
                raise ValueError("t-policy gives a negative time")
            checks = []
            for _ in range(cfg.samples):
                P = qfock.random_nc_poly(cfg.d, cfg.degree, rng)
                mc = qfock.contraction_check(P, r, q, t, tol, d=cfg.d)
                checks.append(holo.HyperCheck(mc.lhs, mc.rhs, mc.holds))
            c, det = _worst(checks, t, q=q, r=r, d=cfg.d, degree=cfg.degree)
            records.append(Record(f"hypercontractivity q={q} r={r}", "strong hypercontractivity, q-Gaussian",
                                  c.lhs, c.rhs, tol, det["holds"] == det["count"], det))
            w = qfock.z_witness(WITNESS_EPS)
            mc = qfock.contraction_check(w, r, q, t, tol)
            records.append(inequality(f"witness contracts q={q} r={r}", "strong hypercontractivity, q-Gaussian",
                                      mc.lhs, mc.rhs, tol, t=t, eps=WITNESS_EPS))
            tb = holo.janson_time(2, r) - SHARPNESS_GAP
            mc = qfock.contraction_check(w, r, q, tb, tol)
            records.append(_violation(f"witness fails below Janson time q={q} r={r}",
                                      "sharpness of the Janson time", mc.lhs, mc.rhs, tol, t=tb,
                                      eps=WITNESS_EPS))
    return records, {}


def cmd_chi(cfg: RunConfig) -> tuple[list[Record], dict]:
    if not 1 <= cfg.n_max <= 30:
        raise ValueError("chi needs 1 <= n-max <= 30")
    if not 0 <= cfg.n_brute <= 12:
        raise ValueError("brute-force cross-check limited to n <= 12")
    records, table = [], []
    for n in range(1, cfg.n_max + 1):
        rows = combinat.chi_table(n)
        table.extend(rows)
        worst = max(rows, key=lambda row: row["chi_num"] / row["chi_den"] / row["bound"])
        ok = combinat.chi_bound_check(n)
        records.append(Record(f"chi bound n={n}", "combinatorial bound on chi_m",
                              worst["chi_num"] / worst["chi_den"], float(worst["bound"]), 0.0, ok,
                              {"n": n, "worst_m": worst["m"]}))
    for n in range(1, cfg.n_brute + 1):
        census = combinat.pair_count_table(n)
        bad = [key for key, v in census.items() if v != combinat.pair_count_closed_form(n, *key)]
        records.append(Record(f"pair count n={n}", "alternating pair count", float(len(bad)), 0.0, 0.0,
                              not bad, {"n": n, "mismatches": [list(b) for b in bad]}))
    serial = [{**row, "bound": str(row["bound"])} for row in table]
    return records, {"chi_table": serial}


def cmd_clt(cfg: RunConfig) -> tuple[list[Record], dict]:
    if len(cfg.q) != 1:
        raise ValueError("clt takes a single q")
    if len(cfg.r) != 1:
        raise ValueError("clt takes a single r")
    if not cfg.n_list:
        raise ValueError("empty n-list")
    P = clt.parse_poly(cfg.poly)
    rep = clt.convergence_report(P, cfg.q[0], cfg.r[0], cfg.n_list, cfg.samples, cfg.seed, cfg.workers)
    first, last = rep.rows[0], rep.rows[-1]
    records = [
        inequality(f"error shrinks n={first.n}->{last.n}", "central limit for spin ensembles",
                   last.abs_error, first.abs_error, 0.0),
        inequality(f"target within {rep.band:g} standard errors at n={last.n}",
                   "central limit for spin ensembles", last.abs_error, rep.band * last.stderr, 1e-12),
    ]
    records[0].passed = rep.error_shrinks
    return records, {"clt": rep.to_dict()}


def cmd_identities(cfg: RunConfig) -> tuple[list[Record], dict]:
    recs = identities.run_suite(exact=cfg.backend == "rational", seed=cfg.seed, tol=cfg.tol_resid)
    return recs, {}


COMMANDS: dict[str, Callable[[RunConfig], tuple[list[Record], dict]]] = {
    "hyper-spin": cmd_hyper_spin,
    "hyper-q": cmd_hyper_q,
    "chi": cmd_chi,
    "clt": cmd_clt,
    "identities": cmd_identities,
}


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    out = []
    for x in text.replace(";", ",").split(","):
        if x.strip():
            v = float(x)
            if v != int(v):
                raise argparse.ArgumentTypeError(f"{x!r} is not an integer")
            out.append(int(v))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qholo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--q", type=_float_list, help="comma-separated q values")
        p.add_argument("--d", type=int, help="sites (hyper-spin) or variables (hyper-q)")
        p.add_argument("--degree", type=int, help="polynomial degree bound")
        p.add_argument("--r", type=_int_list, help="comma-separated even exponents")
        p.add_argument("--t-policy", default="janson", help="janson, janson-DELTA or janson+DELTA")
        p.add_argument("--samples", type=int)
        p.add_argument("--n-list", type=_int_list, help="comma-separated copy counts (clt)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--backend", choices=("float", "rational"))
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--tol-ineq", type=float, default=DEFAULT_TOL_INEQ)
        p.add_argument("--tol-resid", type=float, default=DEFAULT_TOL_RESID)
        p.add_argument("--poly", help="polynomial for clt, e.g. 'z1*z2 + 0.5*z1'")
        p.add_argument("--n-max", type=int, help="largest n for chi")
        p.add_argument("--n-brute", type=int, help="largest n for the brute-force pair count")
        p.add_argument("--workers", type=int, default=1, help="processes for clt sampling")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {"subcommand": args.subcommand, **DEFAULTS[args.subcommand]}
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if f.name != "subcommand" and v is not None:
            values[f.name] = v
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def records_csv(records: Sequence[Record]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_COLUMNS)
    for r in records:
        w.writerow([getattr(r, k) for k in RECORD_COLUMNS])
    return buf.getvalue()


def render(cfg: RunConfig, env: ReportEnvelope) -> str:
    if cfg.format == "json":
        return env.to_json() + "\n"
    if cfg.subcommand == "clt":
        data = env.results["clt"]
        rep = clt.CltReport(**{k: v for k, v in data.items() if k not in ("passed", "rows")},
                            rows=[clt.CltRow(**row) for row in data["rows"]])
        return rep.to_csv()
    if cfg.subcommand == "chi":
        buf = io.StringIO()
        w = csv.DictWriter(buf, CHI_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(env.results["chi_table"])
        return buf.getvalue()
    return records_csv(env.records)


def run(cfg: RunConfig) -> ReportEnvelope:
    with Timer() as timer:
        records, results = COMMANDS[cfg.subcommand](cfg)
    return ReportEnvelope(asdict(cfg), records, results, timer.meta())


def _join_negative_lists(argv: Sequence[str]) -> list[str]:
    # "--q -0.5,0.5" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--q", "--r", "--n-list"):
            nxt = next(it, None)
            if nxt is not None and re.match(r"^-[\d.]", nxt):
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_negative_lists(sys.argv[1:] if argv is None else argv))
    try:
        cfg = config_from_args(args)
        env = run(cfg)
    except ValueError as exc:
        print(f"qholo {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, env)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        s = env.summary
        print(f"{cfg.subcommand}: {s['passed']}/{s['total']} checks passed -> {cfg.out}")
    else:
        sys.stdout.write(text)
    for r in env.records:
        if not r.passed:
            print(f"FAILED: {r.name} (lhs={r.lhs:.12g}, rhs={r.rhs:.12g})", file=sys.stderr)
    return 0 if env.ok else 1


if __name__ == "__main__":
    sys.exit(main())
