"""Random spin ensembles and the central limit for holomorphic variables.

Variable ``j`` of a sample with ``n`` copies lives on sites
``j*n, ..., j*n + n - 1`` of a random spin matrix whose upper triangle is
i.i.d. with ``P(+1) = (1 + q)/2``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .holo import DoubledSpin, xi, zhat, zhat_adjoint
from .qfock import dilate, moment_q, poly_degree
from .spin import (AlgebraElement, SpinMatrix, basis_product, inner, moment_even, mul,
                   number_semigroup, residual, trace)

MAX_DEGREE = 3
MAX_N = 16
MAX_R = 6
CSV_COLUMNS = ("n", "samples", "mean", "stderr", "target", "abs_error")


@dataclass(frozen=True)
class SpinSample:
    q: float
    n: int
    d: int
    matrix: SpinMatrix
    doubled: DoubledSpin
    seed: tuple

    @property
    def sites(self) -> int:
        return self.n * self.d


def sample_spin(q: float, n: int, d: int, seed: int, index: int = 0) -> SpinSample:
    """Draw sample number ``index`` of the ensemble; the stream depends only on ``(seed, n, index)``."""
    if not -1 <= q <= 1:
        raise ValueError(f"q = {q} outside [-1, 1]")
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, index]))
    m = SpinMatrix.random(n * d, q, rng)
    return SpinSample(q, n, d, m, DoubledSpin(m), (seed, n, index))


# creation operators on L^2 of the algebra

def beta(j: int, a: AlgebraElement) -> AlgebraElement:
    """``x_A -> x_j x_A`` if ``j`` is not in ``A``, else ``0``."""
    out = {}
    for A, c in a.terms.items():
        if not A >> j & 1:
            s, C = basis_product(1 << j, A, a.spin)
            out[C] = c * s
    return AlgebraElement(a.spin, out, a.exact)


def beta_star(j: int, a: AlgebraElement) -> AlgebraElement:
    """Adjoint of :func:`beta`: ``x_A -> x_j x_A`` if ``j`` is in ``A``, else ``0``."""
    out = {}
    for A, c in a.terms.items():
        if A >> j & 1:
            s, C = basis_product(1 << j, A, a.spin)
            out[C] = c * s
    return AlgebraElement(a.spin, out, a.exact)


def beta_ops_demo(j: int, G: int) -> tuple:
    """``((beta_j beta_j^* 1, 1), (beta_j^* beta_j 1, 1))`` on ``G`` generators."""
    spin = SpinMatrix.clifford(G)
    if not 0 <= j < G:
        raise ValueError(f"site {j} out of range")
    one = AlgebraElement.identity(spin)
    return inner(beta(j, beta_star(j, one)), one), inner(beta_star(j, beta(j, one)), one)


def _check_word(word):
    sites = [j for j, _ in word]
    if len(set(sites)) != len(sites):
        raise ValueError("factorization needs distinct sites")
    for _, letters in word:
        if not letters or set(letters) - {"b", "s"}:
            raise ValueError("each factor is a nonempty string over 'b' (beta) and 's' (beta^*)")


def _beta_value(word, spin: SpinMatrix, exact: bool):
    one = AlgebraElement.identity(spin, exact)
    v = one
    for j, letters in reversed(word):
        for ch in reversed(letters):
            v = beta(j, v) if ch == "b" else beta_star(j, v)
    return inner(v, one)


def _zhat_value(word, spin: DoubledSpin, exact: bool):
    """Same quantity through ``beta_j -> zhat_j`` and the state ``2^|I| tau(E .)``, ``E = prod xi_j``."""
    E = AlgebraElement.identity(spin.derived, exact)
    for j in range(spin.sites):
        E = mul(E, xi(j, spin, exact))
    w = AlgebraElement.identity(spin.derived, exact)
    for j, letters in word:
        for ch in letters:
            w = mul(w, zhat(j, spin, exact) if ch == "b" else zhat_adjoint(j, spin, exact))
    return trace(mul(E, w)) * 2 ** spin.sites


def factorization_check(word: Sequence[tuple[int, str]], spin: SpinMatrix,
                        exact: bool = True) -> float:
    """Largest discrepancy between the joint vacuum value of ``alpha_{j_1} ... alpha_{j_s}``
    and the product of the single-site values.

    ``word`` lists ``(site, letters)`` with ``letters`` over ``b``/``s``.  The
    joint value is computed both with the operators ``beta_j`` and in the
    ``zhat`` model of the doubled algebra.
    """
    _check_word(word)
    ds = DoubledSpin(spin)
    joint_beta = _beta_value(word, spin, exact)
    joint_z = _zhat_value(word, ds, exact)
    prod = 1
    for factor in word:
        prod = prod * _beta_value([factor], spin, exact)
    return max(abs(complex(joint_beta - prod)), abs(complex(joint_z - prod)))


# scaled variables

def scaled_z(j: int, sample: SpinSample, n: int | None = None) -> AlgebraElement:
    """``n^{-1/2} sum_l z_{j n + l}`` in the doubled algebra."""
    n = sample.n if n is None else n
    if n != sample.n:
        raise ValueError("sample was drawn for a different n")
    if not 0 <= j < sample.d:
        raise ValueError(f"variable {j} out of range")
    c = 2 ** -0.5 / math.sqrt(n)
    terms = {}
    for ell in range(n):
        s = j * n + ell
        terms[1 << (2 * s)] = c
        terms[1 << (2 * s + 1)] = 1j * c
    return AlgebraElement(sample.doubled.derived, terms)


def substitute(P: Mapping[tuple, complex], sample: SpinSample) -> AlgebraElement:
    """``P(z^n_1, ..., z^n_d)`` for a noncommutative polynomial ``P``."""
    zs = [scaled_z(j, sample) for j in range(sample.d)]
    out = AlgebraElement.zero(sample.doubled.derived)
    cache: dict = {(): AlgebraElement.identity(sample.doubled.derived)}
    for mon in P:
        if any(not 0 <= v < sample.d for v in mon):
            raise ValueError(f"monomial {mon} uses a variable outside 0..{sample.d - 1}")
        out = out + _product(mon, zs, cache).scale(P[mon])
    return out


def _product(mon, zs, cache):
    if mon not in cache:
        cache[mon] = mul(_product(mon[:-1], zs, cache), zs[mon[-1]])
    return cache[mon]


def _guard(P, n, r):
    if poly_degree(P) > MAX_DEGREE:
        raise ValueError(f"degree above {MAX_DEGREE}")
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in 1..{MAX_N}")
    if r > MAX_R or r < 2 or r % 2:
        raise ValueError(f"r must be even and at most {MAX_R}")


def _n_vars(P) -> int:
    return max((max(m) for m in P if m), default=0) + 1


def sample_moment(P, q: float, n: int, r: int, seed: int, index: int) -> float:
    sample = sample_spin(q, n, _n_vars(P), seed, index)
    return complex(moment_even(substitute(P, sample), r)).real


def _sample_task(args):
    return sample_moment(*args)


@dataclass(frozen=True)
class CltRow:
    n: int
    samples: int
    mean: float
    stderr: float
    target: float | None = None
    abs_error: float | None = None


def clt_moment(P: Mapping[tuple, complex], q: float, n: int, r: int, samples: int,
               seed: int, workers: int = 1, target: float | None = None) -> CltRow:
    """Monte Carlo mean of ``tau(|P(z^n)|^r)`` over ``samples`` spin matrices."""
    _guard(P, n, r)
    if samples < 1:
        raise ValueError("need at least one sample")
    tasks = [(dict(P), q, n, r, seed, k) for k in range(samples)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            vals = list(pool.map(_sample_task, tasks, chunksize=max(1, samples // (4 * workers))))
    else:
        vals = [_sample_task(t) for t in tasks]
    v = np.array(vals)
    mean = float(v.mean())
    stderr = float(v.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    err = None if target is None else abs(mean - target)
    return CltRow(n, samples, mean, stderr, target, err)


def semigroup_compat_check(P: Mapping[tuple, complex], sample: SpinSample, t: float) -> float:
    """L2 distance between ``P_t(z^n)`` and ``exp(-tN) P(z^n)``."""
    _guard(P, sample.n, 2)
    return residual(substitute(dilate(P, t), sample), number_semigroup(substitute(P, sample), t))


# reports

_TERM = re.compile(r"^\s*(?:([-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)\s*\*?\s*)?((?:z\d+\s*\*?\s*)*)$")


def parse_poly(text: str) -> dict:
    """Parse ``"z1*z2 + 0.5*z1 + 2"`` into ``{(0, 1): 1, (0,): 0.5, (): 2}`` (variables are 1-based)."""
    out: dict = {}
    for raw in re.split(r"\+(?![^(]*\))", text.replace("-", "+-").replace("e+-", "e-")):
        raw = raw.strip()
        if not raw:
            continue
        m = _TERM.match(raw)
        neg = False
        if m is None and raw.startswith("-"):
            neg, m = True, _TERM.match(raw[1:])
        if m is None or (m.group(1) is None and not m.group(2)):
            raise ValueError(f"cannot parse term {raw!r}")
        coef = float(m.group(1)) if m.group(1) else 1.0
        if neg:
            coef = -coef
        mon = tuple(int(k) - 1 for k in re.findall(r"z(\d+)", m.group(2) or ""))
        if any(v < 0 for v in mon):
            raise ValueError("variables are numbered from z1")
        out[mon] = out.get(mon, 0) + coef
    if not out:
        raise ValueError("empty polynomial")
    return out


def format_poly(P: Mapping[tuple, complex]) -> str:
    parts = []
    for mon, c in sorted(P.items(), key=lambda kv: (len(kv[0]), kv[0])):
        body = "*".join(f"z{v + 1}" for v in mon)
        if not body:
            parts.append(f"{c}")
        elif c == 1:
            parts.append(body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts)


@dataclass
class CltReport:
    polynomial: str
    q: float
    r: int
    seed: int
    target: float
    rows: list = field(default_factory=list)
    error_shrinks: bool = False
    within_band: bool = False
    band: float = 3.0

    @property
    def passed(self) -> bool:
        return self.error_shrinks and self.within_band

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow([getattr(row, k) if not isinstance(row, dict) else row[k] for k in CSV_COLUMNS])
        return buf.getvalue()


def clt_target(P: Mapping[tuple, complex], q: float, r: int) -> float:
    if not -1 <= q < 1:
        raise ValueError("the q = 1 limit is not supported")
    return moment_q(P, r, q, d=_n_vars(P)).real


def convergence_report(P: Mapping[tuple, complex], q: float, r: int, n_list: Sequence[int],
                       samples: int, seed: int, workers: int = 1, band: float = 3.0) -> CltReport:
    """Sample means for each ``n`` against the q-Gaussian moment.

    Flags whether the error at the largest ``n`` is below the error at the
    smallest, and whether the target lies within ``band`` standard errors
    at the largest ``n``.
    """
    if not n_list:
        raise ValueError("empty n-list")
    if q >= 1 or q < -1:
        raise ValueError("q must lie in [-1, 1)")
    for n in n_list:
        _guard(P, n, r)
    target = clt_target(P, q, r)
    rows = [clt_moment(P, q, n, r, samples, seed, workers, target) for n in sorted(n_list)]
    first, last = rows[0], rows[-1]
    floor = 1e-12 * max(1.0, abs(target))
    shrinks = last.abs_error < first.abs_error or last.abs_error <= floor
    within = last.abs_error <= band * last.stderr + 1e-12
    return CltReport(format_poly(P), q, r, seed, target, rows, shrinks, within, band)


__all__ = [
    "CSV_COLUMNS", "CltReport", "CltRow", "SpinSample", "beta", "beta_ops_demo", "beta_star",
    "clt_moment", "clt_target", "convergence_report", "factorization_check", "format_poly",
    "parse_poly", "sample_moment", "sample_spin", "scaled_z", "semigroup_compat_check",
    "substitute",
]
