"""Truncated q-Fock spaces, q-Gaussian and q-holomorphic operators.

Vectors are sparse maps from words (tuples of letters) to coefficients.
Letters index an orthonormal basis of the one-particle space.  On the
doubled space ``R^d + R^d`` the letter ``2*j + c`` stands for ``(e_j, 0)``
(``c = 0``) or ``(0, e_j)`` (``c = 1``).

Two engines apply operators: a sparse dictionary engine (exact scalars
allowed) and :class:`TruncatedFock`, which stores every word up to a fixed
length densely and acts with scipy sparse matrices.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .combinat import inversions

CREATE = "c"
ANNIHILATE = "a"
GRAM_MAX_WORDS = 4096
ENUMERATION_MAX_LEN = 7
INEQ_TOL = 1e-10

Word = tuple
NCPoly = Mapping[tuple, complex]


class CutoffError(ValueError):
    """A creation operator would exceed the word-length cutoff."""


def _check_q(q):
    if not -1 <= q <= 1:
        raise ValueError(f"q = {q} outside [-1, 1]")


def _conj(c):
    return c.conjugate()


class FockVector:
    """Sparse vector in the algebraic Fock space over ``alphabet`` letters."""

    __slots__ = ("_terms", "alphabet", "cutoff")

    def __init__(self, terms: Mapping[Word, object] | None = None, alphabet: int = 1,
                 cutoff: int = 12):
        self.alphabet = alphabet
        self.cutoff = cutoff
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if len(w) > cutoff:
                raise CutoffError(f"word of length {len(w)} exceeds cutoff {cutoff}")
            if any(not 0 <= a < alphabet for a in w):
                raise ValueError(f"word {w} uses letters outside the alphabet of size {alphabet}")
            if c != 0:
                clean[w] = clean.get(w, 0) + c
        self._terms = clean

    @classmethod
    def _raw(cls, terms, alphabet, cutoff):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.alphabet = alphabet
        obj.cutoff = cutoff
        return obj

    @classmethod
    def vacuum(cls, alphabet: int = 1, cutoff: int = 12, one=1) -> "FockVector":
        return cls._raw({(): one}, alphabet, cutoff)

    @classmethod
    def word(cls, letters: Iterable[int], alphabet: int, cutoff: int = 12, coef=1) -> "FockVector":
        return cls({tuple(letters): coef}, alphabet, cutoff)

    @property
    def terms(self) -> Mapping[Word, object]:
        return MappingProxyType(self._terms)

    def coefficient(self, w: Word):
        return self._terms.get(tuple(w), 0)

    def _like(self, terms):
        return FockVector._raw({w: c for w, c in terms.items() if c != 0}, self.alphabet, self.cutoff)

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return self._like(out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c) -> "FockVector":
        return self._like({w: c * v for w, v in self._terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, FockVector) and self._terms == other._terms

    __hash__ = None

    def max_abs(self):
        return max((abs(c) for c in self._terms.values()), default=0)

    def __repr__(self):
        if not self._terms:
            return "FockVector(0)"
        return "FockVector(" + " + ".join(f"{c}*{list(w)}" for w, c in sorted(self._terms.items())) + ")"


# inner product

@lru_cache(maxsize=None)
def _word_inner(u: Word, w: Word, q) -> object:
    if len(u) != len(w):
        return 0
    if not u:
        return 1
    f, rest = u[0], u[1:]
    total = 0
    for j, g in enumerate(w):
        if g == f:
            total += q ** j * _word_inner(rest, w[:j] + w[j + 1:], q)
    return total


def word_inner(u: Sequence[int], w: Sequence[int], q) -> object:
    """q-inner product of two basis words (deletion recursion)."""
    _check_q(q)
    return _word_inner(tuple(u), tuple(w), q)


def word_inner_enumerate(u: Sequence[int], w: Sequence[int], q) -> object:
    """Same as :func:`word_inner` by summing ``q^inv(pi)`` over matching permutations."""
    _check_q(q)
    if len(u) != len(w):
        return 0
    k = len(u)
    if k > ENUMERATION_MAX_LEN:
        raise ValueError(f"permutation enumeration limited to length {ENUMERATION_MAX_LEN}")
    total = 0
    for perm in itertools.permutations(range(k)):
        if all(u[i] == w[perm[i]] for i in range(k)):
            total += q ** inversions(perm)
    return total


def q_inner(v: FockVector, w: FockVector, q) -> object:
    """Sesquilinear q-form, linear in ``v`` and conjugate-linear in ``w``."""
    _check_q(q)
    if v.alphabet != w.alphabet:
        raise ValueError("vectors live over different alphabets")
    by_content: dict = {}
    for ww, c in w._terms.items():
        by_content.setdefault((len(ww), tuple(sorted(ww))), []).append((ww, c))
    total = 0
    for vw, c in v._terms.items():
        for ww, d in by_content.get((len(vw), tuple(sorted(vw))), ()):
            total += c * _conj(d) * _word_inner(vw, ww, q)
    return total


def q_norm(v: FockVector, q) -> float:
    val = q_inner(v, v, q)
    return math.sqrt(max(complex(val).real, 0.0))


def words(alphabet: int, length: int) -> list[Word]:
    return list(itertools.product(range(alphabet), repeat=length))


def sector_gram(q, alphabet: int, length: int, basis: Sequence[Word] | None = None) -> np.ndarray:
    _check_q(q)
    basis = words(alphabet, length) if basis is None else [tuple(w) for w in basis]
    return np.array([[float(_word_inner(u, w, q)) for w in basis] for u in basis])


def gram_psd_check(q, alphabet: int, length: int) -> float:
    """Smallest eigenvalue of the length-``length`` sector Gram matrix.

    The matrix is block diagonal in the letter content of the words, so
    each block is diagonalised separately.
    """
    _check_q(q)
    if alphabet ** length > GRAM_MAX_WORDS:
        raise ValueError(f"sector has more than {GRAM_MAX_WORDS} words")
    blocks: dict = {}
    for w in words(alphabet, length):
        blocks.setdefault(tuple(sorted(w)), []).append(w)
    lowest = math.inf
    for members in blocks.values():
        g = sector_gram(q, alphabet, length, members)
        lowest = min(lowest, float(np.linalg.eigvalsh(g)[0]))
    return lowest


# operators

@dataclass(frozen=True)
class FieldOp:
    """Linear combination of ``c(e_a)`` (kind ``"c"``) and ``c^*(e_a)`` (kind ``"a"``).

    ``terms`` holds ``(coefficient, kind, letter)`` triples.
    """

    terms: tuple

    def adjoint(self) -> "FieldOp":
        flip = {CREATE: ANNIHILATE, ANNIHILATE: CREATE}
        return FieldOp(tuple((_conj(c), flip[k], a) for c, k, a in self.terms))

    @property
    def letters(self) -> int:
        return max((a for _, _, a in self.terms), default=-1) + 1


def creation_op(f: Sequence) -> FieldOp:
    return FieldOp(tuple((c, CREATE, a) for a, c in enumerate(f) if c != 0))


def annihilation_op(f: Sequence) -> FieldOp:
    """``c^*(f)``, conjugate-linear in ``f``."""
    return FieldOp(tuple((_conj(c), ANNIHILATE, a) for a, c in enumerate(f) if c != 0))


def field_op(f: Sequence) -> FieldOp:
    """``X(f) = c(f) + c^*(f)``."""
    return FieldOp(creation_op(f).terms + annihilation_op(f).terms)


def unit(a: int, alphabet: int, one=1) -> list:
    f = [0] * alphabet
    f[a] = one
    return f


def z_op(j: int) -> FieldOp:
    """``Z(e_j) = (X(e_j, 0) + i X(0, e_j)) / sqrt(2)`` on the doubled alphabet."""
    s = 2 ** -0.5
    x, y = 2 * j, 2 * j + 1
    return FieldOp(((s, CREATE, x), (s, ANNIHILATE, x),
                    (1j * s, CREATE, y), (1j * s, ANNIHILATE, y)))


def z_op_star(j: int) -> FieldOp:
    return z_op(j).adjoint()


def b_op(j: int) -> FieldOp:
    """Circular operator ``B(e_j) = c(e_j, 0) + c^*(0, e_j)``."""
    return FieldOp(((1, CREATE, 2 * j), (1, ANNIHILATE, 2 * j + 1)))


def b_op_star(j: int) -> FieldOp:
    return b_op(j).adjoint()


# sparse dictionary engine

def create(f: Sequence, v: FockVector) -> FockVector:
    """Left tensoring by ``f``."""
    return apply_op(creation_op(f), v, 0)


def annihilate(f: Sequence, v: FockVector, q) -> FockVector:
    """``c_q^*(f)``: q-weighted deletion sum."""
    _check_q(q)
    return apply_op(annihilation_op(f), v, q)


def apply_op(op: FieldOp, v: FockVector, q, max_len: int | None = None) -> FockVector:
    """Apply ``op`` to ``v``; words longer than ``max_len`` are discarded
    (used only where such words provably cannot contribute)."""
    out: dict = {}
    for w, c in v._terms.items():
        n = len(w)
        for coef, kind, a in op.terms:
            if kind == CREATE:
                if max_len is not None and n + 1 > max_len:
                    continue
                if n + 1 > v.cutoff:
                    raise CutoffError(f"creation beyond cutoff {v.cutoff}")
                nw = (a,) + w
                out[nw] = out.get(nw, 0) + coef * c
            else:
                weight = 1
                for pos, b in enumerate(w):
                    if b == a:
                        nw = w[:pos] + w[pos + 1:]
                        out[nw] = out.get(nw, 0) + coef * weight * c
                    weight = weight * q
    return v._like(out)


def apply_word(ops: Sequence[FieldOp], v: FockVector, q) -> FockVector:
    """Apply ``ops[0] ops[1] ... ops[-1]`` (rightmost first)."""
    for op in reversed(ops):
        v = apply_op(op, v, q)
    return v


def q_commutator_check(f: Sequence, g: Sequence, q, v: FockVector) -> float:
    """q-norm of ``(c^*(g)c(f) - q c(f)c^*(g) - (f, g)) v``."""
    _check_q(q)
    if max((len(w) for w in v._terms), default=0) + 2 > v.cutoff:
        raise CutoffError("vector must sit two letters below the cutoff")
    lhs = annihilate(g, create(f, v), q) - create(f, annihilate(g, v, q)).scale(q)
    fg = sum(a * _conj(b) for a, b in zip(f, g))
    return q_norm(lhs - v.scale(fg), q)


def vacuum_moment(ops: Sequence[FieldOp], q, cutoff: int | None = None):
    """``(A Omega, Omega)_q`` for ``A = ops[0] ... ops[-1]``.

    Words longer than the number of operators still to be applied cannot
    return to the vacuum and are dropped along the way.
    """
    _check_q(q)
    alphabet = max((op.letters for op in ops), default=1) or 1
    cutoff = len(ops) if cutoff is None else cutoff
    v = FockVector.vacuum(alphabet, cutoff)
    remaining = len(ops)
    for op in reversed(ops):
        remaining -= 1
        v = apply_op(op, v, q, max_len=remaining + 0)
    return v.coefficient(())


# q-Hermite polynomials and Wick ordering

def q_integer(n: int, q):
    """``(q^n - 1)/(q - 1)``, equal to ``n`` at ``q = 1``."""
    return sum(q ** i for i in range(n)) if n else 0 * q


@dataclass(frozen=True)
class QHermite:
    n: int
    q: object
    coeffs: tuple  # ascending powers of x

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def q_hermite(n: int, q) -> QHermite:
    """``x H_k = H_{k+1} + [k]_q H_{k-1}``, ``H_0 = 1``, ``H_1 = x``."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = [1], [0, 1]
    if n == 0:
        return QHermite(0, q, (1,))
    for k in range(1, n):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= q_integer(k, q) * c
        prev, cur = cur, nxt
    return QHermite(n, q, tuple(cur))


def hermite_apply(h: QHermite, op: FieldOp, v: FockVector, q) -> FockVector:
    acc = v.scale(h.coeffs[0])
    cur = v
    for c in h.coeffs[1:]:
        cur = apply_op(op, cur, q)
        if c != 0:
            acc = acc + cur.scale(c)
    return acc


def _check_index(index: Sequence[tuple[int, int]]):
    for (j, n), (j2, _) in zip(index, index[1:]):
        if j == j2:
            raise ValueError("adjacent Hermite factors must use distinct letters")
    for j, n in index:
        if n < 1 or j < 0:
            raise ValueError(f"malformed Hermite factor {(j, n)}")


def hermite_product_vector(index: Sequence[tuple[int, int]], q, alphabet: int,
                           cutoff: int | None = None) -> FockVector:
    """``H_{n_1}(X(e_{j_1})) ... H_{n_k}(X(e_{j_k})) Omega``."""
    _check_q(q)
    _check_index(index)
    total = sum(n for _, n in index)
    v = FockVector.vacuum(alphabet, total if cutoff is None else cutoff)
    for j, n in reversed(index):
        v = hermite_apply(q_hermite(n, q), field_op(unit(j, alphabet)), v, q)
    return v


def wick_check(n: int, q, j: int = 0, alphabet: int | None = None):
    """``max |H_n(X(e_j)) Omega - e_j^{(x)n}|``; exactly zero for rational ``q``."""
    return wick_product_check([(j, n)] if n else [], q, alphabet or j + 1)


def wick_product_check(index: Sequence[tuple[int, int]], q, alphabet: int | None = None):
    alphabet = alphabet or max((j for j, _ in index), default=0) + 1
    v = hermite_product_vector(index, q, alphabet)
    target = FockVector.word(itertools.chain.from_iterable([j] * n for j, n in index),
                             alphabet, v.cutoff)
    return (v - target).max_abs()


def delta_embed(v: FockVector) -> FockVector:
    """Letter-wise ``e_a -> (e_a, i e_a)/sqrt(2)`` into the doubled alphabet."""
    s = 2 ** -0.5
    out: dict = {}
    for w, c in v._terms.items():
        for copies in itertools.product((0, 1), repeat=len(w)):
            nw = tuple(2 * a + k for a, k in zip(w, copies))
            out[nw] = out.get(nw, 0) + c * s ** len(w) * 1j ** sum(copies)
    return FockVector._raw({w: c for w, c in out.items() if c != 0}, 2 * v.alphabet, v.cutoff)


def monomial_ops(word: Sequence[int]) -> list[FieldOp]:
    return [z_op(j) for j in word]


def z_monomial_vector(word: Sequence[int], q, d: int) -> FockVector:
    """``Z(e_{w_1}) ... Z(e_{w_k}) Omega`` on the doubled Fock space."""
    v = FockVector.vacuum(2 * d, max(len(word), 1))
    return apply_word(monomial_ops(word), v, q)


def sb_transform(coeffs: Mapping[tuple, object], q=0) -> dict:
    """q-Segal-Bargmann transform on Hermite products.

    Keys are tuples ``((j_1, n_1), ..., (j_k, n_k))`` with adjacent letters
    distinct; the image is the Z-monomial ``Z_{j_1}^{n_1} ... Z_{j_k}^{n_k}``,
    returned as a dict from letter words to coefficients.
    """
    _check_q(q)
    out: dict = {}
    for index, c in coeffs.items():
        index = tuple(tuple(p) for p in index)
        _check_index(index)
        word = tuple(itertools.chain.from_iterable([j] * n for j, n in index))
        out[word] = out.get(word, 0) + c
    return out


def hermite_indices(d: int, max_degree: int, distinct: bool = False) -> list[tuple]:
    """All adjacent-distinct Hermite indices of total degree <= ``max_degree``.

    With ``distinct`` only indices whose letters never recur are kept.  A
    letter that comes back after another one breaks the Hermite-to-word
    correspondence once ``q != 0``: ``X_0 X_1 X_0 Omega = e_0 e_1 e_0 + q e_1``.
    """
    out = []
    for length in range(max_degree + 1):
        for w in itertools.product(range(d), repeat=length):
            runs = tuple((j, len(list(g))) for j, g in itertools.groupby(w))
            if distinct and len({j for j, _ in runs}) < len(runs):
                continue
            out.append(runs)
    return out


def sb_gram_check(d: int, max_degree: int, q, distinct: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Gram matrices of Hermite products and of their transforms."""
    idx = hermite_indices(d, max_degree, distinct)
    pre = [hermite_product_vector(i, q, d, cutoff=max(max_degree, 1)) for i in idx]
    images = sb_transform({i: 1 for i in idx}, q)
    post = [z_monomial_vector(w, q, d) for w in images]
    gp = np.array([[complex(q_inner(u, v, q)) for v in pre] for u in pre])
    gi = np.array([[complex(q_inner(u, v, q)) for v in post] for u in post])
    return gp, gi


# polynomials in the Z variables

def poly_degree(P: NCPoly) -> int:
    return max((len(m) for m, c in P.items() if c != 0), default=0)


def random_nc_poly(d: int, degree: int, rng: np.random.Generator) -> dict:
    """Complex Gaussian coefficients on every noncommutative monomial up to ``degree``."""
    mons = [m for k in range(degree + 1) for m in itertools.product(range(d), repeat=k)]
    vals = rng.standard_normal(len(mons)) + 1j * rng.standard_normal(len(mons))
    return dict(zip(mons, vals.tolist()))


def dilate(P: NCPoly, t: float) -> dict:
    """The polynomial ``P_t`` with ``P_t(Z) = exp(-tN) P(Z)``."""
    return {m: c * math.exp(-t * len(m)) for m, c in P.items()}


def poly_adjoint(P: NCPoly, shift: int) -> dict:
    """``P^*`` with variable ``i`` replaced by ``i + shift`` (the adjoint variables)."""
    return {tuple(shift + i for i in reversed(m)): complex(c).conjugate() for m, c in P.items()}


def _apply_poly(P: NCPoly, ops: Sequence, vec, apply: Callable, zero: Callable):
    out = zero()
    groups: dict = {}
    for m, c in P.items():
        if not m:
            out = out + vec * c if not isinstance(vec, FockVector) else out + vec.scale(c)
        else:
            groups.setdefault(m[-1], {})[m[:-1]] = c
    for last, sub in groups.items():
        out = out + _apply_poly(sub, ops, apply(ops[last], vec), apply, zero)
    return out


class TruncatedFock:
    """All words of length <= ``max_len`` over ``alphabet`` letters, stored densely.

    Word ``w`` of length ``l`` sits at ``offset[l] + sum_p w[p] * L**(l-1-p)``.
    Creation past ``max_len`` is dropped, so only use this engine for
    vacuum moments whose operator count is at most ``2 * max_len``.
    """

    def __init__(self, alphabet: int, max_len: int, q: float):
        _check_q(q)
        self.alphabet = alphabet
        self.max_len = max_len
        self.q = float(q)
        self.offsets = [0]
        for length in range(max_len + 1):
            self.offsets.append(self.offsets[-1] + alphabet ** length)
        self.dim = self.offsets[-1]
        self._mats: dict = {}

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def index(self, word: Sequence[int]) -> int:
        code = 0
        for a in word:
            code = code * self.alphabet + a
        return self.offsets[len(word)] + code

    def creation(self, a: int) -> sp.csr_matrix:
        key = (CREATE, a)
        if key not in self._mats:
            L = self.alphabet
            rows, cols = [], []
            for length in range(self.max_len):
                codes = np.arange(L ** length, dtype=np.int64)
                rows.append(self.offsets[length + 1] + a * L ** length + codes)
                cols.append(self.offsets[length] + codes)
            self._mats[key] = self._build(rows, cols, None)
        return self._mats[key]

    def annihilation(self, a: int) -> sp.csr_matrix:
        key = (ANNIHILATE, a)
        if key not in self._mats:
            L, q = self.alphabet, self.q
            rows, cols, data = [], [], []
            for length in range(1, self.max_len + 1):
                codes = np.arange(L ** length, dtype=np.int64)
                for pos in range(length):
                    weight = q ** pos
                    if weight == 0:
                        continue
                    tail = L ** (length - 1 - pos)
                    hit = (codes // tail) % L == a
                    sel = codes[hit]
                    new = (sel // (tail * L)) * tail + sel % tail
                    rows.append(self.offsets[length - 1] + new)
                    cols.append(self.offsets[length] + sel)
                    data.append(np.full(len(sel), weight))
            self._mats[key] = self._build(rows, cols, data)
        return self._mats[key]

    def _build(self, rows, cols, data):
        if not rows:
            return sp.csr_matrix((self.dim, self.dim))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        d = np.ones(len(r)) if data is None else np.concatenate(data)
        return sp.coo_matrix((d, (r, c)), shape=(self.dim, self.dim)).tocsr()

    def apply(self, op: FieldOp, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        for coef, kind, a in op.terms:
            mat = self.creation(a) if kind == CREATE else self.annihilation(a)
            out += complex(coef) * (mat @ vec)
        return out

    def apply_poly(self, P: NCPoly, ops: Sequence[FieldOp], vec: np.ndarray) -> np.ndarray:
        return _apply_poly(P, ops, vec, self.apply, lambda: np.zeros_like(vec))


@lru_cache(maxsize=8)
def _engine(alphabet: int, max_len: int, q: float) -> TruncatedFock:
    return TruncatedFock(alphabet, max_len, q)


def _infer_d(P: NCPoly) -> int:
    return max((max(m) for m in P if m), default=-1) + 1


def moment_q(P: NCPoly, r: int, q: float, d: int | None = None, ops: str = "Z",
             engine: str = "sparse"):
    """``tau_q((P^* P)^(r/2))`` for ``P`` a polynomial in ``Z_1..Z_d`` (or ``B`` at q = 0)."""
    if r <= 0 or r % 2:
        raise ValueError("r must be a positive even integer")
    _check_q(q)
    d = max(d or 0, _infer_d(P), 1)
    if ops == "Z":
        base = [z_op(j) for j in range(d)]
    elif ops == "B":
        base = [b_op(j) for j in range(d)]
    else:
        raise ValueError(f"unknown operator family {ops!r}")
    ops_all = base + [o.adjoint() for o in base]
    Pd = poly_adjoint(P, d)
    bound = r * poly_degree(P) // 2
    if engine == "sparse":
        eng = _engine(2 * d, bound, float(q))
        vec = eng.vacuum()
        for _ in range(r // 2):
            vec = eng.apply_poly(P, ops_all, vec)
            vec = eng.apply_poly(Pd, ops_all, vec)
        return complex(vec[0])
    if engine == "dict":
        vec = FockVector.vacuum(2 * d, max(bound, 1))

        def step(op, v):
            return apply_op(op, v, q, max_len=bound)

        for _ in range(r // 2):
            vec = _apply_poly(P, ops_all, vec, step, lambda: FockVector._raw({}, 2 * d, vec.cutoff))
            vec = _apply_poly(Pd, ops_all, vec, step, lambda: FockVector._raw({}, 2 * d, vec.cutoff))
        return complex(vec.coefficient(()))
    raise ValueError(f"unknown engine {engine!r}")


def norm_even_q(P: NCPoly, r: int, q: float, d: int | None = None, ops: str = "Z",
                engine: str = "sparse") -> float:
    """``||P(Z)||_r`` in the q-Gaussian algebra for even ``r``."""
    return max(moment_q(P, r, q, d, ops, engine).real, 0.0) ** (1.0 / r)


@dataclass(frozen=True)
class ContractionCheck:
    lhs: float
    rhs: float
    holds: bool


def contraction_check(P: NCPoly, r: int, q: float, t: float, tol: float = INEQ_TOL,
                       d: int | None = None) -> ContractionCheck:
    """Compare ``||exp(-tN) P(Z)||_r`` with ``||P(Z)||_2``."""
    if r % 2 or r < 2:
        raise ValueError("r must be an even integer >= 2")
    if not -1 < q < 1:
        raise ValueError("q must lie in (-1, 1); q = -1 is covered by the mixed-spin algebra")
    lhs = norm_even_q(dilate(P, t), r, q, d)
    rhs = norm_even_q(P, 2, q, d)
    return ContractionCheck(lhs, rhs, lhs <= rhs + tol)


def z_witness(eps: float) -> dict:
    return {(): 1.0, (0,): eps}


def circular_moment_compare(P: NCPoly, r: int, d: int | None = None) -> tuple[float, float]:
    """``(||P(Z)||_r, ||P(B)||_r)`` at ``q = 0``."""
    if r % 2:
        raise ValueError("r must be even")
    return norm_even_q(P, r, 0.0, d, "Z"), norm_even_q(P, r, 0.0, d, "B")


__all__ = [
    "CutoffError", "FieldOp", "FockVector", "ContractionCheck", "QHermite", "TruncatedFock",
    "annihilate", "annihilation_op", "apply_op", "apply_word", "b_op", "b_op_star",
    "circular_moment_compare", "create", "creation_op", "delta_embed", "dilate",
    "field_op", "gram_psd_check", "hermite_indices", "hermite_product_vector",
    "contraction_check", "moment_q", "norm_even_q", "poly_degree", "q_commutator_check",
    "q_hermite", "q_inner", "q_integer", "q_norm", "random_nc_poly", "sb_gram_check",
    "sb_transform", "sector_gram", "unit", "vacuum_moment", "wick_check",
    "wick_product_check", "word_inner", "word_inner_enumerate", "words", "z_monomial_vector",
    "z_op", "z_op_star", "z_witness",
]
