"""Mixed-spin algebra C(I, sigma).

Generators ``x_0 .. x_{G-1}`` obey ``x_i x_j = sigma(i, j) x_j x_i`` for
``i != j`` and ``x_i**2 = 1``.  Basis elements ``x_A`` are indexed by
increasing multi-indices, stored as integer bitmasks (bit ``i`` set means
``i`` is in ``A``).  Elements are sparse maps ``bitmask -> coefficient``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .scalars import GaussianRational, is_zero, to_scalar

PRUNE_EPS = 1e-14
SCHATTEN_MAX_GENERATORS = 14
# bitmask arithmetic in int64 numpy arrays
_NUMPY_MAX_GENERATORS = 62
_NUMPY_CHUNK = 1 << 21


class SpinMatrix:
    """Symmetric +-1 matrix of commutation signs with -1 on the diagonal."""

    __slots__ = ("entries", "neg_masks", "_key")

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("spin matrix must be square")
        if arr.size and not np.all(np.isin(arr, (-1, 1))):
            raise ValueError("spin matrix entries must be +1 or -1")
        if not np.array_equal(arr, arr.T):
            raise ValueError("spin matrix must be symmetric")
        if not np.all(np.diag(arr) == -1):
            raise ValueError("spin matrix must be -1 on the diagonal")
        arr.setflags(write=False)
        self.entries = arr
        size = arr.shape[0]
        masks = []
        for b in range(size):
            m = 0
            for u in range(size):
                if u != b and arr[u, b] == -1:
                    m |= 1 << u
            masks.append(m)
        self.neg_masks = tuple(masks)
        self._key = arr.tobytes() + size.to_bytes(4, "little")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __call__(self, i: int, j: int) -> int:
        return int(self.entries[i, j])

    def __eq__(self, other):
        return isinstance(other, SpinMatrix) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SpinMatrix(size={self.size})"

    @classmethod
    def clifford(cls, size: int) -> "SpinMatrix":
        return cls(-np.ones((size, size), dtype=np.int8))

    @classmethod
    def commuting(cls, size: int) -> "SpinMatrix":
        arr = np.ones((size, size), dtype=np.int8)
        np.fill_diagonal(arr, -1)
        return cls(arr)

    @classmethod
    def random(cls, size: int, q: float, rng: np.random.Generator) -> "SpinMatrix":
        """Upper-triangle entries i.i.d. with ``P(+1) = (1 + q) / 2``."""
        if not -1.0 <= q <= 1.0:
            raise ValueError("q must lie in [-1, 1]")
        arr = -np.ones((size, size), dtype=np.int8)
        iu = np.triu_indices(size, k=1)
        draws = rng.random(len(iu[0])) < (1.0 + q) / 2.0
        arr[iu] = np.where(draws, 1, -1)
        arr[(iu[1], iu[0])] = arr[iu]
        return cls(arr)

    def doubled(self) -> "SpinMatrix":
        """Block extension to ``I x {0, 1}``; generator ``(i, c)`` gets id ``2*i + c``."""
        return SpinMatrix(np.kron(self.entries, np.ones((2, 2), dtype=np.int8)))

    def restrict(self, sites: Sequence[int]) -> "SpinMatrix":
        idx = np.asarray(sites, dtype=int)
        return SpinMatrix(self.entries[np.ix_(idx, idx)])


def multi_index(indices: Iterable[int]) -> int:
    """Bitmask for a strictly increasing multi-index."""
    mask = 0
    prev = -1
    for i in indices:
        if i <= prev:
            raise ValueError("multi-index must be strictly increasing")
        mask |= 1 << i
        prev = i
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def basis_product(A: int, B: int, spin: SpinMatrix) -> tuple[int, int]:
    """Return ``(sign, C)`` with ``x_A x_B = sign * x_C``.

    Each generator of ``B`` (ascending) is moved left past the larger
    generators already present; a swap with ``u`` contributes ``sigma(u, b)``
    and a meeting with an equal generator cancels to 1.
    """
    neg = spin.neg_masks
    cur = A
    flips = 0
    rest = B
    while rest:
        low = rest & -rest
        b = low.bit_length() - 1
        flips += (cur & neg[b] & ~((low << 1) - 1)).bit_count()
        cur ^= low
        rest ^= low
    return (-1 if flips & 1 else 1), cur


def adjoint_sign(A: int, spin: SpinMatrix) -> int:
    """Sign ``s`` with ``x_A^* = s x_A``: product of sigma over all pairs in ``A``."""
    neg = spin.neg_masks
    flips = 0
    rest = A
    while rest:
        low = rest & -rest
        b = low.bit_length() - 1
        flips += (A & neg[b] & (low - 1)).bit_count()
        rest ^= low
    return -1 if flips & 1 else 1


def product_signs(A: np.ndarray, B: np.ndarray, spin: SpinMatrix) -> np.ndarray:
    """Vectorised ``basis_product`` signs for broadcastable int64 bitmask arrays."""
    A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
    cur = A.copy()
    flips = np.zeros(A.shape, dtype=np.int64)
    present = int(np.bitwise_or.reduce(B, axis=None)) if B.size else 0
    neg = spin.neg_masks
    while present:
        low = present & -present
        b = low.bit_length() - 1
        has = (B & low) != 0
        above = np.int64(~((low << 1) - 1))
        hits = np.bitwise_count(cur & above & np.int64(neg[b])).astype(np.int64)
        flips += np.where(has, hits, 0)
        cur ^= np.where(has, np.int64(low), np.int64(0))
        present ^= low
    return 1 - 2 * (flips & 1)


class AlgebraElement:
    """Sparse element ``sum_A c_A x_A`` of C(I, sigma).

    Values are immutable; all arithmetic returns new elements.  ``exact``
    selects the Gaussian-rational backend.
    """

    __slots__ = ("spin", "_terms", "exact")

    def __init__(self, spin: SpinMatrix, terms: Mapping[int, object] | None = None,
                 exact: bool = False):
        self.spin = spin
        self.exact = exact
        limit = 1 << spin.size
        clean = {}
        for key, value in (terms or {}).items():
            if not 0 <= key < limit:
                raise ValueError(f"basis index {key} invalid for {spin.size} generators")
            c = to_scalar(value, exact)
            if not is_zero(c, exact, PRUNE_EPS):
                clean[key] = c
        self._terms = clean

    @classmethod
    def _raw(cls, spin, terms, exact):
        obj = cls.__new__(cls)
        obj.spin = spin
        obj.exact = exact
        obj._terms = terms
        return obj

    # constructors
    @classmethod
    def identity(cls, spin: SpinMatrix, exact: bool = False) -> "AlgebraElement":
        return cls(spin, {0: 1}, exact)

    @classmethod
    def zero(cls, spin: SpinMatrix, exact: bool = False) -> "AlgebraElement":
        return cls(spin, {}, exact)

    @classmethod
    def basis(cls, spin: SpinMatrix, indices: Iterable[int], coef=1,
              exact: bool = False) -> "AlgebraElement":
        return cls(spin, {multi_index(indices): coef}, exact)

    @classmethod
    def generator(cls, spin: SpinMatrix, i: int, exact: bool = False) -> "AlgebraElement":
        if not 0 <= i < spin.size:
            raise ValueError(f"generator {i} out of range")
        return cls(spin, {1 << i: 1}, exact)

    @classmethod
    def random(cls, spin: SpinMatrix, rng: np.random.Generator, density: float = 1.0,
               exact: bool = False, max_den: int = 5) -> "AlgebraElement":
        """Random element; Gaussian complex coefficients, or small rationals if exact."""
        dim = 1 << spin.size
        keys = [k for k in range(dim) if density >= 1.0 or rng.random() < density]
        if exact:
            terms = {k: GaussianRational(_small_fraction(rng, max_den), _small_fraction(rng, max_den))
                     for k in keys}
        else:
            vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
            terms = dict(zip(keys, vals.tolist()))
        return cls(spin, terms, exact)

    # accessors
    @property
    def terms(self) -> Mapping[int, object]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, A: int):
        return self._terms.get(A, to_scalar(0, self.exact))

    def to_float(self) -> "AlgebraElement":
        if not self.exact:
            return self
        return AlgebraElement(self.spin, {k: complex(v) for k, v in self._terms.items()}, False)

    def dense(self) -> np.ndarray:
        vec = np.zeros(1 << self.spin.size, dtype=complex)
        for k, v in self._terms.items():
            vec[k] = complex(v)
        return vec

    # arithmetic
    def _check(self, other: "AlgebraElement"):
        if self.spin != other.spin:
            raise ValueError("elements belong to algebras with different spin matrices")
        if self.exact != other.exact:
            raise ValueError("cannot mix exact and float backends")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement(self.spin, {0: other}, self.exact)
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.spin, out, self.exact)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw(self.spin, {k: -v for k, v in self._terms.items()}, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        c = to_scalar(c, self.exact)
        return AlgebraElement(self.spin, {k: c * v for k, v in self._terms.items()}, self.exact)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.spin == other.spin and self._terms == other._terms

    __hash__ = None

    def allclose(self, other: "AlgebraElement", tol: float = 1e-12) -> bool:
        return residual(self, other) <= tol

    def adjoint(self) -> "AlgebraElement":
        return adjoint(self)

    def trace(self):
        return trace(self)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            name = "1" if k == 0 else "x" + "".join(f"[{i}]" for i in indices_of(k))
            parts.append(f"{self._terms[k]}*{name}")
        return " + ".join(parts)


def _small_fraction(rng, max_den):
    return Fraction(int(rng.integers(-max_den, max_den + 1)), int(rng.integers(1, max_den + 1)))


def residual(a: AlgebraElement, b: AlgebraElement) -> float:
    """L2 distance ``||a - b||_2`` (basis is orthonormal)."""
    keys = set(a._terms) | set(b._terms)
    total = 0.0
    for k in keys:
        d = complex(a._terms.get(k, 0)) - complex(b._terms.get(k, 0))
        total += d.real * d.real + d.imag * d.imag
    return math.sqrt(total)


def _mul_python(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    spin = a.spin
    out: dict = {}
    for A, ca in a._terms.items():
        for B, cb in b._terms.items():
            s, C = basis_product(A, B, spin)
            v = ca * cb
            out[C] = out.get(C, 0) + (v if s > 0 else -v)
    exact = a.exact
    return AlgebraElement._raw(
        spin, {k: v for k, v in out.items() if not is_zero(v, exact, PRUNE_EPS)}, exact)


def _mul_numpy(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    spin = a.spin
    ka = np.fromiter(a._terms.keys(), dtype=np.int64, count=len(a._terms))
    ca = np.fromiter(a._terms.values(), dtype=complex, count=len(a._terms))
    kb = np.fromiter(b._terms.keys(), dtype=np.int64, count=len(b._terms))
    cb = np.fromiter(b._terms.values(), dtype=complex, count=len(b._terms))
    rows = max(1, _NUMPY_CHUNK // max(1, len(kb)))
    keys_parts, vals_parts = [], []
    for start in range(0, len(ka), rows):
        A = ka[start:start + rows, None]
        signs = product_signs(A, kb[None, :], spin)
        C = (A ^ kb[None, :]).ravel()
        vals = (ca[start:start + rows, None] * cb[None, :] * signs).ravel()
        uk, inv = np.unique(C, return_inverse=True)
        re = np.bincount(inv, weights=vals.real, minlength=len(uk))
        im = np.bincount(inv, weights=vals.imag, minlength=len(uk))
        keys_parts.append(uk)
        vals_parts.append(re + 1j * im)
    if len(keys_parts) == 1:
        uk, uv = keys_parts[0], vals_parts[0]
    else:
        allk = np.concatenate(keys_parts)
        allv = np.concatenate(vals_parts)
        uk, inv = np.unique(allk, return_inverse=True)
        uv = (np.bincount(inv, weights=allv.real, minlength=len(uk))
              + 1j * np.bincount(inv, weights=allv.imag, minlength=len(uk)))
    keep = np.abs(uv) >= PRUNE_EPS
    return AlgebraElement._raw(spin, dict(zip(uk[keep].tolist(), uv[keep].tolist())), False)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Algebra product, bilinear extension of :func:`basis_product`."""
    a._check(b)
    if not a._terms or not b._terms:
        return AlgebraElement._raw(a.spin, {}, a.exact)
    if a.exact or a.spin.size > _NUMPY_MAX_GENERATORS or len(a._terms) * len(b._terms) < 64:
        return _mul_python(a, b)
    return _mul_numpy(a, b)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    spin = a.spin
    return AlgebraElement._raw(
        spin,
        {A: (c.conjugate() if adjoint_sign(A, spin) > 0 else -c.conjugate())
         for A, c in a._terms.items()},
        a.exact)


def trace(a: AlgebraElement):
    """The tracial state: coefficient of the identity."""
    return a.coefficient(0)


def trace_product(a: AlgebraElement, b: AlgebraElement):
    """``trace(a * b)`` without forming the product."""
    a._check(b)
    spin = a.spin
    small, large = (a, b) if len(a._terms) <= len(b._terms) else (b, a)
    total = to_scalar(0, a.exact)
    for A, c in small._terms.items():
        d = large._terms.get(A)
        if d is None:
            continue
        s, _ = basis_product(A, A, spin)
        total = total + (c * d if s > 0 else -(c * d))
    return total


def inner(a: AlgebraElement, b: AlgebraElement):
    """``(a, b) = trace(b^* a)``; linear in ``a``, conjugate-linear in ``b``."""
    a._check(b)
    total = to_scalar(0, a.exact)
    for A, c in a._terms.items():
        d = b._terms.get(A)
        if d is not None:
            total = total + c * d.conjugate()
    return total


def number_semigroup(a: AlgebraElement, t: float) -> AlgebraElement:
    """Apply ``exp(-t N)``: the coefficient of ``x_A`` is scaled by ``exp(-t |A|)``.

    Exact inputs are returned unchanged for ``t == 0`` and converted to the
    float backend otherwise.
    """
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    if t == 0:
        return a
    a = a.to_float()
    return AlgebraElement._raw(
        a.spin, {A: c * math.exp(-t * A.bit_count()) for A, c in a._terms.items()}, False)


def power(h: AlgebraElement, k: int) -> AlgebraElement:
    if k < 0:
        raise ValueError("negative power")
    out = AlgebraElement.identity(h.spin, h.exact)
    base = h
    while k:
        if k & 1:
            out = mul(out, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return out


def moment_even(a: AlgebraElement, r: int):
    """``trace((a^* a)^(r/2))`` computed in the algebra."""
    if not isinstance(r, (int, np.integer)) or r <= 0 or r % 2:
        raise ValueError("r must be a positive even integer")
    h = mul(adjoint(a), a)
    m = r // 2
    if m == 1:
        return trace(h)
    left = power(h, m // 2)
    right = left if m % 2 == 0 else mul(left, h)
    return trace_product(left, right)


def norm_even(a: AlgebraElement, r: int) -> float:
    """``||a||_r = trace((a^* a)^(r/2))^(1/r)`` for even ``r``."""
    m = complex(moment_even(a, r)).real
    return max(m, 0.0) ** (1.0 / r)


def left_matrix(a: AlgebraElement) -> np.ndarray:
    """Matrix of left multiplication by ``a`` in the orthonormal basis ``{x_A}``."""
    G = a.spin.size
    if G > SCHATTEN_MAX_GENERATORS:
        raise ValueError(f"dense representation limited to {SCHATTEN_MAX_GENERATORS} generators")
    dim = 1 << G
    B = np.arange(dim, dtype=np.int64)
    L = np.zeros((dim, dim), dtype=complex)
    for A, c in a._terms.items():
        signs = product_signs(np.int64(A), B, a.spin)
        L[B ^ A, B] += complex(c) * signs
    return L


def matrix_trace(a: AlgebraElement) -> complex:
    """Normalised trace of the left-multiplication matrix."""
    L = left_matrix(a)
    return complex(np.trace(L)) / L.shape[0]


def norm_schatten(a: AlgebraElement, p: float, herm_tol: float = 1e-9) -> float:
    """Normalised Schatten ``p``-norm via the spectrum of ``a^* a``.

    ``p`` may be ``math.inf`` (operator norm).
    """
    if not p > 0:
        raise ValueError("p must be positive")
    L = left_matrix(a)
    La = left_matrix(adjoint(a))
    scale = max(1.0, float(np.abs(L).max(initial=0.0)))
    if np.abs(La - L.conj().T).max(initial=0.0) > herm_tol * scale:
        raise RuntimeError("left regular representation is not a *-representation")
    M = L.conj().T @ L
    M = 0.5 * (M + M.conj().T)
    lam = np.clip(np.linalg.eigvalsh(M), 0.0, None)
    if math.isinf(p):
        return float(np.sqrt(lam.max(initial=0.0)))
    return float(np.mean(lam ** (p / 2.0)) ** (1.0 / p))


def grading_split(a: AlgebraElement, site: int) -> tuple[AlgebraElement, AlgebraElement]:
    """Split ``a`` by the parity of its support on generators ``2*site``, ``2*site + 1``."""
    if site < 0 or 2 * site + 1 >= a.spin.size:
        raise ValueError(f"site {site} has no generator pair in a {a.spin.size}-generator algebra")
    mask = 0b11 << (2 * site)
    even, odd = {}, {}
    for A, c in a._terms.items():
        if (A & mask).bit_count() % 2:
            odd[A] = c
        else:
            even[A] = c
    return (AlgebraElement._raw(a.spin, even, a.exact),
            AlgebraElement._raw(a.spin, odd, a.exact))
