"""Discrete Weyl operators and their analytic spectra.

``W_nm = sum_k w^(k n) |k><(k + m) mod d|`` with ``w = exp(2 pi i / d)``.

Every phase below is built from an exact rational angle (integers reduced
modulo the period before conversion to float), never by chaining complex
multiplications, so the error does not grow with ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import IndexOutOfRangeError, InvalidDimensionError

__all__ = [
    "WeylIndex",
    "WeylSpectrum",
    "all_indices",
    "root_of_unity",
    "weyl_operator",
    "weyl_power",
    "weyl_order",
    "weyl_eigenvalues",
    "weyl_eigenbasis",
    "weyl_stack",
]


class WeylIndex(NamedTuple):
    """Index ``(n, m)``: ``n`` is the phase exponent, ``m`` the shift."""

    n: int
    m: int


@dataclass(frozen=True)
class WeylSpectrum:
    """Eigen-data of one Weyl operator.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``. ``degenerate`` is
    set when the order is smaller than ``d``, i.e. eigenvalues repeat and the
    basis returned is one canonical choice among many.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    order: int
    phase: complex
    degenerate: bool


def check_dimension(d: int) -> int:
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def check_index(idx, d: int) -> WeylIndex:
    d = check_dimension(d)
    try:
        n, m = idx
    except (TypeError, ValueError):
        raise IndexOutOfRangeError(f"index must be a pair (n, m), got {idx!r}") from None
    if int(n) != n or int(m) != m or not (0 <= n < d and 0 <= m < d):
        raise IndexOutOfRangeError(f"index {idx!r} out of range for d={d}")
    return WeylIndex(int(n), int(m))


def all_indices(d: int, include_identity: bool = True) -> list[WeylIndex]:
    """All ``d**2`` indices in n-major order."""
    out = [WeylIndex(n, m) for n in range(d) for m in range(d)]
    return out if include_identity else out[1:]


def root_of_unity(num, den) -> complex | np.ndarray:
    """``exp(2 pi i num / den)`` for integer ``num`` (scalar or array), exact reduction."""
    num = np.asarray(num, dtype=np.int64) % den
    return np.exp(2j * np.pi * num / den)


def weyl_operator(idx, d: int) -> np.ndarray:
    """Dense ``d x d`` Weyl operator ``W_nm``."""
    n, m = check_index(idx, d)
    k = np.arange(d)
    out = np.zeros((d, d), dtype=complex)
    out[k, (k + m) % d] = root_of_unity(k * n, d)
    return out


def weyl_power(idx, d: int, q: int) -> np.ndarray:
    """Closed form of ``W_nm ** q``.

    ``W^q = sum_k w^((q k + q (q - 1) m / 2) n) |k><(k + q m) mod d|``;
    ``q (q - 1) / 2`` is always an integer so the exponent stays exact.
    """
    n, m = check_index(idx, d)
    if int(q) != q or q < 0:
        raise ValueError(f"power must be a nonnegative integer, got {q!r}")
    q = int(q)
    k = np.arange(d)
    expo = (q * k + (q * (q - 1) // 2) * m) * n
    out = np.zeros((d, d), dtype=complex)
    out[k, (k + q * m) % d] = root_of_unity(expo, d)
    return out


def weyl_order(idx, d: int) -> tuple[int, complex]:
    """Order ``l`` (smallest power proportional to identity) and phase ``p``.

    ``W^l = p I``. ``l = d / gcd(n, m, d)`` is the least ``l`` with both
    ``l m`` and ``l n`` divisible by ``d``; ``p = w^(-l n m / 2)`` for even
    ``l`` and ``1`` for odd ``l``.
    """
    n, m = check_index(idx, d)
    ell = d // math.gcd(math.gcd(n, m), d)
    if ell % 2 == 0:
        phase = complex(root_of_unity(-(ell // 2) * n * m, d))
    else:
        phase = 1.0 + 0.0j
    return ell, phase


def _eigen_exponents(n: int, m: int, d: int) -> list[int]:
    # distinct values of (m k - n j) mod d over all j, k
    return sorted({(m * k - n * j) % d for j in range(d) for k in range(d)})


def weyl_eigenvalues(idx, d: int) -> np.ndarray:
    """Full eigenvalue multiset, ``l`` distinct values each repeated ``d / l`` times.

    ``lambda_s = w^(m n (d - 1) / 2 + s)``. The offset ``m n (d - 1) / 2``
    may be a half-integer, so the angle is handled over ``2 d``.
    """
    n, m = check_index(idx, d)
    svals = _eigen_exponents(n, m, d)
    mult = d // len(svals)
    offset2 = m * n * (d - 1)
    lam = root_of_unity([offset2 + 2 * s for s in svals], 2 * d)
    return np.repeat(np.atleast_1d(lam), mult)


def _cycles(m: int, d: int) -> list[list[int]]:
    seen = [False] * d
    cycles = []
    for a in range(d):
        if seen[a]:
            continue
        cyc = []
        k = a
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = (k + m) % d
        cycles.append(cyc)
    return cycles


def weyl_eigenbasis(idx, d: int) -> WeylSpectrum:
    """Canonical orthonormal eigenbasis of ``W_nm``.

    The shift ``k -> k + m`` splits ``{0..d-1}`` into ``gcd(m, d)`` cycles of
    length ``L``. On a cycle ``a, a+m, ...`` the eigen-relation reads
    ``alpha_(k+m) = lambda w^(-n k) alpha_k``; going once around the cycle
    forces ``lambda^L = w^(n sum(cycle))``, which has ``L`` roots, each giving
    one eigenvector supported on that cycle. Cycles are ordered by their
    smallest element, and eigenvalues inside a cycle by ``s`` ascending.
    """
    n, m = check_index(idx, d)
    ell, phase = weyl_order((n, m), d)
    offset = Fraction(m * n * (d - 1), 2)
    values: list[complex] = []
    vectors: list[np.ndarray] = []
    for cyc in _cycles(m, d):
        L = len(cyc)
        # partial sums of the (unreduced) cycle entries a + t m
        a = cyc[0]
        prefix = [n * (t * a + m * t * (t - 1) // 2) for t in range(L + 1)]
        theta = prefix[L] % d
        # lambda_r = exp(2 pi i (theta + r d) / (L d)), r = 0..L-1
        entries = []
        for r in range(L):
            num = theta + r * d
            s = (Fraction(num, L) - offset) % d
            if s.denominator != 1:
                raise ArithmeticError(f"non-integral eigenvalue exponent for W_{n}{m}, d={d}")
            entries.append((int(s), num))
        entries.sort()
        for _, num in entries:
            lam = complex(root_of_unity(num, L * d))
            vec = np.zeros(d, dtype=complex)
            for t, k in enumerate(cyc):
                # lambda^t * w^(-n * sum_{u<t} c_u)
                vec[k] = root_of_unity(t * num - L * prefix[t], L * d)
            vectors.append(vec / math.sqrt(L))
            values.append(lam)
    return WeylSpectrum(
        eigenvalues=np.array(values),
        eigenvectors=np.column_stack(vectors),
        order=ell,
        phase=phase,
        degenerate=ell < d,
    )


@lru_cache(maxsize=None)
def weyl_stack(d: int) -> np.ndarray:
    """All Weyl operators as a read-only ``(d*d, d, d)`` array, n-major."""
    d = check_dimension(d)
    stack = np.stack([weyl_operator(idx, d) for idx in all_indices(d)])
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=None)
def eigenstate_stack(d: int) -> np.ndarray:
    """Canonical eigenvectors of every ``W_nm``: shape ``(d*d, d, d)``, vectors in columns."""
    stack = np.stack([weyl_eigenbasis(idx, d).eigenvectors for idx in all_indices(d)])
    stack.setflags(write=False)
    return stack
