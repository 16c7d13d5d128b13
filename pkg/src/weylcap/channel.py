"""Discrete Weyl channels: distributions, action on states, simulated classical channels."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Mapping

import numpy as np

from .errors import (
    CompositeDimensionError,
    DimensionMismatchError,
    DuplicateIndexError,
    InvalidDistributionError,
    MalformedSpecError,
    ParameterOutOfRangeError,
    ZeroIndexError,
)
from .weyl import WeylIndex, check_dimension, check_index, weyl_stack

__all__ = [
    "ChannelDistribution",
    "TransitionMatrix",
    "apply_channel",
    "pure_outputs",
    "residue_keys",
    "transition_matrix",
    "depolarizing_channel",
    "depolarizing_like_one",
    "depolarizing_like_two",
    "sample_random_channel",
    "channel_from_spec",
    "channel_to_spec",
    "is_prime",
]

# inputs this close to the simplex are renormalized, anything worse is rejected
SANITIZE_TOL = 1e-9


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % f for f in range(2, math.isqrt(d) + 1))


@dataclass(frozen=True)
class ChannelDistribution:
    """Probabilities ``p_nm`` of a discrete Weyl channel, stored n-major.

    ``probs[n * d + m]`` is the weight of ``W_nm``. A ``(d, d)`` array is
    accepted as well and flattened. Inputs within ``1e-9`` of a valid
    distribution are clipped and renormalized.
    """

    d: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = check_dimension(self.d)
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.size != d * d:
            raise InvalidDistributionError(f"expected {d * d} probabilities for d={d}, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise InvalidDistributionError("probabilities must be finite")
        if p.min() < -SANITIZE_TOL or abs(p.sum() - 1.0) > SANITIZE_TOL:
            raise InvalidDistributionError(
                f"not a probability vector (min={p.min():.3g}, sum={p.sum():.12g})"
            )
        p = np.clip(p, 0.0, None)
        p /= p.sum()
        p.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "probs", p)

    def __getitem__(self, idx) -> float:
        n, m = check_index(idx, self.d)
        return float(self.probs[n * self.d + m])

    @property
    def matrix(self) -> np.ndarray:
        """Probabilities as a ``(d, d)`` array indexed ``[n, m]``."""
        return self.probs.reshape(self.d, self.d)

    def __eq__(self, other):
        if not isinstance(other, ChannelDistribution):
            return NotImplemented
        return self.d == other.d and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.d, self.probs.tobytes()))


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix of the classical symmetric channel simulated by a DWC."""

    rows: np.ndarray
    source_index: WeylIndex

    @property
    def d(self) -> int:
        return self.rows.shape[0]

    @property
    def first_row(self) -> np.ndarray:
        return self.rows[0]


def _as_channel(p) -> ChannelDistribution:
    if isinstance(p, ChannelDistribution):
        return p
    arr = np.asarray(p, dtype=float)
    d = math.isqrt(arr.size)
    if d * d != arr.size:
        raise InvalidDistributionError(f"length {arr.size} is not a perfect square")
    return ChannelDistribution(d, arr)


def apply_channel(p, rho: np.ndarray) -> np.ndarray:
    """``sum_nm p_nm W_nm rho W_nm^dagger``, skipping zero-weight terms."""
    p = _as_channel(p)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (p.d, p.d):
        raise DimensionMismatchError(f"state of shape {rho.shape} for a d={p.d} channel")
    nz = np.flatnonzero(p.probs)
    W = weyl_stack(p.d)[nz]
    out = np.einsum("j,jab,bc,jdc->ad", p.probs[nz], W, rho, W.conj(), optimize=True)
    return 0.5 * (out + out.conj().T)


def pure_outputs(p, psi: np.ndarray) -> np.ndarray:
    """Channel outputs for a batch of (normalized) pure states.

    ``psi`` has shape ``(..., d)``; the result has shape ``(..., d, d)``.
    """
    p = _as_channel(p)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] != p.d:
        raise DimensionMismatchError(f"vectors of length {psi.shape[-1]} for a d={p.d} channel")
    nz = np.flatnonzero(p.probs)
    W = weyl_stack(p.d)[nz]
    phi = np.einsum("jab,...b->...ja", W, psi)
    weighted = phi * p.probs[nz][:, None]
    return np.einsum("...ja,...jb->...ab", weighted, phi.conj())


@lru_cache(maxsize=None)
def residue_keys(idx: WeylIndex, d: int) -> np.ndarray:
    """``(m i - n j) mod d`` for every index ``(i, j)``, n-major."""
    n, m = idx
    i, j = np.divmod(np.arange(d * d), d)
    keys = (m * i - n * j) % d
    keys.setflags(write=False)
    return keys


def transition_matrix(p, idx) -> TransitionMatrix:
    """Transition matrix ``T_nm`` for eigenstates of ``W_nm`` as signal states.

    Row ``r`` is the first row ``(P_1, ..., P_d)`` cyclically shifted right by
    ``r``, where ``P_k`` sums ``p_ij`` over ``(m i - n j) mod d = k - 1``.
    Only defined for prime ``d``; the residue class key is integer arithmetic.
    """
    p = _as_channel(p)
    d = p.d
    idx = check_index(idx, d)
    if not is_prime(d):
        raise CompositeDimensionError(f"transition matrix needs a prime dimension, got d={d}")
    if idx == (0, 0):
        raise ZeroIndexError("W_00 has a fully degenerate spectrum")
    first = np.bincount(residue_keys(idx, d), weights=p.probs, minlength=d)
    r = np.arange(d)
    rows = first[(r[None, :] - r[:, None]) % d]
    rows.setflags(write=False)
    return TransitionMatrix(rows, idx)


def _check_unit(name: str, x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ParameterOutOfRangeError(f"{name} must lie in [0, 1], got {x}")
    return x


def depolarizing_channel(d: int, mu: float) -> ChannelDistribution:
    """``(1 - mu) rho + mu I / d`` as Weyl weights."""
    d = check_dimension(d)
    mu = _check_unit("mu", mu)
    p = np.full(d * d, mu / d**2)
    p[0] = 1.0 - mu + mu / d**2
    return ChannelDistribution(d, p)


def depolarizing_like_one(d: int, xi: float, idx) -> ChannelDistribution:
    """``(1 - xi) W rho W^dagger + xi I / d`` for a single Weyl operator ``W``."""
    d = check_dimension(d)
    xi = _check_unit("xi", xi)
    n, m = check_index(idx, d)
    p = np.full(d * d, xi / d**2)
    p[n * d + m] = 1.0 - xi + xi / d**2
    return ChannelDistribution(d, p)


def depolarizing_like_two(d: int, eta: float, kappa: float, idx_a, idx_b) -> ChannelDistribution:
    """Two-operator generalization with ``0 <= eta, kappa <= 1 <= eta + kappa``."""
    d = check_dimension(d)
    eta = _check_unit("eta", eta)
    kappa = _check_unit("kappa", kappa)
    if eta + kappa < 1.0:
        raise ParameterOutOfRangeError(f"eta + kappa must be >= 1, got {eta + kappa}")
    a = check_index(idx_a, d)
    b = check_index(idx_b, d)
    if a == b:
        raise DuplicateIndexError(f"the two Weyl indices must differ, got {a} twice")
    c = (eta + kappa - 1.0) / d**2
    p = np.full(d * d, c)
    p[a.n * d + a.m] = 1.0 - eta + c
    p[b.n * d + b.m] = 1.0 - kappa + c
    return ChannelDistribution(d, p)


def sample_random_channel(d: int, seed) -> ChannelDistribution:
    """Uniform sample from the probability simplex (flat Dirichlet), deterministic in ``seed``."""
    d = check_dimension(d)
    rng = np.random.default_rng(seed)
    x = rng.standard_exponential(d * d)
    return ChannelDistribution(d, x / x.sum())


# --- JSON channel specs -----------------------------------------------------

_KIND_ALIASES = {
    "depolarizing": "depolarizing",
    "depol": "depolarizing",
    "depol-like-1": "depol-like-1",
    "depolarizing_like_one": "depol-like-1",
    "depol-like-2": "depol-like-2",
    "depolarizing_like_two": "depol-like-2",
}


def _get(spec: Mapping[str, Any], key: str):
    if key not in spec:
        raise MalformedSpecError(f"channel spec is missing {key!r}")
    return spec[key]


def _number(spec, key) -> float:
    value = _get(spec, key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedSpecError(f"{key!r} must be a number, got {value!r}")
    return float(value)


def _pair(spec, key) -> tuple[int, int]:
    value = _get(spec, key)
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise MalformedSpecError(f"{key!r} must be a pair of integers, got {value!r}")
    return int(value[0]), int(value[1])


def channel_from_spec(spec: Mapping[str, Any]) -> ChannelDistribution:
    """Build a channel from its JSON form.

    Accepted shapes::

        {"d": 3, "p": [...9 floats, n-major...]}
        {"d": 3, "kind": "depolarizing", "mu": 0.3}
        {"d": 3, "kind": "depol-like-1", "xi": 0.3, "idx": [1, 2]}
        {"d": 3, "kind": "depol-like-2", "eta": 0.8, "kappa": 0.9,
         "idx_a": [0, 1], "idx_b": [1, 0]}

    Structural problems raise :class:`MalformedSpecError`; well-formed specs
    with out-of-range values raise the usual validation errors.
    """
    if not isinstance(spec, Mapping):
        raise MalformedSpecError("channel spec must be a JSON object")
    d = _get(spec, "d")
    if isinstance(d, bool) or not isinstance(d, int):
        raise MalformedSpecError(f"'d' must be an integer, got {d!r}")
    d = check_dimension(d)
    if "p" in spec:
        p = spec["p"]
        if not isinstance(p, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in p
        ):
            raise MalformedSpecError("'p' must be a list of numbers")
        return ChannelDistribution(d, p)
    kind = _KIND_ALIASES.get(_get(spec, "kind"))
    if kind is None:
        raise MalformedSpecError(f"unknown channel kind {spec['kind']!r}")
    if kind == "depolarizing":
        return depolarizing_channel(d, _number(spec, "mu"))
    if kind == "depol-like-1":
        return depolarizing_like_one(d, _number(spec, "xi"), _pair(spec, "idx"))
    return depolarizing_like_two(
        d, _number(spec, "eta"), _number(spec, "kappa"), _pair(spec, "idx_a"), _pair(spec, "idx_b")
    )


def channel_to_spec(p: ChannelDistribution) -> dict:
    return {"d": p.d, "p": [float(x) for x in p.probs]}
