"""Randomized invariant checks run by ``weylcap verify``.

Each check returns a :class:`CheckResult`; the worst deviation seen is
reported next to the tolerance it was compared against.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import coincidence_test, depolarizing_capacity, lower_bound, upper_bound, zeta
from .channel import (
    apply_channel,
    depolarizing_channel,
    pure_outputs,
    sample_random_channel,
    transition_matrix,
)
from .oracle import OptimizerConfig, min_output_entropy
from .weyl import all_indices, weyl_eigenbasis, weyl_eigenvalues, weyl_operator, weyl_order


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}  (worst {self.worst:.3g}, tol {self.tol:.0e})"


def random_pure_states(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def match_multisets(a: np.ndarray, b: np.ndarray) -> float:
    """Largest distance after greedily pairing each point of ``a`` with its nearest unused point in ``b``."""
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for x in a:
        dist = np.abs(b - x).astype(float)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        used[j] = True
        worst = max(worst, float(dist[j]))
    return worst


def check_unitarity(dims=range(2, 13)) -> CheckResult:
    worst = 0.0
    for d in dims:
        for idx in all_indices(d):
            W = weyl_operator(idx, d)
            worst = max(worst, float(np.abs(W @ W.conj().T - np.eye(d)).max()))
    return CheckResult("Weyl operators are unitary", worst <= 1e-12, worst, 1e-12)


def check_eigenvalues(dims=range(2, 9)) -> CheckResult:
    worst = 0.0
    for d in dims:
        for idx in all_indices(d):
            numeric = np.linalg.eigvals(weyl_operator(idx, d))
            worst = max(worst, match_multisets(numeric, weyl_eigenvalues(idx, d)))
    return CheckResult("analytic eigenvalues match numerical ones", worst <= 1e-10, worst, 1e-10)


def check_order(dims=range(2, 9)) -> CheckResult:
    worst = 0.0
    ok = True
    for d in dims:
        for idx in all_indices(d):
            ell, phase = weyl_order(idx, d)
            W = weyl_operator(idx, d)
            ok &= d % ell == 0
            worst = max(worst, float(np.abs(np.linalg.matrix_power(W, ell) - phase * np.eye(d)).max()))
    return CheckResult("order divides d and W^l = p I", ok and worst <= 1e-10, worst, 1e-10)


def check_eigenbasis_diagonal(rng, count: int, dims=(2, 3, 5, 7)) -> CheckResult:
    worst = 0.0
    for d in dims:
        bases = [weyl_eigenbasis(idx, d).eigenvectors for idx in all_indices(d, include_identity=False)]
        for _ in range(count):
            p = sample_random_channel(d, int(rng.integers(2**31)))
            for V in bases:
                out = pure_outputs(p, V.T)
                in_basis = V.conj().T[None] @ out @ V[None]
                off = in_basis - np.einsum("kii->ki", in_basis)[:, :, None] * np.eye(d)
                worst = max(worst, float(np.sqrt((np.abs(off) ** 2).sum(axis=(1, 2))).max()))
    return CheckResult("eigenstate outputs are diagonal in that eigenbasis", worst < 1e-10, worst, 1e-10)


def check_transition_rows(rng, count: int, dims=(2, 3, 5, 7)) -> CheckResult:
    worst = 0.0
    for d in dims:
        for _ in range(count):
            p = sample_random_channel(d, int(rng.integers(2**31)))
            for idx in all_indices(d, include_identity=False):
                V = weyl_eigenbasis(idx, d).eigenvectors
                row = np.sort(transition_matrix(p, idx).first_row)
                diag = np.einsum("ai,kab,bi->ki", V.conj(), pure_outputs(p, V.T), V).real
                worst = max(worst, float(np.abs(np.sort(diag, axis=1) - row).max()))
    return CheckResult("eigenbasis output diagonal is a row of T_nm", worst <= 1e-10, worst, 1e-10)


def check_majorization(rng, count: int, dims=range(2, 7)) -> CheckResult:
    worst = 0.0
    total = 0.0
    for d in dims:
        for _ in range(count):
            p = sample_random_channel(d, int(rng.integers(2**31)))
            psi = random_pure_states(rng, 1, d)[0]
            lam = np.sort(np.linalg.eigvalsh(pure_outputs(p, psi)))[::-1]
            gap = np.cumsum(lam) - np.cumsum(zeta(p))
            worst = max(worst, float(gap.max()))
            total = max(total, abs(float(gap[-1])))
    ok = worst <= 1e-10 and total <= 1e-12
    return CheckResult("zeta(p) majorizes every pure-state output spectrum", ok, max(worst, total), 1e-10)


def check_weyl_twirl(rng, count: int, dims=range(2, 7)) -> CheckResult:
    worst = 0.0
    for d in dims:
        uniform = np.full(d * d, 1.0 / (d * d))
        for psi in random_pure_states(rng, count, d):
            out = apply_channel(uniform, np.outer(psi, psi.conj()))
            worst = max(worst, float(np.abs(d * d * out - d * np.eye(d)).max()))
    return CheckResult("sum of all Weyl conjugations is d I", worst <= 1e-10, worst, 1e-10)


def check_depolarizing(dims=(2, 3, 4, 5, 7)) -> CheckResult:
    worst = 0.0
    ok = True
    for d in dims:
        for mu in np.linspace(0.0, 1.0, 11):
            rep = coincidence_test(depolarizing_channel(d, mu))
            exact = depolarizing_capacity(d, mu)
            ok &= rep.coincide
            worst = max(worst, abs(rep.chi_lb - exact), abs(rep.chi_ub - exact))
    return CheckResult("depolarizing bounds equal the closed form", ok and worst <= 1e-9, worst, 1e-9)


def check_prime_paths(rng, count: int, dims=(2, 3, 5, 7)) -> CheckResult:
    worst = 0.0
    for d in dims:
        for _ in range(count):
            p = sample_random_channel(d, int(rng.integers(2**31)))
            a = lower_bound(p, method="transition").chi_lb
            b = lower_bound(p, method="eigenstate").chi_lb
            worst = max(worst, abs(a - b))
    return CheckResult("both lower-bound routes agree for prime d", worst <= 1e-9, worst, 1e-9)


def check_sandwich(rng, count: int, dims=(2, 3, 4)) -> CheckResult:
    worst = 0.0
    for d in dims:
        for _ in range(count):
            seed = int(rng.integers(2**31))
            p = sample_random_channel(d, seed)
            opt = min_output_entropy(p, OptimizerConfig(restarts=2, seed=seed)).chi_opt
            worst = max(worst, lower_bound(p).chi_lb - opt, opt - upper_bound(p))
    return CheckResult("lower bound <= optimized capacity <= upper bound", worst <= 1e-6, worst, 1e-6)


def run_all(count: int = 10, seed: int = 0) -> list[CheckResult]:
    """Run every check with ``count`` random inputs per dimension where randomness applies."""
    rng = np.random.default_rng(seed)
    small = max(1, count // 5)
    checks: list[Callable[[], CheckResult]] = [
        check_unitarity,
        check_eigenvalues,
        check_order,
        lambda: check_eigenbasis_diagonal(rng, small),
        lambda: check_transition_rows(rng, small),
        lambda: check_majorization(rng, count),
        lambda: check_weyl_twirl(rng, count),
        check_depolarizing,
        lambda: check_prime_paths(rng, count),
        lambda: check_sandwich(rng, small),
    ]
    return [c() for c in checks]


__all__ = [
    "CheckResult",
    "match_multisets",
    "random_pure_states",
    "run_all",
] + [name for name in dir() if name.startswith("check_")]
