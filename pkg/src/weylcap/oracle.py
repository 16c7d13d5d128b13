"""Independent checks: von Neumann entropy and direct minimum-output-entropy search.

The capacity of a Weyl-covariant channel is ``log2 d - min_rho S(N(rho))``
and the minimum is attained on pure states, so the oracle searches unit
vectors directly instead of going through any transition-matrix structure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channel import _as_channel, pure_outputs
from .errors import DimensionMismatchError, NegativeEigenvalueError, NotHermitianError
from .weyl import eigenstate_stack, weyl_stack

__all__ = [
    "OptimizerConfig",
    "OracleResult",
    "jacobi_eigvalsh",
    "von_neumann_entropy",
    "min_output_entropy",
    "bloch_grid_entropy_min",
    "bloch_grid_search",
]

EIG_ZERO = 1e-14
HERMITIAN_TOL = 1e-10
NEGATIVE_TOL = 1e-10


def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation, so every step is unitary. Sweeps stop once
    the off-diagonal Frobenius norm drops below ``tol`` (relative to the
    matrix norm when that exceeds 1).
    """
    A = np.array(a, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        off = math.sqrt(max(float(np.sum(np.abs(A) ** 2) - np.sum(np.abs(np.diag(A)) ** 2)), 0.0))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                if abs(theta) > 1e100:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                u00, u01 = c, s
                u10, u11 = -s * phase.conjugate(), c * phase.conjugate()
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = cp * u00 + cq * u10
                A[:, q] = cp * u01 + cq * u11
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = np.conj(u00) * rp + np.conj(u10) * rq
                A[q, :] = np.conj(u01) * rp + np.conj(u11) * rq
                A[p, q] = A[q, p] = 0.0
    return np.sort(np.diag(A).real)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``-Tr rho log2 rho`` via :func:`jacobi_eigvalsh`."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise NotHermitianError("density matrix is not Hermitian")
    lam = jacobi_eigvalsh(0.5 * (rho + rho.conj().T))
    if lam.min() < -NEGATIVE_TOL:
        raise NegativeEigenvalueError(f"eigenvalue {lam.min():.3g} below zero")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > EIG_ZERO]
    return float(-np.sum(lam * np.log2(lam)))


def _spectral_entropy(lam: np.ndarray) -> np.ndarray:
    lam = np.where(lam > EIG_ZERO, lam, 1.0)
    return -np.sum(lam * np.log2(lam), axis=-1)


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the multi-start simplex search.

    ``restarts`` random unit-sphere starts are refined in addition to the
    best few Weyl eigenstates.
    """

    restarts: int = 32
    max_iters: int = 2000
    tol: float = 1e-10
    seed: int = 0
    warm_refine: int = 4

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.warm_refine < 0:
            raise ValueError("warm_refine must be nonnegative")


@dataclass(frozen=True)
class OracleResult:
    chi_opt: float
    s_min: float
    argmin_state: np.ndarray
    converged: bool


def _entropy_objective(p):
    d = p.d
    nz = np.flatnonzero(p.probs)
    k = nz.size
    wflat = weyl_stack(d)[nz].reshape(k * d, d)
    sq = np.sqrt(p.probs[nz])[:, None]
    worst = math.log2(d)

    def objective(x: np.ndarray) -> float:
        psi = x[:d] + 1j * x[d:]
        nrm = float(np.vdot(psi, psi).real)
        if nrm < 1e-300:
            return worst
        phi = (wflat @ psi).reshape(k, d) * sq
        lam = np.linalg.eigvalsh(phi.T @ phi.conj()) / nrm
        lam = lam[lam > EIG_ZERO]
        return float(-np.sum(lam * np.log2(lam)))

    return objective


def _to_real(psi: np.ndarray) -> np.ndarray:
    return np.concatenate([psi.real, psi.imag])


def _to_state(x: np.ndarray, d: int) -> np.ndarray:
    psi = x[:d] + 1j * x[d:]
    return psi / np.linalg.norm(psi)


def _random_states(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def min_output_entropy(p, cfg: OptimizerConfig | None = None) -> OracleResult:
    """Minimize ``S(N(|psi><psi|))`` over unit vectors.

    Candidate pool: every canonical eigenvector of every Weyl operator plus
    ``cfg.restarts`` random starts. Nelder-Mead on the ``2 d`` real
    coordinates refines each random start and the ``cfg.warm_refine`` best
    eigenstates; the overall best point is then polished once more.
    ``converged`` reports whether that final polish changed the objective by
    less than ``cfg.tol``. Deterministic in ``cfg.seed``.
    """
    cfg = cfg or OptimizerConfig()
    p = _as_channel(p)
    d = p.d
    rng = np.random.default_rng(cfg.seed)
    objective = _entropy_objective(p)

    warm = eigenstate_stack(d).transpose(0, 2, 1).reshape(-1, d)
    warm_s = _spectral_entropy(np.linalg.eigvalsh(pure_outputs(p, warm)))
    best_state = warm[int(np.argmin(warm_s))]
    best_s = float(warm_s.min())

    opts = {"maxiter": cfg.max_iters, "xatol": 1e-9, "fatol": cfg.tol, "adaptive": True}
    starts = list(_random_states(rng, cfg.restarts, d))
    starts += [warm[i] for i in np.argsort(warm_s, kind="stable")[: cfg.warm_refine]]
    for psi in starts:
        res = minimize(objective, _to_real(psi), method="Nelder-Mead", options=opts)
        if res.fun < best_s:
            best_s, best_state = float(res.fun), _to_state(res.x, d)

    res = minimize(objective, _to_real(best_state), method="Nelder-Mead", options=opts)
    converged = bool(best_s - res.fun < cfg.tol)
    if res.fun < best_s:
        best_s, best_state = float(res.fun), _to_state(res.x, d)

    s_min = min(max(best_s, 0.0), math.log2(d))
    return OracleResult(
        chi_opt=math.log2(d) - s_min,
        s_min=s_min,
        argmin_state=np.outer(best_state, best_state.conj()),
        converged=converged,
    )


def _qubit_affine_map(p):
    # output Bloch vector = t + M r, read off from the channel acting on I and the Paulis
    sig = weyl_stack(2)
    paulis = [sig[1], -1j * sig[3], sig[2]]  # sigma_x, sigma_y, sigma_z
    images = []
    for P in [np.eye(2)] + paulis:
        out = np.einsum("j,jab,bc,jdc->ad", p.probs, sig, P, sig.conj())
        images.append(out)
    coeff = lambda X: np.array([np.trace(X @ P).real for P in paulis])  # noqa: E731
    t = coeff(0.5 * images[0])
    M = np.column_stack([coeff(0.5 * X) for X in images[1:]])
    return t, M


def _qubit_bloch_length(t, M, theta, phi):
    theta, phi = np.broadcast_arrays(theta, phi)
    st = np.sin(theta)
    r = np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])
    v = t.reshape((3,) + (1,) * (r.ndim - 1)) + np.tensordot(M, r, axes=1)
    return np.clip(np.sqrt(np.sum(v * v, axis=0)), 0.0, 1.0)


def _length_entropy(length):
    # eigenvalues of (I + v.sigma)/2 are (1 +- |v|)/2
    lam = np.stack([(1 + length) / 2, (1 - length) / 2], axis=-1)
    return _spectral_entropy(lam)


def _check_qubit(p):
    p = _as_channel(p)
    if p.d != 2:
        raise DimensionMismatchError(f"Bloch-sphere search needs d=2, got d={p.d}")
    return p


def _grid(n_theta, n_phi):
    theta = np.linspace(0.0, np.pi, n_theta + 1)
    phi = np.arange(n_phi) * (2 * np.pi / n_phi)
    return theta, phi


def bloch_grid_entropy_min(p, n_theta: int = 500, n_phi: int = 1000) -> float:
    """Minimum output entropy of a qubit channel over a polar/azimuthal grid of pure states.

    Grid points are ``theta = pi i / n_theta`` (``i = 0..n_theta``) and
    ``phi = 2 pi j / n_phi``; doubling both resolutions gives a superset of
    points, so the value never increases under such refinement. The output
    entropy decreases with the output Bloch-vector length, so the grid is
    scanned on that length.
    """
    p = _check_qubit(p)
    t, M = _qubit_affine_map(p)
    theta, phi = _grid(n_theta, n_phi)
    length = _qubit_bloch_length(t, M, theta[:, None], phi[None, :])
    return float(_length_entropy(length.max()))


def bloch_grid_search(p, n_theta: int = 500, n_phi: int = 1000) -> OracleResult:
    """Grid search followed by Nelder-Mead refinement in ``(theta, phi)``."""
    p = _check_qubit(p)
    t, M = _qubit_affine_map(p)
    theta, phi = _grid(n_theta, n_phi)
    length = _qubit_bloch_length(t, M, theta[:, None], phi[None, :])
    i, j = np.unravel_index(int(np.argmax(length)), length.shape)
    f = lambda x: float(_length_entropy(_qubit_bloch_length(t, M, x[0], x[1])))  # noqa: E731
    x0 = np.array([theta[i], phi[j]])
    s_grid = float(_length_entropy(length[i, j]))
    res = minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
    s_min, (th, ph) = (float(res.fun), res.x) if res.fun < s_grid else (s_grid, x0)
    s_min = min(max(s_min, 0.0), 1.0)
    psi = np.array([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)])
    return OracleResult(1.0 - s_min, s_min, np.outer(psi, psi.conj()), bool(res.success))
