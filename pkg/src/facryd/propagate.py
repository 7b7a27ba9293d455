"""Time evolution and trajectory recording.

Small problems go through a dense eigendecomposition; larger ones use a
Lanczos propagator reorthogonalized against the whole Krylov basis, with
adaptive substepping. Norm and energy are monitored at every grid time;
density-type observables are recorded when the basis supports them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .bases import DomainPhononBasis, RelativeBasis, SpinPhononBasis
from .errors import InvalidParameterError, KrylovConvergenceError
from .observables import (
    SiteCoordinates,
    relative_distribution,
    rydberg_density,
    variance,
)
from .position_space import project_to_single_domain
from .sparse_op import SparseHermitianOperator
from .states import StateVector

DENSE_THRESHOLD = 4096


@dataclass
class TrajectoryRecord:
    """Observable time series of one run; times in inverse drive units."""

    times: np.ndarray
    norm: np.ndarray
    energy: np.ndarray
    density: np.ndarray | None = None
    sigma: np.ndarray | None = None
    delta_sigma: np.ndarray | None = None
    sector_weight: np.ndarray | None = None
    rel_distribution: np.ndarray | None = None
    coords: SiteCoordinates | None = None


def _lanczos_expm_step(matvec, v: np.ndarray, dt: float, m_max: int, tol: float):
    """One step w = exp(-i dt H) v in a Krylov subspace.

    Each new vector is orthogonalized against the whole basis in one
    classical Gram-Schmidt round (BLAS-2, a single memory pass); the error
    estimate is the usual next-basis-vector coefficient. Raises
    KrylovConvergenceError when m_max Lanczos vectors cannot reach tol.
    """
    dim = v.size
    m_cap = min(m_max, max(8, int(150_000_000 // max(dim, 1))))
    nrm0 = np.linalg.norm(v)
    V = np.empty((m_cap + 1, dim), dtype=np.complex128)
    V[0] = v / nrm0
    alphas: list[float] = []
    betas: list[float] = []
    err = np.inf
    for m in range(1, m_cap + 1):
        w = matvec(V[m - 1])
        a = float(np.real(np.vdot(V[m - 1], w)))
        alphas.append(a)
        # one classical Gram-Schmidt round over the whole basis; the implicit
        # three-term recurrence is subtracted here as part of it
        coef = V[:m].conj() @ w
        w -= V[:m].T @ coef
        b = float(np.linalg.norm(w))
        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = la.eigh(T)
        u1 = evecs @ (np.exp(-1j * dt * evals) * evecs[0].conj())
        err = abs(dt) * b * abs(u1[-1])
        if b < 1e-13 * max(1.0, abs(a)) or err < tol:
            return nrm0 * (V[:m].T @ u1), max(err, 0.0)
        betas.append(b)
        V[m] = w / b
    raise KrylovConvergenceError(
        f"no convergence with m={m_cap}, dt={dt}: error estimate {err:.2e} > tol {tol:.2e}"
    )


def _ritz_spread(matvec, v: np.ndarray, m: int) -> float:
    """Spectral-width estimate from a short plain Lanczos recurrence."""
    u_prev = None
    u = v / np.linalg.norm(v)
    alphas, betas = [], []
    for _ in range(m):
        w = matvec(u)
        a = float(np.real(np.vdot(u, w)))
        alphas.append(a)
        w = w - a * u
        if u_prev is not None:
            w = w - betas[-1] * u_prev
        b = float(np.linalg.norm(w))
        if b < 1e-12 * max(1.0, abs(a)):
            break
        betas.append(b)
        u_prev, u = u, w / b
    T = np.diag(alphas) + np.diag(betas[: len(alphas) - 1], 1) + np.diag(betas[: len(alphas) - 1], -1)
    ritz = la.eigvalsh(T)
    return float(ritz[-1] - ritz[0])


def evolve_to(matvec, psi: np.ndarray, t_span: float, *, m_max: int = 20, tol: float = 1e-12):
    """Advance psi by t_span with adaptive Lanczos substeps."""
    if t_span == 0.0:
        return psi.copy()
    # seed the substep from a spectral-width probe; the controller refines it
    spread = _ritz_spread(matvec, psi, min(15, m_max))
    dt = t_span if spread <= 0 else np.sign(t_span) * min(abs(t_span), 0.9 * m_max / spread)
    remaining = t_span
    out = psi
    while abs(remaining) > 1e-15 * abs(t_span):
        dt = np.sign(remaining) * min(abs(dt), abs(remaining))
        try:
            out_next, _ = _lanczos_expm_step(matvec, out, dt, m_max, tol)
        except KrylovConvergenceError:
            if abs(dt) < 1e-12:
                raise KrylovConvergenceError(
                    f"step size underflow at dt={dt}; operator norm may be too "
                    "large for the requested accuracy"
                )
            dt *= 0.5
            continue
        out = out_next
        remaining -= dt
        dt *= 1.5
    return out


class _DensePropagator:
    def __init__(self, H_dense: np.ndarray):
        self.evals, self.evecs = la.eigh(H_dense)

    def advance(self, psi: np.ndarray, t_span: float) -> np.ndarray:
        coef = self.evecs.conj().T @ psi
        return self.evecs @ (np.exp(-1j * self.evals * t_span) * coef)


def propagate(
    H,
    psi0: StateVector,
    times,
    *,
    coords: SiteCoordinates | None = None,
    sector_basis: DomainPhononBasis | None = None,
    dense_threshold: int = DENSE_THRESHOLD,
    m_max: int = 20,
    tol: float = 1e-12,
) -> TrajectoryRecord:
    """Evolve psi0 under H and record observables on the given time grid."""
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise InvalidParameterError("times must be increasing and start at t >= 0")
    basis = psi0.basis
    if getattr(H, "basis", None) is not None and H.basis != basis:
        raise InvalidParameterError("state and operator bases differ")
    dim = H.dim
    matvec = H.matvec

    dense = None
    if dim <= dense_threshold and isinstance(H, SparseHermitianOperator):
        dense = _DensePropagator(H.to_dense())

    n_t = times.size
    norm = np.empty(n_t)
    energy = np.empty(n_t)
    record_density = isinstance(basis, (SpinPhononBasis, DomainPhononBasis))
    record_rel = isinstance(basis, RelativeBasis)
    density = np.empty((n_t, basis.n_sites)) if record_density else None
    sigma = np.empty(n_t) if (record_density and coords is not None) else None
    weight = np.empty(n_t) if sector_basis is not None else None
    rel = np.empty((n_t, basis.n_labels)) if record_rel else None

    psi = psi0.data.copy()
    t_cur = 0.0
    for i, t in enumerate(times):
        span = t - t_cur
        if span > 0:
            psi = dense.advance(psi, span) if dense else evolve_to(matvec, psi, span, m_max=m_max, tol=tol)
            t_cur = t
        norm[i] = float(np.linalg.norm(psi))
        energy[i] = float(np.real(np.vdot(psi, matvec(psi))))
        if record_density:
            density[i] = rydberg_density(psi, basis)
            if sigma is not None:
                sigma[i] = variance(density[i], coords)
        if record_rel:
            rel[i] = relative_distribution(psi, basis)
        if weight is not None:
            _, weight[i] = project_to_single_domain(psi, basis, sector_basis)
    delta_sigma = sigma - sigma[0] if sigma is not None else None
    return TrajectoryRecord(
        times=times,
        norm=norm,
        energy=energy,
        density=density,
        sigma=sigma,
        delta_sigma=delta_sigma,
        sector_weight=weight,
        rel_distribution=rel,
        coords=coords,
    )
