"""Self-verification suite: the exact property checks behind the package.

Levels: 'fast' caps sizes to finish within about a minute on one core;
'full' runs the exhaustive versions (coefficient check up to N = 15,
spectral equivalence through total_cutoff = 2).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import momentum_space
from .bases import SpinPhononBasis
from .momentum_space import assemble_blocks, change_of_basis
from .observables import centered_site_labels
from .params import ModelParams
from .position_space import build_constrained_hamiltonian, build_full_hamiltonian
from .propagate import propagate
from .schrieffer_wolff import sw_decomposition, sw_effective, sw_residual
from .sparse_op import SparseHermitianOperator
from .states import StateVector, VibrationalSpec, prepare_initial


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _check_coefficients(level: str) -> tuple[bool, str]:
    ns = range(3, 16, 2) if level == "full" else range(3, 10, 2)
    worst = 0.0
    for n in ns:
        for k in range(1, n):
            for kp in range(1, n):
                for p in range(1, n + 1):
                    diff = abs(
                        momentum_space.f_coeff_closed(k, kp, p, n)
                        - momentum_space.f_coeff_oracle(k, kp, p, n)
                    )
                    worst = max(worst, diff)
    return worst < 1e-10, f"max |closed - oracle| = {worst:.2e} over N in {list(ns)}"


def _check_orthogonality(level: str) -> tuple[bool, str]:
    worst = 0.0
    for n in (3, 5, 7, 9, 11):
        U = change_of_basis(n)
        worst = max(worst, float(np.max(np.abs(U @ U.T - np.eye(n - 1)))))
    return worst < 1e-12, f"max ||U U^T - 1|| = {worst:.2e}"


def _check_unitarity(level: str) -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    dim = 200
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = SparseHermitianOperator(dim)
    dense = (A + A.conj().T) / 2
    iu = np.triu_indices(dim)
    H.add_entries(iu[0], iu[1], dense[iu])
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    times = np.linspace(0, 10, 21)
    rec = propagate(H, StateVector(psi, None), times, dense_threshold=0)  # force the Krylov path
    norm_drift = float(np.max(np.abs(rec.norm - 1.0)))
    energy_drift = float(np.max(np.abs(rec.energy - rec.energy[0])))
    ok = norm_drift < 1e-10 and energy_drift < 1e-9
    return ok, f"norm drift {norm_drift:.2e}, energy drift {energy_drift:.2e} (dim 200, t = 10)"


def _check_spectral_equivalence(level: str) -> tuple[bool, str]:
    cutoffs = (0, 1, 2) if level == "full" else (0, 1)
    worst = 0.0
    for cutoff in cutoffs:
        for kappa in (0.0, 1.0):
            p = ModelParams(n_sites=5, trap_freq=8.0, coupling=kappa, total_cutoff=cutoff)
            ec = np.sort(np.linalg.eigvalsh(build_constrained_hamiltonian(p, "total").to_dense()))
            eb = np.sort(
                np.concatenate(
                    [np.linalg.eigvalsh(b.to_dense()) for b in assemble_blocks(p).values()]
                )
            )
            worst = max(worst, float(np.max(np.abs(ec - eb))))
    return worst < 1e-8, f"max spectral mismatch {worst:.2e} over cutoffs {cutoffs}"


def _check_sw(level: str) -> tuple[bool, str]:
    import scipy.linalg as la

    from .momentum_space import build_hq_diagonalform

    n, q = 5, 1
    kappas = (0.1, 0.2, 0.4) if level == "full" else (0.2, 0.4)
    base = ModelParams(n_sites=n, trap_freq=8.0, total_cutoff=1)
    dec = sw_decomposition(base.with_(coupling=0.2, nn_interaction=None), q)
    res = sw_residual(dec)
    infids = []
    for kappa in kappas:
        p = base.with_(coupling=kappa, total_cutoff=1, nn_interaction=None)
        Hq = build_hq_diagonalform(p, q)
        He = sw_effective(p, q, 0)
        emb = He.basis.embedding_into(Hq.basis)
        amp = np.arange(1, n, dtype=complex)
        amp /= np.linalg.norm(amp)
        psi_big = np.zeros(Hq.dim, dtype=complex)
        psi_big[emb] = amp
        evb, Vb = la.eigh(Hq.to_dense())
        evs, Vs = la.eigh(He.to_dense())
        t = 5.0
        big_t = Vb @ (np.exp(-1j * evb * t) * (Vb.conj().T @ psi_big))
        small_t = Vs @ (np.exp(-1j * evs * t) * (Vs.conj().T @ amp))
        emb_t = np.zeros(Hq.dim, dtype=complex)
        emb_t[emb] = small_t
        infids.append(1.0 - abs(np.vdot(big_t, emb_t)) ** 2)
    ratios = [infids[i + 1] / infids[i] for i in range(len(infids) - 1)]
    ok = res < 1e-9 and all(3.0 <= r <= 6.0 for r in ratios)
    return ok, f"residual {res:.2e}, infidelity ratios {[f'{r:.2f}' for r in ratios]}"


def mirror_mismatch(density_a: np.ndarray, density_b: np.ndarray, coords) -> float:
    """max_j |n_j(a) - n_{-j-1}(b)| over bond-centred labels (ring reflection)."""
    labels = coords.labels
    n = labels.size
    half = (n - 1) // 2
    pos = {int(l): i for i, l in enumerate(labels)}
    worst = 0.0
    for l in labels:
        mirror = ((-1 - int(l) + half) % n) - half
        worst = max(worst, abs(float(density_a[pos[int(l)]] - density_b[pos[mirror]])))
    return worst


def _check_mirror_symmetry(level: str) -> tuple[bool, str]:
    p = ModelParams(n_sites=7, detuning=200.0, trap_freq=8.0, coupling=4.0, site_cutoff=1)
    basis = SpinPhononBasis(p.n_sites, p.site_cutoff)
    H = build_full_hamiltonian(p, basis)
    coords = centered_site_labels(p.n_sites, 3.5)
    times = np.linspace(0.0, 1.0, 6)
    dens = {}
    for phi in (0.0, np.pi):
        psi0 = prepare_initial(p, 2, 3.5, VibrationalSpec.phase(phi), basis)
        dens[phi] = propagate(H, psi0, times).density
    worst = max(
        mirror_mismatch(dens[0.0][i], dens[np.pi][i], coords) for i in range(len(times))
    )
    return worst < 1e-8, f"max |n_j(phi=0) - n_(-j-1)(phi=pi)| = {worst:.2e} (N=7, t <= 1)"


_CHECKS = [
    ("coefficient-oracle-equivalence", _check_coefficients),
    ("change-of-basis-orthogonality", _check_orthogonality),
    ("propagation-unitarity", _check_unitarity),
    ("block-spectral-equivalence", _check_spectral_equivalence),
    ("schrieffer-wolff-validity", _check_sw),
    ("mirror-symmetry", _check_mirror_symmetry),
]


def verify_suite(level: str = "fast") -> list[CheckResult]:
    """Run all property checks; failures are report content, not exceptions."""
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    out = []
    for name, fn in _CHECKS:
        t0 = time.time()
        try:
            passed, detail = fn(level)
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(name, passed, detail, round(time.time() - t0, 2)))
    return out
