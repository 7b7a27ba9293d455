"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 4-7 are asserted exactly as stated. On this hardware three of them
exceed the amplitude budget (their state spaces are 4e12 and 3.6e8 amplitudes)
and one expects a pre-crossover exponent inside a post-crossover window; they
fail honestly with the blocking reason in the message. The companion tests at
the end demonstrate the same physics at feasible scale, including the
published exponents.
"""

import time

import numpy as np
import pytest
import scipy.linalg as la

from facryd.bases import DomainPhononBasis, SpinPhononBasis
from facryd.errors import CapacityError
from facryd.momentum_space import (
    assemble_blocks,
    build_hq_diagonalform,
    change_of_basis,
    f_coeff_closed,
    f_coeff_oracle,
)
from facryd.observables import asymmetry, centered_site_labels, fit_beta, variance, rydberg_density
from facryd.params import ModelParams
from facryd.position_space import FullModelOperator, build_constrained_hamiltonian
from facryd.propagate import propagate
from facryd.schrieffer_wolff import sw_decomposition, sw_effective, sw_residual
from facryd.states import StateVector, VibrationalSpec, prepare_initial
from facryd.verify import mirror_mismatch


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_c01_coefficient_oracle_equivalence():
    t0 = time.time()
    worst = 0.0
    for n in range(3, 16, 2):
        for k in range(1, n):
            for kp in range(1, n):
                for p in range(1, n + 1):
                    worst = max(worst, abs(f_coeff_closed(k, kp, p, n) - f_coeff_oracle(k, kp, p, n)))
    wall = time.time() - t0
    _report(1, worst < 1e-10 and wall < 5.0, f"max |closed - oracle| = {worst:.2e} in {wall:.1f}s")


def test_c02_change_of_basis_orthogonality():
    worst = 0.0
    for n in (3, 5, 7, 9, 11):
        U = change_of_basis(n)
        worst = max(worst, float(np.max(np.abs(U @ U.T - np.eye(n - 1)))))
    _report(2, worst < 1e-12, f"max ||U U^T - 1||_max = {worst:.2e}")


def test_c03_block_spectral_equivalence():
    t0 = time.time()
    worst = 0.0
    for cutoff in (0, 1, 2):
        for kappa in (0.0, 1.0):
            p = ModelParams(n_sites=5, trap_freq=8.0, coupling=kappa, total_cutoff=cutoff)
            ec = np.sort(la.eigvalsh(build_constrained_hamiltonian(p, "total").to_dense()))
            eb = np.sort(
                np.concatenate([la.eigvalsh(b.to_dense()) for b in assemble_blocks(p).values()])
            )
            worst = max(worst, float(np.max(np.abs(ec - eb))))
    wall = time.time() - t0
    _report(3, worst < 1e-8 and wall < 30.0, f"max spectral mismatch {worst:.2e} in {wall:.1f}s")


def _constrained_variance_run(n, r0, kappa, cutoff, vib, t_max, n_steps):
    p = ModelParams(n_sites=n, trap_freq=8.0, coupling=kappa, site_cutoff=cutoff)
    basis = DomainPhononBasis(n, cutoff, "site", p.max_amplitudes)
    H = build_constrained_hamiltonian(p, "site", basis)
    center = (n + 1) // 2 if r0 % 2 else (n + 1) // 2 + 0.5
    psi0 = prepare_initial(p, r0, center, vib, basis)
    coords = centered_site_labels(n, center)
    times = np.linspace(0.0, t_max, n_steps + 1)
    return propagate(H, psi0, times, coords=coords)


def test_c04_ballistic_baseline_as_stated():
    t0 = time.time()
    rec = _constrained_variance_run(21, 3, 0.0, 0, VibrationalSpec.fock(0), 3.2, 64)
    beta, r2 = fit_beta(rec.times, rec.delta_sigma, (0.5, 3.0))
    wall = time.time() - t0
    ok = 1.9 <= beta <= 2.1 and wall < 60.0
    _report(
        4,
        ok,
        f"beta[0.5,3.0] = {beta:.3f} (r^2 = {r2:.4f}, {wall:.1f}s); the stated window lies "
        "beyond the wall-collision crossover for a three-site domain, where the exponent "
        "bends below 2 (see the companion tests for the pre-crossover value)",
    )


def test_c05_phonon_slowdown_as_stated():
    try:
        rec0 = _constrained_variance_run(21, 3, 0.0, 0, VibrationalSpec.fock(0), 3.2, 64)
        beta0, _ = fit_beta(rec0.times, rec0.delta_sigma, (0.5, 3.0))
        rec1 = _constrained_variance_run(21, 3, 3.0, 2, VibrationalSpec.fock(1), 3.2, 64)
        beta1, _ = fit_beta(rec1.times, rec1.delta_sigma, (0.5, 3.0))
    except CapacityError as exc:
        _report(5, False, f"unreachable at stated scale: {exc}")
        return
    _report(5, beta1 <= beta0 - 0.15, f"beta drop {beta0 - beta1:.3f}")


MIRROR_PARAMS = dict(n_sites=11, detuning=200.0, trap_freq=8.0, coupling=4.0, site_cutoff=2)


def _mirror_densities(phis, n_sites, site_cutoff, t_max, n_steps, **kwargs):
    p = ModelParams(n_sites=n_sites, site_cutoff=site_cutoff, **kwargs)
    basis = SpinPhononBasis(n_sites, site_cutoff, p.max_amplitudes)
    H = FullModelOperator(p, basis)
    coords = centered_site_labels(n_sites, (n_sites + 1) // 2 + 0.5)
    times = np.linspace(0.0, t_max, n_steps + 1)
    out = {}
    for phi in phis:
        psi0 = prepare_initial(p, 2, (n_sites + 1) // 2 + 0.5, VibrationalSpec.phase(phi), basis)
        out[phi] = propagate(H, psi0, times).density
    return out, coords, times


def test_c06_mirror_symmetry_as_stated():
    try:
        dens, coords, times = _mirror_densities(
            (0.0, np.pi),
            MIRROR_PARAMS["n_sites"],
            MIRROR_PARAMS["site_cutoff"],
            2.0,
            20,
            detuning=MIRROR_PARAMS["detuning"],
            trap_freq=MIRROR_PARAMS["trap_freq"],
            coupling=MIRROR_PARAMS["coupling"],
        )
    except CapacityError as exc:
        _report(6, False, f"unreachable at stated scale: {exc}")
        return
    worst = max(
        mirror_mismatch(dens[0.0][i], dens[np.pi][i], coords) for i in range(len(times))
    )
    _report(6, worst < 1e-8, f"max mirror mismatch {worst:.2e}")


def test_c07_phase_balanced_expansion_as_stated():
    try:
        dens, coords, _ = _mirror_densities(
            (0.0, np.pi / 2),
            MIRROR_PARAMS["n_sites"],
            MIRROR_PARAMS["site_cutoff"],
            2.0,
            20,
            detuning=MIRROR_PARAMS["detuning"],
            trap_freq=MIRROR_PARAMS["trap_freq"],
            coupling=MIRROR_PARAMS["coupling"],
        )
    except CapacityError as exc:
        _report(7, False, f"unreachable at stated scale: {exc}")
        return
    _, dn0 = asymmetry(dens[0.0][-1], coords)
    _, dnh = asymmetry(dens[np.pi / 2][-1], coords)
    ratio = np.abs(dnh).max() / np.abs(dn0).max()
    _report(7, ratio <= 0.1, f"balanced/unbalanced asymmetry ratio {ratio:.3f}")


def test_c08_schrieffer_wolff_validity():
    t0 = time.time()
    n, q, omega = 5, 1, 8.0
    residual = sw_residual(
        sw_decomposition(ModelParams(n_sites=n, trap_freq=omega, coupling=0.4, total_cutoff=2), q)
    )
    ratios = []
    for nph in (0, 1):
        infids = []
        for kappa in (0.1, 0.2, 0.4):
            p = ModelParams(n_sites=n, trap_freq=omega, coupling=kappa, total_cutoff=nph + 1)
            Hq = build_hq_diagonalform(p, q)
            He = sw_effective(p, q, nph)
            emb = He.basis.embedding_into(Hq.basis)
            if nph == 0:
                amp = np.zeros(He.dim, dtype=complex)
                for k in range(1, n):
                    amp[He.basis.index(k, 0)] = k
            else:
                amp = np.ones(He.dim, dtype=complex)
            amp /= np.linalg.norm(amp)
            psi_big = np.zeros(Hq.dim, dtype=complex)
            psi_big[emb] = amp
            evb, Vb = la.eigh(Hq.to_dense())
            evs, Vs = la.eigh(He.to_dense())
            t = 5.0
            big_t = Vb @ (np.exp(-1j * evb * t) * (Vb.conj().T @ psi_big))
            small = np.zeros(Hq.dim, dtype=complex)
            small[emb] = Vs @ (np.exp(-1j * evs * t) * (Vs.conj().T @ amp))
            infids.append(1.0 - abs(np.vdot(big_t, small)) ** 2)
        ratios += [infids[i + 1] / infids[i] for i in range(2)]
    wall = time.time() - t0
    ok = residual < 1e-9 and all(3.0 <= r <= 6.0 for r in ratios) and wall < 60.0
    _report(
        8,
        ok,
        f"residual {residual:.2e}; infidelity ratios {[f'{r:.2f}' for r in ratios]} in {wall:.1f}s",
    )


def test_c09_conservation_suite():
    times = np.linspace(0.0, 10.0, 21)
    worst_norm = worst_energy = 0.0

    def track(rec):
        nonlocal worst_norm, worst_energy
        worst_norm = max(worst_norm, float(np.max(np.abs(rec.norm - 1.0))))
        worst_energy = max(worst_energy, float(np.max(np.abs(rec.energy - rec.energy[0]))))

    # full chain, matrix-free Krylov path
    p = ModelParams(n_sites=5, detuning=200.0, trap_freq=8.0, coupling=2.0, site_cutoff=1)
    basis = SpinPhononBasis(5, 1)
    track(propagate(FullModelOperator(p, basis), prepare_initial(p, 2, 2.5, VibrationalSpec.phase(0.3), basis), times))

    # reduced chain, site scheme (Krylov) and total scheme (dense)
    p = ModelParams(n_sites=7, trap_freq=8.0, coupling=1.0, site_cutoff=1)
    basis = DomainPhononBasis(7, 1, "site")
    track(propagate(build_constrained_hamiltonian(p, "site", basis), prepare_initial(p, 3, 4, VibrationalSpec.fock(1), basis), times))
    p = ModelParams(n_sites=5, trap_freq=8.0, coupling=1.0, total_cutoff=2)
    basis = DomainPhononBasis(5, 2, "total")
    track(propagate(build_constrained_hamiltonian(p, "total", basis), prepare_initial(p, 1, 3, VibrationalSpec.fock(0), basis), times))

    # momentum blocks in both forms, and the effective model
    p = ModelParams(n_sites=5, trap_freq=8.0, coupling=1.0, total_cutoff=2)
    for H in (build_hq_diagonalform(p, 1), assemble_blocks(p)[2]):
        amp = np.arange(1.0, H.dim + 1.0) + 0j
        amp /= np.linalg.norm(amp)
        track(propagate(H, StateVector(amp, H.basis), times))
    He = sw_effective(p.with_(coupling=0.2, nn_interaction=None), 1, 1)
    amp = np.ones(He.dim, dtype=complex) / np.sqrt(He.dim)
    track(propagate(He, StateVector(amp, He.basis), times))

    # initial variance law
    p21 = ModelParams(n_sites=21, site_cutoff=0)
    basis21 = DomainPhononBasis(21, 0, "site")
    worst_sigma = 0.0
    for r0 in range(1, 11):
        center = 11 if r0 % 2 else 11.5
        psi = prepare_initial(p21, r0, center, VibrationalSpec.fock(0), basis21)
        sigma0 = variance(rydberg_density(psi.data, basis21), centered_site_labels(21, center))
        worst_sigma = max(worst_sigma, abs(sigma0 - (r0**2 - 1) / 12.0))

    ok = worst_norm < 1e-10 and worst_energy < 1e-9 and worst_sigma < 1e-12
    _report(
        9,
        ok,
        f"norm drift {worst_norm:.2e}, energy drift {worst_energy:.2e}, "
        f"sigma(0) law error {worst_sigma:.2e}",
    )


def test_c10_constraint_fidelity():
    p = ModelParams(n_sites=7, detuning=200.0, trap_freq=8.0, coupling=4.0, site_cutoff=1)
    full = SpinPhononBasis(7, 1)
    dom = DomainPhononBasis(7, 1, "site")
    H = FullModelOperator(p, full)
    psi0 = prepare_initial(p, 2, 3.5, VibrationalSpec.phase(0.0), full)
    rec = propagate(H, psi0, np.linspace(0.0, 5.0, 11), sector_basis=dom)
    wmin = float(rec.sector_weight.min())
    _report(10, wmin >= 0.95, f"min single-domain sector weight {wmin:.4f} over t <= 5")


# ---------------------------------------------------------------------------
# companions: the same physics at scales this hardware can evolve exactly
# ---------------------------------------------------------------------------


def test_companion_pre_crossover_ballistic_exponent():
    rec = _constrained_variance_run(21, 9, 0.0, 0, VibrationalSpec.fock(0), 3.2, 64)
    beta, r2 = fit_beta(rec.times, rec.delta_sigma, (0.5, 3.0))
    print(f"COMPANION 4a: beta[0.5,3.0] at r0=9: {beta:.3f} (r^2={r2:.4f})")
    assert 1.88 <= beta <= 2.08  # published pre-crossover value 1.98


def test_companion_post_crossover_exponent_bends_down():
    rec = _constrained_variance_run(21, 3, 0.0, 0, VibrationalSpec.fock(0), 4.2, 84)
    beta_post, _ = fit_beta(rec.times, rec.delta_sigma, (1.5, 4.0))
    print(f"COMPANION 4b: post-crossover beta[1.5,4.0] at r0=3: {beta_post:.3f}")
    assert beta_post < 1.8  # published post-crossover value 1.63


def test_companion_phonon_slowdown_feasible_scale():
    window = (0.3, 1.0)
    rec0 = _constrained_variance_run(7, 3, 0.0, 0, VibrationalSpec.fock(0), 1.2, 40)
    beta0, _ = fit_beta(rec0.times, rec0.delta_sigma, window)
    rec1 = _constrained_variance_run(7, 3, 3.0, 2, VibrationalSpec.fock(1), 1.2, 40)
    beta1, _ = fit_beta(rec1.times, rec1.delta_sigma, window)
    print(f"COMPANION 5: beta {beta0:.3f} (vacuum) -> {beta1:.3f} (one phonon per site)")
    assert beta1 <= beta0 - 0.15


def test_companion_mirror_symmetry_feasible_scale():
    dens, coords, times = _mirror_densities(
        (0.0, np.pi), 7, 2, 1.0, 5,
        detuning=200.0, trap_freq=8.0, coupling=4.0,
    )
    worst = max(mirror_mismatch(dens[0.0][i], dens[np.pi][i], coords) for i in range(len(times)))
    print(f"COMPANION 6: max mirror mismatch {worst:.2e} (N=7, cutoff 2, t <= 1)")
    assert worst < 1e-8


def test_companion_balanced_phase_is_time_reversed_reflection():
    # the balanced superposition carries momentum rather than displacement, so
    # its expansion is the exact spatial mirror of its own time-reversed run;
    # equal-time symmetry (and the 0.1 bound) emerges only at larger chains
    from facryd.propagate import evolve_to

    p = ModelParams(n_sites=7, detuning=200.0, trap_freq=8.0, coupling=4.0, site_cutoff=2)
    basis = SpinPhononBasis(7, 2)
    H = FullModelOperator(p, basis)
    coords = centered_site_labels(7, 3.5)
    psi0 = prepare_initial(p, 2, 3.5, VibrationalSpec.phase(np.pi / 2), basis)
    t = 0.8
    fwd = rydberg_density(evolve_to(H.matvec, psi0.data, +t), basis)
    bwd = rydberg_density(evolve_to(H.matvec, psi0.data, -t), basis)
    worst = mirror_mismatch(fwd, bwd, coords)
    print(f"COMPANION 7a: |n_j(t) - n_(-j-1)(-t)| at phi=pi/2: {worst:.2e}")
    assert worst < 1e-8


def test_companion_balanced_phase_suppresses_peak_asymmetry():
    dens, coords, times = _mirror_densities(
        (0.0, np.pi / 2), 7, 2, 0.9, 9,
        detuning=200.0, trap_freq=8.0, coupling=4.0,
    )
    peaks0 = np.array([np.abs(asymmetry(dens[0.0][i], coords)[1]).max() for i in range(len(times))])
    peaksh = np.array([np.abs(asymmetry(dens[np.pi / 2][i], coords)[1]).max() for i in range(len(times))])
    i_peak = int(np.argmax(peaks0))
    ratio = peaksh[i_peak] / peaks0[i_peak]
    print(
        f"COMPANION 7b: peak |dn| {peaks0[i_peak]:.4f} (phi=0) vs {peaksh[i_peak]:.4f} (phi=pi/2), "
        f"ratio {ratio:.2f} at t={times[i_peak]:.2f} (N=7; the 0.1 bound needs larger chains)"
    )
    assert ratio < 1.0


def test_c11_plot_regeneration(tmp_path):
    import csv as csv_mod
    import subprocess
    from pathlib import Path

    cli = Path(__file__).resolve().parents[1] / "frontend" / "dist" / "cli.js"
    if not cli.exists():
        pytest.skip("plots component not built; the primary suite runs without it")

    from facryd.config import parse_config
    from facryd.runner import run_leg

    # expansion run (ballistic baseline scale-down) for density/variance/beta
    cfg = parse_config(
        "[run]\nmodel = constrained\n[model]\nn_sites = 21\n[initial]\nr0 = 3\ncenter = 11\n"
        "[time]\nt_max = 3.2\nn_steps = 64\n[fit]\nwindow_pre = 0.5,3.0\nwindow_post = 1.5,3.0\n"
    )
    run_leg(cfg, tmp_path / "expansion")
    # bond-centred phase run for the asymmetry panel
    cfg2 = parse_config(
        "[run]\nmodel = full\n[model]\nn_sites = 7\ndetuning = 200\ntrap_freq = 8\ncoupling = 4\n"
        "site_cutoff = 1\n[initial]\nr0 = 2\ncenter = 3.5\nvib = phase:0\n[time]\nt_max = 1.0\nn_steps = 5\n"
    )
    run_leg(cfg2, tmp_path / "phase")

    def node(args):
        return subprocess.run(["node", str(cli)] + args, capture_output=True, text=True)

    outs = {
        "heatmap": tmp_path / "heatmap.svg",
        "loglog": tmp_path / "loglog.svg",
        "asym": tmp_path / "asym.svg",
    }
    r1 = node(["--kind", "heatmap", "--in", str(tmp_path / "expansion" / "density.csv"), "--out", str(outs["heatmap"])])
    r2 = node([
        "--kind", "loglog-variance",
        "--in", str(tmp_path / "expansion" / "variance.csv"), str(tmp_path / "expansion" / "beta.csv"),
        "--out", str(outs["loglog"]),
    ])
    r3 = node(["--kind", "asymmetry", "--in", str(tmp_path / "phase" / "asymmetry.csv"), "--out", str(outs["asym"])])
    ok = all(r.returncode == 0 for r in (r1, r2, r3)) and all(p.stat().st_size > 0 for p in outs.values())

    # the annotation must echo beta.csv to two decimals
    with open(tmp_path / "expansion" / "beta.csv") as fh:
        betas = [float(row["beta"]) for row in csv_mod.DictReader(fh)]
    svg = outs["loglog"].read_text()
    annotated = all(f"beta = {b:.2f}" in svg for b in betas)
    _report(11, ok and annotated and len(betas) >= 1,
            f"3 panels rendered; annotations {['%.2f' % b for b in betas]} echoed: {annotated}")
