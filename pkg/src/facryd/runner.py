"""Experiment orchestration: build the configured model, propagate, and emit
CSV files plus a JSON manifest.

CSV contracts (fixed column order, full-precision floats):
    density.csv:   t, site, value        (site holds the relative label for
                                          momentum/effective runs)
    variance.csv:  t, sigma, delta_sigma, norm, energy
    beta.csv:      window_lo, window_hi, beta, r_squared
    asymmetry.csv: t, j, delta_n         (bond-centred runs only)
Outputs are deterministic for a fixed config and seed; the manifest records
the config hash, package version, and wall time.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bases import DomainPhononBasis, RelativeBasis, SpinPhononBasis
from .config import PRESET_PROVENANCE, ExperimentConfig
from .errors import CapacityError, FacrydError, InsufficientSamplesError, ResonanceError
from .momentum_space import build_hq_position, change_of_basis
from .observables import asymmetry, centered_site_labels, fit_beta
from .params import ModelParams
from .position_space import FullModelOperator, build_constrained_hamiltonian, build_full_hamiltonian
from .propagate import DENSE_THRESHOLD, TrajectoryRecord, propagate
from .schrieffer_wolff import sw_effective
from .states import StateVector, VibrationalSpec, prepare_initial, single_site_vector


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


@dataclass
class LegResult:
    name: str
    status: str  # ok | capacity-error | resonance-error | failed
    error: str = ""
    files: tuple[str, ...] = ()


def _mean_phonons(spec: VibrationalSpec, cutoff: int, trap_freq: float) -> float:
    if spec.kind == "thermal":
        levels = np.arange(cutoff + 1)
        if spec.temperature <= 1e-12:
            return 0.0
        w = np.exp(-trap_freq * levels / spec.temperature)
        return float((levels * w).sum() / w.sum())
    vec, _ = single_site_vector(spec, max(cutoff, 1))
    return float((np.arange(vec.size) * np.abs(vec) ** 2).sum())


def _time_grid(cfg: ExperimentConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.t_max, cfg.n_steps + 1)


def _run_position_model(cfg: ExperimentConfig) -> TrajectoryRecord:
    p = cfg.params
    vib = cfg.vib_spec()
    coords = centered_site_labels(p.n_sites, cfg.center)
    times = _time_grid(cfg)

    if p.coupling == 0.0 and vib.kind != "thermal":
        # the phonon register decouples exactly: propagate the spin factor
        # and carry the constant vibrational energy along
        p0 = p.with_(site_cutoff=0, total_cutoff=0, nn_interaction=None)
        basis = _position_basis(cfg, p0)
        psi0 = prepare_initial(p0, cfg.r0, cfg.center, VibrationalSpec.fock(0), basis)
        H = _position_hamiltonian(cfg, p0, basis)
        rec = propagate(H, psi0, times, coords=coords)
        rec.energy = rec.energy + p.trap_freq * p.n_sites * _mean_phonons(vib, p.site_cutoff, p.trap_freq)
        return rec

    basis = _position_basis(cfg, p)
    H = _position_hamiltonian(cfg, p, basis)
    if vib.kind == "thermal":
        samples = prepare_initial(p, cfg.r0, cfg.center, vib, basis)
        recs = [propagate(H, sv, times, coords=coords) for _, sv in samples]
        weights = np.array([w for w, _ in samples])
        out = recs[0]
        out.density = np.einsum("s,stj->tj", weights, np.stack([r.density for r in recs]))
        out.energy = weights @ np.stack([r.energy for r in recs])
        out.norm = weights @ np.stack([r.norm for r in recs])
        from .observables import variance as _variance

        out.sigma = np.array([_variance(d, coords) for d in out.density])
        out.delta_sigma = out.sigma - out.sigma[0]
        return out
    psi0 = prepare_initial(p, cfg.r0, cfg.center, vib, basis)
    return propagate(H, psi0, times, coords=coords)


def _position_basis(cfg: ExperimentConfig, p: ModelParams):
    if cfg.model == "full":
        return SpinPhononBasis(p.n_sites, p.site_cutoff, p.max_amplitudes)
    cutoff = p.site_cutoff if cfg.truncation == "site" else p.total_cutoff
    return DomainPhononBasis(p.n_sites, cutoff, cfg.truncation, p.max_amplitudes)


def _position_hamiltonian(cfg: ExperimentConfig, p: ModelParams, basis):
    if cfg.model == "full":
        if basis.dim > DENSE_THRESHOLD:
            return FullModelOperator(p, basis)
        return build_full_hamiltonian(p, basis)
    return build_constrained_hamiltonian(p, cfg.truncation, basis)


def _run_relative_model(cfg: ExperimentConfig) -> TrajectoryRecord:
    p = cfg.params
    times = _time_grid(cfg)
    n = p.n_sites
    if cfg.model == "momentum":
        H = build_hq_position(p, cfg.q)
        basis: RelativeBasis = H.basis
        psi = np.zeros(basis.dim, dtype=complex)
        vac = basis.register.index(np.zeros(n, dtype=int))
        psi[basis.index(cfg.r0, vac)] = 1.0
    else:
        H = sw_effective(p, cfg.q, cfg.n_phonons)
        basis = H.basis
        # k-space image of a definite initial domain size, uniform over the
        # fixed-number phonon occupations
        U = change_of_basis(n)
        psi = np.zeros(basis.dim, dtype=complex)
        for k in range(1, n):
            psi[basis.index(k, 0) : basis.index(k, 0) + basis.ph_size] = U[cfg.r0 - 1, k - 1]
        psi /= np.linalg.norm(psi)
    return propagate(H, StateVector(psi, basis), times)


def run_leg(cfg: ExperimentConfig, out_dir: Path) -> tuple[TrajectoryRecord | None, list[str]]:
    """Execute one configuration and write its CSV files."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.model in ("full", "constrained"):
        rec = _run_position_model(cfg)
        labels = rec.coords.labels
    else:
        rec = _run_relative_model(cfg)
        labels = np.arange(1, cfg.params.n_sites)
    files = []

    values = rec.density if rec.density is not None else rec.rel_distribution
    rows = []
    for i, t in enumerate(rec.times):
        for j, lab in enumerate(labels):
            rows.append((_fmt(t), str(int(lab)), _fmt(values[i, j])))
    _write_csv(out_dir / "density.csv", ["t", "site", "value"], rows)
    files.append("density.csv")

    if rec.sigma is None:
        sigma = np.array([
            float((labels**2 * v).sum() / v.sum() - ((labels * v).sum() / v.sum()) ** 2)
            for v in values
        ])
        dsig = sigma - sigma[0]
    else:
        sigma, dsig = rec.sigma, rec.delta_sigma
    _write_csv(
        out_dir / "variance.csv",
        ["t", "sigma", "delta_sigma", "norm", "energy"],
        [
            (_fmt(t), _fmt(s), _fmt(d), _fmt(nm), _fmt(en))
            for t, s, d, nm, en in zip(rec.times, sigma, dsig, rec.norm, rec.energy)
        ],
    )
    files.append("variance.csv")

    beta_rows = []
    for window in (cfg.window_pre, cfg.window_post):
        try:
            beta, r2 = fit_beta(rec.times, dsig, window)
        except InsufficientSamplesError:
            continue
        beta_rows.append((_fmt(window[0]), _fmt(window[1]), _fmt(beta), _fmt(r2)))
    _write_csv(out_dir / "beta.csv", ["window_lo", "window_hi", "beta", "r_squared"], beta_rows)
    files.append("beta.csv")

    if rec.coords is not None and rec.coords.bond_centered and rec.density is not None:
        rows = []
        for i, t in enumerate(rec.times):
            js, dn = asymmetry(rec.density[i], rec.coords)
            for j, d in zip(js, dn):
                rows.append((_fmt(t), str(int(j)), _fmt(d)))
        _write_csv(out_dir / "asymmetry.csv", ["t", "j", "delta_n"], rows)
        files.append("asymmetry.csv")
    return rec, files


def sweep_legs(cfg: ExperimentConfig):
    """Expand the sweep section into (name, leg-config) pairs."""
    if not cfg.sweep:
        return [("run", cfg)]
    keys = [k for k, _ in cfg.sweep]
    value_lists = [v for _, v in cfg.sweep]
    legs = []
    for combo in itertools.product(*value_lists):
        leg = cfg
        parts = []
        for key, val in zip(keys, combo):
            leg = leg.with_key(key, val)
            parts.append(f"{key.split('.')[-1]}={val.replace(':', '').replace(',', '_')}")
        legs.append(("_".join(parts), leg))
    return legs


def _leg_worker(args):
    name, leg_cfg, leg_dir = args
    try:
        _, files = run_leg(leg_cfg, Path(leg_dir))
        return LegResult(name, "ok", files=tuple(files))
    except CapacityError as exc:
        return LegResult(name, "capacity-error", f"{exc} (hint: reduce the phonon cutoff or n_sites)")
    except ResonanceError as exc:
        return LegResult(name, "resonance-error", f"{exc} (hint: change trap_freq to detune the resonance)")
    except FacrydError as exc:
        return LegResult(name, "failed", str(exc))


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> dict:
    """Run all sweep legs of a configuration; returns the manifest dict."""
    start = time.time()
    base = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    base.mkdir(parents=True, exist_ok=True)
    legs = sweep_legs(cfg)
    jobs = [(name, leg, str(base / name)) for name, leg in legs]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_leg_worker, jobs))
    else:
        results = [_leg_worker(job) for job in jobs]
    config_text = cfg.to_text()
    manifest = {
        "version": __version__,
        "config": config_text,
        "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        "seed": cfg.seed,
        "coordinate": "site" if cfg.model in ("full", "constrained") else (
            "relative_size" if cfg.model == "momentum" else "quasimomentum"
        ),
        "provenance": PRESET_PROVENANCE.get(cfg.preset, {}),
        "legs": [
            {"name": r.name, "status": r.status, "error": r.error, "files": list(r.files)}
            for r in results
        ],
        "wall_time_s": round(time.time() - start, 3),
    }
    with open(base / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
