"""Command-line interface.

Subcommands: basis, hamiltonian, coeffs, sw, evolve, experiment, sweep,
verify. Exit codes: 0 ok, 1 config error, 2 capacity error, 3 resonance
error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import __version__
from . import config as config_schema
from .config import PRESETS, ExperimentConfig, load_preset, parse_config, validate_config
from .domain import domain_to_spins, enumerate_domain_states
from .errors import CapacityError, ConfigError, FacrydError, InvalidParameterError, ResonanceError
from .momentum_space import f_coeff_closed, f_coeff_oracle
from .params import ModelParams, validate_params
from .position_space import build_constrained_hamiltonian, build_full_hamiltonian
from .runner import run_experiment
from .schrieffer_wolff import sw_decomposition, sw_effective, sw_residual
from .verify import verify_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CAPACITY = 2
EXIT_RESONANCE = 3
EXIT_VERIFY = 4


def _out_stream(path: str | None):
    return open(path, "w") if path else sys.stdout


def _spin_string(spins) -> str:
    return "".join("u" if s else "d" for s in spins)


def cmd_basis(args) -> int:
    states = enumerate_domain_states(args.n)
    out = _out_stream(args.out)
    print("c,r,parity,exc_count,spin_string", file=out)
    for s in states:
        print(
            f"{s.cm_index},{s.rel_index},{s.parity},{s.exc_count},"
            f"{_spin_string(domain_to_spins(s, args.n))}",
            file=out,
        )
    if args.out:
        out.close()
    return EXIT_OK


def _params_from_args(args) -> ModelParams:
    return validate_params(
        ModelParams(
            n_sites=args.n,
            detuning=args.detuning,
            trap_freq=args.omega,
            coupling=args.kappa,
            site_cutoff=args.site_cutoff,
            total_cutoff=args.total_cutoff,
        )
    )


def cmd_hamiltonian(args) -> int:
    p = _params_from_args(args)
    if args.model == "full":
        H = build_full_hamiltonian(p)
    else:
        H = build_constrained_hamiltonian(p, args.truncation)
    out = _out_stream(args.out)
    print("row,col,re,im", file=out)
    if args.dump:
        rows, cols, vals = H.upper_entries()
        for r, c, v in zip(rows, cols, vals):
            print(f"{r},{c},{float(v.real)!r},{float(v.imag)!r}", file=out)
    if args.out:
        out.close()
    return EXIT_OK


def cmd_coeffs(args) -> int:
    n = args.n
    out = _out_stream(args.out)
    print("k,kprime,p,f_closed,f_oracle,abs_diff", file=out)
    for k in range(1, n):
        for kp in range(1, n):
            for p in range(1, n + 1):
                fc = f_coeff_closed(k, kp, p, n)
                fo = f_coeff_oracle(k, kp, p, n)
                print(f"{k},{kp},{p},{float(fc)!r},{float(fo)!r},{float(abs(fc - fo))!r}", file=out)
    if args.out:
        out.close()
    return EXIT_OK


def cmd_sw(args) -> int:
    p = _params_from_args(args)
    dec = sw_decomposition(p, args.q, total_cutoff=args.nph + 1)
    H = sw_effective(p, args.q, args.nph)
    out = _out_stream(args.out)
    print("row,col,re,im", file=out)
    rows, cols, vals = H.upper_entries()
    for r, c, v in zip(rows, cols, vals):
        print(f"{r},{c},{float(v.real)!r},{float(v.imag)!r}", file=out)
    if args.out:
        out.close()
    print(f"residual max |V + [S, H0]| = {sw_residual(dec):.3e}", file=sys.stderr)
    return EXIT_OK


def _load_config(args) -> ExperimentConfig:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
    else:
        cfg = parse_config("")
    if args.seed is not None:
        cfg = cfg.with_key("run.seed", str(args.seed))
    for item in args.set or []:
        key, _, value = item.partition("=")
        if not value:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        cfg = cfg.with_key(key, value)
    return validate_config(cfg)


def cmd_evolve(args) -> int:
    cfg = dataclasses.replace(_load_config(args), sweep=())  # single leg
    manifest = run_experiment(cfg, args.out, threads=args.threads)
    return _manifest_exit(manifest)


def cmd_experiment(args) -> int:
    cfg = load_preset(args.preset)
    if args.seed is not None:
        cfg = cfg.with_key("run.seed", str(args.seed))
    manifest = run_experiment(cfg, args.out, threads=args.threads)
    return _manifest_exit(manifest)


def cmd_sweep(args) -> int:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
    else:
        cfg = parse_config("")
    if args.seed is not None:
        cfg = cfg.with_key("run.seed", str(args.seed))
    for item in args.set or []:
        key, _, values = item.partition("=")
        if not values:
            raise ConfigError(f"--set expects KEY=V1,V2,..., got {item!r}")
        cfg = cfg.with_key(f"sweep.{key}", values)
    manifest = run_experiment(validate_config(cfg), args.out, threads=args.threads)
    return _manifest_exit(manifest)


def _manifest_exit(manifest: dict) -> int:
    worst = EXIT_OK
    for leg in manifest["legs"]:
        status = leg["status"]
        line = f"[{status}] {leg['name']}"
        if leg["error"]:
            line += f": {leg['error']}"
        print(line)
        if status == "capacity-error":
            worst = max(worst, EXIT_CAPACITY)
        elif status == "resonance-error":
            worst = max(worst, EXIT_RESONANCE)
        elif status != "ok":
            worst = max(worst, EXIT_CONFIG)
    return worst


def cmd_verify(args) -> int:
    results = verify_suite(args.level)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"[{mark}] {r.name} ({r.seconds:.1f}s): {r.detail}")
        all_ok &= r.passed
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="facryd", description=__doc__)
    ap.add_argument("--version", action="version", version=f"facryd {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(s):
        s.add_argument("--out", default=None, help="output file or directory")
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--threads", type=int, default=1)

    def add_model_flags(s):
        s.add_argument("--n", type=int, default=5, help="number of sites (odd)")
        s.add_argument("--omega", type=float, default=8.0, help="trap frequency")
        s.add_argument("--kappa", type=float, default=0.0, help="spin-phonon coupling")
        s.add_argument("--detuning", type=float, default=500.0)
        s.add_argument("--site-cutoff", type=int, default=0)
        s.add_argument("--total-cutoff", type=int, default=0)

    s = sub.add_parser("basis", help="dump the single-domain sector as CSV")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_basis)

    s = sub.add_parser("hamiltonian", help="dump an assembled operator as CSV triples")
    s.add_argument("--model", choices=("full", "constrained"), required=True)
    s.add_argument("--truncation", choices=("site", "total"), default="site")
    s.add_argument("--dump", action="store_true")
    add_model_flags(s)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_hamiltonian)

    s = sub.add_parser("coeffs", help="scattering amplitudes: closed form vs oracle")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_coeffs)

    s = sub.add_parser("sw", help="effective Hamiltonian of one block at fixed phonon number")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--nph", type=int, required=True)
    add_model_flags(s)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_sw)

    config_help = (
        "config schema:\n"
        + (config_schema.__doc__ or "")
        + "\ndefaults (the empty config):\n\n"
        + "\n".join("    " + line for line in parse_config("").to_text().splitlines())
    )
    s = sub.add_parser(
        "evolve",
        help="run one configured evolution (ignores [sweep])",
        epilog=config_help,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    s.add_argument("--config", default=None)
    s.add_argument("--set", action="append", metavar="KEY=VALUE")
    add_common(s)
    s.set_defaults(fn=cmd_evolve)

    s = sub.add_parser("experiment", help="run a named preset with its sweep")
    s.add_argument("preset", choices=sorted(PRESETS))
    add_common(s)
    s.set_defaults(fn=cmd_experiment)

    s = sub.add_parser("sweep", help="run a config's sweep legs (add --set to extend)")
    s.add_argument("--config", default=None)
    s.add_argument("--set", action="append", metavar="KEY=V1,V2,...")
    add_common(s)
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("verify", help="run the self-verification suite")
    s.add_argument("--level", choices=("fast", "full"), default="fast")
    s.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidParameterError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ResonanceError as exc:
        print(f"resonance error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except FacrydError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
