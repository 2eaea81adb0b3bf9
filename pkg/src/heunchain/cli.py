"""Entanglement entropies of free-fermion chains from the command line.

Exit status: 0 success, 2 configuration error, 3 model/physics error
(degenerate, empty or full ground state), 4 numerical failure (including a
failed ``verify``), 5 non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config, with_overrides
from .errors import ConfigError, HeunChainError, NonConvergenceError, NumericalError
from .ground_state import hamiltonian_spectrum
from .models import Su11Params
from .pipeline import bench_conditioning, converge_su11, instantiate, run
from .results import rows_to_csv, rows_to_json
from .verify import verify_config

log = logging.getLogger("heunchain")


def _emit(text: str, path):
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _rows_text(rows, fmt: str) -> str:
    return rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, args.method, args.format, args.output, args.bits)
    if getattr(args, "ell", None) is not None:
        cfg = dataclasses.replace(cfg, ell=args.ell, ell_sweep=None)
    if getattr(args, "ell_sweep", None) is not None:
        start, end, step = args.ell_sweep
        if step < 1 or end < start or start < 0:
            raise ConfigError(f"invalid --ell-sweep {args.ell_sweep}")
        cfg = dataclasses.replace(cfg, ell=None, ell_sweep=(start, end, step))
    return cfg


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    chain, bd = instantiate(cfg.model)
    spec = hamiltonian_spectrum(chain)
    omega = bd.analytic_omega
    recs = []
    for k, w in enumerate(spec.values):
        a = None if omega is None else float(omega[k])
        recs.append({"k": k, "omega": float(w), "analytic_omega": a,
                     "deviation": None if a is None else abs(float(w) - a)})
    if cfg.output.format == "json":
        text = json.dumps(recs, indent=1) + "\n"
    else:
        lines = ["k,omega,analytic_omega,deviation"]
        for r in recs:
            lines.append(",".join("" if r[c] is None else repr(r[c]) if isinstance(r[c], float) else str(r[c])
                                  for c in ("k", "omega", "analytic_omega", "deviation")))
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.output.path)
    if omega is not None:
        window = chain.sites // 8 if isinstance(cfg.model, Su11Params) else chain.sites
        dev = float(np.max(np.abs(spec.values[:window] - omega[:window])))
        log.info("max deviation from analytic spectrum over %d modes: %.3e", window, dev)
    return 0


def cmd_entropy(args) -> int:
    cfg = _load(args)
    if cfg.ell is None:
        raise ConfigError("entropy needs a single ell (use sweep for ell ranges)")
    _emit(_rows_text(run(cfg), cfg.output.format), cfg.output.path)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    if cfg.ell_sweep is None:
        raise ConfigError("sweep needs ell_sweep in the config or --ell-sweep")
    _emit(_rows_text(run(cfg), cfg.output.format), cfg.output.path)
    return 0


def cmd_converge(args) -> int:
    cfg = _load(args)
    if not isinstance(cfg.model, Su11Params):
        raise ConfigError("converge applies to su11 models only")
    ells = cfg.ells()
    out = []
    for ell in ells:
        try:
            row, trace = converge_su11(cfg.model, ell, cfg.tolerances)
        except NonConvergenceError as exc:
            log.error("%s", exc)
            for step in exc.trace:
                log.error("  M=%d S1=%r commutator=%r", step.size, step.S1, step.commutator_residual)
            raise
        out.append({"row": dataclasses.asdict(row), "trace": [dataclasses.asdict(s) for s in trace]})
    if cfg.output.format == "json":
        text = json.dumps(_finite_or_null(out), indent=1, allow_nan=False) + "\n"
    else:
        lines = ["ell,size,S1,commutator_residual,window_change,S1_change"]
        for item in out:
            for s in item["trace"]:
                lines.append(",".join(repr(v) if isinstance(v, float) else str(v)
                                      for v in (item["row"]["ell"], s["size"], s["S1"], s["commutator_residual"],
                                                s["window_change"], s["S1_change"])))
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.output.path)
    return 0


def _finite_or_null(obj):
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite_or_null(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite_or_null(v) for v in obj]
    return obj


def cmd_bench(args) -> int:
    cfg = _load(args)
    if cfg.ell is None:
        raise ConfigError("bench needs a single ell")
    rep = bench_conditioning(cfg.model, cfg.ell, args.mu_shift, cfg.tolerances)
    if cfg.output.format == "json":
        text = json.dumps(_finite_or_null(rep.summary()), indent=1, allow_nan=False) + "\n"
    else:
        text = rep.to_csv()
    _emit(text, cfg.output.path)
    for k, v in rep.summary().items():
        log.info("%s = %s", k, v)
    if not rep.valid:
        log.warning("commutant route invalid for this run (max Rayleigh residual %.3e)",
                    rep.max_rayleigh_residual)
    return 0


def cmd_verify(args) -> int:
    cfg = _load(args)
    checks = verify_config(cfg, seed=args.seed)
    lines = [c.line() for c in checks]
    text = "\n".join(lines) + "\n"
    _emit(text, cfg.output.path)
    failed = [c for c in checks if not c.passed]
    if failed:
        log.error("%d of %d checks failed", len(failed), len(checks))
        return NumericalError.exit_code
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heunchain", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--output", help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--method", choices=("via-commutant", "direct", "both"))
    common.add_argument("--bits", action="store_true", help="report entropies in bits")
    common.add_argument("--seed", type=int, help="seed for randomised verification")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="chain spectrum and analytic check")
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("entropy", parents=[common], help="entropy for a single ell")
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_entropy)
    p = sub.add_parser("sweep", parents=[common], help="entropy over a range of ell")
    p.add_argument("--ell-sweep", type=int, nargs=3, metavar=("START", "END", "STEP"))
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("converge", parents=[common], help="su(1,1) truncation convergence")
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_converge)
    p = sub.add_parser("bench", parents=[common], help="conditioning study, direct vs commutant")
    p.add_argument("--ell", type=int)
    p.add_argument("--mu-shift", type=float, default=0.0,
                   help="perturb mu in the commutant (negative control)")
    p.set_defaults(func=cmd_bench)
    p = sub.add_parser("verify", parents=[common], help="run the invariant suite on a config")
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ConfigError.exit_code if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except HeunChainError as exc:
        msg = str(exc)
        if exc.exit_code == 3 and "degenerate" in msg.lower():
            msg += " (try perturbing b)"
        print(f"error: {msg}", file=sys.stderr)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NumericalError.exit_code


if __name__ == "__main__":
    sys.exit(main())
