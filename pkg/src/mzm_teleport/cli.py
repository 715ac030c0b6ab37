"""Command line entry point: ``mzm-teleport {braids,spectrum,teleport,tomo,verify}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config as cfg
from .kitaev import MAX_DENSE_SITES, ChainSpec, degeneracies, spectrum
from .noise import teleport_draws
from .pauli import PauliString, braid_spin_rep, logical_action, six_braids
from .report import build_report
from .teleport import InputStateSpec
from .tomography import CLASSICAL_BOUND, expectations_from_state, fidelity, reconstruct
from .verify import run_all

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG = 0, 1, 2


def spin_rep_text(s: int, p: PauliString) -> str:
    sign = "+" if s % 4 == 1 else "-"
    ops = "".join(f"{f}{q}" for q, f in enumerate(p.factors, 1) if f != "I")
    return f"(1 {sign} i {ops})/sqrt(2)"


def _matrix_lines(m: np.ndarray) -> list[str]:
    def cell(z: complex) -> str:
        z = complex(round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0)
        return f"{z.real:+.4f}{z.imag:+.4f}j"
    return ["  [" + "  ".join(cell(z) for z in row) + "]" for row in m]


def cmd_braids(args) -> int:
    for name, g in six_braids().items():
        s, p = braid_spin_rep(g, 2, 2)
        print(f"{g.a} <-> {g.b}   spin {spin_rep_text(s, p)}   logical {name}")
        for line in _matrix_lines(logical_action([g])):
            print(line)
    return EXIT_OK


def format_levels(levels) -> str:
    parts = []
    for value, mult in levels:
        v = f"{value:.6g}" if abs(value) > 1e-12 else "0"
        parts.append(v if mult == 1 else f"{v} (x{mult})")
    return ", ".join(parts)


def cmd_spectrum(args) -> int:
    if not 2 <= args.n <= MAX_DENSE_SITES:
        print(f"error: n must lie in 2..{MAX_DENSE_SITES}", file=sys.stderr)
        return EXIT_CONFIG
    spec = ChainSpec(args.n, args.t, args.kind, args.convention)
    print(format_levels(degeneracies(spectrum(spec), 1e-9)))
    return EXIT_OK


def _run_config(args) -> cfg.RunConfig:
    run = cfg.load(args.config)
    return run.override(
        draws=args.draws,
        seed=args.seed,
        inputs=tuple(args.input) if args.input else None,
        postselect=getattr(args, "postselect", None),
    )


def cmd_teleport(args) -> int:
    run = _run_config(args)
    report = build_report(run, args.workers)
    out = Path(args.out)
    for p in report.write(out):
        print(f"wrote {p}")
    sys.stdout.write(report.fidelity_csv())
    for r in report.results:
        if r.es is None:
            print(f"warning: no draw retained any weight under ES for input {r.spec.label}", file=sys.stderr)
    return EXIT_OK


def cmd_tomo(args) -> int:
    run = _run_config(args)
    if args.shots is not None and args.shots <= 0:
        raise cfg.ConfigError("shots must be positive")
    rng = np.random.default_rng(run.seed)
    which = 1 if run.postselect == "es" else 0
    blocks = None if args.initial else teleport_draws(run.noise(), run.draws, run.seed, args.workers)
    for label in run.inputs:
        spec = InputStateSpec.parse(label)
        c = spec.coefficients
        if blocks is None:
            rho = np.outer(c, c.conj())
        else:
            acc, kept = np.zeros((2, 2), dtype=complex), 0
            for b in blocks:
                r = np.einsum("i,j,ijab->ab", c, c.conj(), b[which])
                tr = np.trace(r).real
                if tr > 1e-15:
                    acc += r / tr
                    kept += 1
            if not kept:
                print(f"{label}: nothing retained", file=sys.stderr)
                continue
            rho = acc / kept
        bloch = expectations_from_state(rho, args.shots, rng if args.shots else None)
        est = reconstruct(bloch)
        f = fidelity(est, c)
        flag = "above" if f > CLASSICAL_BOUND else "below"
        print(f"{spec.display}  r=({bloch.x:+.4f}, {bloch.y:+.4f}, {bloch.z:+.4f})  F={f:.4f} ({flag} 2/3)")
        for line in _matrix_lines(est.matrix):
            print(line)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_all()
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} identities verified")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mzm-teleport", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("braids", help="six two-chain braids and their logical action").set_defaults(func=cmd_braids)

    sp = sub.add_parser("spectrum", help="eigenvalues of a spin-mapped chain")
    sp.add_argument("--kind", choices=("trivial", "kitaev"), default="kitaev")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--convention", choices=("raw", "shifted"), default="raw")
    sp.set_defaults(func=cmd_spectrum)

    def run_args(p, default_out=None):
        p.add_argument("--config", help="JSON config (default: shipped device tables)")
        p.add_argument("--draws", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--input", action="append", help="input state label, repeatable")
        p.add_argument("--postselect", choices=cfg.POSTSELECT)
        p.add_argument("--workers", type=int, default=1)
        if default_out:
            p.add_argument("--out", default=default_out)

    tp = sub.add_parser("teleport", help="Monte Carlo teleportation fidelities")
    run_args(tp, "reports")
    tp.set_defaults(func=cmd_teleport)

    tm = sub.add_parser("tomo", help="reconstruct the teleported state")
    run_args(tm)
    tm.add_argument("--shots", type=int, help="sample this many shots per axis")
    tm.add_argument("--initial", action="store_true", help="reconstruct the prepared input instead")
    tm.set_defaults(func=cmd_tomo)

    sub.add_parser("verify", help="run the identity checks").set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except cfg.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
