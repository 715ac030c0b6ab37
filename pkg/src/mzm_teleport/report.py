"""Teleportation reports: fidelity table, reconstructed states, summary."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .noise import McEstimate, teleport_draws
from .teleport import InputStateSpec
from .tomography import CLASSICAL_BOUND, expectations_from_state, fidelity, reconstruct

DIGITS = 10


@dataclass
class InputResult:
    spec: InputStateSpec
    ns: McEstimate
    es: McEstimate | None
    rho_ns: np.ndarray
    rho_es: np.ndarray | None


@dataclass
class TeleportReport:
    config: RunConfig
    results: list[InputResult]

    def average(self, which: str) -> float | None:
        vals = [getattr(r, which) for r in self.results]
        if any(v is None for v in vals):
            return None
        return float(np.mean([v.mean for v in vals]))

    # -- serialisation -------------------------------------------------

    def fidelity_csv(self) -> str:
        cols = ["input"]
        want_ns = self.config.postselect in ("ns", "both")
        want_es = self.config.postselect in ("es", "both")
        if want_ns:
            cols += ["f_NS", "stderr_NS"]
        if want_es:
            cols += ["f_ES", "stderr_ES", "es_discarded"]
        cols += ["draws", "seed"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.results:
            row = [r.spec.label]
            if want_ns:
                row += [_fmt(r.ns.mean), _fmt(r.ns.stderr)]
            if want_es:
                row += ([_fmt(r.es.mean), _fmt(r.es.stderr), r.es.discarded] if r.es else ["nan", "nan", self.config.draws])
            row += [self.config.draws, self.config.seed]
            w.writerow(row)
        row = ["AVG"]
        if want_ns:
            row += [_fmt(self.average("ns")), ""]
        if want_es:
            row += [_fmt(self.average("es")), "", ""]
        w.writerow(row + [self.config.draws, self.config.seed])
        return buf.getvalue()

    def states_json(self) -> str:
        out = {}
        for r in self.results:
            entry = {}
            for key, rho in (("NS", r.rho_ns), ("ES", r.rho_es)):
                if rho is None:
                    entry[key] = None
                    continue
                bloch = expectations_from_state(rho)
                est = reconstruct(bloch)
                entry[key] = {
                    "bloch": [_num(v) for v in bloch.as_array()],
                    "real": [[_num(x) for x in row] for row in est.matrix.real],
                    "imag": [[_num(x) for x in row] for row in est.matrix.imag],
                    "fidelity": _num(fidelity(est, r.spec.coefficients)),
                }
            out[r.spec.label] = entry
        return _dumps(out)

    def summary_json(self) -> str:
        avg_ns, avg_es = self.average("ns"), self.average("es")
        empty_es = [r.spec.label for r in self.results if r.es is None]
        data = {
            "config_sha256": self.config.digest(),
            "seed": self.config.seed,
            "draws": self.config.draws,
            "dephasing_policy": self.config.dephasing_policy,
            "c_d": self.config.c_d,
            "classical_bound": _num(CLASSICAL_BOUND),
            "average": {"NS": _num(avg_ns), "ES": _num(avg_es)},
            "above_classical_bound": {
                "NS": avg_ns is not None and avg_ns > CLASSICAL_BOUND,
                "ES": avg_es is not None and avg_es > CLASSICAL_BOUND,
            },
            "es_empty_inputs": empty_es,
            "per_input": {
                r.spec.label: {
                    "NS": _num(r.ns.mean),
                    "ES": _num(r.es.mean) if r.es else None,
                    "es_discarded_draws": r.es.discarded if r.es else self.config.draws,
                }
                for r in self.results
            },
        }
        return _dumps(data)

    def write(self, out_dir: Path) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        files = {
            "fidelity.csv": self.fidelity_csv(),
            "states.json": self.states_json(),
            "summary.json": self.summary_json(),
        }
        paths = []
        for name, text in files.items():
            p = out_dir / name
            p.write_text(text)
            paths.append(p)
        return paths


def _num(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return round(float(x), DIGITS) + 0.0


def _fmt(x) -> str:
    return "nan" if x is None else f"{x:.{DIGITS}f}"


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _mean_rho(blocks, c: np.ndarray) -> tuple[np.ndarray | None, int]:
    acc, kept = np.zeros((2, 2), dtype=complex), 0
    for b in blocks:
        rho = np.einsum("i,j,ijab->ab", c, c.conj(), b)
        tr = np.trace(rho).real
        if tr > 1e-15:
            acc += rho / tr
            kept += 1
    return (acc / kept if kept else None), kept


def build_report(config: RunConfig, workers: int = 1) -> TeleportReport:
    """Run the draws once and evaluate every requested input on them."""
    blocks = teleport_draws(config.noise(), config.draws, config.seed, workers)
    ns_blocks = [b[0] for b in blocks]
    es_blocks = [b[1] for b in blocks]
    results = []
    for label in config.inputs:
        spec = InputStateSpec.parse(label)
        c = spec.coefficients
        ns_f = [_fid(b, c) for b in ns_blocks]
        es_f = [f for f in (_fid(b, c) for b in es_blocks) if f is not None]
        rho_ns, _ = _mean_rho(ns_blocks, c)
        rho_es, _ = _mean_rho(es_blocks, c)
        es = McEstimate.from_samples(es_f, config.seed, config.draws - len(es_f)) if es_f else None
        results.append(InputResult(spec, McEstimate.from_samples(ns_f, config.seed), es, rho_ns, rho_es))
    return TeleportReport(config, results)


def _fid(block: np.ndarray, c: np.ndarray) -> float | None:
    rho = np.einsum("i,j,ijab->ab", c, c.conj(), block)
    tr = float(np.trace(rho).real)
    if tr <= 1e-15:
        return None
    return float((c.conj() @ rho @ c).real) / tr
