#!/usr/bin/env python3
# reproduce.py
"""Regenerate every figure-style dataset as CSV under ./results."""
import logging
import os
import sys
from pathlib import Path

import numpy as np

# Add the py directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'py'))

from hlestim.complexity import ComplexityParams, Method, SWEEP_COLUMNS, complexity_sweep
from hlestim.config import load_config
from hlestim.export import write_csv
from hlestim.log import setup_logging
from hlestim.probe import GRID_FAMILIES, ProbeFamily, make_probe
from hlestim.qae import compare_sweep
from hlestim.qpe import failure_curve

log = logging.getLogger("hlestim.reproduce")

FEMO_N, FEMO_ETA = 152, 113
KAISER_ALPHA = 0.98


class ReproductionManager:
    def __init__(self, output_dir="./results", qae_qs=(8, 9), qae_points=2000, qpe_p=3, qpe_points=None,
                 femo_ks=(1, 2, 3), eps_range=(1e-4, 1e-1), eps_points=7,
                 hubbard_Ns=tuple(range(16, 153, 8)), hubbard_eps=1e-3, workers=None):
        # ----------------------------------------------------------------------
        # 0. Path and grid configuration
        # ----------------------------------------------------------------------
        self.output_dir = Path(output_dir)
        self.qae_qs = tuple(qae_qs)
        self.qae_points = qae_points
        self.qpe_p = qpe_p
        self.qpe_points = qpe_points or load_config().qpe_points
        self.femo_ks = tuple(femo_ks)
        self.eps_values = [float(e) for e in np.geomspace(eps_range[0], eps_range[1], eps_points)]
        self.hubbard_Ns = tuple(hubbard_Ns)
        self.hubbard_eps = hubbard_eps
        self.workers = workers

        self._init_directories()

    def _init_directories(self):
        """Ensure the output folder exists."""
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, name):
        return self.output_dir / name

    def qae_curves(self):
        """qae_q{q}.csv: sine, uniform and optimal-probe MSE over θ."""
        paths = []
        keys = ("mse_sine", "mse_uniform", "mse_optimal")
        for q in self.qae_qs:
            table = compare_sweep(q, self.qae_points, workers=self.workers)
            path = self._path(f"qae_q{q}.csv")
            write_csv(("theta",) + keys, zip(table["theta"], *(table[k] for k in keys)), path)
            paths.append(path)
        return paths

    def failure_curves(self):
        """probe_failure_p{p}.csv: one failure column per grid-indexed family, θ in [0, 1/2]."""
        states = [make_probe(f, self.qpe_p, KAISER_ALPHA if f is ProbeFamily.KAISER else None)
                  for f in GRID_FAMILIES]
        thetas = np.arange(self.qpe_points) / self.qpe_points
        thetas = thetas[thetas <= 0.5]
        curves = [failure_curve(s, thetas, self.workers) for s in states]
        path = self._path(f"probe_failure_p{self.qpe_p}.csv")
        write_csv(("theta",) + tuple(s.label for s in states), zip(thetas, *curves), path)
        return [path]

    def _write_sweep(self, table, name):
        header = (table.axis,) + SWEEP_COLUMNS
        rows = [(r.axis_value,) + tuple(r.counts.get(c) for c in SWEEP_COLUMNS) for r in table.rows]
        path = self._path(name)
        write_csv(header, rows, path)
        return path

    def femo_sweeps(self):
        """femo_k{k}.csv: every method along ε at (N, η) = (152, 113)."""
        paths = []
        for k in self.femo_ks:
            params = ComplexityParams(FEMO_N, FEMO_ETA, k, self.eps_values[0], Method.SHADOW)
            table = complexity_sweep(params, "eps", self.eps_values, workers=self.workers)
            paths.append(self._write_sweep(table, f"femo_k{k}.csv"))
        return paths

    def hubbard_sweep(self, k=1):
        """hubbard_k{k}.csv: every method along N with η = ⌈7N/8⌉."""
        N0 = self.hubbard_Ns[0]
        params = ComplexityParams(N0, (7 * N0 + 7) // 8, k, self.hubbard_eps, Method.SHADOW)
        table = complexity_sweep(params, "N", self.hubbard_Ns, hubbard=True, workers=self.workers)
        return [self._write_sweep(table, f"hubbard_k{k}.csv")]

    def run_all(self):
        paths = []
        for stage, step in (("QAE", self.qae_curves), ("QPE", self.failure_curves),
                            ("FEMO", self.femo_sweeps), ("HUBBARD", self.hubbard_sweep)):
            written = step()
            log.info("[%s] wrote %s", stage, ", ".join(str(p) for p in written))
            paths.extend(written)
        return paths


if __name__ == "__main__":
    setup_logging(load_config().log_level)
    manager = ReproductionManager(sys.argv[1] if len(sys.argv) > 1 else "./results")
    print("=" * 60)
    print(f"Writing datasets to {manager.output_dir.resolve()}")
    print("=" * 60)
    for p in manager.run_all():
        print(f"  {p}")
    print("=" * 60)
