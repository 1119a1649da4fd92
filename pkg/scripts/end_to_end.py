"""End-to-end remote-bit BER for the no-surface baseline and 8, 16, 32 elements.

Sweeps each scenario until its pooled destination BER falls through 1e-3 and
prints the interpolated crossing next to the reference value.

    python scripts/end_to_end.py --target-errors 200
"""

import argparse
from pathlib import Path

import numpy as np

from ris_plnc.cli import points_to_csv, write_atomic
from ris_plnc.model import SystemConfig
from ris_plnc.sim import StoppingRule, crossing_db, sweep_to_crossing

SCENARIOS = [  # label, config, reference crossing (dB)
    ("no-RIS", SystemConfig(ris_enabled=False), 28.0),
    ("N=8", SystemConfig(n1=8, n2=8, n3=8), 5.0),
    ("N=16", SystemConfig(n1=16, n2=16, n3=16), -4.0),
    ("N=32", SystemConfig(n1=32, n2=32, n3=32), -9.0),
]


def parse(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--target-errors", type=int, default=100)
    p.add_argument("--seed", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="results/e2e")
    return p.parse_args(argv)


if __name__ == "__main__":
    a = parse()
    stop = StoppingRule(max_trials=5_000_000, target_errors=a.target_errors)
    print(f"{'scenario':8s} {'node':8s} {'crossing dB':>12s} {'reference':>10s}")
    for label, cfg, ref in SCENARIOS:
        grid = np.arange(ref - 12.0, ref + 12.5, 1.0)
        points = []
        for kind in ("e2e-d1", "e2e-d2", "e2e-avg"):
            curve = sweep_to_crossing(cfg, grid, kind, 1e-3, stop, a.seed, a.workers, beyond=2)
            points += curve.points
            c = crossing_db(curve.snr_db, curve.ber)
            shown = "none" if c is None else f"{c:.2f}"
            print(f"{label:8s} {curve.points[0].node:8s} {shown:>12s} {ref:>10g}")
        tag = label.lower().replace("=", "").replace("-", "")
        write_atomic(Path(f"{a.out}_{tag}.csv"), points_to_csv(points, cfg, a.seed))
