"""Relay XOR-bit BER over co-phased RIS fading for 8, 16 and 32 elements per surface.

Writes one CSV per element count and formula mode, each holding the exact,
approximate and bound analytic curves plus the Monte-Carlo estimate.

    python scripts/relay_fading.py --mode derived
"""

import argparse
import sys
from pathlib import Path

from ris_plnc.cli import main


def parse(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--outdir", type=Path, default=Path("results"))
    p.add_argument("--mode", choices=("corrected", "derived"), default="corrected")
    p.add_argument("--seed", default="0")
    p.add_argument("--workers", default="1")
    return p.parse_args(argv)


if __name__ == "__main__":
    a = parse()
    status = 0
    for n in ("8", "16", "32"):
        out = a.outdir / f"relay_fading_n{n}_{a.mode}.csv"
        status = max(status, main([
            "relay-fading", "--n1", n, "--n2", n, "--n3", n, "--mode", a.mode,
            "--snr-start", "-20", "--snr-stop", "10", "--snr-step", "2", "--trials", "2000000",
            "--seed", a.seed, "--workers", a.workers, "--out", str(out), "-v",
        ]))
    sys.exit(status)
