"""Relay XOR-bit BER over AWGN: closed form, min-distance approximation and Monte-Carlo.

    python scripts/relay_awgn.py --out results/relay_awgn.csv
"""

import argparse
import sys

from ris_plnc.cli import main


def parse(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="results/relay_awgn.csv")
    p.add_argument("--seed", default="0")
    p.add_argument("--workers", default="1")
    return p.parse_args(argv)


if __name__ == "__main__":
    a = parse()
    sys.exit(main([
        "relay-awgn", "--ps1", "2", "--ps2", "1", "--snr-start", "-4", "--snr-stop", "12",
        "--trials", "10000000", "--min-trials", "1000000", "--target-errors", "200",
        "--seed", a.seed, "--workers", a.workers, "--out", a.out, "-v",
    ]))
