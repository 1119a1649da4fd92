"""Command-line experiment runner.

Writes one CSV per run (analytic curves plus Monte-Carlo estimates) and a
gnuplot script next to it. ``compare`` also writes ``<stem>_summary.csv``::

    ris-plnc relay-awgn --snr-start -4 --snr-stop 12 --out relay_awgn.csv
    ris-plnc e2e --n1 16 --n2 16 --n3 16 --snr-start -12 --snr-stop 4 --out e2e16.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import awgn, fading, sim
from .fading import InvalidAsPrintedError
from .model import BerPoint, ConfigError, SystemConfig, load_config, make_config
from .special import QuadratureError

log = logging.getLogger("ris_plnc")

COMMANDS = ("relay-awgn", "relay-fading", "e2e", "links", "compare")
CSV_HEADER = (
    "snr_db", "node", "source", "ber", "ci_low", "ci_high", "trials", "errors",
    "formula_mode", "n1", "n2", "n3", "ps1", "ps2", "pr", "seed",
)
EXIT_OK, EXIT_CONFIG, EXIT_QUADRATURE, EXIT_IO = 0, 2, 3, 4

_CONFIG_FLAGS = ("ps1", "ps2", "pr", "n0", "n1", "n2", "n3", "eta1", "eta2", "eta3")


@dataclass(frozen=True)
class ExperimentSpec:
    command: str
    config: SystemConfig
    snr_start: float = -4.0
    snr_stop: float = 12.0
    snr_step: float = 2.0
    stop: sim.StoppingRule = field(default_factory=sim.StoppingRule)
    master_seed: int = 0
    out: Path = Path("ber.csv")
    workers: int = 1
    monte_carlo: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.snr_step > 0:
            raise ConfigError("snr step must be positive")
        if not self.snr_start <= self.snr_stop:
            raise ConfigError("snr start must not exceed snr stop")

    @property
    def grid(self) -> list[float]:
        count = int(math.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9)) + 1
        return [round(self.snr_start + i * self.snr_step, 9) + 0.0 for i in range(count)]


# ---------------------------------------------------------------------------
# curve generation
# ---------------------------------------------------------------------------

def _analytic(node: str, source: str, grid, fn) -> list[BerPoint]:
    return [BerPoint(snr, float(fn(snr)), source, node) for snr in grid]


def _relay_awgn(spec: ExperimentSpec) -> list[BerPoint]:
    cfg, grid, pts = spec.config, spec.grid, []
    pts += _analytic("relay", "analytic-exact", grid, lambda s: awgn.awgn_relay_ber_exact(cfg.with_snr_db(s)))
    pts += _analytic("relay", "analytic-approx", grid, lambda s: awgn.awgn_relay_ber_approx(cfg.with_snr_db(s)))
    if spec.monte_carlo:
        pts += sim.sweep(cfg, grid, "relay-awgn", spec.stop, spec.master_seed, spec.workers).points
    return pts


def _skip_printed(label: str, thunk) -> list[BerPoint]:
    try:
        return thunk()
    except InvalidAsPrintedError as exc:
        log.warning("skipping %s: %s", label, exc)
        return []


def _relay_fading(spec: ExperimentSpec) -> list[BerPoint]:
    cfg, grid, pts = spec.config, spec.grid, []
    if cfg.ris_enabled:
        at = cfg.with_snr_db
        for source, fn in (
            ("analytic-exact", lambda s: fading.relay_ber_exact_fading(at(s))),
            ("analytic-approx", lambda s: fading.relay_ber_approx_fading(at(s))),
            ("analytic-bound", lambda s: fading.relay_ber_upper_bound(at(s))),
        ):
            pts += _skip_printed(f"relay {source}", lambda: _analytic("relay", source, grid, fn))
    if spec.monte_carlo:
        pts += sim.sweep(cfg, grid, "relay-fading", spec.stop, spec.master_seed, spec.workers).points
    return pts


def _e2e(spec: ExperimentSpec) -> list[BerPoint]:
    cfg, grid, pts = spec.config, spec.grid, []
    if cfg.ris_enabled:
        for source, link_mode in (("analytic-exact", "integral"), ("analytic-bound", "bound")):

            def curves(source=source, link_mode=link_mode):
                out = {d: [] for d in ("e2e_d1", "e2e_d2", "e2e_avg")}
                for snr in grid:
                    at = cfg.with_snr_db(snr)
                    pe_r = (
                        fading.relay_ber_exact_fading(at) if link_mode == "integral"
                        else fading.relay_ber_upper_bound(at)
                    )
                    d1 = fading.overall_ber(at, "D1", link_mode=link_mode, relay_ber=pe_r)
                    d2 = fading.overall_ber(at, "D2", link_mode=link_mode, relay_ber=pe_r)
                    for node, value in (("e2e_d1", d1), ("e2e_d2", d2), ("e2e_avg", 0.5 * (d1 + d2))):
                        out[node].append(BerPoint(snr, value, source, node))
                return [p for node in out for p in out[node]]

            pts += _skip_printed(f"e2e {source}", curves)
    if spec.monte_carlo:
        for kind in ("e2e-d1", "e2e-d2", "e2e-avg", "local-d1", "local-d2"):
            pts += sim.sweep(cfg, grid, kind, spec.stop, spec.master_seed, spec.workers).points
    return pts


def _links(spec: ExperimentSpec) -> list[BerPoint]:
    cfg, grid, pts = spec.config, spec.grid, []
    for kind in sim.LINK_KINDS:
        node = sim.KIND_NODES[kind]
        if cfg.ris_enabled:
            for source, mode in (("analytic-exact", "integral"), ("analytic-bound", "bound")):
                for snr in grid:
                    at = cfg.with_snr_db(snr)
                    budget = _link_budget(at, node)
                    pts.append(BerPoint(snr, fading.link_ber(budget, at.n0, mode), source, node))
        if spec.monte_carlo:
            pts += sim.sweep(cfg, grid, kind, spec.stop, spec.master_seed, spec.workers).points
    return pts


def _link_budget(cfg: SystemConfig, node: str):
    if node in ("s1d1", "s2d2"):
        return fading.destination_links(cfg, "D1" if node == "s1d1" else "D2")[0]
    return fading.destination_links(cfg, "D1" if node == "rd1" else "D2")[1]


def run_points(spec: ExperimentSpec) -> list[BerPoint]:
    if spec.command == "relay-awgn":
        return _relay_awgn(spec)
    if spec.command == "relay-fading":
        return _relay_fading(spec)
    if spec.command == "e2e":
        return _e2e(spec)
    if spec.command == "links":
        return _links(spec)
    return _relay_fading(spec) + _e2e(spec) + _links(spec)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def points_to_csv(points: Sequence[BerPoint], cfg: SystemConfig, seed: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in points:
        writer.writerow([
            _fmt(p.snr_db), p.node, p.source, _fmt(p.ber), _fmt(p.ci_low), _fmt(p.ci_high),
            _fmt(p.trials), _fmt(p.errors), cfg.formula_mode, _fmt(cfg.n1), _fmt(cfg.n2),
            _fmt(cfg.n3), _fmt(cfg.ps1), _fmt(cfg.ps2), _fmt(cfg.pr), _fmt(seed),
        ])
    return buf.getvalue()


def read_csv(path_or_text) -> list[BerPoint]:
    """Parse a result CSV back into BerPoints."""
    text = path_or_text if "\n" in str(path_or_text) else Path(path_or_text).read_text(encoding="utf-8")
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    return [
        BerPoint(
            float(r["snr_db"]), float(r["ber"]), r["source"], r["node"], int(r["trials"]),
            int(r["errors"]), float(r["ci_low"]), float(r["ci_high"]),
        )
        for r in rows
    ]


def _curves(points: Sequence[BerPoint]) -> dict[tuple[str, str], list[BerPoint]]:
    curves: dict[tuple[str, str], list[BerPoint]] = {}
    for p in points:
        curves.setdefault((p.node, p.source), []).append(p)
    return curves


def summarize(points: Sequence[BerPoint], target: float = 1e-3) -> str:
    """Per curve: max |log10 analytic - log10 mc| against the same node's MC curve,
    and the dB at which the curve crosses ``target``."""
    curves = _curves(points)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("node", "source", "max_abs_log10_diff", "crossing_db"))
    for (node, source), pts in curves.items():
        diff = ""
        mc = {p.snr_db: p.ber for p in curves.get((node, "mc"), [])}
        if not source.startswith("mc") and mc:
            gaps = [
                abs(math.log10(p.ber) - math.log10(mc[p.snr_db]))
                for p in pts
                if p.snr_db in mc and p.ber > 0 and mc[p.snr_db] > 0
            ]
            diff = _fmt(max(gaps)) if gaps else ""
        cross = sim.crossing_db([p.snr_db for p in pts], [p.ber for p in pts], target)
        writer.writerow((node, source, diff, "" if cross is None else _fmt(cross)))
    return buf.getvalue()


def gnuplot_script(csv_name: str, points: Sequence[BerPoint]) -> str:
    lines = [
        "# generated by ris-plnc; run with: gnuplot -p " + Path(csv_name).with_suffix(".gp").name,
        "set datafile separator ','",
        "set logscale y",
        "set format y '10^{%L}'",
        "set xlabel 'SNR 10log10(1/N0) [dB]'",
        "set ylabel 'BER'",
        "set grid",
        "set key bottom left",
    ]
    plots = []
    for node, source in _curves(points):
        style = "points pt 7" if source.startswith("mc") else "lines"
        plots.append(
            f"'{csv_name}' using 1:((strcol(2) eq '{node}' && strcol(3) eq '{source}') ? $4 : 1/0) "
            f"with {style} title '{node} {source}'"
        )
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(spec: ExperimentSpec) -> int:
    """Execute ``spec`` and write its files; returns the process exit status."""
    try:
        points = run_points(spec)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except QuadratureError as exc:
        log.error("quadrature failure: %s (last estimates %s)", exc, exc.estimates)
        return EXIT_QUADRATURE
    out = Path(spec.out)
    try:
        write_atomic(out, points_to_csv(points, spec.config, spec.master_seed))
        write_atomic(out.with_suffix(".gp"), gnuplot_script(out.name, points))
        if spec.command == "compare":
            write_atomic(out.with_name(out.stem + "_summary.csv"), summarize(points))
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO
    log.info("wrote %d rows to %s", len(points), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-plnc", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="key = value config file; flags override it")
    for name in ("ps1", "ps2", "pr", "n0", "eta1", "eta2", "eta3"):
        parser.add_argument(f"--{name}", type=float)
    for name in ("n1", "n2", "n3"):
        parser.add_argument(f"--{name}", type=int)
    parser.add_argument("--no-ris", action="store_true", help="conventional baseline without surfaces")
    parser.add_argument("--mode", choices=("printed", "corrected", "derived"), dest="formula_mode")
    parser.add_argument("--snr-start", type=float)
    parser.add_argument("--snr-stop", type=float)
    parser.add_argument("--snr-step", type=float, default=2.0)
    parser.add_argument("--trials", type=int, default=sim.StoppingRule.max_trials, help="max trials per point")
    parser.add_argument("--min-trials", type=int, default=sim.StoppingRule.min_trials)
    parser.add_argument("--target-errors", type=int, default=sim.StoppingRule.target_errors)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--no-mc", action="store_true", help="analytic curves only")
    parser.add_argument("--out", type=Path, default=Path("ber.csv"))
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    overrides = {name: getattr(args, name) for name in _CONFIG_FLAGS}
    overrides["formula_mode"] = args.formula_mode
    if args.no_ris:
        overrides["ris_enabled"] = False
    if args.config is not None:
        cfg = load_config(args.config, overrides)
    else:
        cfg = make_config({k: v for k, v in overrides.items() if v is not None})
    start, stop = args.snr_start, args.snr_stop
    if start is None and stop is None and args.n0 is not None:
        start = stop = cfg.snr_db
    start = -4.0 if start is None else start
    stop = 12.0 if stop is None else stop
    try:
        rule = sim.StoppingRule(
            max_trials=args.trials,
            target_errors=args.target_errors,
            min_trials=min(args.min_trials, args.trials),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentSpec(
        command=args.command, config=cfg, snr_start=start, snr_stop=stop, snr_step=args.snr_step,
        stop=rule, master_seed=args.seed, out=args.out, workers=max(1, args.workers),
        monte_carlo=not args.no_mc,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        spec = spec_from_args(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        log.error("cannot read config: %s", exc)
        return EXIT_IO
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
