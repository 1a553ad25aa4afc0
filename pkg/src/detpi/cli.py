"""Command-line batch runner.

Subcommands::

    detpi measure STATE_FILE
    detpi scatter-channels [--samples N] [--seed S] [--tol T] [--out PATH] [--threads K]
    detpi verify SUITE [...same flags...]
    detpi tangle-from-dets DET_AB DET_BC DET_B

Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import dataclass
from typing import Iterator, Sequence, TextIO

from . import measures as M
from .io import StateFileError, format_value, read_state_file, write_csv
from .qmat import DensityMatrix, InvalidStateError, PureState, partial_trace
from .relations import tangle_from_determinants
from .suites import SUITES, TrialRecord, resolve_workers, run_suite, run_trials, scatter_trial

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SCATTER_HEADER = ["trial", "F_AB", "pi_AB", "pi_AE", "residual"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    samples: int | None = None
    seed: int = 42
    tol: float = 1e-7
    out: str | None = None
    threads: int | str = 1

    def __post_init__(self):
        if self.samples is not None and self.samples < 1:
            raise ValueError("--samples must be >= 1")
        if not self.tol > 0:
            raise ValueError("--tol must be > 0")


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _report_lines(state: DensityMatrix | PureState) -> dict:
    if state.dims == (2, 2):
        rho = state if isinstance(state, DensityMatrix) else state.density()
        rep = M.measure_report(rho)
        out = rep.as_dict()
        out["eof_lower"], out["eof_upper"] = M.eof_bounds(min(rep.pi, 1.0))
        return out
    # three-qubit pure state: pair reductions, tangle, one-vs-two measures
    spectra = M.pair_spectra(state)
    out = {"tangle": M.tangle(state, spectra)}
    names = "ABC"
    for pair, lam in spectra.items():
        tag = names[pair[0]] + names[pair[1]]
        out[f"C_{tag}"] = lam.concurrence
        out[f"pi_{tag}"] = M.pi_measure(partial_trace(state, pair))
    for k in range(3):
        out[f"pi_{names[k]}_rest"] = M.pi_one_vs_two(state, k)
    return out


def cmd_measure(path: str, out: str | None = None) -> int:
    try:
        state = read_state_file(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateFileError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidStateError as exc:
        print(f"error: {path}: invariant violated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    values = _report_lines(state)
    with _output(out) as fh:
        for k, v in values.items():
            fh.write(f"{k}={format_value(v)}\n")
        write_csv(fh, list(values), [list(values.values())])
    return EXIT_OK


def cmd_scatter_channels(cfg: RunConfig) -> int:
    n = 10_000 if cfg.samples is None else cfg.samples
    records = run_trials(scatter_trial, n, cfg.seed, resolve_workers(cfg.threads))
    with _output(cfg.out) as fh:
        write_csv(fh, SCATTER_HEADER, (r.row() for r in records))
    worst = max(r.residual for r in records)
    if worst > cfg.tol:
        print(f"fidelity relation violated: max residual {worst:.3e} > tol {cfg.tol:g}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _violation_rows(records: Sequence[TrialRecord], seed: int):
    for r in records:
        yield [r.index, seed, *r.params.values(), *r.values.values(), r.residual]


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    result = run_suite(suite, cfg.samples, cfg.seed, resolve_workers(cfg.threads))
    bad = result.violations(cfg.tol)
    ok = not bad
    print(f"suite={suite}")
    print(f"samples={result.samples}")
    print(f"seed={cfg.seed}")
    print(f"max_residual={format_value(result.max_residual)}")
    print(f"tol={format_value(cfg.tol)}")
    print(f"violations={len(bad)}")
    print(f"result={'PASS' if ok else 'FAIL'}")
    if cfg.out is not None or bad:
        cols = result.records[0].columns()
        header = [cols[0], "seed", *cols[1:]]
        if cfg.out is None:
            sys.stdout.flush()
        with _output(cfg.out) as fh:
            write_csv(fh, header, _violation_rows(bad, cfg.seed))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tangle_from_dets(det_ab: float, det_bc: float, det_b: float) -> int:
    try:
        tau = tangle_from_determinants(det_ab, det_bc, det_b)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"tau={format_value(tau)}")
    return EXIT_OK


def _threads(value: str) -> int | str:
    if value == "auto":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("thread count must be >= 1")
    return n


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _positive_float(value: str) -> float:
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=_positive_int, default=None, help="number of trials (suite default if omitted)")
    common.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    common.add_argument("--tol", type=_positive_float, default=1e-7, help="pass threshold on residuals (default 1e-7)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=_threads, default=1, help="worker count or 'auto'")

    parser = argparse.ArgumentParser(prog="detpi", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="all two-qubit measures of a state file")
    p.add_argument("state_file")

    sub.add_parser("scatter-channels", parents=[common], help="singlet fraction vs pi for Haar channels (CSV)")

    p = sub.add_parser("verify", parents=[common], help="run a Monte-Carlo verification suite")
    p.add_argument("suite", choices=sorted(SUITES))

    p = sub.add_parser("tangle-from-dets", parents=[common], help="tangle from three determinants")
    p.add_argument("det_ab", type=float)
    p.add_argument("det_bc", type=float)
    p.add_argument("det_b", type=float)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.samples, args.seed, args.tol, args.out, args.threads)
    if args.command == "measure":
        return cmd_measure(args.state_file, cfg.out)
    if args.command == "scatter-channels":
        return cmd_scatter_channels(cfg)
    if args.command == "verify":
        return cmd_verify(cfg, args.suite)
    return cmd_tangle_from_dets(args.det_ab, args.det_bc, args.det_b)


if __name__ == "__main__":
    sys.exit(main())
