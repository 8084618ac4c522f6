"""Command line entry point: ``dsm-eda {solve,convergence,sample-audit,decompose}``."""

from __future__ import annotations

import argparse
import hashlib
import logging
import statistics
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from .dsm import DoublyStochasticMatrix
from .eda import EdaConfig, format_record, run_eda
from .qap import QaplibFormatError, load_instance, relative_deviation
from .sampling import SAMPLER_NAMES, NumericalError, birkhoff_decompose, draw_many, rng_stream

log = logging.getLogger("dsm_eda")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3

SUMMARY_COLUMNS = ("instance", "best_known", "sampler", "median_rd", "min_rd", "max_rd", "reps")

MASK64 = (1 << 64) - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def derive_seed(master_seed: int, instance: str, sampler: str, rep: int) -> int:
    """``master_seed XOR blake2b(instance, sampler, rep)``, truncated to 64 bits."""
    digest = hashlib.blake2b(f"{instance}|{sampler}|{rep}".encode(), digest_size=8).digest()
    return (int(master_seed) ^ int.from_bytes(digest, "big")) & MASK64


def record_name(instance: str, sampler: str, rep: int) -> str:
    return f"{instance}__{sampler}__r{rep:03d}.csv"


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _load(paths):
    instances = []
    for p in paths:
        try:
            instances.append(load_instance(p))
        except OSError as exc:
            raise OSError(f"cannot read instance {p}: {exc.strerror or exc}") from exc
        except QaplibFormatError as exc:
            raise OSError(f"malformed instance {p}: {exc}") from exc
    return instances


def _run_all(inst, samplers, reps, budget_mult, master_seed, rec_dir: Path):
    """Run every (sampler, rep) on ``inst``; returns ``{sampler: [record, ...]}``."""
    budget = int(round(budget_mult * inst.n * inst.n))
    if budget < 10 * inst.n:
        raise UsageError(f"budget {budget} is below one generation ({10 * inst.n}) for {inst.name}")
    out = {}
    for sampler in samplers:
        runs = []
        for r in range(reps):
            seed = derive_seed(master_seed, inst.name, sampler, r)
            record = run_eda(inst, EdaConfig(sampler=sampler, seed=seed, budget=budget))
            (rec_dir / record_name(inst.name, sampler, r)).write_text(format_record(record, inst.best_known))
            log.info("%s %s rep %d/%d: best %s", inst.name, sampler, r + 1, reps, _fmt(record.best_value))
            runs.append(record)
        out[sampler] = runs
    return out


def cmd_solve(args) -> int:
    out = Path(args.out)
    rec_dir = out / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    instances = _load(args.instance)
    rows = ["\t".join(SUMMARY_COLUMNS)]
    for inst in instances:
        results = _run_all(inst, args.sampler, args.reps, args.budget_mult, args.seed, rec_dir)
        for sampler, runs in results.items():
            if inst.best_known is not None and inst.best_known > 0:
                rds = [relative_deviation(rec.best_value, inst.best_known) for rec in runs]
                stats = (statistics.median(rds), min(rds), max(rds))
            else:
                stats = (None, None, None)
            rows.append("\t".join([inst.name, _fmt(inst.best_known), sampler, *map(_fmt, stats), str(len(runs))]))
    (out / "summary.tsv").write_text("\n".join(rows) + "\n")
    return EXIT_OK


CONVERGENCE_COLUMNS = ("t", "mean_sampled", "mean_sampled_rd", "min_sampled", "best_so_far", "runs")


def cmd_convergence(args) -> int:
    out = Path(args.out)
    rec_dir = out / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    if len(args.instance) != 1:
        raise UsageError("convergence takes exactly one --instance")
    (inst,) = _load(args.instance)
    results = _run_all(inst, args.sampler, args.reps, args.budget_mult, args.seed, rec_dir)
    for sampler, runs in results.items():
        horizon = max(len(rec.iterations) for rec in runs)
        lines = [",".join(CONVERGENCE_COLUMNS)]
        for k in range(horizon):
            its = [rec.iterations[k] for rec in runs if k < len(rec.iterations)]
            mean = float(np.mean([it.mean_sampled for it in its]))
            rd = relative_deviation(mean, inst.best_known) if inst.best_known else None
            mn = float(np.mean([it.min_sampled for it in its]))
            best = float(np.mean([it.best_so_far for it in its]))
            lines.append(",".join([str(k + 1), _fmt(mean), _fmt(rd), _fmt(mn), _fmt(best), str(len(its))]))
        (out / f"convergence__{inst.name}__{sampler}.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def _read_dsm(path) -> DoublyStochasticMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read DSM file {path}: {exc.strerror or exc}") from exc
    try:
        return DoublyStochasticMatrix.from_text(text)
    except ValueError as exc:
        raise OSError(f"malformed DSM file {path}: {exc}") from exc


def _emit(text: str, dest) -> None:
    if dest is None:
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def cmd_sample_audit(args) -> int:
    d = _read_dsm(args.dsm)
    sampled = draw_many(args.sampler, d, rng_stream(args.seed), args.draws)
    counts = Counter(sampled)
    lines = [str(p) for p in sampled]
    lines.append(f"# frequencies over {args.draws} draws ({len(counts)} distinct)")
    for p, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].entries)):
        lines.append(f"# {p}\t{c}\t{c / args.draws!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    dec = birkhoff_decompose(_read_dsm(args.dsm))
    _emit("".join(f"{w!r}\t{p}\n" for w, p in dec.terms), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsm-eda", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def experiment(name, help_, reps, samplers):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--instance", action="append", required=True, help="QAPLIB .dat file (repeatable)")
        p.add_argument("--sampler", action="append", choices=SAMPLER_NAMES, help=f"default: {' '.join(samplers)}")
        p.add_argument("--reps", type=int, default=reps)
        p.add_argument("--budget-mult", type=float, default=100.0, help="budget = mult * n^2 evaluations")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(default_samplers=list(samplers))
        return p

    experiment("solve", "repeated runs and a median relative deviation table", 20, ["ps"]).set_defaults(
        func=cmd_solve
    )
    experiment("convergence", "per-iteration mean sampled objective", 5, ["ps", "as"]).set_defaults(
        func=cmd_convergence
    )

    p = sub.add_parser("sample-audit", help="draw permutations from a DSM file")
    p.add_argument("--dsm", required=True)
    p.add_argument("--sampler", choices=SAMPLER_NAMES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample_audit)

    p = sub.add_parser("decompose", help="Birkhoff decomposition of a DSM file")
    p.add_argument("--dsm", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "sampler", None) is None and hasattr(args, "default_samplers"):
        args.sampler = args.default_samplers
    try:
        if getattr(args, "reps", 1) < 1:
            raise UsageError("--reps must be >= 1")
        if getattr(args, "budget_mult", 1.0) <= 0:
            raise UsageError("--budget-mult must be > 0")
        if getattr(args, "draws", 1) < 1:
            raise UsageError("--draws must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"dsm-eda: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dsm-eda: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"dsm-eda: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
