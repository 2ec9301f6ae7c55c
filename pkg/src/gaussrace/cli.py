"""Command-line entry point tying the pipeline together.

Commands
    race       stream primes, write race.csv + signchanges.csv
    hist       same pass, write hist.csv (theta) + hist_tilde.csv (theta~)
    decompose  dump the angle data stream to angles.csv
    signs      print the character table family,m,conductor_norm,W,...
    mean       print the bias mean value for a family/test-function pair
    dist       simulate the limiting distribution from a zeros CSV

File-writing commands write atomically (temp file + rename) and record a
manifest.json with the config, code version, wall time and prime counts.
Exit codes: 1 invalid config, 2 I/O failure, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .errors import ConfigError, ConsistencyError
from .fourier import FourierSpec
from .hecke import FAMILIES, character_info, load_rank_overrides, mean_value
from .pipeline import run_pipeline
from .race import HistogramResult, e_phi, f_phi
from .zdist import aggregate_ord, load_zeros, simulate_distribution, variance_formula

EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def fmt(x: float) -> str:
    """Floats at 9 significant digits everywhere."""
    return format(float(x), ".9g")


def parse_count(text: str) -> int:
    """Integer flag that accepts scientific notation like 1e8."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, but exit code 2 here means I/O failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def atomic_write(path: Path, lines) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_manifest(out_dir: Path, command: str, config: dict, started: float,
                   counts: dict | None = None) -> None:
    payload = {
        "command": command,
        "config": config,
        "version": __version__,
        "wall_time_s": round(time.time() - started, 3),
    }
    if counts:
        payload.update(counts)
    atomic_write(out_dir / "manifest.json", [json.dumps(payload, indent=2, sort_keys=True)])


def _phi_from_args(name: str, truncation: int) -> FourierSpec:
    if name == "phi1":
        return FourierSpec.phi1(truncation)
    if name == "phi2":
        return FourierSpec.phi2(truncation)
    # otherwise a CSV of m,c_m rows
    import csv as _csv

    coeffs: dict[int, float] = {}
    with open(name, newline="") as fh:
        for row in _csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip() == "m":
                continue
            coeffs[int(row[0])] = float(row[1])
    return FourierSpec.custom(coeffs, truncation)


def _hist_lines(result: HistogramResult):
    yield "bin_center,count,deviation,prediction"
    centers = result.bin_centers
    devs = result.deviations
    preds = result.predictions
    for i in range(result.spec.bins):
        yield f"{fmt(centers[i])},{int(result.counts[i])},{fmt(devs[i])},{fmt(preds[i])}"


def cmd_race(args) -> int:
    started = time.time()
    if args.limit < 100:
        raise ConfigError("race requires --limit >= 100")
    out = Path(args.out_dir)
    result = run_pipeline(
        args.limit,
        segment_size=args.segment_size,
        bins=args.bins,
        checkpoint_ratio=args.checkpoint_ratio,
        workers=args.workers,
    )
    phi1 = FourierSpec.phi1(args.fourier_n)
    phi2 = FourierSpec.phi2(args.fourier_n)

    def race_lines():
        yield "x,D1,D2,E_phi1,F_phi2"
        for row in result.checkpoint_rows:
            e1 = e_phi(row.x, row.sum_phi1, phi1)
            f2 = f_phi(row.x, row.sum_phi2_1mod8, row.sum_phi2_5mod8, phi2)
            yield f"{row.x},{row.d1},{row.d2},{fmt(e1)},{fmt(f2)}"

    def change_lines():
        yield "function,x"
        merged = [("D1", x) for x in result.d1.sign_changes]
        merged += [("D2", x) for x in result.d2.sign_changes]
        merged.sort(key=lambda t: (t[1], t[0]))
        for name, x in merged:
            yield f"{name},{x}"

    atomic_write(out / "race.csv", race_lines())
    atomic_write(out / "signchanges.csv", change_lines())
    write_manifest(out, "race", _config_dict(args), started,
                   {"primes": result.n_primes, "split_primes": result.n_split})
    print(f"race: {result.n_split} split primes <= {args.limit}; "
          f"D1={result.d1.current_value} D2={result.d2.current_value} "
          f"D2_min={result.d2_min} ({result.wall_time:.1f}s)")
    return 0


def cmd_hist(args) -> int:
    started = time.time()
    if args.limit < 100:
        raise ConfigError("hist requires --limit >= 100")
    out = Path(args.out_dir)
    result = run_pipeline(
        args.limit,
        segment_size=args.segment_size,
        bins=args.bins,
        workers=args.workers,
    )
    atomic_write(out / "hist.csv", _hist_lines(result.hist_theta))
    atomic_write(out / "hist_tilde.csv", _hist_lines(result.hist_theta_tilde))
    write_manifest(out, "hist", _config_dict(args), started,
                   {"primes": result.n_primes, "split_primes": result.n_split})
    print(f"hist: {result.hist_theta.total} angles in {args.bins} bins "
          f"({result.wall_time:.1f}s)")
    return 0


def cmd_decompose(args) -> int:
    started = time.time()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out, prefix=".angles.", suffix=".tmp")
    counts = {"primes": 0, "split_primes": 0}
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write("p,a,two_b,theta,theta_tilde,class8\n")

            def on_batch(batch):
                counts["split_primes"] += len(batch)
                for i in range(len(batch)):
                    fh.write(
                        f"{batch.p[i]},{batch.a[i]},{batch.two_b[i]},"
                        f"{fmt(batch.theta[i])},{fmt(batch.theta_tilde[i])},"
                        f"{batch.class8[i]}\n"
                    )

            result = run_pipeline(
                args.limit,
                segment_size=args.segment_size,
                workers=args.workers,
                on_batch=on_batch,
            )
            counts["primes"] = result.n_primes
        os.replace(tmp, out / "angles.csv")
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    write_manifest(out, "decompose", _config_dict(args), started, counts)
    print(f"decompose: wrote {counts['split_primes']} rows to {out / 'angles.csv'}")
    return 0


def cmd_signs(args) -> int:
    overrides = load_rank_overrides(args.rank_override) if args.rank_override else None
    start = 1 if args.family == "xi" else 0
    print("family,m,conductor_norm,W,ord_half,ord_one_second_moment")
    for m in range(start, args.max_m + 1):
        info = character_info(args.family, m, overrides)
        print(f"{info.family},{info.m},{info.conductor_norm},{info.w},"
              f"{info.ord_half},{info.ord_one_second_moment}")
    return 0


def cmd_mean(args) -> int:
    overrides = load_rank_overrides(args.rank_override) if args.rank_override else None
    phi = _phi_from_args(args.phi, args.n)
    mv = mean_value(args.family, phi, overrides=overrides, cross_check=not args.no_cross_check)
    print(f"mean={fmt(mv.value)}")
    if mv.integral_value is not None:
        if mv.integral_diverges:
            print(f"integral_form=divergent({'+' if mv.integral_value > 0 else '-'}inf)")
        else:
            print(f"integral_form={fmt(mv.integral_value)}")
    return 0


def cmd_dist(args) -> int:
    started = time.time()
    out = Path(args.out_dir)
    phi = _phi_from_args(args.phi, args.n)
    zeros = load_zeros(args.zeros)
    overrides = load_rank_overrides(args.rank_override) if args.rank_override else None
    # angle-race normalization: E_phi = (1/2) sum c_m E_{f_m}, so the aggregated
    # orders carry c_m/2 to stay consistent with mean_value's E(mu_phi)
    coeffs = {m: 0.5 * phi.coeff(m) for m in phi.nonzero_modes()}
    agg = aggregate_ord(zeros, coeffs, merge_tol=args.merge_tol)
    mv = mean_value(args.family, phi, overrides=overrides, cross_check=False)
    summary = simulate_distribution(agg, mv.value, args.y_max, args.samples, bins=args.bins)

    def dist_lines():
        yield "bin_lo,bin_hi,mass"
        for i in range(len(summary.masses)):
            yield f"{fmt(summary.bin_edges[i])},{fmt(summary.bin_edges[i + 1])},{fmt(summary.masses[i])}"

    atomic_write(out / "dist.csv", dist_lines())
    write_manifest(out, "dist", _config_dict(args), started,
                   {"zeros": len(zeros), "aggregated": len(agg)})
    print(f"mean={fmt(summary.mean)}")
    print(f"variance={fmt(summary.variance)}")
    print(f"theoretical_variance={fmt(variance_formula(agg))}")
    print(f"bias={fmt(summary.bias)}")
    return 0


def _config_dict(args) -> dict:
    skip = {"func"}
    return {k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussrace", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(p):
        p.add_argument("--limit", type=parse_count, required=True,
                       help="sieve bound (accepts 1e8 style)")
        p.add_argument("--segment-size", type=parse_count, default=1 << 22)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out-dir", default=".")

    p = sub.add_parser("race", help="run the D1/D2 races")
    add_pipeline_flags(p)
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--checkpoint-ratio", type=float, default=1.01)
    p.add_argument("--fourier-N", dest="fourier_n", type=parse_count, default=10_000)
    p.set_defaults(func=cmd_race)

    p = sub.add_parser("hist", help="angle histograms with secondary-term overlay")
    add_pipeline_flags(p)
    p.add_argument("--bins", type=int, default=200)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("decompose", help="dump the AnglePrime stream as CSV")
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("signs", help="character table with functional-equation signs")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--max-m", type=int, default=200)
    p.add_argument("--rank-override", default=None,
                   help="CSV family,m,ord_half replacing the rank hypothesis")
    p.set_defaults(func=cmd_signs)

    p = sub.add_parser("mean", help="bias mean value of the limiting distribution")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--phi", required=True, help="phi1, phi2, or a CSV of m,c_m")
    p.add_argument("--N", dest="n", type=parse_count, default=10_000,
                   help="coefficient truncation")
    p.add_argument("--rank-override", default=None)
    p.add_argument("--no-cross-check", action="store_true",
                   help="skip the integral-form PV evaluation")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("dist", help="simulate the limiting logarithmic distribution")
    p.add_argument("--zeros", required=True, help="CSV m,gamma,mult")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--N", dest="n", type=parse_count, default=100)
    p.add_argument("--merge-tol", type=float, default=1e-9)
    p.add_argument("--Y", dest="y_max", type=float, default=1e6)
    p.add_argument("--samples", type=parse_count, default=100_000)
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--rank-override", default=None)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_dist)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"gaussrace: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"gaussrace: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as exc:
        print(f"gaussrace: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"gaussrace: i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
