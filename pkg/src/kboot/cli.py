"""Command-line interface: simulate, correct, evaluate, propcheck.

Every command is deterministic given its flags (seeds are flags).  Angle
flags accept either a plain number in radians or a ``<coeff>pi`` literal
such as ``0.1pi``.  A plain-text ``key=value`` config file can preload any
flag of the chosen command; explicit flags override file values.  The
``KBOOT_THREADS`` environment variable caps branch parallelism.
"""

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .aggregate import (AggregationConfig, MaskParams, bootstrap_correct,
                        bootstrap_correct_kspace, jensen_check, workers_from_env)
from .errors import KbootError, ParameterError
from .fft import forward, inverse
from .fileio import load_image, load_kspace, save_image, save_kspace
from .metrics import evaluate_pair
from .motion import (apply_trace, periodic_trace, random_rigid_trace,
                     write_trace_csv)
from .phantom import shepp_logan, texture_phantom
from .recon import make_reconstructor
from .sampling import Direction, write_masks

__all__ = ["main", "build_parser", "parse_angle"]

COMMANDS = ("simulate", "correct", "evaluate", "propcheck")


def parse_angle(text: str) -> float:
    """Radians from ``0.25``, ``0.1pi``, ``-0.5pi`` or ``pi``."""
    s = str(text).strip().lower()
    if s.endswith("pi"):
        head = s[:-2].strip()
        if head in ("", "+"):
            coeff = 1.0
        elif head == "-":
            coeff = -1.0
        else:
            coeff = float(head)
        return coeff * math.pi
    return float(s)


def _angle_or_random(text: str):
    return text if text == "random" else parse_angle(text)


def _float_or_random(text: str):
    return text if text == "random" else float(text)


def _fmt(x: float) -> str:
    return repr(float(x))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kboot",
        description="Simulate sparse k-space phase outliers from motion and "
                    "correct them by bootstrap subsampling and aggregation.")
    parser.add_argument("--version", action="version", version=f"kboot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="|".join(COMMANDS))

    def add_common(p):
        p.add_argument("--config", default=None,
                       help="key=value file preloading flag defaults")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--format", choices=("png16", "pgm16"), default="png16",
                       help="output image format (default png16)")

    sim = sub.add_parser("simulate", help="corrupt an image with simulated motion")
    add_common(sim)
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", default=None, help="clean input image file")
    src.add_argument("--phantom", choices=("shepp", "texture"),
                     help="generate the clean input instead of loading one")
    sim.add_argument("--size", type=int, default=128,
                     help="phantom side length (default 128)")
    sim.add_argument("--output", required=True, help="corrupted image file to write")
    sim.add_argument("--motion", choices=("rigid", "periodic"), default="rigid",
                     help="trace generator (default rigid)")
    sim.add_argument("--k0", type=parse_angle, default="0.1pi",
                     help="uncorrupted central band half-width in rad/px (default 0.1pi)")
    sim.add_argument("--delta-max", type=float, default=37.0,
                     help="rigid: uniform displacement bound in pixels (default 37)")
    sim.add_argument("--delta", type=_float_or_random, default="random",
                     help="periodic: displacement amplitude in pixels or 'random'")
    sim.add_argument("--alpha", type=_float_or_random, default="random",
                     help="periodic: oscillation rate or 'random'")
    sim.add_argument("--beta", type=_angle_or_random, default="random",
                     help="periodic: phase offset angle or 'random'")
    sim.add_argument("--allow-out-of-range", action="store_true",
                     help="accept periodic constants beyond their documented ranges")
    sim.add_argument("--save-clean", default=None, help="also write the clean image")
    sim.add_argument("--save-kspace", default=None,
                     help="write the corrupted spectrum as a KSP1 file")
    sim.add_argument("--dump-trace", default=None,
                     help="write the trace as index,k_y,delta,phi CSV")

    cor = sub.add_parser("correct", help="bootstrap-correct a corrupted image")
    add_common(cor)
    src = cor.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", default=None, help="corrupted input image file")
    src.add_argument("--input-kspace", default=None, help="corrupted KSP1 spectrum")
    cor.add_argument("--output", required=True, help="corrected image file to write")
    cor.add_argument("--reference", default=None,
                     help="clean image; prints metrics when given")
    cor.add_argument("--branches", type=int, default=15,
                     help="number of bootstrap branches (default 15)")
    cor.add_argument("--accel", type=float, default=3.0,
                     help="subsampling acceleration factor (default 3)")
    cor.add_argument("--acs-frac", type=float, default=0.11,
                     help="always-sampled central fraction (default 0.11)")
    cor.add_argument("--sigma-frac", type=float, default=0.25,
                     help="Gaussian sampling width as a fraction of lines (default 0.25)")
    cor.add_argument("--direction", choices=("pe", "fe"), default="pe",
                     help="subsampling direction (default pe)")
    cor.add_argument("--recon", choices=("zf", "ista"), default="ista",
                     help="per-branch reconstructor (default ista)")
    cor.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="ista threshold (default: 1%% of max zero-filled coefficient)")
    cor.add_argument("--iters", type=int, default=50,
                     help="ista iterations (default 50)")
    cor.add_argument("--levels", type=int, default=3,
                     help="wavelet decomposition levels (default 3)")
    cor.add_argument("--dump-intermediates", default=None, metavar="DIR",
                     help="write each branch image and mask into DIR")
    cor.add_argument("--dump-masks", default=None,
                     help="write the branch masks as 0/1 text lines")

    ev = sub.add_parser("evaluate", help="batch psnr/ssim CSV over paired directories")
    ev.add_argument("--config", default=None,
                    help="key=value file preloading flag defaults")
    ev.add_argument("--reference-dir", required=True, help="directory of clean images")
    ev.add_argument("--test-dir", required=True, help="directory of images to score")
    ev.add_argument("--output", default=None,
                    help="CSV file to write (default: stdout)")

    pc = sub.add_parser("propcheck", help="verify the aggregation error bound on random data")
    pc.add_argument("--config", default=None,
                    help="key=value file preloading flag defaults")
    pc.add_argument("--trials", type=int, default=1000, help="number of trials (default 1000)")
    pc.add_argument("--seed", type=int, default=3, help="RNG seed (default 3)")
    pc.add_argument("--size", type=int, default=32, help="trial image side (default 32)")
    pc.add_argument("--max-branches", type=int, default=8,
                    help="branch count drawn per trial from 1..this (default 8)")
    pc.add_argument("--csv", default=None, help="write one lhs,rhs,holds row per trial")
    return parser


def _parse_bool(text: str) -> bool:
    s = text.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"expected a boolean, got {text!r}")


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    """Preload subcommand defaults from the key=value file named by --config."""
    command = next((a for a in argv if a in COMMANDS), None)
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if command is None or path is None:
        return
    subparser = parser._subparsers._group_actions[0].choices[command]
    actions = {a.dest: a for a in subparser._actions}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in actions or dest == "config":
            raise ParameterError(f"{path}:{lineno}: unknown option {key!r} for {command}")
        action = actions[dest]
        if isinstance(action, argparse._StoreTrueAction):
            subparser.set_defaults(**{dest: _parse_bool(value)})
        else:
            # argparse applies the option's type converter to string defaults.
            subparser.set_defaults(**{dest: value})


def _load_clean(args) -> np.ndarray:
    if args.input is not None:
        return load_image(args.input)
    if args.phantom == "shepp":
        return shepp_logan(args.size)
    return texture_phantom(args.size, seed=args.seed)


def cmd_simulate(args) -> int:
    clean = _load_clean(args)
    if args.motion == "rigid":
        trace = random_rigid_trace(clean.shape[1], k0=args.k0,
                                   delta_max=args.delta_max, seed=args.seed)
    else:
        trace = periodic_trace(clean.shape[1], k0=args.k0, alpha=args.alpha,
                               beta=args.beta, delta=args.delta, seed=args.seed,
                               allow_out_of_range=args.allow_out_of_range)
    if trace.corrupted.size == 0:
        corrupted = clean.copy()
    else:
        corrupted = inverse(apply_trace(forward(clean), trace))
    save_image(corrupted, args.output, fmt=args.format)
    if args.save_clean:
        save_image(clean, args.save_clean, fmt=args.format)
    if args.save_kspace:
        save_kspace(apply_trace(forward(clean), trace), args.save_kspace)
    if args.dump_trace:
        write_trace_csv(trace, args.dump_trace)
    report = evaluate_pair(clean, corrupted)
    print(f"corrupted_lines={trace.corrupted.size} "
          f"psnr_db={_fmt(report.psnr_db)} ssim={_fmt(report.ssim)}")
    return 0


def cmd_correct(args) -> int:
    if args.recon == "ista":
        recon = make_reconstructor("ista", lam=args.lam, iters=args.iters,
                                   levels=args.levels)
    else:
        recon = make_reconstructor("zf")
    config = AggregationConfig(
        n_branches=args.branches,
        base_seed=args.seed,
        mask_params=MaskParams(accel=args.accel, acs_frac=args.acs_frac,
                               sigma_frac=args.sigma_frac,
                               direction=Direction(args.direction)),
        recon=recon,
        keep_branch_images=args.dump_intermediates is not None,
        workers=workers_from_env())

    if args.input_kspace is not None:
        kspace = load_kspace(args.input_kspace).astype(np.complex128)
        input_image = inverse(kspace)
        result = bootstrap_correct_kspace(kspace, config)
    else:
        input_image = load_image(args.input)
        result = bootstrap_correct(input_image, config)

    save_image(result.corrected, args.output, fmt=args.format)
    if args.dump_masks:
        write_masks(result.branch_masks, args.dump_masks)
    if args.dump_intermediates:
        outdir = Path(args.dump_intermediates)
        outdir.mkdir(parents=True, exist_ok=True)
        ext = "png" if args.format == "png16" else "pgm"
        for n, img in enumerate(result.branch_images, start=1):
            save_image(img, outdir / f"branch_{n:02d}.{ext}", fmt=args.format)
        write_masks(result.branch_masks, outdir / "masks.txt")
    if args.reference:
        reference = load_image(args.reference)
        before = evaluate_pair(reference, input_image)
        after = evaluate_pair(reference, result.corrected)
        print(f"input psnr_db={_fmt(before.psnr_db)} ssim={_fmt(before.ssim)}")
        print(f"corrected psnr_db={_fmt(after.psnr_db)} ssim={_fmt(after.ssim)}")
    return 0


def _image_names(directory: Path):
    return sorted(p.name for p in directory.iterdir()
                  if p.suffix.lower() in (".png", ".pgm"))


def cmd_evaluate(args) -> int:
    ref_dir = Path(args.reference_dir)
    test_dir = Path(args.test_dir)
    ref_names = _image_names(ref_dir)
    test_names = _image_names(test_dir)
    for name in ref_names:
        if name not in test_names:
            raise KbootError(f"missing file {name} in {test_dir}")
    for name in test_names:
        if name not in ref_names:
            raise KbootError(f"missing file {name} in {ref_dir}")

    rows = []
    for name in ref_names:
        report = evaluate_pair(load_image(ref_dir / name), load_image(test_dir / name))
        rows.append((name, _fmt(report.psnr_db), _fmt(report.ssim)))

    sink = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(["file", "psnr_db", "ssim"])
        writer.writerows(rows)
    finally:
        if args.output:
            sink.close()
    return 0


def cmd_propcheck(args) -> int:
    if args.trials < 1:
        raise ParameterError(f"trials must be >= 1, got {args.trials}")
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    reports = []
    for _ in range(args.trials):
        n = int(rng.integers(1, args.max_branches + 1))
        x_star = rng.random((args.size, args.size))
        estimates = [rng.random((args.size, args.size)) for _ in range(n)]
        raw = rng.standard_exponential(n)
        reports.append(jensen_check(x_star, estimates, raw / raw.sum()))
    all_hold = all(r.holds for r in reports)
    worst = max(r.rhs - r.lhs for r in reports)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("lhs,rhs,holds\n")
            for r in reports:
                fh.write(r.csv_row() + "\n")
    print(f"trials={args.trials} worst_rhs_minus_lhs={_fmt(worst)} "
          f"all_hold={str(all_hold).lower()}")
    return 0 if all_hold else 1


_DISPATCH = {"simulate": cmd_simulate, "correct": cmd_correct,
             "evaluate": cmd_evaluate, "propcheck": cmd_propcheck}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except (KbootError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
