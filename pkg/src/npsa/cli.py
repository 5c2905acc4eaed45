"""Command-line driver.

Subcommands
-----------
eigen    eigenpair analysis of a small tensor given as stacked frontal slices
extract  skewness-component extraction from a raw binary cube
bis      blind separation of mixed copies of known source images
verify   randomized property suites (kron / equivalence / lemma1)

Exit codes: 0 success, 1 validation error, 2 numerical failure (including
non-convergence when --strict is given).  Every command takes --seed and is
bit-reproducible for a fixed seed.  The environment variable NPSA_THREADS
caps the worker threads used for third-moment accumulation.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .eigensearch import SearchConfig, brute_force_eigenpairs, run
from .estimator import PrincipalSkewnessAnalysis
from .exceptions import NoConvergence, NpsaError, ZeroContraction
from .io_ingest import (
    SkewReport,
    cube_to_matrix,
    read_cube,
    read_matrix_csv,
    read_pgm,
    write_matrix_csv,
    write_pgm,
    write_report,
)
from .metrics import evaluate_separation
from .synthetic import minmax_stretch, mix_sources, random_mixing_matrix
from .tensor import is_supersymmetric, symmetrize

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

_STRATEGY_BY_NAME = {"psa": "psa", "npsa": "npsa_improved"}
_DEFLATION_BY_NAME = {"psa": "orthogonal", "npsa": "nonorthogonal"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _n_threads():
    value = os.environ.get("NPSA_THREADS", "")
    try:
        return max(1, int(value)) if value else 1
    except ValueError:
        return 1


def _search_args(parser):
    parser.add_argument("--seed", type=int, default=0, help="RNG seed")
    parser.add_argument("--epsilon", type=float, default=1e-4,
                        help="fixed-point stop tolerance")
    parser.add_argument("--max-iters", type=int, default=50,
                        help="fixed-point iteration cap")
    parser.add_argument("--restarts", type=int, default=1,
                        help="random restarts per component")
    parser.add_argument("--strict", action="store_true",
                        help="treat per-component non-convergence as failure")


def _print_pairs(label, pairs):
    print(label)
    for idx, pair in enumerate(pairs, start=1):
        u = " ".join(f"{v:+.6f}" for v in pair.u)
        flag = "" if pair.converged else "  (not converged)"
        print(f"  {idx}: lambda={pair.lam:.6f}  u=[{u}]  iters={pair.iterations}{flag}")


def _angle_deg(a, b):
    cosine = abs(float(a @ b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    return float(np.degrees(np.arccos(min(1.0, cosine))))


def _check_strict(args, pairs_by_label):
    if not args.strict:
        return EXIT_OK
    for label, pairs in pairs_by_label.items():
        bad = [i for i, p in enumerate(pairs, start=1) if not p.converged]
        if bad:
            print(f"error: {label} components {bad} did not converge",
                  file=sys.stderr)
            return EXIT_NUMERICAL
    return EXIT_OK


# --- eigen --------------------------------------------------------------------

def _cmd_eigen(args):
    flat = read_matrix_csv(args.tensor_csv)
    rows, cols = flat.shape
    if rows != cols * cols:
        print(f"error: expected L*L rows of L columns, got {rows}x{cols}",
              file=sys.stderr)
        return EXIT_VALIDATION
    # slices are stacked vertically: slice k occupies rows [k*L, (k+1)*L)
    tensor = np.stack([flat[k * cols:(k + 1) * cols, :] for k in range(cols)], axis=2)
    if not is_supersymmetric(tensor):
        print("warning: tensor is not supersymmetric", file=sys.stderr)
        if args.symmetrize:
            tensor = symmetrize(tensor)
            print("warning: proceeding with its symmetrized average", file=sys.stderr)
    p = cols if args.p is None else args.p
    if not 1 <= p <= cols:
        print(f"error: --p must be in [1, {cols}]", file=sys.stderr)
        return EXIT_VALIDATION
    strategies = (["psa", "npsa"] if args.strategy == "both" else [args.strategy])
    results = {}
    try:
        for name in strategies:
            cfg = SearchConfig(
                epsilon=args.epsilon,
                max_iters=args.max_iters,
                restarts=args.restarts,
                rng_seed=args.seed,
                strategy=_STRATEGY_BY_NAME[name],
            )
            pairs, _ = run(tensor, p, cfg)
            results[name] = pairs
            _print_pairs(f"{name} eigenpairs:", pairs)
    except (ZeroContraction, NoConvergence) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.oracle:
        oracle_pairs = brute_force_eigenpairs(tensor, grid=args.grid)
        _print_pairs("oracle eigenpairs (enumeration):", oracle_pairs)
        for name, pairs in results.items():
            for idx, pair in enumerate(pairs, start=1):
                angles = [_angle_deg(pair.u, op.u) for op in oracle_pairs]
                if angles:
                    nearest = int(np.argmin(angles))
                    print(f"  {name} component {idx}: {angles[nearest]:.4f} deg "
                          f"from oracle pair {nearest + 1}")
    return _check_strict(args, results)


# --- extract --------------------------------------------------------------------

def _cmd_extract(args):
    header = args.header or args.cube + ".hdr"
    cube = read_cube(header, args.cube)
    data = cube_to_matrix(cube)
    p = cube.bands if args.p is None else args.p
    if not 1 <= p <= cube.bands:
        print(f"error: --p must be in [1, {cube.bands}]", file=sys.stderr)
        return EXIT_VALIDATION
    est = PrincipalSkewnessAnalysis(
        n_components=p,
        deflation=_DEFLATION_BY_NAME[args.strategy],
        tol=args.epsilon,
        max_iter=args.max_iters,
        restarts=args.restarts,
        random_state=args.seed,
        n_threads=_n_threads(),
    )
    try:
        components = est.fit_transform(data.T).T  # (p, pixels)
    except (ZeroContraction, NoConvergence) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    os.makedirs(args.out, exist_ok=True)
    for idx in range(p):
        plane = minmax_stretch(components[idx].reshape(cube.lines, cube.samples))
        write_pgm(os.path.join(args.out, f"component_{idx + 1}.pgm"), plane)
    report = SkewReport(
        config={
            "command": "extract", "strategy": args.strategy, "p": p,
            "epsilon": args.epsilon, "max_iters": args.max_iters,
            "restarts": args.restarts, "rng_seed": args.seed,
        },
        eigenpairs=est.pairs_,
        transformation=est.transformation_,
        metrics={"skewness": [float(v) for v in est.skewness_]},
        whitening={
            "mean": [float(v) for v in est.mean_],
            "eigenvalues": [float(v) for v in est.eigenvalues_],
            "retained": int(est.n_retained_),
        },
    )
    report_path = os.path.join(args.out, "report.json")
    write_report(report_path, report)
    write_matrix_csv(os.path.join(args.out, "components.csv"), components)
    print(f"extracted {p} components from {cube.bands}-band cube "
          f"({cube.lines}x{cube.samples} pixels)")
    for idx, value in enumerate(est.skewness_, start=1):
        print(f"  component {idx}: skewness={value:.6f}")
    print(f"report written to {report_path}")
    return _check_strict(args, {"extract": est.pairs_})


# --- bis ------------------------------------------------------------------------

def _cmd_bis(args):
    images = [read_pgm(path) for path in args.sources]
    if len(images) < 2:
        print("error: need at least 2 source images", file=sys.stderr)
        return EXIT_VALIDATION
    shape = (images[0].height, images[0].width)
    if any((img.height, img.width) != shape for img in images):
        print("error: source images differ in size", file=sys.stderr)
        return EXIT_VALIDATION
    n = len(images)
    sources = np.stack([img.pixels.ravel() for img in images])
    mixing = (np.eye(n) if args.mix == "identity"
              else random_mixing_matrix(n, args.seed))
    mixed = mix_sources(sources, mixing)
    est = PrincipalSkewnessAnalysis(
        n_components=n,
        deflation=_DEFLATION_BY_NAME[args.algo],
        tol=args.epsilon,
        max_iter=args.max_iters,
        restarts=args.restarts,
        random_state=args.seed,
        n_threads=_n_threads(),
    )
    try:
        estimates = est.fit_transform(mixed.T).T
    except (ZeroContraction, NoConvergence) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    centered = sources - sources.mean(axis=1, keepdims=True)
    score = evaluate_separation(
        list(centered), list(estimates), est.components_ @ mixing
    )
    os.makedirs(args.out, exist_ok=True)
    for idx in range(n):
        plane = minmax_stretch(estimates[idx].reshape(shape))
        write_pgm(os.path.join(args.out, f"separated_{idx + 1}.pgm"), plane)
    report = SkewReport(
        config={
            "command": "bis", "algo": args.algo, "mix": args.mix,
            "epsilon": args.epsilon, "max_iters": args.max_iters,
            "restarts": args.restarts, "rng_seed": args.seed,
            "sources": list(args.sources),
        },
        eigenpairs=est.pairs_,
        transformation=est.transformation_,
        metrics={
            "isi": score.isi,
            "tmse": score.tmse,
            "correlations": score.correlations,
            "per_source_mse": score.per_source_mse,
        },
    )
    report_path = os.path.join(args.out, "report.json")
    write_report(report_path, report)
    print(f"ISI  = {score.isi:.6f}")
    print(f"TMSE = {score.tmse:.6e}")
    for idx, rho in enumerate(score.correlations, start=1):
        print(f"rho_{idx} = {rho:.6f}")
    print(f"report written to {report_path}")
    return _check_strict(args, {"bis": est.pairs_})


# --- verify ---------------------------------------------------------------------

def _cmd_verify(args):
    from .verify import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    total_failed = 0
    for name in names:
        kwargs = {"seed": args.seed}
        if args.trials is not None:
            kwargs["trials"] = args.trials
        passed, failed, failures = SUITES[name](**kwargs)
        total_failed += failed
        print(f"suite {name}: {passed} passed, {failed} failed")
        for line in failures:
            print(f"  {line}")
    return EXIT_OK if total_failed == 0 else EXIT_NUMERICAL


def build_parser():
    parser = _Parser(prog="npsa", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"npsa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    eig = sub.add_parser("eigen", help="analyze a small tensor")
    eig.add_argument("tensor_csv",
                     help="CSV of the frontal slices stacked vertically (L*L rows, L cols)")
    eig.add_argument("--strategy", choices=["psa", "npsa", "both"], default="both")
    eig.add_argument("--p", type=int, default=None, help="components to extract")
    eig.add_argument("--oracle", action="store_true",
                     help="also enumerate eigenpairs and report angles")
    eig.add_argument("--grid", type=int, default=720, help="oracle grid size")
    eig.add_argument("--symmetrize", action="store_true",
                     help="average a non-supersymmetric input over index permutations")
    _search_args(eig)
    eig.set_defaults(func=_cmd_eigen)

    ext = sub.add_parser("extract", help="extract components from a cube")
    ext.add_argument("cube", help="raw binary cube data file")
    ext.add_argument("--header", default=None,
                     help="header path (default: <cube>.hdr)")
    ext.add_argument("--p", type=int, default=None)
    ext.add_argument("--strategy", choices=["psa", "npsa"], default="npsa")
    ext.add_argument("--out", default="npsa_out", help="output directory")
    _search_args(ext)
    ext.set_defaults(func=_cmd_extract)

    bis = sub.add_parser("bis", help="blind separation of mixed source images")
    bis.add_argument("sources", nargs="+", help="source PGM images (>= 2)")
    bis.add_argument("--algo", choices=["psa", "npsa"], default="npsa")
    bis.add_argument("--mix", choices=["random", "identity"], default="random",
                     help="mixing matrix: seeded uniform(0,1) or identity")
    bis.add_argument("--out", default="npsa_out", help="output directory")
    _search_args(bis)
    bis.set_defaults(func=_cmd_bis)

    ver = sub.add_parser("verify", help="run randomized property suites")
    ver.add_argument("--suite", choices=["lemma1", "kron", "equivalence", "all"],
                     default="all")
    ver.add_argument("--trials", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NpsaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, (ZeroContraction, NoConvergence)):
            return EXIT_NUMERICAL
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
