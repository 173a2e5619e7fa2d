"""Command-line interface: metric queries, periodicity checks, solving, sweeps.

Angles are accepted in degrees (the tables use degrees) and converted to
radians once at the boundary.  Exit codes are scriptable: 0 success, 1 the
checked predicate is false, 2 a theorem hypothesis is violated, 3 I/O
failure, 4 bad flags or parameter values.  Every artifact file is written
atomically (temp file in the target directory, then rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import math
import os
import sys
import tempfile
from pathlib import Path

from .croft import croft_optimum
from .grid_graph import GridSpec, build_graph, circumradius, export_dimacs
from .mis import MOVES_PER_SECOND, SolverConfig, save_solution, solve_instance
from .render import RenderStyle, render_solution
from .sweep import DATASETS, DatasetSpec, generate_dataset, run_sweep
from .torus import FlatTorus, TorusPoint, is_perfectly_periodic, metric

OUTPUT_DIR_ENV = "TORUSMIS_OUT"

EXIT_OK = 0
EXIT_PREDICATE_FALSE = 1
EXIT_HYPOTHESIS = 2
EXIT_IO = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; this project reserves 2 for
    hypothesis violations, so usage errors are remapped to 4."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve_output(path: str) -> Path:
    """Resolve a user path, honoring the output-directory environment override
    for relative paths."""
    base = os.environ.get(OUTPUT_DIR_ENV)
    p = Path(path)
    if base and not p.is_absolute():
        root = Path(base)
        root.mkdir(parents=True, exist_ok=True)
        return root / p
    return p


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_metric(args) -> int:
    try:
        t = FlatTorus(args.l1, args.l2, math.radians(args.alpha_deg))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    d = metric(t, TorusPoint(args.x1, args.y1), TorusPoint(args.x2, args.y2))
    print(f"{d:.17g}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        t = FlatTorus(args.l1, args.l2, math.radians(args.alpha_deg))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    periodic = is_perfectly_periodic(t)
    print(f"perfectly-periodic: {'true' if periodic else 'false'}")
    return EXIT_OK if periodic else EXIT_PREDICATE_FALSE


def cmd_solve(args) -> int:
    try:
        t = FlatTorus(args.l1, args.l2, math.radians(args.alpha_deg))
        spec = GridSpec(t, args.n, args.m)
        cfg = SolverConfig(
            seed=args.seed,
            time_limit=args.budget / MOVES_PER_SECOND,
            restarts=args.restarts,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not is_perfectly_periodic(t):
        print(
            f"torus ({args.l1}, {args.l2}, {args.alpha_deg} deg) "
            "is not perfectly periodic",
            file=sys.stderr,
        )
        return EXIT_HYPOTHESIS
    r = circumradius(spec)
    if not 2.0 * r < 1.0:
        print(
            f"circumradius hypothesis violated: 2r = {2.0 * r:.6g} >= 1",
            file=sys.stderr,
        )
        return EXIT_HYPOTHESIS
    g = build_graph(spec)
    s = solve_instance(g, cfg)
    prefix = _resolve_output(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    sol = io.BytesIO()
    save_solution(s, sol)
    dimacs = io.BytesIO()
    export_dimacs(g, dimacs)
    svg = io.BytesIO()
    render_solution(spec, s, RenderStyle(), svg)
    _atomic_write_bytes(prefix.with_name(prefix.name + ".sol"), sol.getvalue())
    _atomic_write_bytes(prefix.with_name(prefix.name + ".dimacs"), dimacs.getvalue())
    _atomic_write_bytes(prefix.with_name(prefix.name + ".svg"), svg.getvalue())
    print(
        f"l1={args.l1:.17g} l2={args.l2:.17g} alpha_deg={args.alpha_deg:.17g} "
        f"n={args.n} m={args.m} seed={args.seed} budget={args.budget} "
        f"restarts={args.restarts}"
    )
    print(f"degree={g.degree} mis_size={s.size}")
    print(f"bound={s.size / (args.n * args.m):.17g}")
    return EXIT_OK


def _sweep_dataset(args) -> DatasetSpec:
    if args.dataset is not None:
        ds = DATASETS[args.dataset]
        return dataclasses.replace(ds, n=args.n, m=args.m)
    needed = (args.l_min, args.l_max, args.l_step, args.alpha_min, args.alpha_max,
              args.alpha_step)
    if any(v is None for v in needed):
        raise ValueError(
            "either --dataset or all of --l-min/--l-max/--l-step/"
            "--alpha-min/--alpha-max/--alpha-step are required"
        )
    return DatasetSpec(
        l_min=args.l_min,
        l_max=args.l_max,
        l_step=args.l_step,
        alpha_min=math.radians(args.alpha_min),
        alpha_max=math.radians(args.alpha_max),
        alpha_step=math.radians(args.alpha_step),
        n=args.n,
        m=args.m,
    )


def cmd_sweep(args) -> int:
    try:
        ds = _sweep_dataset(args)
        cfg = SolverConfig(
            seed=args.seed,
            time_limit=args.budget / MOVES_PER_SECOND,
            restarts=args.restarts,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    triples = generate_dataset(ds)
    if args.dry_run:
        print(f"count={len(triples)}")
        return EXIT_OK
    if args.store is None:
        print("error: --store is required unless --dry-run", file=sys.stderr)
        return EXIT_USAGE
    store = _resolve_output(args.store)
    store.parent.mkdir(parents=True, exist_ok=True)
    summary = run_sweep(triples, ds.n, ds.m, cfg, store, threads=args.threads)
    print(
        f"n={ds.n} m={ds.m} seed={args.seed} budget={args.budget} "
        f"restarts={args.restarts} store={store}"
    )
    print(f"count={summary.count}")
    print(f"mean_mis_size={summary.mean_mis_size:.17g}")
    if summary.best is None:
        print("best=none")
    else:
        b = summary.best
        print(
            f"best_l1={b.l1:.17g} best_l2={b.l2:.17g} "
            f"best_alpha_deg={math.degrees(b.alpha):.17g} "
            f"best_bound={b.bound:.17g}"
        )
    return EXIT_OK


def cmd_croft(args) -> int:
    x_star, density_star = croft_optimum()
    print(f"x_star={x_star:.17g}")
    print(f"density_star={density_star:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="torusmis", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="distance between two torus points")
    p.add_argument("l1", type=float)
    p.add_argument("l2", type=float)
    p.add_argument("alpha_deg", type=float)
    p.add_argument("x1", type=float)
    p.add_argument("y1", type=float)
    p.add_argument("x2", type=float)
    p.add_argument("y2", type=float)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("check", help="perfect-periodicity predicate")
    p.add_argument("l1", type=float)
    p.add_argument("l2", type=float)
    p.add_argument("alpha_deg", type=float)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve one instance, write artifacts")
    p.add_argument("l1", type=float)
    p.add_argument("l2", type=float)
    p.add_argument("alpha_deg", type=float)
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=10_000_000, help="move budget")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--out", default="instance", help="output file prefix")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="batch-solve a parameter grid")
    p.add_argument("--dataset", type=int, choices=sorted(DATASETS))
    p.add_argument("--l-min", type=float)
    p.add_argument("--l-max", type=float)
    p.add_argument("--l-step", type=float)
    p.add_argument("--alpha-min", type=float, help="degrees")
    p.add_argument("--alpha-max", type=float, help="degrees")
    p.add_argument("--alpha-step", type=float, help="degrees")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=10_000_000, help="move budget")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--store", help="record store path")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--dry-run", action="store_true", help="print count only")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("croft", help="analytic baseline optimum")
    p.set_defaults(func=cmd_croft)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
