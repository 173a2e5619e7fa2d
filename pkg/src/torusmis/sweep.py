"""Parameter sweeps over torus families: dataset grids, batch solving, refinement.

A sweep walks a grid of (l1, l2, alpha) triples, solves each qualifying
instance at a fixed discretization, and appends one line per instance to a
persistent record store.  Stores are resumable: completed triples are skipped
on re-run and their lines are carried over byte-for-byte (degree/radian
conversions do not round-trip exactly, so re-serializing would corrupt
resumed lines).  A finished sweep rewrites the store sorted by triple and
drops a summary figure next to it.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .grid_graph import GridSpec, build_graph, circumradius
from .mis import SolverConfig, solve_instance
from .torus import FlatTorus, is_perfectly_periodic

STORE_HEADER = "l1,l2,alpha_deg,n,m,degree,mis_size,bound,seed,move_budget,status"

_M64 = (1 << 64) - 1


@dataclass(frozen=True)
class DatasetSpec:
    """Index-generated parameter grid: value = min + i * step, never accumulated."""

    l_min: float
    l_max: float
    l_step: float
    alpha_min: float
    alpha_max: float
    alpha_step: float
    n: int = 100
    m: int = 100

    def __post_init__(self) -> None:
        if not (self.l_min <= self.l_max and self.alpha_min <= self.alpha_max):
            raise ValueError("grid ranges must satisfy min <= max")
        if not (self.l_step > 0 and self.alpha_step > 0):
            raise ValueError("grid steps must be positive")
        if self.n < 1 or self.m < 1:
            raise ValueError("grid sizes must be positive")

    def l_values(self) -> list[float]:
        count = int(round((self.l_max - self.l_min) / self.l_step)) + 1
        return [self.l_min + i * self.l_step for i in range(count)]

    def alpha_values(self) -> list[float]:
        count = int(round((self.alpha_max - self.alpha_min) / self.alpha_step)) + 1
        return [self.alpha_min + i * self.alpha_step for i in range(count)]


# Grids from the published experiment series: each dataset shrinks the box
# around the previous best point.
DATASET_1 = DatasetSpec(2.0, 6.0, 0.2, math.radians(20), math.radians(90), math.radians(5))
DATASET_2 = DatasetSpec(3.2, 3.6, 0.02, math.radians(55), math.radians(65), math.radians(2.5))
DATASET_3 = DatasetSpec(3.32, 3.36, 0.004, math.radians(57.5), math.radians(62.5), math.radians(0.5))
DATASET_4 = DatasetSpec(
    3.328, 3.340, 0.001, math.radians(59.5), math.radians(60.5), math.radians(0.25)
)
DATASETS = {1: DATASET_1, 2: DATASET_2, 3: DATASET_3, 4: DATASET_4}


def generate_dataset(ds: DatasetSpec) -> list[tuple[float, float, float]]:
    """All (l1, l2, alpha) grid triples with l1 <= l2 and perfect periodicity,
    in lexicographic order."""
    ls = ds.l_values()
    alphas = ds.alpha_values()
    triples = []
    for l1 in ls:
        for l2 in ls:
            if l1 > l2:
                continue
            for alpha in alphas:
                if is_perfectly_periodic(FlatTorus(l1, l2, alpha)):
                    triples.append((l1, l2, alpha))
    return triples


@dataclass(frozen=True)
class SweepRecord:
    l1: float
    l2: float
    alpha: float
    n: int
    m: int
    degree: int
    mis_size: int
    bound: float
    seed: int
    move_budget: int
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def key(self) -> tuple[float, float, float]:
        return (self.l1, self.l2, math.degrees(self.alpha))

    def to_line(self) -> str:
        return (
            f"{self.l1:.17g},{self.l2:.17g},{math.degrees(self.alpha):.17g},"
            f"{self.n},{self.m},{self.degree},{self.mis_size},"
            f"{self.bound:.17g},{self.seed},{self.move_budget},{self.status}"
        )

    @classmethod
    def from_line(cls, line: str) -> "SweepRecord":
        parts = line.split(",")
        if len(parts) != 11:
            raise ValueError(f"malformed sweep record: {line!r}")
        return cls(
            l1=float(parts[0]),
            l2=float(parts[1]),
            alpha=math.radians(float(parts[2])),
            n=int(parts[3]),
            m=int(parts[4]),
            degree=int(parts[5]),
            mis_size=int(parts[6]),
            bound=float(parts[7]),
            seed=int(parts[8]),
            move_budget=int(parts[9]),
            status=parts[10],
        )


@dataclass(frozen=True)
class RefinementStep:
    """Box half-widths and steps for the grid around a previous best point."""

    l_halfwidth: float
    l_step: float
    alpha_halfwidth: float
    alpha_step: float
    n: int = 100
    m: int = 100

    def __post_init__(self) -> None:
        for half, step in (
            (self.l_halfwidth, self.l_step),
            (self.alpha_halfwidth, self.alpha_step),
        ):
            if not (half > 0 and step > 0):
                raise ValueError("half-widths and steps must be positive")
            ratio = half / step
            if abs(ratio - round(ratio)) > 1e-9:
                raise ValueError(
                    f"half-width {half} is not an integer multiple of step {step}; "
                    "the center would not land on the refined grid"
                )


# Box factors reproducing the published dataset series from each best point.
REFINE_TO_DATASET_2 = RefinementStep(0.2, 0.02, math.radians(5), math.radians(2.5))
REFINE_TO_DATASET_3 = RefinementStep(0.02, 0.004, math.radians(2.5), math.radians(0.5))
REFINE_TO_DATASET_4 = RefinementStep(0.006, 0.001, math.radians(0.5), math.radians(0.25))


def refine(previous_best: tuple[float, float, float], step: RefinementStep) -> DatasetSpec:
    """Dataset box centered on the previous best triple with the given factors.

    The side range is centered on the midpoint of (l1, l2) so asymmetric best
    points still produce a box containing both coordinates when the half-width
    covers their spread.
    """
    l1, l2, alpha = previous_best
    center = (l1 + l2) / 2.0
    return DatasetSpec(
        l_min=center - step.l_halfwidth,
        l_max=center + step.l_halfwidth,
        l_step=step.l_step,
        alpha_min=alpha - step.alpha_halfwidth,
        alpha_max=alpha + step.alpha_halfwidth,
        alpha_step=step.alpha_step,
        n=step.n,
        m=step.m,
    )


@dataclass(frozen=True)
class SweepSummary:
    count: int
    best: SweepRecord | None
    mean_mis_size: float


def _instance_seed(global_seed: int, position: int) -> int:
    # splitmix64 of the triple's position, XORed into the global seed
    z = (position + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    z ^= z >> 31
    return (global_seed ^ z) & _M64


def _solve_one(
    triple: tuple[float, float, float], n: int, m: int, cfg: SolverConfig, seed: int
) -> SweepRecord:
    l1, l2, alpha = triple
    icfg = SolverConfig(
        seed=seed,
        time_limit=cfg.time_limit,
        restarts=cfg.restarts,
        plateau_moves=cfg.plateau_moves,
    )
    base = dict(
        l1=l1, l2=l2, alpha=alpha, n=n, m=m, degree=0, mis_size=0, bound=0.0,
        seed=seed, move_budget=icfg.move_budget,
    )
    torus = FlatTorus(l1, l2, alpha)
    if not is_perfectly_periodic(torus):
        return SweepRecord(status="skipped-not-periodic", **base)
    spec = GridSpec(torus, n, m)
    if not 2.0 * circumradius(spec) < 1.0:
        return SweepRecord(status="skipped-circumradius", **base)
    try:
        g = build_graph(spec)
        s = solve_instance(g, icfg)
    except Exception as exc:
        return SweepRecord(status=f"error-{type(exc).__name__}", **base)
    base["degree"] = g.degree
    base["mis_size"] = s.size
    base["bound"] = s.size / (n * m)
    return SweepRecord(status="ok", **base)


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_store(path: Path) -> dict[tuple[float, float, float], str]:
    """Completed record lines by triple key; tolerates a torn final line."""
    lines: dict[tuple[float, float, float], str] = {}
    text = path.read_text()
    if not text:
        return lines
    raw = text.split("\n")
    if raw[0] != STORE_HEADER:
        raise ValueError(f"{path} is not a sweep record store (bad header)")
    for line in raw[1:]:
        if not line:
            continue
        try:
            rec = SweepRecord.from_line(line)
        except ValueError:
            continue
        lines[rec.key()] = line
    return lines


def _best_record(records: Sequence[SweepRecord]) -> SweepRecord | None:
    """Argmax bound over solved records; ties go to the lowest triple, which
    is the first one in store order."""
    best = None
    for r in sorted(records, key=SweepRecord.key):
        if r.ok and (best is None or r.bound > best.bound):
            best = r
    return best


def write_summary_figure(records: Sequence[SweepRecord], path: Path) -> None:
    """Scatter of best-over-alpha bound per (l1, l2), best point marked."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    solved = [r for r in records if r.ok]
    fig, ax = plt.subplots(figsize=(7.0, 5.6))
    if solved:
        per_side: dict[tuple[float, float], float] = {}
        for r in solved:
            k = (r.l1, r.l2)
            per_side[k] = max(per_side.get(k, 0.0), r.bound)
        xs = [k[0] for k in per_side]
        ys = [k[1] for k in per_side]
        cs = [per_side[k] for k in per_side]
        sc = ax.scatter(xs, ys, c=cs, s=18, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="best bound over alpha")
        best = _best_record(solved)
        ax.plot([best.l1], [best.l2], marker="*", markersize=14, color="red")
        ax.set_title(
            f"best {best.bound:.5f} at l1={best.l1:g} l2={best.l2:g} "
            f"alpha={math.degrees(best.alpha):g} deg"
        )
    else:
        ax.set_title("no solved instances")
    ax.set_xlabel("l1")
    ax.set_ylabel("l2")
    fig.tight_layout()
    tmp = path.with_name(path.name + ".tmp")
    fig.savefig(tmp, dpi=120, format=(path.suffix.lstrip(".") or "png"))
    plt.close(fig)
    os.replace(tmp, path)


def run_sweep(
    triples: Sequence[tuple[float, float, float]],
    n: int,
    m: int,
    cfg: SolverConfig,
    store_path: str | Path,
    threads: int | None = None,
    figure_path: str | Path | None = None,
) -> SweepSummary:
    """Solve every triple not already in the store; return the overall summary.

    Records append to the store as instances finish (any completion order),
    then the finished store is rewritten sorted by triple so the result is
    independent of parallelism.  Per-instance seeds depend only on the
    triple's position in `triples`, so resumed and fresh runs agree.
    """
    store_path = Path(store_path)
    done = read_store(store_path) if store_path.exists() else {}
    keyed = []
    for pos, triple in enumerate(triples):
        l1, l2, alpha = triple
        keyed.append(((l1, l2, math.degrees(alpha)), pos, triple))
    todo = [(key, pos, triple) for key, pos, triple in keyed if key not in done]
    if threads is None:
        threads = os.cpu_count() or 1
    if todo:
        fresh = not store_path.exists() or store_path.stat().st_size == 0
        torn_tail = not fresh and not store_path.read_bytes().endswith(b"\n")
        with store_path.open("a") as sink:
            if fresh:
                sink.write(STORE_HEADER + "\n")
            elif torn_tail:
                sink.write("\n")
            sink.flush()
            with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
                futures = {
                    pool.submit(
                        _solve_one, triple, n, m, cfg, _instance_seed(cfg.seed, pos)
                    ): key
                    for key, pos, triple in todo
                }
                for future in as_completed(futures):
                    line = future.result().to_line()
                    done[futures[future]] = line
                    sink.write(line + "\n")
                    sink.flush()
    all_lines = [done[k] for k in sorted(done)]
    _atomic_write_text(store_path, "\n".join([STORE_HEADER] + all_lines) + "\n")
    records = [SweepRecord.from_line(line) for line in all_lines]
    solved = [r for r in records if r.ok]
    best = _best_record(records)
    mean = sum(r.mis_size for r in solved) / len(solved) if solved else 0.0
    if figure_path is None:
        figure_path = store_path.with_suffix(".png")
    write_summary_figure(records, Path(figure_path))
    return SweepSummary(count=len(records), best=best, mean_mis_size=mean)
