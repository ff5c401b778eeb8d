"""Size scaling of compiled circuits and log-log exponent fits."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from pbpc.compiler import CompileError, compile_baseline, compile_program
from pbpc.semantics import static_time


@dataclass
class BenchRow:
    n: int
    size: int
    depth: int | None
    time: int
    ancillas: int
    seconds: float


@dataclass
class BenchReport:
    program: str
    strategy: str
    rows: list[BenchRow]
    slope: float | None
    residual: float | None
    skipped: list[int] = field(default_factory=list)

    def to_dict(self, timing: bool = False) -> dict:
        # wall-clock is left out by default so reports are reproducible
        d = asdict(self)
        if not timing:
            for r in d["rows"]:
                del r["seconds"]
        return d

    def to_csv(self) -> str:
        lines = ["n,size,depth,time,ancillas"]
        for r in self.rows:
            lines.append(f"{r.n},{r.size},{'' if r.depth is None else r.depth},{r.time},{r.ancillas}")
        return "\n".join(lines) + "\n"


def fit_exponent(points) -> tuple[float, float]:
    """Least-squares slope of log(size) against log(n), and the RMS residual."""
    pts = [(float(n), float(s)) for n, s in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(n <= 0 or s <= 0 for n, s in pts):
        raise ValueError("points must be positive")
    x = np.log([n for n, _ in pts])
    y = np.log([s for _, s in pts])
    if np.ptp(x) == 0:
        raise ValueError("all n are equal")
    slope, icpt = np.polyfit(x, y, 1)
    res = y - (slope * x + icpt)
    return float(slope), float(np.sqrt(np.mean(res**2)))


def top_half(rows: list) -> list:
    """Upper half of the rows by n, keeping at least three."""
    k = max(3, (len(rows) + 1) // 2)
    return rows[-k:]


def _row(p, n: int, strategy: str, count_mode: bool, check: bool = False) -> BenchRow | None:
    t0 = time.perf_counter()
    try:
        if strategy == "sequential" and count_mode:
            cnt = compile_baseline(p, n, materialize=False)
            size, depth, anc = cnt.size, None, 0
        else:
            out = compile_program(p, n, strategy, check_orthogonality=check)
            size, depth, anc = out.stats["size"], out.stats["depth"], out.stats["ancilla_count"]
    except CompileError:
        return None
    return BenchRow(n, size, depth, static_time(p, n), anc, time.perf_counter() - t0)


def bench_scaling(
    p,
    strategy: str,
    n_values,
    program_id: str = "<program>",
    count_mode: bool | None = None,
    jobs: int = 1,
    check_orthogonality: bool = False,
) -> BenchReport:
    """Compile at every n (skipping erroneous sizes) and fit the size exponent.

    The orthogonality assertion is quadratic in the contextual list, so it is
    off here unless asked for.
    """
    ns = sorted(set(int(n) for n in n_values))
    if count_mode is None:
        count_mode = strategy == "sequential"
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            k = len(ns)
            got = list(ex.map(_row, [p] * k, ns, [strategy] * k, [count_mode] * k, [check_orthogonality] * k))
    else:
        got = [_row(p, n, strategy, count_mode, check_orthogonality) for n in ns]
    rows = [r for r in got if r is not None]
    skipped = [n for n, r in zip(ns, got) if r is None]
    slope = resid = None
    if len(rows) >= 3:
        slope, resid = fit_exponent([(r.n, r.size) for r in top_half(rows)])
    return BenchReport(program_id, strategy, rows, slope, resid, skipped)


def parse_range(text: str) -> list[int]:
    """``a:b:s`` (inclusive), ``a:b`` or a comma list."""
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        a, b, s = parts
        if s <= 0 or b < a:
            raise ValueError(f"bad range {text!r}")
        return list(range(a, b + 1, s))
    return [int(x) for x in text.split(",") if x.strip()]
