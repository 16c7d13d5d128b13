"""Random-channel sweeps and special-channel comparisons.

These back the ``sweep`` and ``special`` CLI subcommands and are usable
directly from Python.
"""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, TextIO

from .bounds import coincidence_test, depolarizing_capacity, lower_bound, sorted_block_capacity
from .channel import (
    depolarizing_channel,
    depolarizing_like_one,
    depolarizing_like_two,
    sample_random_channel,
)
from .oracle import OptimizerConfig, min_output_entropy

__all__ = [
    "SweepRow",
    "sweep_row",
    "run_sweep",
    "write_sweep_csv",
    "sweep_csv_text",
    "special_report",
    "thread_limit",
]

SPECIAL_KINDS = ("depolarizing", "depol-like-1", "depol-like-2")


@dataclass(frozen=True)
class SweepRow:
    seed: int
    d: int
    chi_lb: float
    chi_ub: float
    chi_opt: Optional[float]
    coincide: bool
    dset_achievable: bool
    argmin_n: int
    argmin_m: int
    lb_runtime_seconds: Optional[float]

    def normalized(self) -> "SweepRow":
        scale = math.log2(self.d)
        return SweepRow(
            **{
                **asdict(self),
                "chi_lb": self.chi_lb / scale,
                "chi_ub": self.chi_ub / scale,
                "chi_opt": None if self.chi_opt is None else self.chi_opt / scale,
            }
        )


FIELDNAMES = tuple(f.name for f in fields(SweepRow))


def sweep_row(d: int, seed: int, oracle: bool = True, restarts: int = 8, timing: bool = False) -> SweepRow:
    """Bounds (and optionally the oracle value) for the random channel drawn with ``seed``."""
    p = sample_random_channel(d, seed)
    runtime = None
    if timing:
        t0 = time.perf_counter()
        lower_bound(p)
        runtime = time.perf_counter() - t0
    rep = coincidence_test(p)
    chi_opt = None
    if oracle:
        chi_opt = min_output_entropy(p, OptimizerConfig(restarts=restarts, seed=seed)).chi_opt
    return SweepRow(
        seed=seed,
        d=d,
        chi_lb=rep.chi_lb,
        chi_ub=rep.chi_ub,
        chi_opt=chi_opt,
        coincide=rep.coincide,
        dset_achievable=rep.dset_achievable,
        argmin_n=rep.argmin_index.n,
        argmin_m=rep.argmin_index.m,
        lb_runtime_seconds=runtime,
    )


def thread_limit() -> int:
    """Worker count: CPU count, capped by ``WEYLCAP_THREADS`` when set."""
    n = os.cpu_count() or 1
    env = os.environ.get("WEYLCAP_THREADS")
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return n


def _row_star(args):
    return sweep_row(*args)


def run_sweep(
    d: int,
    count: int,
    seed: int = 0,
    oracle: bool = True,
    restarts: int = 8,
    timing: bool = False,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """``count`` random channels with seeds ``seed, seed + 1, ...``, sorted by decreasing ``chi_ub``.

    Rows are computed in parallel when ``workers > 1``; the output order does
    not depend on scheduling.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    jobs = [(d, seed + i, oracle, restarts, timing) for i in range(count)]
    workers = thread_limit() if workers is None else workers
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_star, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        rows = [_row_star(j) for j in jobs]
    return sorted(rows, key=lambda r: (-r.chi_ub, r.seed))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO, normalize: bool = False) -> None:
    """RFC 4180 CSV with the ``SweepRow`` field names as header."""
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(FIELDNAMES)
    for row in rows:
        if normalize:
            row = row.normalized()
        writer.writerow([_fmt(getattr(row, name)) for name in FIELDNAMES])


def sweep_csv_text(rows: Iterable[SweepRow], normalize: bool = False) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf, normalize=normalize)
    return buf.getvalue()


def special_report(kind: str, d: int, **params) -> dict:
    """Analytic capacity of a special channel next to both computed bounds.

    ``kind`` is one of ``depolarizing`` (``mu``), ``depol-like-1`` (``xi``,
    ``idx``) or ``depol-like-2`` (``eta``, ``kappa``, ``idx_a``, ``idx_b``).
    """
    if kind == "depolarizing":
        p = depolarizing_channel(d, params["mu"])
        analytic = depolarizing_capacity(d, params["mu"])
    elif kind == "depol-like-1":
        p = depolarizing_like_one(d, params["xi"], params["idx"])
        analytic = depolarizing_capacity(d, params["xi"])
    elif kind == "depol-like-2":
        eta, kappa = params["eta"], params["kappa"]
        p = depolarizing_like_two(d, eta, kappa, params["idx_a"], params["idx_b"])
        c = (eta + kappa - 1.0) / d**2
        analytic = sorted_block_capacity((1.0 - eta) + (1.0 - kappa) + d * c, d)
    else:
        raise ValueError(f"unknown special channel {kind!r}; expected one of {SPECIAL_KINDS}")
    rep = coincidence_test(p)
    return {
        "kind": kind,
        "d": d,
        "params": {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()},
        "analytic": analytic,
        "chi_lb": rep.chi_lb,
        "chi_ub": rep.chi_ub,
        "coincide": rep.coincide,
        "abs_diff_lb": abs(rep.chi_lb - analytic),
        "abs_diff_ub": abs(rep.chi_ub - analytic),
    }
