"""Monte Carlo sweeps: drop orchestration, aggregation and CSV/manifest output."""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import platform
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig, SweepSpec
from .metrics import delta_grid
from .simulation import drop_seed, simulate_drop

log = logging.getLogger(__name__)

CELL_COLUMNS = ["cell", "n_fragments", "bias_w", "strategy", "access_policy"]
PSI_COLUMNS = CELL_COLUMNS + ["delta_bps", "psi_mean", "psi_stderr"]
CLASS_COLUMNS = CELL_COLUMNS + [
    "avg_rate_associated_bps",
    "avg_rate_subscriber_bps",
    "ratio",
    "rejected_access",
    "rejected_capacity",
]
LOAD_COLUMNS = CELL_COLUMNS + ["tier", "served_users_mean", "used_prb_fraction_mean"]


@dataclass
class DropSummary:
    """The slice of a DropReport that the sweep aggregates."""

    drop_index: int
    psi: np.ndarray | None
    avg_rate_associated: float | None
    avg_rate_subscriber: float | None
    ratio: float | None
    rejected_access: int
    rejected_capacity: int
    macro_served: int
    femto_served: int
    macro_prb_fraction: float
    femto_prb_fraction: float


def _run_drop(args: tuple[ScenarioConfig, int, int, int]) -> DropSummary:
    cfg, base_seed, cell, drop = args
    r = simulate_drop(cfg, drop_seed(base_seed, cell, drop))
    return DropSummary(
        drop_index=drop,
        psi=r.psi,
        avg_rate_associated=r.avg_rate_associated,
        avg_rate_subscriber=r.avg_rate_subscriber,
        ratio=r.ratio,
        rejected_access=r.rejected_access,
        rejected_capacity=r.rejected_capacity,
        macro_served=r.macro.served,
        femto_served=r.femto.served,
        macro_prb_fraction=r.macro.used_prb_fraction,
        femto_prb_fraction=r.femto.used_prb_fraction,
    )


def _mean(values) -> float | None:
    vals = [v for v in values if v is not None]
    return float(np.mean(vals)) if vals else None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


@dataclass
class CellResult:
    index: int
    config: ScenarioConfig
    drops: list[DropSummary]

    def key(self) -> list:
        c = self.config
        return [self.index, c.n_fragments, float(c.bias_w), c.strategy, c.access_policy]

    def psi_rows(self, deltas: np.ndarray) -> list[list]:
        curves = np.array([d.psi for d in self.drops if d.psi is not None])
        rows = []
        for k, delta in enumerate(deltas):
            if len(curves):
                col = curves[:, k]
                mean = float(col.mean())
                stderr = float(col.std(ddof=1) / math.sqrt(len(col))) if len(col) > 1 else 0.0
            else:
                mean = stderr = None
            rows.append(self.key() + [float(delta), mean, stderr])
        return rows

    def class_row(self) -> list:
        d = self.drops
        return self.key() + [
            _mean(x.avg_rate_associated for x in d),
            _mean(x.avg_rate_subscriber for x in d),
            _mean(x.ratio for x in d),
            _mean(float(x.rejected_access) for x in d),
            _mean(float(x.rejected_capacity) for x in d),
        ]

    def load_rows(self) -> list[list]:
        d = self.drops
        return [
            self.key() + ["macro", _mean(float(x.macro_served) for x in d), _mean(x.macro_prb_fraction for x in d)],
            self.key() + ["femto", _mean(float(x.femto_served) for x in d), _mean(x.femto_prb_fraction for x in d)],
        ]


def _csv_text(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def atomic_write(path: Path, text: str) -> None:
    """Write to a temporary sibling and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_cells(
    cells: list[ScenarioConfig], num_drops: int, base_seed: int, threads: int = 1
) -> list[CellResult]:
    jobs = [(cfg, base_seed, c, d) for c, cfg in enumerate(cells) for d in range(num_drops)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            summaries = list(pool.map(_run_drop, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        summaries = []
        for job in jobs:
            summaries.append(_run_drop(job))
            if job[3] == num_drops - 1:
                log.info("cell %d/%d done", job[2] + 1, len(cells))
    results = []
    for c, cfg in enumerate(cells):
        drops = sorted(summaries[c * num_drops : (c + 1) * num_drops], key=lambda s: s.drop_index)
        results.append(CellResult(c, cfg, drops))
    return results


def log_header(base: ScenarioConfig, cells: list[ScenarioConfig]) -> None:
    log.info("PATH LOSS EXPONENT = %g", base.path_loss_exponent)
    for c, cfg in enumerate(cells):
        p = cfg.femto_prb_power_w
        offset = 10 * math.log10((p + cfg.bias_w) / p)
        log.info(
            "cell %d: n_f=%d strategy=%s access=%s bias=%.4g W (+%.2f dB over femto PRB power)",
            c, cfg.n_fragments, cfg.strategy, cfg.access_policy, cfg.bias_w, offset,
        )


def manifest_text(base: ScenarioConfig, spec: SweepSpec, n_cells: int, started: str, wall: float) -> str:
    lines = []
    for key, value in asdict(base).items():
        lines.append(f"config.{key} = {_fmt(value)}")
    for key in ("n_fragments", "bias_w", "bias_rel", "strategy", "access_policy"):
        value = getattr(spec, key)
        if value is not None:
            lines.append(f"sweep.{key} = {','.join(_fmt(v) for v in value)}")
    lines += [
        f"seed = {spec.base_seed}",
        f"cells = {n_cells}",
        f"drops_per_cell = {spec.num_drops}",
        f"software_version = hetnet-sim {__version__}",
        f"python = {platform.python_version()}",
        f"numpy = {np.__version__}",
        f"started_utc = {started}",
        f"wall_seconds = {wall:.3f}",
    ]
    return "\n".join(lines) + "\n"


def run_sweep(
    base: ScenarioConfig,
    spec: SweepSpec,
    out_dir: str | Path,
    threads: int = 1,
    figures: bool = False,
) -> list[CellResult]:
    """Run every sweep cell and write psi_curves.csv, class_rates.csv,
    load_factors.csv and manifest.txt to ``out_dir``."""
    out = Path(out_dir)
    cells = spec.cells(base)
    log_header(base, cells)
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    results = run_cells(cells, spec.num_drops, spec.base_seed, threads)
    wall = time.perf_counter() - t0

    deltas = delta_grid(base.delta_min_bps, base.delta_max_bps, base.delta_points)
    psi = [row for r in results for row in r.psi_rows(deltas)]
    classes = [r.class_row() for r in results]
    loads = [row for r in results for row in r.load_rows()]
    atomic_write(out / "psi_curves.csv", _csv_text(PSI_COLUMNS, psi))
    atomic_write(out / "class_rates.csv", _csv_text(CLASS_COLUMNS, classes))
    atomic_write(out / "load_factors.csv", _csv_text(LOAD_COLUMNS, loads))
    atomic_write(out / "manifest.txt", manifest_text(base, spec, len(cells), started, wall))
    log.info("wrote %d cells x %d drops to %s in %.1f s", len(cells), spec.num_drops, out, wall)
    if figures:
        from .plotting import render_report

        for path in render_report(out):
            log.info("figure %s", path)
    return results
