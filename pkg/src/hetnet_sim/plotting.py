"""Figures rendered from the sweep CSVs."""
from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def _read(path: Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _label(row: dict[str, str]) -> str:
    return (
        f"n_f={row['n_fragments']}, b={float(row['bias_w']):.3g} W, "
        f"{row['strategy']}/{row['access_policy']}"
    )


def _num(text: str) -> float:
    return float(text) if text else float("nan")


def plot_psi_curves(rows: list[dict[str, str]]):
    curves = defaultdict(list)
    labels = {}
    for row in rows:
        curves[row["cell"]].append((float(row["delta_bps"]), _num(row["psi_mean"])))
        labels[row["cell"]] = _label(row)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.5, 3.6))
        for cell, pts in curves.items():
            x, y = zip(*pts)
            ax.step(x, y, where="post", label=labels[cell], lw=1.2)
        ax.set_xscale("log")
        ax.set_ylim(0, 1.02)
        ax.set_xlabel(r"rate threshold $\delta$ [bit/s]")
        ax.set_ylabel(r"$\Pr[R > \delta \mid R > 0]$")
        ax.legend(loc="lower left", frameon=False)
        fig.tight_layout()
    return fig


def plot_class_rates(rows: list[dict[str, str]]):
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.5, 3.6))
        n = len(rows)
        xs = range(n)
        assoc = [_num(r["avg_rate_associated_bps"]) for r in rows]
        subs = [_num(r["avg_rate_subscriber_bps"]) for r in rows]
        ax.bar([x - 0.2 for x in xs], assoc, width=0.4, label="all associated users")
        ax.bar([x + 0.2 for x in xs], subs, width=0.4, label="subscribers (home femto)")
        ax.set_yscale("log")
        ax.set_xticks(list(xs))
        ax.set_xticklabels([f"n_f={r['n_fragments']}\nb={float(r['bias_w']):.2g}" for r in rows], fontsize=6)
        ax.set_ylabel("average rate [bit/s]")
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def plot_load_factors(rows: list[dict[str, str]]):
    by_tier = defaultdict(list)
    cells = []
    for r in rows:
        by_tier[r["tier"]].append(_num(r["used_prb_fraction_mean"]))
        if r["tier"] == "macro":
            cells.append(r)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        xs = range(len(cells))
        ax.bar([x - 0.2 for x in xs], by_tier["macro"], width=0.4, label="macro")
        ax.bar([x + 0.2 for x in xs], by_tier["femto"], width=0.4, label="femto")
        ax.set_xticks(list(xs))
        ax.set_xticklabels([f"n_f={r['n_fragments']}\nb={float(r['bias_w']):.2g}" for r in cells], fontsize=6)
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("used PRB fraction")
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def render_report(out_dir: str | Path) -> list[Path]:
    """Write psi_curves.png, class_rates.png and load_factors.png next to the CSVs."""
    out = Path(out_dir)
    written = []
    for name, fn in (
        ("psi_curves", plot_psi_curves),
        ("class_rates", plot_class_rates),
        ("load_factors", plot_load_factors),
    ):
        fig = fn(_read(out / f"{name}.csv"))
        path = out / f"{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
