"""Figures that accompany the delimited tables written by the CLI."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "savefig.dpi": 150,
}


def table_figure(rows: Sequence[dict], path: str | Path) -> Path:
    """Bar chart of the weight-4 maximum ``m`` against ``d``.

    Rows carry ``d``, ``m`` and ``status``; unconfirmed rows are hatched and
    the even-order value ``d - 2`` is drawn for reference.
    """
    path = Path(path)
    ds = [r["d"] for r in rows]
    ms = [r["m"] if isinstance(r["m"], int) else 0 for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        bars = ax.bar(ds, ms, color="0.35", width=0.7, label="m (disjoint 2-frames - 1)")
        for bar, r in zip(bars, rows):
            if r.get("status") == "UNCONFIRMED":
                bar.set_hatch("//")
                bar.set_facecolor("0.8")
        ax.plot(ds, [max(d - 2, 0) for d in ds], ls=":", color="k", lw=1, label="d - 2 (from D_d)")
        for d, m, r in zip(ds, ms, rows):
            ax.annotate(str(r["m"]), (d, m), ha="center", va="bottom", fontsize=7,
                        xytext=(0, 1), textcoords="offset points")
        ax.set_xlabel("order d")
        ax.set_ylabel("MUWM of weight 4")
        ax.set_xticks(ds)
        ax.legend(frameon=False, loc="upper left")
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path


def inner_product_figure(values: dict[int, int], path: str | Path, title: str = "") -> Path:
    """Histogram of inner products between code vectors (value -> count)."""
    path = Path(path)
    xs = sorted(values)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 2.6))
        ax.bar([str(x) for x in xs], [values[x] for x in xs], color="0.35")
        ax.set_xlabel("inner product")
        ax.set_ylabel("pairs")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path
