"""Render broker comparisons to files: a CSV table plus a bar-chart figure."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .broker import Offer
from .pricing import round_money
from .terms import nt_form

CSV_NAME = "comparison.csv"
FIGURE_NAME = "comparison.png"


def write_comparison_csv(offers: list[Offer], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["provider", "service", "function", "plan", "total", "currency", "error"])
        for o in offers:
            writer.writerow(
                [
                    o.provider_name,
                    nt_form(o.service_node),
                    o.function_name,
                    o.plan_name or "",
                    format(round_money(o.quote.total), "f") if o.quote else "",
                    o.quote.currency if o.quote else "",
                    o.quote_error or "",
                ]
            )


def write_comparison_figure(offers: list[Offer], path: Path, title: str) -> None:
    quoted = [o for o in offers if o.quote is not None]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(quoted) + 2.0), 4.0))
    if quoted:
        labels = [f"{o.provider_name}\n{o.plan_name or ''}".rstrip() for o in quoted]
        totals = [float(round_money(o.quote.total)) for o in quoted]
        bars = ax.bar(range(len(quoted)), totals, color="#4878a8")
        ax.set_xticks(range(len(quoted)))
        ax.set_xticklabels(labels, fontsize=8)
        currency = quoted[0].quote.currency or ""
        ax.set_ylabel(f"total ({currency})" if currency else "total")
        ax.bar_label(bars, fmt="%.2f", fontsize=8)
    else:
        ax.text(0.5, 0.5, "no quotable offers", ha="center", va="center", transform=ax.transAxes)
        ax.set_xticks([])
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_comparison_report(offers: list[Offer], outdir: str | Path, title: str) -> tuple[Path, Path]:
    """Write comparison.csv and comparison.png into outdir; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / CSV_NAME
    fig_path = out / FIGURE_NAME
    write_comparison_csv(offers, csv_path)
    write_comparison_figure(offers, fig_path, title)
    return csv_path, fig_path
