"""PNG figures for a verification report; matplotlib is imported only here."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Any


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _as_float(v: str | None) -> float:
    return float("nan") if v is None else float(Fraction(v))


def render_figures(report: dict[str, Any], outdir: str | Path) -> list[Path]:
    """Write per-character valuation plots and return their paths."""
    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    params = report["params"]
    stem = f"p{params['p']}_m{params['m']}_d{params['d']}_u{str(params['u']).replace(':', '-')}"
    rows = report["characters"]
    labels = [f"({r['chi']},{r['phi']})" for r in rows]
    series = {
        "Euler characteristic": [_as_float(r["euler_valuation"]) for r in rows],
        "r~ / W": [_as_float(r["rtilde_valuation"]) for r in rows],
        "r~~": [_as_float(r["rtildetilde_valuation"]) for r in rows],
    }
    paths = []

    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 3.6))
    width = 0.8 / len(series)
    for k, (name, values) in enumerate(series.items()):
        xs = [i + (k - 1) * width for i in range(len(rows))]
        ax.bar(xs, values, width=width, label=name)
    ax.axhline(0, color="black", linewidth=0.6)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_xlabel("character (chi, phi)")
    ax.set_ylabel("p-adic valuation")
    ax.set_title(f"{stem}  omega={report['omega']}  {report['verdict']}", fontsize=9)
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = outdir / f"{stem}_valuations.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    p, d = params["p"], params["d"]
    grid = [[float("nan")] * d for _ in range(p)]
    for r in rows:
        grid[r["chi"]][r["phi"]] = _as_float(r["rtildetilde_valuation"])
    fig, ax = plt.subplots(figsize=(1.2 + 0.6 * d, 1.2 + 0.5 * p))
    im = ax.imshow(grid, cmap="coolwarm", vmin=-1, vmax=1, aspect="auto")
    ax.set_xlabel("phi index")
    ax.set_ylabel("chi index")
    ax.set_xticks(range(d))
    ax.set_yticks(range(p))
    for i in range(p):
        for j in range(d):
            ax.text(j, i, f"{grid[i][j]:g}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax, shrink=0.8, label="valuation of r~~")
    fig.tight_layout()
    path = outdir / f"{stem}_unit_grid.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)
    return paths
