"""Sweeps that regenerate the published t2-vs-t1 and g-vs-t1 curves as CSV."""

from __future__ import annotations

from pathlib import Path

from .cli import curve_rows, render_rows

FIG2_ALPHA2 = (0.1, 0.2, 0.4, 0.5, 0.8, 0.9)
GAIN_ETAS = (0.2, 0.4, 0.6, 0.8)

# (file name, alpha2, eta); eta=None fills only the t1/t2 columns
FIGURES: list[tuple[str, float, float | None]] = (
    [(f"fig2_alpha2_{a:g}.csv", a, None) for a in FIG2_ALPHA2]
    + [("fig3_alpha2_0.4_eta_0.6.csv", 0.4, 0.6), ("fig4_alpha2_0.8_eta_0.6.csv", 0.8, 0.6)]
    + [(f"fig5_alpha2_0.4_eta_{e:g}.csv", 0.4, e) for e in GAIN_ETAS]
    + [(f"fig6_alpha2_0.8_eta_{e:g}.csv", 0.8, e) for e in GAIN_ETAS]
)


def render_figure(alpha2: float, eta, points: int = 200, lo: float = 0.005, hi: float = 0.995) -> str:
    return render_rows(curve_rows(alpha2, eta, lo, hi, points), "csv")


def write_figures(outdir, points: int = 200) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, alpha2, eta in FIGURES:
        path = outdir / name
        path.write_text(render_figure(alpha2, eta, points), encoding="utf-8", newline="\n")
        written.append(path)
    return written
