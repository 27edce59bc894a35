"""Render static figure analogues from qwalk CLI output files.

Each figure is declared as a :class:`FigureSpec` naming the CSV/JSON inputs
it consumes (relative to an input directory), their required headers, axis
scales and overlay recipe.  Rendering touches serialized data only, never
the simulation library, so the figures document exactly what the data files
contain.

Usage: ``qwalk-render --figure fig12 --in-dir out/rabi --out fig12.png``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "FIGURES", "render", "main"]

EXIT_OK = 0
EXIT_INPUT = 2


class InputError(ValueError):
    """Missing, empty or wrongly structured input data."""


@dataclass(frozen=True)
class FigureSpec:
    """What a figure is built from and how its axes are scaled."""

    figure_id: str
    inputs: dict[str, str]            # role -> relative path
    headers: dict[str, tuple[str, ...]] = field(default_factory=dict)
    log_y: bool = False
    overlay: str = "none"             # "none" | "tail-law"
    size: tuple[float, float] = (8.0, 5.0)
    dpi: int = 150


def _read_csv(path: Path, expected: tuple[str, ...]) -> dict[str, np.ndarray]:
    if not path.exists():
        raise InputError(f"input file missing: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != expected:
            raise InputError(
                f"{path.name}: header {header} does not match required {list(expected)}"
            )
        body = fh.read()
    if not body.strip():
        raise InputError(f"{path.name}: no data rows")
    data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(expected)}


def _read_summary(path: Path) -> dict:
    if not path.exists():
        raise InputError(f"input file missing: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _trajectory_grid(cols: dict[str, np.ndarray]):
    t = cols["t"].astype(int)
    x = cols["x"].astype(int)
    xs = np.unique(x)
    ts = np.unique(t)
    grid = np.zeros((len(ts), len(xs)))
    grid[t - ts.min(), x - xs.min()] = cols["p"]
    return ts, xs, grid


def _heatmap(ax, ts, xs, grid, title=""):
    masked = np.ma.masked_less(grid, 1e-12)
    im = ax.imshow(
        masked.T,
        origin="lower",
        aspect="auto",
        extent=(ts.min(), ts.max(), xs.min(), xs.max()),
        cmap="inferno",
        norm=matplotlib.colors.LogNorm(vmin=1e-6, vmax=1.0),
    )
    ax.set_xlabel("t")
    ax.set_ylabel("x")
    if title:
        ax.set_title(title)
    return im


# ---------------------------------------------------------------------------
# figure implementations
# ---------------------------------------------------------------------------

def _render_fig2(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    cols = _read_csv(in_dir / spec.inputs["trajectory"], spec.headers["trajectory"])
    ts, xs, grid = _trajectory_grid(cols)
    fig, ax = plt.subplots(figsize=spec.size)
    im = _heatmap(ax, ts, xs, grid, "interface walk: probability vs (t, x)")
    span = int(1.1 * ts.max())
    ax.set_ylim(-span, span)
    fig.colorbar(im, ax=ax, label="p")
    fig.savefig(out, dpi=spec.dpi, bbox_inches="tight")
    plt.close(fig)
    return {"overlays": 0, "panels": 1}


def _render_fig3(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    fig, axes = plt.subplots(2, 2, figsize=spec.size, sharey=True)
    overlays = 0
    for ax, panel in zip(axes.ravel(), ("a", "b", "c", "d")):
        cols = _read_csv(in_dir / panel / "final_distribution.csv", ("x", "p"))
        summary = _read_summary(in_dir / panel / "summary.json")
        cfg = summary["config"]
        x = cols["x"].astype(int)
        p = cols["p"]
        even = (np.abs(x) % 2 == 0) & (p > 1e-14)
        ax.semilogy(x[even], p[even], ".", ms=3, color="#1f4e89")
        if panel in ("c", "d"):
            # small-angle tail law e^{-2 |x| theta}, anchored at the centre
            th_minus = cfg.get("theta_minus", cfg.get("theta", 0.0))
            th_plus = cfg.get("theta_plus", cfg.get("theta", 0.0))
            i0 = int(np.argmin(np.abs(x)))
            anchor = p[i0]
            for sign, th in ((-1, th_minus), (+1, th_plus)):
                xv = np.arange(0, 80) * sign
                ax.semilogy(xv, anchor * np.exp(-2 * np.abs(xv) * abs(th)),
                            "r-", lw=1.2)
                overlays += 1
        ax.set_xlim(-150, 150)
        ax.set_ylim(1e-8, 1.0)
        ax.set_title(f"({panel})", fontsize=9)
        ax.set_xlabel("x")
    axes[0, 0].set_ylabel("p")
    axes[1, 0].set_ylabel("p")
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": overlays, "panels": 4}


def _render_fig7(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    fig, axes = plt.subplots(1, 2, figsize=spec.size, sharey=True)
    for ax, seg in zip(axes, ("d1", "d21")):
        cols = _read_csv(in_dir / seg / "sweep.csv", ("theta_A", "index", "omega", "ipr"))
        ax.scatter(cols["theta_A"], cols["omega"], s=1.5, c="#1f4e89", rasterized=True)
        ax.set_xlabel(r"$\theta_A$")
        ax.set_title(f"segment length {seg[1:]}")
    axes[0].set_ylabel(r"$\omega$")
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": 0, "panels": 2}


def _render_fig8(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    fig, ax = plt.subplots(figsize=spec.size)
    styles = {"minus": ("#1f4e89", "defect theta_A < 0"),
              "plus": ("#c23b22", "defect theta_A > 0")}
    for key, (color, label) in styles.items():
        cols = _read_csv(in_dir / key / "final_distribution.csv", ("x", "p"))
        x = cols["x"].astype(int)
        p = cols["p"]
        even = (np.abs(x) % 2 == 0) & (p > 1e-14)
        ax.semilogy(x[even], p[even], ".", ms=3, color=color, label=label)
    ax.set_xlim(-160, 160)
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("single-site defect: localization vs anti-localization")
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": 0, "panels": 1}


def _render_fig10(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    fig, axes = plt.subplots(1, 2, figsize=spec.size)
    for ax, (panel, title) in zip(
        axes, (("left", "reflectors in the bulk phase"),
               ("right", "left reflector phase flipped"))
    ):
        cols = _read_csv(in_dir / panel / "trajectory.csv", ("t", "x", "p"))
        ts, xs, grid = _trajectory_grid(cols)
        _heatmap(ax, ts, xs, grid, title)
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": 0, "panels": 2}


def _render_rabi_panels(spec: FigureSpec, in_dir: Path, out: Path, title: str) -> dict:
    traj = _read_csv(in_dir / spec.inputs["trajectory"], ("t", "x", "p"))
    rabi = _read_csv(in_dir / spec.inputs["rabi"], ("t", "p_L", "p_R"))
    fig, (ax1, ax2) = plt.subplots(
        1, 2, figsize=spec.size, gridspec_kw={"width_ratios": (3, 2)}
    )
    ts, xs, grid = _trajectory_grid(traj)
    im = _heatmap(ax1, ts, xs, grid, title)
    fig.colorbar(im, ax=ax1, label="p")
    ax2.plot(rabi["t"], rabi["p_L"], lw=1.0, label=r"$p_L$")
    ax2.plot(rabi["t"], rabi["p_R"], lw=1.0, label=r"$p_R$")
    ax2.set_xlabel("t")
    ax2.set_ylabel("population")
    ax2.set_ylim(-0.02, 1.02)
    ax2.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": 0, "panels": 2}


def _render_fig12(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    return _render_rabi_panels(spec, in_dir, out, "Rabi transport, clean wire")


def _render_fig17a(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    return _render_rabi_panels(spec, in_dir, out, "Rabi transport, disordered bulk")


def _render_fig20(spec: FigureSpec, in_dir: Path, out: Path) -> dict:
    cols = _read_csv(
        in_dir / spec.inputs["scaling"],
        ("theta", "L", "omega_exact", "omega_approx", "omega_diag"),
    )
    fig, ax = plt.subplots(figsize=spec.size)
    thetas = np.unique(cols["theta"])
    cmap = plt.get_cmap("viridis")
    for i, th in enumerate(thetas):
        sel = cols["theta"] == th
        L = cols["L"][sel]
        color = cmap(i / max(len(thetas) - 1, 1))
        ax.plot(L, np.log(cols["omega_approx"][sel]), "-", color=color, lw=1.0,
                label=rf"$\theta$ = {th:.3f}")
        ax.plot(L, np.log(cols["omega_exact"][sel]), "o", color=color, ms=4)
    ax.set_xlabel("L")
    ax.set_ylabel(r"$\ln \omega$")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("gap energy vs wire half-length: exact roots (dots), leading order (lines)")
    fig.tight_layout()
    fig.savefig(out, dpi=spec.dpi)
    plt.close(fig)
    return {"overlays": 0, "panels": 1}


FIGURES: dict[str, tuple[FigureSpec, callable]] = {
    "fig2": (
        FigureSpec("fig2", {"trajectory": "trajectory.csv"},
                   {"trajectory": ("t", "x", "p")}, size=(7.0, 4.5)),
        _render_fig2,
    ),
    "fig3": (
        FigureSpec("fig3", {p: f"{p}/final_distribution.csv" for p in "abcd"},
                   log_y=True, overlay="tail-law", size=(8.0, 6.0)),
        _render_fig3,
    ),
    "fig7": (
        FigureSpec("fig7", {"d1": "d1/sweep.csv", "d21": "d21/sweep.csv"},
                   size=(9.0, 4.0)),
        _render_fig7,
    ),
    "fig8": (
        FigureSpec("fig8", {"minus": "minus/final_distribution.csv",
                            "plus": "plus/final_distribution.csv"},
                   log_y=True, size=(7.0, 4.5)),
        _render_fig8,
    ),
    "fig10": (
        FigureSpec("fig10", {"left": "left/trajectory.csv",
                             "right": "right/trajectory.csv"}, size=(9.0, 4.0)),
        _render_fig10,
    ),
    "fig12": (
        FigureSpec("fig12", {"trajectory": "trajectory.csv", "rabi": "rabi.csv"},
                   size=(9.0, 4.0)),
        _render_fig12,
    ),
    "fig17a": (
        FigureSpec("fig17a", {"trajectory": "trajectory.csv", "rabi": "rabi.csv"},
                   size=(9.0, 4.0)),
        _render_fig17a,
    ),
    "fig20": (
        FigureSpec("fig20", {"scaling": "gap_scaling.csv"}, size=(7.0, 5.0)),
        _render_fig20,
    ),
}


def render(figure_id: str, in_dir: Path, out: Path) -> dict:
    """Render one figure; returns metadata (panel and overlay counts).

    Raises InputError when required files are missing, empty, or carry the
    wrong columns.
    """
    if figure_id not in FIGURES:
        raise InputError(f"unknown figure {figure_id!r}; choose from {sorted(FIGURES)}")
    spec, impl = FIGURES[figure_id]
    out.parent.mkdir(parents=True, exist_ok=True)
    meta = impl(spec, Path(in_dir), Path(out))
    meta["figure"] = figure_id
    meta["out"] = str(out)
    return meta


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qwalk-render", description="render figure analogues from qwalk output files"
    )
    parser.add_argument("--figure", required=True, choices=sorted(FIGURES))
    parser.add_argument("--in-dir", required=True)
    parser.add_argument("--out", required=True)
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        meta = render(args.figure, Path(args.in_dir), Path(args.out))
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(meta))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
