"""SVG figures: masks, complement atlases with cycles, routes, error curves.

Output is byte-stable: a fixed SVG hash salt and no date in the metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .domain import Grid  # noqa: E402

plt.rcParams["svg.hashsalt"] = "rungepairs"
plt.rcParams["svg.fonttype"] = "none"
plt.rcParams["path.simplify"] = False

_PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
            "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]


def _extent(G: Grid):
    xmin, xmax, ymin, ymax = G.box
    return (xmin, xmax, ymin, ymax)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _axes(G: Grid, title: str):
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.set_xlim(G.box[0], G.box[1])
    ax.set_ylim(G.box[2], G.box[3])
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.3", lw=0.5, ls=":")
    ax.set_title(title, fontsize=9)
    return fig, ax


def plot_mask(G: Grid, path, title: str = "domain") -> Path:
    fig, ax = _axes(G, title)
    ax.imshow(G.inside, origin="lower", extent=_extent(G), cmap=ListedColormap(["white", "#a0c4e8"]),
              interpolation="nearest", vmin=0, vmax=1)
    return _save(fig, path)


def plot_pair(D: Grid, D1: Grid, path, title: str = "D inside D1") -> Path:
    """Cells of D dark, cells of D1 only light, the rest white."""
    fig, ax = _axes(D, title)
    img = D1.inside.astype(int) + D.inside.astype(int)
    ax.imshow(img, origin="lower", extent=_extent(D), cmap=ListedColormap(["white", "#cfe3f4", "#3b75af"]),
              interpolation="nearest", vmin=0, vmax=2)
    return _save(fig, path)


def plot_atlas(atlas, path, title: str = "complement components", cycle=None) -> Path:
    """Complement components coloured, bounded ones hatched, optional cycle on top."""
    G = atlas.grid
    fig, ax = _axes(G, title)
    lab = atlas.labels
    colours = ["white"] + [_PALETTE[k % len(_PALETTE)] for k in range(atlas.n_components)]
    ax.imshow(lab + 1, origin="lower", extent=_extent(G), cmap=ListedColormap(colours),
              interpolation="nearest", vmin=0, vmax=atlas.n_components)
    bounded = np.isin(lab, atlas.bounded_ids) if atlas.bounded_ids else np.zeros_like(G.inside)
    if bounded.any():
        X = G.x_centers()
        Y = G.y_centers()
        ax.contourf(X, Y, bounded.astype(float), levels=[0.5, 1.5], colors="none", hatches=["////"])
    for c in atlas.bounded_ids:
        z = atlas.rep_point(c)
        ax.annotate(str(c), (z.real, z.imag), fontsize=7, ha="center", va="center")
    if cycle is not None:
        for poly, w in zip(cycle.polygons, cycle.weights):
            closed = np.append(poly, poly[:1])
            ax.plot(closed.real, closed.imag, color="black", lw=0.8, label=None)
            if w != 1:
                ax.annotate(f"x{w}", (poly[0].real, poly[0].imag), fontsize=6)
    return _save(fig, path)


def plot_routes(D: Grid, K: np.ndarray, plan, path, title: str = "pole routes") -> Path:
    fig, ax = _axes(D, title)
    img = D.inside.astype(int) + np.asarray(K, dtype=int)
    ax.imshow(img, origin="lower", extent=_extent(D), cmap=ListedColormap(["white", "#d9e6f2", "#8fb3d9"]),
              interpolation="nearest", vmin=0, vmax=2)
    for r in plan.routes:
        w = np.array(r.waypoints)
        ax.plot(w.real, w.imag, marker="o", ms=2, lw=0.8, color="#c0392b")
        ax.plot([r.start.real], [r.start.imag], marker="x", color="black", ms=4)
    return _save(fig, path)


def plot_error_curve(rows, path, title: str = "sup error against degree") -> Path:
    """``rows`` are ``(eps, degree, achieved)`` triples."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if rows:
        eps, deg, err = zip(*rows)
        ax.semilogy(deg, np.maximum(err, 1e-300), marker="o", label="achieved")
        ax.semilogy(deg, eps, ls="--", color="0.5", label="target")
        ax.legend(fontsize=8)
    ax.set_xlabel("total degree")
    ax.set_ylabel("sup error on K")
    ax.set_title(title, fontsize=9)
    return _save(fig, path)
