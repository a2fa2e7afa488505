"""One renderer per figure id, all consuming validated CSV tables only."""

from dataclasses import dataclass, field
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LinearSegmentedColormap  # noqa: E402

from .schema import SchemaError, read_csv  # noqa: E402

# deterministic output: fixed hash salt for SVG ids, no embedded dates
matplotlib.rcParams["svg.hashsalt"] = "figkit"

FAMILY_COLUMNS = ["J_p_deg", "dw_deg", "stable"]
EIG_COLUMNS = ["J_p_deg"] + [f"{p}_l{k}" for k in range(1, 9) for p in ("re", "im")]
TRAJ_COLUMNS = ["t", "r1", "w1", "R1", "G1", "r2", "w2", "R2", "G2", "H", "J", "Omega"]
MAP_COLUMNS = ["axis1", "axis2", "max_ecc", "outcome"]
CHIMNEY_COLUMNS = ["eps", "J_deg", "stable"]
TRANSITION_COLUMNS = ["eps", "J_lower_deg", "J_upper_deg"]
COMPARE_COLUMNS = ["eps", "J_deg", "ratio"]

FIGURE_IDS = (
    "families",
    "traj_coords",
    "eig_loci",
    "map",
    "chimney",
    "slab3d",
    "avg_vs_full",
    "unequal",
)


@dataclass
class FigureRecipe:
    figure_id: str
    inputs: List[str]
    output: str
    dpi: int = 150
    title: str = ""
    options: dict = field(default_factory=dict)


def _save(fig, recipe):
    metadata = {"Date": None} if recipe.output.endswith(".svg") else {}
    fig.savefig(recipe.output, dpi=recipe.dpi, metadata=metadata)
    plt.close(fig)
    return recipe.output


def _stability_segments(j, dw, stable):
    """Split a family curve into maximal runs of constant stability."""
    runs = []
    start = 0
    for k in range(1, len(j) + 1):
        if k == len(j) or stable[k] != stable[start]:
            runs.append((slice(max(0, start - 1) if start else 0, k), stable[start]))
            start = k
    return runs


def render_families(recipe):
    fig, ax = plt.subplots(figsize=(7, 5))
    for path in recipe.inputs:
        tab = read_csv(path, FAMILY_COLUMNS)
        j = tab.floats("J_p_deg")
        dw = tab.floats("dw_deg")
        stable = tab.floats("stable") > 0.5
        for sl, is_stable in _stability_segments(j, dw, stable):
            ax.plot(
                dw[sl],
                j[sl],
                color="tab:blue" if is_stable else "tab:red",
                linestyle="-" if is_stable else "--",
                linewidth=1.6,
            )
    ax.plot([], [], color="tab:blue", label="elliptic")
    ax.plot([], [], color="tab:red", linestyle="--", label="unstable")
    ax.set_xlabel("w1 - w2 at the section [deg]")
    ax.set_ylabel("J_p [deg]")
    ax.set_title(recipe.title or "inclined co-orbital family")
    ax.legend(loc="best")
    ax.grid(alpha=0.3)
    return _save(fig, recipe)


def render_traj_coords(recipe):
    tab = read_csv(recipe.inputs[0], TRAJ_COLUMNS)
    t = tab.floats("t")
    fig, axes = plt.subplots(3, 2, figsize=(10, 8), sharex=True)
    panels = [
        ("r1", "r2", "heliocentric distance"),
        ("R1", "R2", "radial momentum"),
        ("G1", "G2", "angular momentum"),
        ("H", None, "energy"),
        ("J", None, "mutual inclination [rad]"),
        ("Omega", None, "node longitude [rad]"),
    ]
    for ax, (a, b, label) in zip(axes.ravel(), panels):
        ax.plot(t, tab.floats(a), linewidth=1.0, label=a)
        if b is not None:
            ax.plot(t, tab.floats(b), linewidth=1.0, linestyle="--", label=b)
            ax.legend(fontsize=8)
        ax.set_ylabel(label, fontsize=9)
        ax.grid(alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("t [periods]")
    fig.suptitle(recipe.title or "coordinates along one orbit")
    fig.tight_layout()
    return _save(fig, recipe)


def render_eig_loci(recipe):
    tab = read_csv(recipe.inputs[0], EIG_COLUMNS)
    j = tab.floats("J_p_deg")
    w = 0.5 + 2.0 * (j - j.min()) / max(float(np.ptp(j)), 1e-12)
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    th = np.linspace(0, 2 * np.pi, 512)
    ax.plot(np.cos(th), np.sin(th), color="0.7", linewidth=0.8)
    cmap = plt.get_cmap("tab10")
    for k in range(1, 9):
        re = tab.floats(f"re_l{k}")
        im = tab.floats(f"im_l{k}")
        for i in range(len(re) - 1):
            ax.plot(re[i:i + 2], im[i:i + 2], color=cmap((k - 1) % 10),
                    linewidth=w[i], solid_capstyle="round")
    ax.set_aspect("equal")
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title(recipe.title or "monodromy eigenvalue loci (width grows with J)")
    return _save(fig, recipe)


_MAP_CMAP = LinearSegmentedColormap.from_list(
    "maxecc", [(0.00, "#08306b"), (0.05, "#2171b5"), (0.051, "#ffffb2"),
               (0.30, "#fd8d3c"), (1.00, "#7f0000")]
)


def render_map(recipe):
    tab = read_csv(recipe.inputs[0], MAP_COLUMNS)
    x = tab.floats("axis1")
    y = tab.floats("axis2")
    ecc = tab.floats("max_ecc")
    outcome = tab.strings("outcome")
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((ys.size, xs.size), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for k in range(len(tab)):
        if outcome[k] == "bounded":
            grid[yi[y[k]], xi[x[k]]] = min(ecc[k], 1.0)
    fig, ax = plt.subplots(figsize=(8, 5.5))
    mesh = ax.pcolormesh(xs, ys, grid, cmap=_MAP_CMAP, vmin=0.0, vmax=1.0,
                         shading="nearest")
    mesh.cmap.set_bad("white")
    fig.colorbar(mesh, ax=ax, label="max eccentricity (white: escape/collision)")
    if len(recipe.inputs) > 1:  # optional family overlay
        fam = read_csv(recipe.inputs[1], FAMILY_COLUMNS)
        ax.plot(fam.floats("dw_deg"), fam.floats("J_p_deg"), color="#00c000",
                linewidth=1.8)
    ax.set_xlabel("lambda1 - lambda2 [deg]")
    ax.set_ylabel("J0 [deg]")
    ax.set_title(recipe.title or "co-orbital stability map")
    return _save(fig, recipe)


def render_chimney(recipe):
    tab = read_csv(recipe.inputs[0], CHIMNEY_COLUMNS)
    eps = tab.floats("eps")
    j = tab.floats("J_deg")
    stable = tab.floats("stable") > 0.5
    es = np.unique(eps)
    js = np.unique(j)
    grid = np.zeros((es.size, js.size))
    ei = {v: i for i, v in enumerate(es)}
    ji = {v: i for i, v in enumerate(js)}
    for k in range(len(tab)):
        grid[ei[eps[k]], ji[j[k]]] = 1.0 if stable[k] else 0.0
    fig, ax = plt.subplots(figsize=(7.5, 5.5))
    ax.pcolormesh(js, es, 1.0 - grid, cmap="gray", vmin=0, vmax=1, shading="nearest")
    if len(recipe.inputs) > 1:
        trans = read_csv(recipe.inputs[1], TRANSITION_COLUMNS)
        te = trans.floats("eps")
        lo = trans.floats("J_lower_deg")
        hi = trans.floats("J_upper_deg")
        interior = lo > 0.0
        ax.plot(lo[interior], te[interior], color="#00a000", marker="o",
                linestyle="-", markersize=3, label="lower boundary")
        ax.plot(hi, te, color="#d00000", marker="o", linestyle="-",
                markersize=3, label="upper boundary")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("J_p [deg]")
    ax.set_ylabel("planet mass eps")
    ax.set_title(recipe.title or "family stability in the (J, eps) plane "
                                 "(black: elliptic)")
    return _save(fig, recipe)


def render_slab3d(recipe):
    fig = plt.figure(figsize=(8, 6.5))
    ax = fig.add_subplot(projection="3d")
    labels = recipe.options.get("labels")
    for n, path in enumerate(recipe.inputs):
        tab = read_csv(path, MAP_COLUMNS)
        j = tab.floats("axis1")
        off = tab.floats("axis2")
        ecc = tab.floats("max_ecc")
        outcome = tab.strings("outcome")
        blue = np.array([o == "bounded" for o in outcome]) & (ecc < 0.05)
        z = float(labels[n]) if labels else float(n)
        ax.scatter(j[blue], off[blue], np.full(blue.sum(), z), s=4,
                   color="tab:blue", depthshade=False)
    ax.set_xlabel("J_p [deg]")
    ax.set_ylabel("w2 offset [deg]")
    ax.set_zlabel("eps" if labels else "layer")
    ax.set_title(recipe.title or "long-term-stable slabs around the family")
    return _save(fig, recipe)


def render_avg_vs_full(recipe):
    tab = read_csv(recipe.inputs[0], COMPARE_COLUMNS)
    eps = tab.floats("eps")
    j = tab.floats("J_deg")
    r = tab.floats("ratio")
    fig, ax = plt.subplots(figsize=(7, 5))
    for e in np.unique(eps):
        sel = eps == e
        ax.plot(j[sel], r[sel], marker=".", linewidth=1.2, label=f"eps = {e:g}")
    ax.set_xlabel("J [deg]")
    ax.set_ylabel("(dw - dw_avg) / (dw_avg - pi) / eps")
    ax.set_title(recipe.title or "full-problem vs averaged anomaly difference")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, recipe)


def render_unequal(recipe):
    if len(recipe.inputs) < 2:
        raise SchemaError("unequal figure needs a reference family CSV plus "
                          "at least one comparison CSV")
    ref = read_csv(recipe.inputs[0], FAMILY_COLUMNS)
    jr = ref.floats("J_p_deg")
    dr = ref.floats("dw_deg")
    fig, ax = plt.subplots(figsize=(7, 5))
    labels = recipe.options.get("labels")
    for n, path in enumerate(recipe.inputs[1:]):
        tab = read_csv(path, FAMILY_COLUMNS)
        j = tab.floats("J_p_deg")
        dw = tab.floats("dw_deg")
        common = sorted(set(np.round(jr, 9)) & set(np.round(j, 9)))
        if not common:
            raise SchemaError(f"{path}: no J values shared with the reference CSV")
        rr = {round(v, 9): w for v, w in zip(jr, dr)}
        cc = {round(v, 9): w for v, w in zip(j, dw)}
        diff = [cc[v] - rr[v] for v in common]
        name = labels[n] if labels else path
        ax.plot(common, diff, marker=".", linewidth=1.2, label=name)
    ax.set_xlabel("J_p [deg]")
    ax.set_ylabel("dw - dw(reference) [deg]")
    ax.set_title(recipe.title or "family shift for unequal planet masses")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _save(fig, recipe)


_RENDERERS = {
    "families": render_families,
    "traj_coords": render_traj_coords,
    "eig_loci": render_eig_loci,
    "map": render_map,
    "chimney": render_chimney,
    "slab3d": render_slab3d,
    "avg_vs_full": render_avg_vs_full,
    "unequal": render_unequal,
}


def render(recipe):
    """Validate inputs and draw the requested figure; returns the output path."""
    if recipe.figure_id not in _RENDERERS:
        raise SchemaError(
            f"unknown figure id {recipe.figure_id!r}; expected one of {FIGURE_IDS}"
        )
    if not recipe.inputs:
        raise SchemaError("no input CSVs given")
    return _RENDERERS[recipe.figure_id](recipe)
