"""Batch stability scans of the full problem.

Three pipelines:

* max-eccentricity maps over a (lambda1 - lambda2, J0) grid of circular
  inclined initial conditions,
* the (J, eps) chimney, classifying family orbits per mass parameter,
* slabs parallel to the family where only w2 is offset.

Cells are independent work items executed on a process pool; results are
gathered and sorted by cell index so output is bit-identical regardless of
the worker count.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels as _k
from .errors import ContinuationStalled, DomainError, NoConvergence
from .hill import MassConfig, cartesian_to_hill, _rot_x, _rot_z
from .hunter import continue_family, find_transition

#: escape when osculating semi-major axes separate by this fraction of their mean
SEP_FRACTION = 0.2
#: escape when the heliocentric distance ratio leaves this window
RATIO_WINDOW = (0.5, 2.0)
#: collision when the mutual distance falls below this multiple of a_star
COLLISION_FRACTION = 1e-3

#: default per-cell integrator tolerance (map cells classify, they don't track)
MAP_TOL = (1e-12, 1e-12)

OUTCOME_NAMES = {_k.BOUNDED: "bounded", _k.ESCAPED: "escaped", _k.COLLIDED: "collided"}


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    count: int

    def values(self):
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class GridSpec:
    """Two scan axes plus the integration duration in orbital periods."""

    axis1: AxisSpec
    axis2: AxisSpec
    duration: float

    def __post_init__(self):
        if self.axis1.count < 2 or self.axis2.count < 2:
            raise DomainError("grid axes need at least 2 samples")
        if self.duration <= 0:
            raise DomainError("integration duration must be positive")


@dataclass
class MapCell:
    axis1: float
    axis2: float
    max_ecc: float
    outcome: str
    time_of_loss: Optional[float] = None  # in periods


def circular_coorbital_state(dlambda_deg, J0_deg, masses, a_star=1.0):
    """Hill state of the circular inclined grid configuration.

    Equal semi-major axes a_star, zero eccentricities, I1 = I2 = J0/2 with
    opposed nodes, lambda2 = 0 and lambda1 = dlambda.  Returns (state, C).
    """
    m0 = masses.m0
    I = np.radians(J0_deg) / 2.0
    lam = (np.radians(dlambda_deg), 0.0)
    Om = (0.0, np.pi)
    positions = np.empty((2, 3))
    momenta = np.empty((2, 3))
    for j, mj in enumerate((masses.m1, masses.m2)):
        beta = mj * m0 / (m0 + mj)
        mu = m0 + mj
        rot = _rot_z(Om[j]) @ _rot_x(I) @ _rot_z(lam[j] - Om[j])
        positions[j] = rot @ np.array([a_star, 0.0, 0.0])
        momenta[j] = rot @ np.array([0.0, beta * np.sqrt(mu / a_star), 0.0])
    state, C, _ = cartesian_to_hill(positions, momenta)
    return state, C


def orbital_period(masses, a_star=1.0):
    """2 pi / n_star with n_star the Keplerian mean motion about the primary."""
    return 2.0 * np.pi / np.sqrt(masses.m0 / a_star**3)


#: per-cell adaptive-step budget; exhaustion marks the cell non-regular
CELL_STEP_BUDGET = 20_000_000


def _scan_one(args):
    (idx, arr, C, m0, m1, m2, t_end, rtol, atol, coll_dist) = args
    outcome, max_ecc, t_loss = _k.scan_cell(
        arr, C, m0, m1, m2, t_end, rtol, atol,
        SEP_FRACTION, RATIO_WINDOW[0], RATIO_WINDOW[1], coll_dist, CELL_STEP_BUDGET,
    )
    return idx, int(outcome), float(max_ecc), float(t_loss)


def _run_cells(jobs, threads):
    if threads is None:
        threads = os.cpu_count() or 1
    results = {}
    if threads <= 1 or len(jobs) <= 1:
        for job in jobs:
            idx, outcome, ecc, t_loss = _scan_one(job)
            results[idx] = (outcome, ecc, t_loss)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for idx, outcome, ecc, t_loss in pool.map(
                _scan_one, jobs, chunksize=max(1, len(jobs) // (8 * threads))
            ):
                results[idx] = (outcome, ecc, t_loss)
    return results


def run_map(grid, masses, tol=MAP_TOL, a_star=1.0, threads=None, skip=0):
    """Max-eccentricity scan over a (dlambda, J0) grid, both in degrees.

    Per-cell failures become outcomes, never abort the scan.  Cells are
    ordered axis2-major (each axis2 row sweeps axis1); the first `skip`
    cells are omitted (resume support), so only the remainder is returned.
    """
    dlams = grid.axis1.values()
    j0s = grid.axis2.values()
    period = orbital_period(masses, a_star)
    t_end = grid.duration * period
    atol, rtol = tol
    jobs = []
    cells = []
    idx = 0
    for j0 in j0s:
        for dlam in dlams:
            if idx >= skip:
                state, C = circular_coorbital_state(dlam, j0, masses, a_star)
                jobs.append(
                    (idx, state.as_array(), float(C), masses.m0, masses.m1, masses.m2,
                     t_end, rtol, atol, COLLISION_FRACTION * a_star)
                )
                cells.append(
                    MapCell(axis1=float(dlam), axis2=float(j0), max_ecc=np.nan, outcome="")
                )
            idx += 1
    results = _run_cells(jobs, threads)
    for job, cell in zip(jobs, cells):
        outcome, ecc, t_loss = results[job[0]]
        cell.outcome = OUTCOME_NAMES[outcome]
        cell.max_ecc = ecc
        cell.time_of_loss = None if t_loss < 0 else t_loss / period
    return cells


def is_blue(cell, ecc_threshold=0.05):
    """Bounded with max eccentricity below the regular-motion threshold."""
    return cell.outcome == "bounded" and cell.max_ecc < ecc_threshold


# ---------------------------------------------------------------------------
# (J, eps) chimney
# ---------------------------------------------------------------------------


@dataclass
class ChimneyColumn:
    eps: float
    j_deg: np.ndarray
    stable: np.ndarray  # bool
    intervals: List[Tuple[float, float]] = field(default_factory=list)
    failure: Optional[str] = None


@dataclass
class ChimneyResult:
    columns: List[ChimneyColumn]

    def stable_intervals(self, eps):
        for col in self.columns:
            if np.isclose(col.eps, eps):
                return col.intervals
        raise KeyError(eps)


def _chimney_column(args):
    eps, j_grid, refine_tol = args
    masses = MassConfig.equal_pair(eps)
    col = ChimneyColumn(eps=eps, j_deg=j_grid, stable=np.zeros(j_grid.size, dtype=bool))
    try:
        branch = continue_family("L4", masses, j_grid[j_grid > 0], store_substeps=False)
    except (ContinuationStalled, NoConvergence) as exc:
        col.failure = repr(exc)
        return col
    by_j = {round(o.J_p_deg, 9): o for o in branch.orbits}
    for i, j in enumerate(j_grid):
        orb = by_j.get(round(j, 9))
        if orb is not None:
            col.stable[i] = orb.stable
    # contiguous stable runs, endpoints refined by bisection
    runs = []
    i = 0
    while i < j_grid.size:
        if col.stable[i]:
            k = i
            while k + 1 < j_grid.size and col.stable[k + 1]:
                k += 1
            runs.append((i, k))
            i = k + 1
        else:
            i += 1
    for (i, k) in runs:
        lo = j_grid[i]
        hi = j_grid[k]
        if i > 0:
            try:
                lo = find_transition(masses, (j_grid[i - 1], j_grid[i]),
                                     tol_deg=refine_tol, branch=branch)
            except Exception:
                pass
        if k < j_grid.size - 1:
            try:
                hi = find_transition(masses, (j_grid[k], j_grid[k + 1]),
                                     tol_deg=refine_tol, branch=branch)
            except Exception:
                pass
        col.intervals.append((float(lo), float(hi)))
    return col


def chimney_scan(j_max_deg, eps_values, j_step_deg=0.5, refine_tol_deg=1e-2, threads=None):
    """Classify the family over a (J, eps) grid; equal planet masses.

    Returns a ChimneyResult with one column per eps, each carrying the
    boolean stability sequence and refined stable intervals.
    """
    j_grid = np.round(np.arange(0.0, j_max_deg + 0.5 * j_step_deg, j_step_deg), 9)
    eps_values = list(eps_values)
    args = [(float(e), j_grid, refine_tol_deg) for e in eps_values]
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(args) <= 1:
        cols = [_chimney_column(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(args))) as pool:
            cols = list(pool.map(_chimney_column, args))
    return ChimneyResult(columns=cols)


# ---------------------------------------------------------------------------
# family-parallel slab
# ---------------------------------------------------------------------------


def family_slab_scan(
    eps,
    j_max_deg,
    w_offsets_deg,
    j_step_deg=1.0,
    duration=10_000.0,
    tol=MAP_TOL,
    threads=None,
    branch=None,
    skip=0,
):
    """Integrate family-parallel initial conditions: w2 offset along the branch.

    Returns MapCells with axis1 = J_p (deg) and axis2 = the w2 offset (deg);
    cells are ordered branch-orbit-major and the first `skip` are omitted.
    """
    masses = MassConfig.equal_pair(eps) if np.isscalar(eps) else eps
    if branch is None:
        sched = np.arange(j_step_deg, j_max_deg + 0.5 * j_step_deg, j_step_deg)
        branch = continue_family("L4", masses, sched, store_substeps=False)
    period = 1.0  # family orbits are normalized to unit period
    t_end = duration * period
    atol, rtol = tol
    offsets = np.atleast_1d(np.asarray(w_offsets_deg, dtype=float))
    jobs = []
    cells = []
    idx = 0
    for orbit in branch.orbits:
        base = orbit.x0.as_array()
        coll = COLLISION_FRACTION * 0.5 * (base[0] + base[4])
        for off in offsets:
            if idx >= skip:
                arr = base.copy()
                arr[5] += np.radians(off)
                jobs.append(
                    (idx, arr, float(orbit.C), masses.m0, masses.m1, masses.m2,
                     t_end, rtol, atol, coll)
                )
                cells.append(
                    MapCell(axis1=orbit.J_p_deg, axis2=float(off), max_ecc=np.nan, outcome="")
                )
            idx += 1
    results = _run_cells(jobs, threads)
    for job, cell in zip(jobs, cells):
        outcome, ecc, t_loss = results[job[0]]
        cell.outcome = OUTCOME_NAMES[outcome]
        cell.max_ecc = ecc
        cell.time_of_loss = None if t_loss < 0 else t_loss / period
    return cells


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

MAP_HEADER = "axis1,axis2,max_ecc,outcome,time_of_loss"
CHIMNEY_HEADER = "eps,J_deg,stable"
TRANSITION_HEADER = "eps,J_lower_deg,J_upper_deg"


def _fmt(v):
    return format(float(v), ".17g")


def write_map_csv(path, cells):
    lines = [MAP_HEADER]
    for c in cells:
        loss = "" if c.time_of_loss is None else _fmt(c.time_of_loss)
        lines.append(f"{_fmt(c.axis1)},{_fmt(c.axis2)},{_fmt(c.max_ecc)},{c.outcome},{loss}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_chimney_csv(path, result):
    lines = [CHIMNEY_HEADER]
    for col in result.columns:
        for j, s in zip(col.j_deg, col.stable):
            lines.append(f"{_fmt(col.eps)},{_fmt(j)},{int(s)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_transition_csv(path, result):
    lines = [TRANSITION_HEADER]
    for col in result.columns:
        for lo, hi in col.intervals:
            lines.append(f"{_fmt(col.eps)},{_fmt(lo)},{_fmt(hi)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
