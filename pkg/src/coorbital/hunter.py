"""Periodic orbits of the reduced full problem as return-map fixed points.

An orbit is a root of the 10-component residual

    F(x, C) = (Phi_T(x) - x - winding, w1 + w2, cos J(x, C) - cos J_p)

over the 9 unknowns (x, C), with T = 1 fixed.  The anomalies advance by one
revolution per period, so the winding offset (0, 2 pi, 0, 0, 0, 2 pi, 0, 0)
is subtracted from the flow map.  Newton steps solve the 10x9 system in the
least-squares sense through column-pivoted QR.
"""

import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import (
    BracketInvalid,
    CollisionError,
    ContinuationStalled,
    DomainError,
    NoConvergence,
    RankDeficiency,
    StepFailure,
)
from .flow import DEFAULT_TOL, integrate_node_precession, propagate_variational
from .hill import (
    HillState,
    MassConfig,
    ReducedParameter,
    TWO_PI,
    _as_array,
    lagrange_equilibrium,
)

PERIOD = 1.0
NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50
RANK_TOL = 1e-10
STABILITY_TOL = 1e-6

#: anomaly advance of each body over one period
_WINDING = np.zeros(8)
_WINDING[1] = TWO_PI
_WINDING[5] = TWO_PI

#: continuation accepts a step only when Newton needs at most this many iterations
STEP_ACCEPT_ITERS = 10
#: ... except below this step size, where any converged orbit is accepted
#: (ill-conditioning near unit-circle multiplier clusters slows the rate
#: regardless of guess quality, e.g. for very small planet masses)
SLOW_ACCEPT_STEP_DEG = 0.25
MIN_STEP_DEG = 1e-3

#: near the branch junction continuation caps its step size
JUNCTION_DEG = 145.678
JUNCTION_WINDOW_DEG = 2.0
JUNCTION_STEP_DEG = 0.05


def _cos_j_raw(arr, C):
    G1, G2 = arr[3], arr[7]
    return (C * C - G1 * G1 - G2 * G2) / (2.0 * G1 * G2)


def residual(x, C, masses, J_p, tol=DEFAULT_TOL):
    """10-vector return-map residual at (x, C) for section inclination J_p."""
    arr = _as_array(x)
    var = propagate_variational(arr, C, masses, PERIOD, tol=tol)
    f = var.final_state.as_array() - arr - _WINDING
    s1 = arr[1] + arr[5]
    s2 = _cos_j_raw(arr, C) - np.cos(J_p)
    return np.concatenate([f, [s1, s2]])


def _residual_jacobian(arr, C, masses, J_p, tol):
    var = propagate_variational(arr, C, masses, PERIOD, tol=tol)
    F = np.empty(10)
    F[:8] = var.final_state.as_array() - arr - _WINDING
    F[8] = arr[1] + arr[5]
    cj = _cos_j_raw(arr, C)
    F[9] = cj - np.cos(J_p)
    J = np.zeros((10, 9))
    J[:8, :8] = var.transition_matrix - np.eye(8)
    J[:8, 8] = var.dC_column
    J[8, 1] = 1.0
    J[8, 5] = 1.0
    G1, G2 = arr[3], arr[7]
    J[9, 3] = -1.0 / G2 - cj / G1
    J[9, 7] = -1.0 / G1 - cj / G2
    J[9, 8] = C / (G1 * G2)
    return F, J, var.transition_matrix


def _lstsq_qr(J, F):
    """Least-squares Newton step via column-pivoted QR with rank guard.

    Columns are equilibrated by their norms first so the rank test measures
    conditioning rather than the disparate physical scales of the unknowns.
    A single negligible direction (the generic situation exactly at an
    eigenvalue-collision bifurcation along the family) is truncated instead
    of aborting; losing more than one direction raises RankDeficiency.
    """
    scale = np.linalg.norm(J, axis=0)
    scale[scale == 0.0] = 1.0
    Q, R, piv = scipy.linalg.qr(J / scale, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tiny = diag < RANK_TOL * diag[0] if diag[0] > 0.0 else np.ones_like(diag, bool)
    if tiny.sum() > 1:
        _, _, vt = np.linalg.svd(J / scale)
        raise RankDeficiency(
            "section Jacobian is rank deficient", direction=(vt[-1] / scale).copy()
        )
    rhs = Q.T @ (-F)
    sol = np.zeros(J.shape[1])
    if tiny.any():
        k = int(np.flatnonzero(tiny)[0])  # pivoting sorts |diag| descending
        sol[:k] = scipy.linalg.solve_triangular(R[:k, :k], rhs[:k])
    else:
        sol = scipy.linalg.solve_triangular(R, rhs)
    step = np.empty(J.shape[1])
    step[piv] = sol
    return step / scale


@dataclass
class PeriodicOrbit:
    """A converged member of the family (period fixed to 1)."""

    x0: HillState
    C: ReducedParameter
    masses: MassConfig
    J_p: float  # radians, mutual inclination at the section w1 + w2 = 0
    eigenvalues: np.ndarray  # 8 complex monodromy eigenvalues
    stable: bool
    margin: float  # max | |lambda| - 1 |
    precession_per_period: float  # degrees
    residual_norm: float
    newton_iterations: int
    T: float = PERIOD

    @property
    def delta_w(self):
        """Anomaly difference w1 - w2 at the section, radians in [0, 2 pi)."""
        return float(np.mod(self.x0.w1 - self.x0.w2, TWO_PI))

    @property
    def J_p_deg(self):
        return float(np.degrees(self.J_p))


def classify_stability(orbit):
    """(stable, margin): elliptic iff every multiplier sits on the unit circle
    to within 1e-6."""
    margin = float(np.max(np.abs(np.abs(orbit.eigenvalues) - 1.0)))
    return margin < STABILITY_TOL, margin


def solve_orbit(guess, masses, J_p, tol=NEWTON_TOL, maxiter=NEWTON_MAXITER, flow_tol=DEFAULT_TOL):
    """Newton-solve the return-map fixed point at section inclination J_p.

    guess is an (x, C) pair; returns a PeriodicOrbit.  After meeting the
    tolerance one extra polish step is taken and kept only if it lowers the
    residual further.  Raises NoConvergence after maxiter, RankDeficiency
    when the section Jacobian loses more than one direction.
    """
    state, C = guess
    arr = _as_array(state).copy()
    C = float(C)
    res_norm = np.inf
    best = None
    first_hit = None
    for it in range(maxiter + 2):
        try:
            F, J, M = _residual_jacobian(arr, C, masses, J_p, flow_tol)
        except (DomainError, CollisionError, StepFailure) as exc:
            raise NoConvergence(
                f"Newton iterate left the admissible domain: {exc}", iterations=it
            ) from exc
        res_norm = float(np.max(np.abs(F)))
        if best is None or res_norm < best[0]:
            best = (res_norm, arr.copy(), C, M)
        if res_norm < tol:
            if first_hit is None:
                first_hit = it
            if it > first_hit or res_norm < 1e-13:
                break
        elif it >= maxiter:
            raise NoConvergence(
                f"Newton did not reach {tol:g} in {maxiter} iterations "
                f"(residual {res_norm:.3e})",
                residual_norm=res_norm,
                iterations=maxiter,
            )
        step = _lstsq_qr(J, F)
        arr += step[:8]
        C += step[8]
    res_norm, arr, C, M = best
    eig = np.linalg.eigvals(M)
    margin = float(np.max(np.abs(np.abs(eig) - 1.0)))
    prec = np.degrees(integrate_node_precession(arr, C, masses, PERIOD, tol=flow_tol))
    return PeriodicOrbit(
        x0=HillState.from_array(arr),
        C=ReducedParameter(C),
        masses=masses,
        J_p=float(J_p),
        eigenvalues=eig,
        stable=margin < STABILITY_TOL,
        margin=margin,
        precession_per_period=float(prec),
        residual_norm=res_norm,
        newton_iterations=first_hit,
    )


def _predict_C(arr, J_p_new):
    G1, G2 = arr[3], arr[7]
    c2 = G1 * G1 + G2 * G2 + 2.0 * G1 * G2 * np.cos(J_p_new)
    return float(np.sqrt(c2))


def mirror_state(state):
    """Swap the two bodies: (w1, w2) -> (w2, w1) and likewise r, R, G."""
    a = _as_array(state)
    return HillState.from_array(np.concatenate([a[4:], a[:4]]))


def euler_equilibrium(masses, anomaly_rate=TWO_PI):
    """Collinear relative equilibrium with the star between the planets.

    The distances solve the planar central-configuration balance, and the
    rotation rate is adjusted so the chart anomalies advance at the given
    rate (2 pi for the unit-period orbit: unlike the equilateral case, the
    node gauge makes the anomaly rate differ from the physical rotation).
    Returns (HillState, ReducedParameter) at the section w1 + w2 = 0 with
    w1 - w2 = pi.
    """
    from .hill import gradient

    m0, m1, m2 = masses.as_tuple()
    sig = masses.sigma

    def build(r1, r2, om):
        b = (m2 * r2 - m1 * r1) / sig
        G1 = m1 * om * r1 * (r1 + b)
        G2 = m2 * om * r2 * (r2 - b)
        state = HillState(r1=r1, w1=np.pi / 2.0, R1=0.0, G1=G1,
                          r2=r2, w2=-np.pi / 2.0, R2=0.0, G2=G2)
        return state, ReducedParameter(G1 + G2)

    def equations(u):
        r1, r2, om = u
        b = (m2 * r2 - m1 * r1) / sig
        d = r1 + r2
        state, C = build(r1, r2, om)
        wdot = gradient(state, C, masses)[3]
        return [
            om**2 * (r1 + b) - m0 / r1**2 - m2 / d**2,
            om**2 * (r2 - b) - m0 / r2**2 - m1 / d**2,
            wdot - anomaly_rate,
        ]

    r_guess = ((m0 + 0.25 * (m1 + m2)) / anomaly_rate**2) ** (1.0 / 3.0)
    sol = scipy.optimize.fsolve(
        equations, [r_guess, r_guess, anomaly_rate], full_output=True, xtol=1e-14
    )
    (r1, r2, om), info, ok, msg = sol
    if ok != 1 or np.max(np.abs(info["fvec"])) > 1e-9:
        raise NoConvergence(f"collinear equilibrium solve failed: {msg}")
    return build(r1, r2, om)


def averaged_guess(masses, J_p_deg):
    """Circular co-orbital guess at the section, built from the averaged model.

    The anomaly difference comes from the averaged fixed point at
    s0 = sin(J/2) (trailing branch, 2 pi - zeta0); each body sits on its
    circular orbit with the common unit-period mean motion.  Accurate to
    O(planet mass), which keeps Newton on the main family even where side
    branches crowd within ~1e-4 of it.
    """
    from .averaged import solve_vfl

    J_p = np.radians(J_p_deg)
    s0 = float(np.sin(0.5 * J_p))
    zeta = solve_vfl(s0).zeta0
    dw = 2.0 * np.pi - zeta
    m0 = masses.m0
    vals = []
    for mj in (masses.m1, masses.m2):
        mu = m0 + mj
        beta = mj * m0 / (m0 + mj)
        a = (mu / TWO_PI**2) ** (1.0 / 3.0)
        vals.append((a, beta * np.sqrt(mu * a)))
    (a1, G1), (a2, G2) = vals
    state = HillState(r1=a1, w1=0.5 * dw, R1=0.0, G1=G1,
                      r2=a2, w2=-0.5 * dw, R2=0.0, G2=G2)
    return state, ReducedParameter(_predict_C(state.as_array(), J_p))


def origin_seed(origin, masses, omega=TWO_PI):
    """Seed (state, C) for a family origin tag: L4, L5, or Euler.

    L4 denotes the branch whose anomaly difference starts at 5 pi/3 (300 deg)
    at the section; L5 is its mirror image under body permutation, starting
    at pi/3.
    """
    if origin == "L4":
        return lagrange_equilibrium(masses, omega)
    if origin == "L5":
        st, C = lagrange_equilibrium(masses, omega)
        return mirror_state(st), C
    if origin == "Euler":
        return euler_equilibrium(masses, omega)
    raise DomainError(f"unknown origin {origin!r}; expected L4, L5 or Euler")


@dataclass
class FamilyBranch:
    origin: str
    masses: MassConfig
    orbits: List[PeriodicOrbit] = field(default_factory=list)
    schedule_deg: Optional[np.ndarray] = None
    failures: List[dict] = field(default_factory=list)

    @property
    def J_p_deg(self):
        return np.array([o.J_p_deg for o in self.orbits])

    def nearest(self, J_deg):
        idx = int(np.argmin(np.abs(self.J_p_deg - J_deg)))
        return self.orbits[idx]


def _step_cap(j_deg):
    if abs(j_deg - JUNCTION_DEG) <= JUNCTION_WINDOW_DEG:
        return JUNCTION_STEP_DEG
    return np.inf


def continue_family(
    origin,
    masses,
    j_schedule_deg,
    tol=NEWTON_TOL,
    flow_tol=DEFAULT_TOL,
    store_substeps=True,
    seed=None,
):
    """Continue the family along a strictly increasing J_p schedule (degrees).

    Each converged point seeds the next search; on Newton failure (or slow
    convergence) the step is halved down to a floor of 1e-3 degrees, after
    which ContinuationStalled is raised carrying the last good orbit.
    """
    schedule = np.atleast_1d(np.asarray(j_schedule_deg, dtype=float))
    if np.any(np.diff(schedule) <= 0):
        raise DomainError("J_p schedule must be strictly increasing")
    if seed is None:
        state, C = origin_seed(origin, masses)
        j_cur = 0.0
    else:
        state, C = seed.x0, seed.C
        j_cur = seed.J_p_deg
    arr = _as_array(state)
    branch = FamilyBranch(origin=origin, masses=masses, schedule_deg=schedule)

    orbit = solve_orbit((arr, _predict_C(arr, np.radians(j_cur))), masses, np.radians(j_cur),
                        tol=tol, flow_tol=flow_tol)
    branch.orbits.append(orbit)
    prev = (j_cur, orbit.x0.as_array())
    prev2 = None

    for target in schedule:
        if target <= j_cur:
            continue
        while j_cur < target:
            step = min(target - j_cur, _step_cap(j_cur))
            while True:
                j_try = min(j_cur + step, target)
                # secant predictor keeps the guess on the main branch through
                # the degenerate zones where side families interleave; only
                # mild extrapolation, and never into an inadmissible state
                guess_arr = prev[1].copy()
                if prev2 is not None and prev[0] > prev2[0]:
                    gap = prev[0] - prev2[0]
                    if (j_try - prev[0]) <= 3.0 * gap:
                        slope = (prev[1] - prev2[1]) / gap
                        cand = prev[1] + slope * (j_try - prev[0])
                        if cand[0] > 0 and cand[4] > 0 and cand[3] > 0 and cand[7] > 0:
                            guess_arr = cand
                guess_C = _predict_C(guess_arr, np.radians(j_try))
                try:
                    orbit = solve_orbit((guess_arr, guess_C), masses, np.radians(j_try),
                                        tol=tol, flow_tol=flow_tol)
                except (NoConvergence, RankDeficiency) as exc:
                    orbit = None
                    reason = repr(exc)
                if orbit is not None and (
                    orbit.newton_iterations <= STEP_ACCEPT_ITERS
                    or step <= SLOW_ACCEPT_STEP_DEG
                ):
                    break
                if orbit is not None:
                    reason = f"slow convergence ({orbit.newton_iterations} iterations)"
                branch.failures.append({"J_deg": j_try, "step_deg": step, "reason": reason})
                step *= 0.5
                if step < MIN_STEP_DEG:
                    raise ContinuationStalled(
                        f"continuation stalled at J_p = {j_cur:.6f} deg (step floor reached)",
                        last_orbit=branch.orbits[-1],
                        branch=branch,
                    )
            j_cur = j_try
            prev2 = prev
            prev = (j_cur, orbit.x0.as_array())
            if store_substeps or j_cur == target:
                branch.orbits.append(orbit)
    return branch


def match_eigenvalues(previous, current):
    """Reorder current eigenvalues by minimal-distance matching to previous.

    Greedy assignment over all pairs; ties broken by complex argument.  Used
    when writing family files so eigenvalue columns trace continuous loci.
    """
    prev = np.asarray(previous)
    cur = list(np.asarray(current))
    out = np.empty(prev.size, dtype=complex)
    taken = [False] * len(cur)
    order = []
    for i in range(prev.size):
        for k in range(len(cur)):
            if not taken[k]:
                order.append((abs(cur[k] - prev[i]), np.angle(cur[k]), i, k))
    order.sort(key=lambda q: (q[0], q[1]))
    filled = [False] * prev.size
    for _, _, i, k in order:
        if not filled[i] and not taken[k]:
            out[i] = cur[k]
            filled[i] = True
            taken[k] = True
    return out


def find_transition(
    masses,
    bracket_deg,
    origin="L4",
    tol_deg=1e-4,
    branch=None,
    tol=NEWTON_TOL,
    flow_tol=DEFAULT_TOL,
    log=None,
):
    """Bisection on J_p for the stable <-> unstable boundary, in degrees.

    Every probe is a full orbit solve; probes are seeded by walking from the
    nearest previously converged orbit.  The bracket endpoints must differ in
    stability.  Optional log collects one dict per probe (JSON-lines ready).
    """
    lo, hi = (float(v) for v in bracket_deg)
    if not lo < hi:
        raise BracketInvalid("bracket must satisfy J_lo < J_hi")

    cache = {}

    def orbit_at(j_deg):
        if j_deg in cache:
            return cache[j_deg]
        candidates = list(cache.values())
        if branch is not None:
            candidates.extend(branch.orbits)
        seed_orbit = None
        if candidates:
            below = [o for o in candidates if o.J_p_deg <= j_deg + 1e-12]
            pool = below if below else candidates
            seed_orbit = min(pool, key=lambda o: abs(o.J_p_deg - j_deg))
        if seed_orbit is not None and abs(seed_orbit.J_p_deg - j_deg) <= 2.5:
            guess_arr = seed_orbit.x0.as_array()
            orb = solve_orbit((guess_arr, _predict_C(guess_arr, np.radians(j_deg))),
                              masses, np.radians(j_deg), tol=tol, flow_tol=flow_tol)
        else:
            start = 0.0 if seed_orbit is None else seed_orbit.J_p_deg
            if start >= j_deg:  # only far-above candidates: walk from scratch
                seed_orbit, start = None, 0.0
            n = int(np.ceil(j_deg - start))
            sched = start + (j_deg - start) * np.arange(1, n + 1) / n
            b = continue_family(origin, masses, sched, tol=tol, flow_tol=flow_tol,
                                store_substeps=False, seed=seed_orbit)
            orb = b.orbits[-1]
        cache[j_deg] = orb
        if log is not None:
            log.append({"J_deg": j_deg, "stable": bool(orb.stable), "margin": orb.margin})
        return orb

    stable_lo = orbit_at(lo).stable
    stable_hi = orbit_at(hi).stable
    if stable_lo == stable_hi:
        raise BracketInvalid(
            f"no stability change in bracket [{lo}, {hi}] (both {'stable' if stable_lo else 'unstable'})"
        )
    while hi - lo > tol_deg:
        mid = 0.5 * (lo + hi)
        if orbit_at(mid).stable == stable_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# family CSV serialization
# ---------------------------------------------------------------------------

FAMILY_HEADER = (
    "J_p_deg,dw_deg,C,r1,w1,R1,G1,r2,w2,R2,G2,stable,margin,prec_deg_per_period,"
    + ",".join(f"re_l{k+1},im_l{k+1}" for k in range(8))
)


def _fmt(v):
    return format(float(v), ".17g")


def write_family_csv(path, branch, pair_eigenvalues=True):
    """One row per orbit, eigenvalue columns continuity-matched along the branch."""
    rows = []
    prev_eig = None
    for orbit in branch.orbits:
        eig = orbit.eigenvalues
        if pair_eigenvalues and prev_eig is not None:
            eig = match_eigenvalues(prev_eig, eig)
        prev_eig = eig
        a = orbit.x0.as_array()
        vals = (
            [orbit.J_p_deg, np.degrees(orbit.delta_w), float(orbit.C)]
            + [a[i] for i in range(8)]
            + [int(orbit.stable), orbit.margin, orbit.precession_per_period]
        )
        row = ",".join(_fmt(v) if not isinstance(v, int) else str(v) for v in vals)
        row += "," + ",".join(f"{_fmt(l.real)},{_fmt(l.imag)}" for l in eig)
        rows.append(row)
    with open(path, "w") as fh:
        fh.write(FAMILY_HEADER + "\n")
        fh.write("\n".join(rows) + "\n")


def write_bisection_log(path, records):
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def read_family_csv(path):
    """Parse a family CSV back into a list of row dicts (floats and ints)."""
    rows = []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals = line.split(",")
            row = {k: float(v) for k, v in zip(header, vals)}
            row["stable"] = bool(int(row["stable"]))
            row["state"] = np.array([row[k] for k in ("r1", "w1", "R1", "G1", "r2", "w2", "R2", "G2")])
            row["eigenvalues"] = np.array(
                [complex(row[f"re_l{k+1}"], row[f"im_l{k+1}"]) for k in range(8)]
            )
            rows.append(row)
    return rows


class _CsvSeed:
    """Minimal seed adapter so continuation can resume from a CSV row."""

    def __init__(self, row):
        self.x0 = HillState.from_array(row["state"])
        self.C = ReducedParameter(row["C"])
        self.J_p_deg = row["J_p_deg"]
