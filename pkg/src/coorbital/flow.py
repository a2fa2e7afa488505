"""High-accuracy propagation of the reduced flow and its variational system.

The integrator is an adaptive Dormand-Prince 8(5,3) scheme with per-step
error control; default tolerances are abs = rel = 1e-16 (roundoff-limited).
Transition matrices are transported with the exact variational equations
Mdot = A(t) M, A being the analytic Jacobian of the vector field, augmented
with the inhomogeneous dPhi/dC column.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as _k
from .errors import CollisionError, DomainError, StepFailure
from .hill import HillState, _as_array

DEFAULT_TOL = (1e-16, 1e-16)

#: fraction of the initial heliocentric scale used as collision guard
COLLISION_GUARD_FRACTION = 1e-8

_MAX_STEPS = 50_000_000


@dataclass
class FlowResult:
    final_state: HillState
    steps: int
    max_energy_drift: float
    dense_samples: Optional[list] = None  # list of (t, HillState)


@dataclass
class VariationalResult:
    final_state: HillState
    transition_matrix: np.ndarray  # (8, 8)
    dC_column: np.ndarray  # (8,)
    steps: int
    max_energy_drift: float


def _check_tol(tol):
    atol, rtol = float(tol[0]), float(tol[1])
    for v in (atol, rtol):
        if not (1e-16 <= v <= 1e-8):
            raise DomainError("tolerance components must lie in [1e-16, 1e-8]")
    return atol, rtol


def _guard_for(arr, collision_guard):
    if collision_guard is not None:
        return float(collision_guard)
    scale = 0.5 * (arr[0] + arr[4])
    return COLLISION_GUARD_FRACTION * scale


def _raise_status(status, y, t):
    if status == _k.COLLISION:
        raise CollisionError("mutual distance fell below the collision guard", state=y[:8].copy(), time=t)
    if status == _k.STEP_UNDERFLOW:
        raise StepFailure(f"step size underflowed at t = {t!r}")
    if status == _k.MAX_STEPS_EXCEEDED:
        raise StepFailure(f"step budget exhausted at t = {t!r}")


def _drive_checked(mode, y0, C, masses, t0, t1, atol, rtol, guard, h_start=0.0):
    m0, m1, m2 = masses.as_tuple()
    status, y, t, nacc, drift, h_last = _k.drive(
        mode, y0, float(C), m0, m1, m2, t0, t1, rtol, atol, abs(t1 - t0) if t1 != t0 else 1.0,
        guard, h_start, _MAX_STEPS,
    )
    _raise_status(status, y, t)
    return y, nacc, drift, h_last


def propagate(x0, C, masses, t, tol=DEFAULT_TOL, dense_times=None, collision_guard=None):
    """Propagate a state for time t (t may be negative).

    dense_times, when given, must be a sorted array of intermediate times in
    [0, t]; the returned FlowResult then carries (time, state) samples taken
    at exactly those epochs.
    """
    atol, rtol = _check_tol(tol)
    arr = _as_array(x0)
    guard = _guard_for(arr, collision_guard)
    samples = None
    steps = 0
    drift = 0.0
    if dense_times is not None:
        samples = []
        tcur = 0.0
        y = arr.copy()
        h = 0.0
        for ts in dense_times:
            ts = float(ts)
            if ts != tcur:
                y, nacc, d, h = _drive_checked(0, y, C, masses, tcur, ts, atol, rtol, guard, h)
                steps += nacc
                drift = max(drift, d)
                tcur = ts
            samples.append((tcur, HillState.from_array(y)))
        if tcur != t:
            y, nacc, d, h = _drive_checked(0, y, C, masses, tcur, float(t), atol, rtol, guard, h)
            steps += nacc
            drift = max(drift, d)
        final = y
    else:
        final, steps, drift, _ = _drive_checked(0, arr, C, masses, 0.0, float(t), atol, rtol, guard)
    return FlowResult(HillState.from_array(final), steps, float(drift), samples)


def propagate_variational(x0, C, masses, t, tol=DEFAULT_TOL, collision_guard=None):
    """Propagate state, 8x8 transition matrix and the dPhi/dC column."""
    atol, rtol = _check_tol(tol)
    arr = _as_array(x0)
    guard = _guard_for(arr, collision_guard)
    y0 = np.zeros(80)
    y0[:8] = arr
    y0[8:72] = np.eye(8).ravel()
    y, steps, drift, _ = _drive_checked(2, y0, C, masses, 0.0, float(t), atol, rtol, guard)
    return VariationalResult(
        final_state=HillState.from_array(y[:8]),
        transition_matrix=y[8:72].reshape(8, 8).copy(),
        dC_column=y[72:80].copy(),
        steps=steps,
        max_energy_drift=float(drift),
    )


def integrate_node_precession(x0, C, masses, t, tol=DEFAULT_TOL, collision_guard=None):
    """Accumulated node longitude over [0, t]: integral of dH/dC along the flow."""
    atol, rtol = _check_tol(tol)
    arr = _as_array(x0)
    guard = _guard_for(arr, collision_guard)
    y0 = np.zeros(9)
    y0[:8] = arr
    y, _, _, _ = _drive_checked(1, y0, C, masses, 0.0, float(t), atol, rtol, guard)
    return float(y[8])


def sample_states(x0, C, masses, times, tol=DEFAULT_TOL, collision_guard=None):
    """States at the requested epochs (sorted, starting after 0) as an array."""
    atol, rtol = _check_tol(tol)
    arr = _as_array(x0)
    guard = _guard_for(arr, collision_guard)
    out = np.empty((len(times), 8))
    y = arr.copy()
    tcur = 0.0
    h = 0.0
    for i, ts in enumerate(times):
        if ts != tcur:
            y, _, _, h = _drive_checked(0, y, C, masses, tcur, float(ts), atol, rtol, guard, h)
            tcur = float(ts)
        out[i] = y
    return out


TRAJECTORY_HEADER = "t,r1,w1,R1,G1,r2,w2,R2,G2,H,J,Omega"


def write_trajectory_csv(path, x0, C, masses, times, tol=DEFAULT_TOL):
    """Dense-output dump along one trajectory, node longitude accumulated."""
    from .hill import hamiltonian, mutual_inclination

    atol, rtol = _check_tol(tol)
    arr = _as_array(x0)
    guard = _guard_for(arr, None)
    y = np.zeros(9)
    y[:8] = arr
    tcur = 0.0
    h = 0.0
    lines = [TRAJECTORY_HEADER]

    def emit(t, yy):
        vals = [t] + list(yy[:8]) + [
            hamiltonian(yy[:8], C, masses),
            mutual_inclination(yy[:8], C),
            yy[8],
        ]
        lines.append(",".join(format(float(v), ".17g") for v in vals))

    emit(0.0, y)
    for ts in times:
        ts = float(ts)
        if ts == tcur:
            continue
        y, _, _, h = _drive_checked(1, y, C, masses, tcur, ts, atol, rtol, guard, h)
        tcur = ts
        emit(tcur, y)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


CANONICAL_FORM = np.zeros((8, 8))
for _i, _j in ((0, 2), (1, 3), (4, 6), (5, 7)):
    CANONICAL_FORM[_i, _j] = 1.0
    CANONICAL_FORM[_j, _i] = -1.0


def symplectic_defect(M):
    """Max-norm of M^T Omega M - Omega for the canonical form on Hill pairs."""
    return float(np.max(np.abs(M.T @ CANONICAL_FORM @ M - CANONICAL_FORM)))
