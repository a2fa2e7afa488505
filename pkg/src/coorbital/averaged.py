"""Circular averaged co-orbital model: one-degree-of-freedom interaction
potential, fixed-point families, frequencies, and their degree-20 series.

The interaction function of the averaged problem is

    F1(zeta, s0) = (1 - s0^2) cos zeta - (1/pi) * integral_0^pi dz / sqrt(U)
    U(zeta, z, s0) = 2 - 2 cos zeta + 2 s0^2 (cos zeta - cos(zeta + 2 z))

with s0 = sin(J0/2).  Fixed points of the averaged flow satisfy
dF1/dzeta = 0; the equilateral branches (VFL) start at zeta = pi/3 and
5 pi/3, the collinear branch (VFE) is pinned at zeta = pi by symmetry, and
the branches meet at the junction inclination where the curvature of F1 at
pi changes sign.  Masses enter only through frequency prefactors.
"""

import importlib.resources
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.integrate
import scipy.optimize
import scipy.special
from numba import cfunc, types
from scipy import LowLevelCallable

from .errors import (
    BranchExhausted,
    DegenerateEquilibrium,
    DomainError,
    InterpolationError,
    NoConvergence,
    SingularIntegrand,
)

QUAD_EPS = 1e-13
ROOT_TOL = 1e-12

_sig = types.float64(types.intc, types.CPointer(types.float64))


@cfunc(_sig, cache=True)
def _u_inv_sqrt(n, xx):
    z, zeta, s2 = xx[0], xx[1], xx[2]
    u = 2.0 - 2.0 * np.cos(zeta) + 2.0 * s2 * (np.cos(zeta) - np.cos(zeta + 2.0 * z))
    return 1.0 / np.sqrt(u)


@cfunc(_sig, cache=True)
def _du_dzeta_kernel(n, xx):
    z, zeta, s2 = xx[0], xx[1], xx[2]
    u = 2.0 - 2.0 * np.cos(zeta) + 2.0 * s2 * (np.cos(zeta) - np.cos(zeta + 2.0 * z))
    du = 2.0 * np.sin(zeta) + 2.0 * s2 * (-np.sin(zeta) + np.sin(zeta + 2.0 * z))
    return du / u**1.5


@cfunc(_sig, cache=True)
def _d2u_dzeta2_kernel(n, xx):
    z, zeta, s2 = xx[0], xx[1], xx[2]
    u = 2.0 - 2.0 * np.cos(zeta) + 2.0 * s2 * (np.cos(zeta) - np.cos(zeta + 2.0 * z))
    du = 2.0 * np.sin(zeta) + 2.0 * s2 * (-np.sin(zeta) + np.sin(zeta + 2.0 * z))
    d2u = 2.0 * np.cos(zeta) + 2.0 * s2 * (-np.cos(zeta) + np.cos(zeta + 2.0 * z))
    return -1.5 * du * du / u**2.5 + d2u / u**1.5


@cfunc(_sig, cache=True)
def _du_ds0sq_kernel(n, xx):
    z, zeta, s2 = xx[0], xx[1], xx[2]
    u = 2.0 - 2.0 * np.cos(zeta) + 2.0 * s2 * (np.cos(zeta) - np.cos(zeta + 2.0 * z))
    du = 2.0 * (np.cos(zeta) - np.cos(zeta + 2.0 * z))
    return du / u**1.5


_LLC = {
    "inv": LowLevelCallable(_u_inv_sqrt.ctypes),
    "dz": LowLevelCallable(_du_dzeta_kernel.ctypes),
    "dzz": LowLevelCallable(_d2u_dzeta2_kernel.ctypes),
    "ds": LowLevelCallable(_du_ds0sq_kernel.ctypes),
}


def U(zeta1, zeta2, s0):
    """Squared-distance kernel of the averaged interaction (exact formula)."""
    return (
        2.0
        - 2.0 * np.cos(zeta1)
        + 2.0 * s0**2 * (np.cos(zeta1) - np.cos(zeta1 + 2.0 * zeta2))
    )


def U_factored(zeta1, zeta2, s0):
    """Equivalent rewriting 4 [p^2 (1 - s0^2) + s0^2 sin^2(zeta1/2 + zeta2)]."""
    p = np.sin(zeta1 / 2.0)
    return 4.0 * (p**2 * (1.0 - s0**2) + s0**2 * np.sin(zeta1 / 2.0 + zeta2) ** 2)


def _check_regular(zeta1, s0):
    if not 0.0 <= s0 < 1.0:
        raise DomainError("s0 must lie in [0, 1)")
    p2 = np.sin(zeta1 / 2.0) ** 2
    if p2 * (1.0 - s0**2) < 1e-28:
        raise SingularIntegrand(
            f"integrand singular near collision (zeta1 = {zeta1!r}, s0 = {s0!r})"
        )


def _quad(kind, zeta1, s0):
    with warnings.catch_warnings():
        # requesting 1e-13 runs the quadrature to the roundoff floor by design
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        val, err = scipy.integrate.quad(
            _LLC[kind],
            0.0,
            np.pi,
            args=(float(zeta1), float(s0) ** 2),
            epsabs=QUAD_EPS,
            epsrel=QUAD_EPS,
            limit=400,
        )
    return val


def F1_quadrature(zeta1, s0):
    """Interaction function by adaptive quadrature (abs error < 1e-12)."""
    _check_regular(zeta1, s0)
    return (1.0 - s0**2) * np.cos(zeta1) - _quad("inv", zeta1, s0) / np.pi


def elliptic_F(x, y):
    """Incomplete elliptic integral of the first kind, modulus convention.

    F(x, y) = integral_0^x dz / sqrt(1 - y^2 sin^2 z); odd in x, |y| <= 1
    (with |x| < pi/2 required at |y| = 1).
    """
    if abs(y) > 1.0:
        raise DomainError("elliptic modulus |y| must not exceed 1")
    if abs(y) == 1.0 and abs(x) >= np.pi / 2.0:
        raise DomainError("F(x, 1) diverges for |x| >= pi/2")
    return float(scipy.special.ellipkinc(x, y * y))


def F1_elliptic(zeta1, s0):
    """Interaction function through incomplete elliptic integrals."""
    _check_regular(zeta1, s0)
    p2 = np.sin(zeta1 / 2.0) ** 2
    u = p2 + s0**2 - p2 * s0**2
    m = s0**2 / u  # squared modulus, <= 1 since u - s0^2 = p^2 (1 - s0^2)
    term = (
        scipy.special.ellipkinc((zeta1 + np.pi) / 2.0, m)
        - scipy.special.ellipkinc((zeta1 - np.pi) / 2.0, m)
    ) / (2.0 * np.pi * np.sqrt(u))
    return (1.0 - s0**2) * np.cos(zeta1) - term


def d1F1(zeta1, s0):
    """dF1/dzeta by differentiation under the integral sign."""
    _check_regular(zeta1, s0)
    return -(1.0 - s0**2) * np.sin(zeta1) + _quad("dz", zeta1, s0) / (2.0 * np.pi)


def d2F1(zeta1, s0):
    """d2F1/dzeta2 by differentiation under the integral sign."""
    _check_regular(zeta1, s0)
    return -(1.0 - s0**2) * np.cos(zeta1) + _quad("dzz", zeta1, s0) / (2.0 * np.pi)


def dF1_ds0sq(zeta1, s0):
    """dF1/d(s0^2) at fixed zeta, by differentiation under the integral sign."""
    _check_regular(zeta1, s0)
    return -np.cos(zeta1) + _quad("ds", zeta1, s0) / (2.0 * np.pi)


# ---------------------------------------------------------------------------
# fixed-point families
# ---------------------------------------------------------------------------

VFL_FROM_L4 = "VFL_from_L4"
VFL_FROM_L5 = "VFL_from_L5"
VFE = "VFE"

#: fixed points closer to pi than this are the collinear root, not VFL
_PI_COLLAPSE = 1e-7

#: curvature threshold flagging the degenerate junction equilibrium
DEGENERACY_TOL = 1e-10


@dataclass
class AveragedPoint:
    """Fixed point of the averaged problem at given s0 = sin(J0/2)."""

    zeta0: float
    s0: float
    branch: str
    nu_tilde: float  # dimensionless libration frequency sqrt(3 |d2F1|)
    d2: float  # curvature d2F1 at the fixed point
    dF1_ds0sq: float  # precession kernel

    @property
    def J0(self):
        return 2.0 * np.arcsin(self.s0)

    @property
    def J0_deg(self):
        return float(np.degrees(self.J0))

    @property
    def elliptic(self):
        return self.d2 < 0.0


def _newton_zeta(seed, s0, tol=ROOT_TOL, maxiter=60):
    z = float(seed)
    for _ in range(maxiter):
        g = d1F1(z, s0)
        if abs(g) < tol:
            return z
        h = d2F1(z, s0)
        if h == 0.0:
            break
        step = -g / h
        if abs(step) > 0.5:
            step = np.sign(step) * 0.5
        z += step
    g = d1F1(z, s0)
    if abs(g) < tol:
        return z
    raise NoConvergence(f"fixed-point search failed at s0 = {s0!r}", residual_norm=abs(g))


def _point(zeta0, s0, branch):
    return AveragedPoint(
        zeta0=float(zeta0),
        s0=float(s0),
        branch=branch,
        nu_tilde=float(np.sqrt(3.0 * abs(d2F1(zeta0, s0)))),
        d2=float(d2F1(zeta0, s0)),
        dF1_ds0sq=float(dF1_ds0sq(zeta0, s0)),
    )


def solve_vfl(s0, seed=None, branch=VFL_FROM_L4):
    """Equilateral-branch fixed point at the given s0.

    The L4 branch lives in (0, pi), the L5 branch is its mirror 2 pi - zeta.
    Raises BranchExhausted when the root has collapsed onto the collinear
    line (s0 at or beyond the junction).
    """
    if branch == VFL_FROM_L5:
        inner = solve_vfl(s0, seed=None if seed is None else 2.0 * np.pi - seed)
        return AveragedPoint(
            zeta0=2.0 * np.pi - inner.zeta0,
            s0=inner.s0,
            branch=VFL_FROM_L5,
            nu_tilde=inner.nu_tilde,
            d2=inner.d2,
            dF1_ds0sq=inner.dF1_ds0sq,
        )
    if branch != VFL_FROM_L4:
        raise DomainError(f"unknown branch {branch!r}")
    if not 0.0 <= s0 < 1.0:
        raise DomainError("s0 must lie in [0, 1)")
    if s0 == 0.0:
        return _point(np.pi / 3.0, 0.0, VFL_FROM_L4)
    if seed is None:
        if s0 <= 0.55:
            seed = zeta_series(s0)
        else:
            # walk up from the series validity edge, reusing roots
            seed = _newton_zeta(zeta_series(0.55), 0.55)
            for sm in np.arange(0.58, s0, 0.03):
                seed = _newton_zeta(seed, float(sm))
    z = _newton_zeta(min(seed, np.pi - 1e-12), s0)
    if abs(z - np.pi) < _PI_COLLAPSE:
        raise BranchExhausted(f"no equilateral root distinct from pi at s0 = {s0!r}")
    if not 0.0 < z < np.pi:
        raise NoConvergence(f"root left the branch domain: zeta = {z!r}")
    return _point(z, s0, VFL_FROM_L4)


def solve_vfe(s0):
    """Collinear-branch fixed point: zeta0 = pi pinned by symmetry."""
    if not 0.0 <= s0 < 1.0:
        raise DomainError("s0 must lie in [0, 1)")
    g = d1F1(np.pi, s0)
    if abs(g) > 1e-12:
        raise NoConvergence(f"symmetry pin violated: d1F1(pi, s0) = {g!r}")
    return _point(np.pi, s0, VFE)


def junction_s0(bracket=(0.9, 0.99)):
    """s0 where the collinear curvature changes sign (families merge)."""
    lo, hi = bracket
    f = lambda s: d2F1(np.pi, s)
    return float(scipy.optimize.brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16))


def junction_inclination(bracket=(0.9, 0.99)):
    """Maximum mutual inclination of the equilateral family, radians."""
    return 2.0 * np.arcsin(junction_s0(bracket))


def vfl_branch(n=120, branch=VFL_FROM_L4, s0_max=None, junction_gap=1e-9):
    """Continue the equilateral branch from s0 = 0 up to the junction.

    Returns a list of AveragedPoint with s0 increasing; the last point sits
    junction_gap below the junction s0 (or at s0_max when that is smaller).
    """
    s0c = junction_s0()
    top = s0c - junction_gap if s0_max is None else min(s0_max, s0c - junction_gap)
    grid = np.concatenate(
        [
            np.linspace(0.0, 0.9 * top, int(0.8 * n), endpoint=False),
            top - (top - 0.9 * top) * np.linspace(1.0, 0.0, n - int(0.8 * n)) ** 2,
        ]
    )
    points = []
    seed = np.pi / 3.0
    for s0 in grid:
        pt = solve_vfl(float(s0), seed=seed)
        seed = pt.zeta0
        points.append(pt)
    if branch == VFL_FROM_L5:
        points = [
            AveragedPoint(
                zeta0=2.0 * np.pi - p.zeta0,
                s0=p.s0,
                branch=VFL_FROM_L5,
                nu_tilde=p.nu_tilde,
                d2=p.d2,
                dF1_ds0sq=p.dF1_ds0sq,
            )
            for p in points
        ]
    return points


# ---------------------------------------------------------------------------
# series approximations (exact rationals shipped as package data)
# ---------------------------------------------------------------------------


def _load_series():
    text = (
        importlib.resources.files("coorbital")
        .joinpath("data/series_coefficients.txt")
        .read_text()
    )
    tables = {"zeta": {}, "nu": {}, "fs": {}}
    section = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]")
            continue
        parts = line.split()
        if section in ("zeta", "nu"):
            tables[section][int(parts[0])] = Fraction(parts[1])
        elif section == "fs":
            tables[section][(int(parts[0]), int(parts[1]))] = Fraction(parts[2])
    return tables


_SERIES = _load_series()


def zeta_series(s0):
    """Degree-20 series of the L4-branch fixed point angle."""
    q = float(s0) ** 2
    acc = 0.0
    for k in sorted(_SERIES["zeta"], reverse=True):
        acc = acc * q + float(_SERIES["zeta"][k])
    return np.pi / 3.0 - np.sqrt(3.0) * acc * q


def nu_series(s0):
    """Degree-20 series of the dimensionless libration frequency nu_tilde."""
    q = float(s0) ** 2
    acc = 0.0
    for k in sorted(_SERIES["nu"], reverse=True):
        acc = acc * q + float(_SERIES["nu"][k])
    return np.sqrt(27.0 / 4.0) * acc


def Fs_series(s0, gamma):
    """Degree-20 series of the node-precession factor F_s(s0, gamma)."""
    q = float(s0) ** 2
    total = 0.0
    for (two_k, j), coef in sorted(_SERIES["fs"].items(), reverse=True):
        total += float(coef) * gamma**j * q ** (two_k // 2)
    return total


def series_table():
    """The raw rational coefficient tables (read-only view for tests)."""
    return _SERIES


# ---------------------------------------------------------------------------
# frequencies and node precession
# ---------------------------------------------------------------------------


def mass_gamma(masses):
    return masses.m1 * masses.m2 / (masses.m1 + masses.m2) ** 2


def libration_frequency(point, masses, n_star):
    """Libration frequency of the fixed point, rad / time.

    nu = n_star sqrt((m1 + m2)/m0) nu_tilde; raises DegenerateEquilibrium at
    the junction where the curvature vanishes.
    """
    if abs(point.d2) < DEGENERACY_TOL:
        raise DegenerateEquilibrium(f"curvature {point.d2!r} below {DEGENERACY_TOL}")
    return float(
        n_star * np.sqrt((masses.m1 + masses.m2) / masses.m0) * point.nu_tilde
    )


def node_precession_avg(point, masses, n_star):
    """Node precession rate of the averaged fixed point, rad / time."""
    gamma = mass_gamma(masses)
    root = np.sqrt(1.0 - 4.0 * point.s0**2 * gamma)
    return float(
        -n_star
        * (masses.m1 + masses.m2)
        / (2.0 * masses.m0)
        * root
        * point.dF1_ds0sq
    )


def node_precession_deg_per_period(point, masses):
    """Accumulated node drift over one orbital period, degrees."""
    # rate * (2 pi / n_star): the mean motion cancels
    gamma = mass_gamma(masses)
    root = np.sqrt(1.0 - 4.0 * point.s0**2 * gamma)
    rate = -(masses.m1 + masses.m2) / (2.0 * masses.m0) * root * point.dF1_ds0sq
    return float(np.degrees(rate * 2.0 * np.pi))


def node_precession_series_deg_per_period(s0, masses):
    """Series route to the per-period node drift, degrees."""
    gamma = mass_gamma(masses)
    root = np.sqrt(1.0 - 4.0 * s0**2 * gamma)
    rate = (masses.m1 + masses.m2) / masses.m0 * root * Fs_series(s0, gamma)
    return float(np.degrees(rate * 2.0 * np.pi))


# ---------------------------------------------------------------------------
# full-problem vs averaged comparison
# ---------------------------------------------------------------------------


def compare_full_vs_avg(branch, j_max_deg=145.0):
    """Normalized anomaly-difference gap between a full-problem branch and
    the averaged family.

    For each branch orbit with J_p <= j_max_deg the averaged fixed point is
    solved at s0 = sin(J/2) on the mirrored branch and the gap
    (dw - zeta_avg) is normalized by (zeta_avg - pi) and by the planet mass
    scale (m1 + m2)/(2 sigma).  Returns an array of rows (J_deg, ratio).
    """
    masses = branch.masses
    eps_norm = 0.5 * (masses.m1 + masses.m2) / masses.sigma
    s0c = junction_s0()
    rows = []
    seed = np.pi / 3.0
    for orbit in branch.orbits:
        jd = orbit.J_p_deg
        if jd > j_max_deg or jd <= 0.0:
            continue
        s0 = float(np.sin(orbit.J_p / 2.0))
        if s0 >= s0c:
            raise InterpolationError(
                f"orbit at J = {jd:.3f} deg lies beyond the averaged junction"
            )
        pt = solve_vfl(s0, seed=seed)
        seed = pt.zeta0
        zeta_avg = 2.0 * np.pi - pt.zeta0  # mirror: branch starts at 5 pi/3
        num = orbit.delta_w - zeta_avg
        den = zeta_avg - np.pi
        rows.append((jd, num / den / eps_norm))
    return np.array(rows)


AVERAGED_HEADER = "J0_deg,s0,zeta0_rad,branch,nu_tilde,dF1_ds0sq,prec_deg_per_period"


def write_averaged_csv(path, points, masses, with_series=False):
    """Averaged-family CSV per the file contract; optional series columns."""
    header = AVERAGED_HEADER
    if with_series:
        header += ",zeta0_series_rad,nu_tilde_series,prec_series_deg_per_period"
    lines = [header]
    for pt in points:
        prec = node_precession_deg_per_period(pt, masses)
        vals = [
            format(pt.J0_deg, ".17g"),
            format(pt.s0, ".17g"),
            format(pt.zeta0, ".17g"),
            pt.branch,
            format(pt.nu_tilde, ".17g"),
            format(pt.dF1_ds0sq, ".17g"),
            format(prec, ".17g"),
        ]
        if with_series:
            zs = zeta_series(pt.s0)
            if pt.branch == VFL_FROM_L5:
                zs = 2.0 * np.pi - zs
            elif pt.branch == VFE:
                zs = np.pi
            vals += [
                format(zs, ".17g"),
                format(nu_series(pt.s0), ".17g"),
                format(node_precession_series_deg_per_period(pt.s0, masses), ".17g"),
            ]
        lines.append(",".join(vals))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
