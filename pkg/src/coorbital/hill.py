"""Node-reduced Hill-variable phase space of the planetary three-body problem.

Units fix G = 1 and, for the periodic-orbit work, total mass sigma = 1 with
orbit period T = 1 (mean motion omega = 2*pi, circle radius rho = (2*pi)**(-2/3)
from Kepler's third law).  Body 1's orbit plane is tilted by +I1 about the
node line and body 2's by -I2, so the ascending nodes stay opposed and the
mutual inclination is J = I1 + I2 with

    cos J = (C**2 - G1**2 - G2**2) / (2 G1 G2).

Both draconic anomalies w1, w2 are measured from a common origin placed a
quarter turn past the node azimuth (in-plane angle w_j + pi/2).  With this
origin the first-return section w1 + w2 = 0 selects the minimum of J along
the inclined family orbits.
"""

from dataclasses import dataclass

import numpy as np

from . import _generated_hill as _gen
from .errors import CollisionError, DomainError

TWO_PI = 2.0 * np.pi

#: clamping tolerance for |cos J| slightly above 1 (roundoff only)
COS_J_CLAMP_TOL = 1e-12

#: CSV column order for a serialized state (one row, plus C appended by callers)
STATE_COLUMNS = ("r1", "w1", "R1", "G1", "r2", "w2", "R2", "G2")


@dataclass(frozen=True)
class MassConfig:
    """The three masses, in units of the total mass."""

    m0: float
    m1: float
    m2: float

    def __post_init__(self):
        if self.m0 <= 0 or self.m1 <= 0 or self.m2 <= 0:
            raise DomainError("all three masses must be positive")

    @property
    def sigma(self):
        return self.m0 + self.m1 + self.m2

    @property
    def pairwise(self):
        """Sum of pairwise mass products m0*m1 + m0*m2 + m1*m2."""
        return self.m0 * self.m1 + self.m0 * self.m2 + self.m1 * self.m2

    @property
    def eps(self):
        """Planetary mass fraction (m1 + m2) / sigma."""
        return (self.m1 + self.m2) / self.sigma

    @property
    def gascheau_ratio(self):
        """27 p / sigma**2; the equilateral equilibrium is elliptic iff <= 1."""
        return 27.0 * self.pairwise / self.sigma**2

    @classmethod
    def equal_pair(cls, eps):
        """Triplet (1 - 2 eps, eps, eps): two equal planets, sigma = 1."""
        return cls(1.0 - 2.0 * eps, eps, eps)

    @classmethod
    def planet_pair(cls, m1, m2):
        """Two planet masses with the star filling up to sigma = 1."""
        return cls(1.0 - m1 - m2, m1, m2)

    def as_tuple(self):
        return (self.m0, self.m1, self.m2)


GASCHEAU_EPS = (3.0 - 2.0 * np.sqrt(2.0)) / 9.0


class ReducedParameter(float):
    """Total angular momentum modulus C carried as an exact parameter."""

    def __new__(cls, value):
        value = float(value)
        if not value > 0.0:
            raise DomainError("angular momentum parameter C must be positive")
        return super().__new__(cls, value)


@dataclass
class HillState:
    """One point of the reduced phase space (angles unwrapped radians)."""

    r1: float
    w1: float
    R1: float
    G1: float
    r2: float
    w2: float
    R2: float
    G2: float

    def __post_init__(self):
        if self.r1 <= 0 or self.r2 <= 0:
            raise DomainError("heliocentric distances must be positive")
        if self.G1 <= 0 or self.G2 <= 0:
            raise DomainError("orbital angular momenta must be positive")

    def as_array(self):
        return np.array(
            [self.r1, self.w1, self.R1, self.G1, self.r2, self.w2, self.R2, self.G2]
        )

    @classmethod
    def from_array(cls, arr):
        return cls(*(float(v) for v in arr))


def _as_array(state):
    return state.as_array() if isinstance(state, HillState) else np.asarray(state, dtype=float)


#: cosines this close to +-1 are snapped exactly (planar configurations
#: reconstructed from C = G1 + G2 land within a few ulp of 1)
_COS_SNAP = 1e-15


def _snap_cos(c):
    if c > 1.0 - _COS_SNAP:
        return 1.0
    if c < -1.0 + _COS_SNAP:
        return -1.0
    return c


def cos_mutual_inclination(state, C):
    arr = _as_array(state)
    G1, G2 = arr[3], arr[7]
    cj = (C * C - G1 * G1 - G2 * G2) / (2.0 * G1 * G2)
    if abs(cj) > 1.0 + COS_J_CLAMP_TOL:
        raise DomainError(
            f"inconsistent angular momentum parameter: |cos J| = {abs(cj):.17g} > 1"
        )
    return _snap_cos(min(1.0, max(-1.0, cj)))


def mutual_inclination(state, C):
    """Mutual inclination J in [0, pi] from the G's and the parameter C."""
    return float(np.arccos(cos_mutual_inclination(state, C)))


def _check_distance(state, C):
    arr = _as_array(state)
    cj = cos_mutual_inclination(arr, C)
    d2 = (
        arr[0] ** 2
        + arr[4] ** 2
        - 2.0 * arr[0] * arr[4] * (np.cos(arr[1]) * np.cos(arr[5]) + cj * np.sin(arr[1]) * np.sin(arr[5]))
    )
    if d2 <= 0.0:
        raise CollisionError("mutual-distance radicand is non-positive", state=arr)
    return arr


def hamiltonian(state, C, masses):
    """Reduced Hamiltonian; exact in eccentricity and inclination."""
    arr = _check_distance(state, C)
    return float(_gen.ham(*arr, C, *masses.as_tuple()))


def gradient(state, C, masses):
    """dH/dx in the state order (r1, w1, R1, G1, r2, w2, R2, G2)."""
    arr = _check_distance(state, C)
    out = np.empty(8)
    _gen.grad(out, *arr, C, *masses.as_tuple())
    return out


def vector_field(state, C, masses):
    """Canonical equations of motion, analytic partial derivatives."""
    g = gradient(state, C, masses)
    return np.array([g[2], g[3], -g[0], -g[1], g[6], g[7], -g[4], -g[5]])


def node_rate(state, C, masses):
    """Common node-longitude drift dOmega/dt = dH/dC.

    At J = 0 the node line is geometrically ill-defined; the value returned
    is still the finite partial derivative of H with respect to C.
    """
    arr = _check_distance(state, C)
    return float(_gen.dham_dc(*arr, C, *masses.as_tuple()))


@dataclass
class CartesianState:
    """Heliocentric positions and canonical (barycentric) momenta."""

    positions: np.ndarray  # (2, 3)
    momenta: np.ndarray  # (2, 3)
    Omega1: float
    Omega2: float
    I1: float
    I2: float

    @property
    def mutual_inclination(self):
        return self.I1 + self.I2


def _rot_z(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def inclinations(state, C):
    """Individual inclinations recovered from the reduction, both in [0, pi]."""
    arr = _as_array(state)
    cj = cos_mutual_inclination(arr, C)
    G1, G2 = arr[3], arr[7]
    ci1 = (G1 + G2 * cj) / C
    ci2 = (G2 + G1 * cj) / C
    for ci in (ci1, ci2):
        if abs(ci) > 1.0 + COS_J_CLAMP_TOL:
            raise DomainError("inconsistent C: |cos I| > 1")
    I1 = float(np.arccos(_snap_cos(min(1.0, max(-1.0, ci1)))))
    I2 = float(np.arccos(_snap_cos(min(1.0, max(-1.0, ci2)))))
    return I1, I2


def to_cartesian(state, C, Omega1=0.0):
    """Rebuild heliocentric positions and momenta from the reduced chart."""
    arr = _as_array(state)
    I1, I2 = inclinations(arr, C)
    M1 = _rot_z(Omega1) @ _rot_x(I1) @ _rot_z(arr[1] + 0.5 * np.pi)
    M2 = _rot_z(Omega1) @ _rot_x(-I2) @ _rot_z(arr[5] + 0.5 * np.pi)
    r1 = M1 @ np.array([arr[0], 0.0, 0.0])
    p1 = M1 @ np.array([arr[2], arr[3] / arr[0], 0.0])
    r2 = M2 @ np.array([arr[4], 0.0, 0.0])
    p2 = M2 @ np.array([arr[6], arr[7] / arr[4], 0.0])
    return CartesianState(
        positions=np.vstack([r1, r2]),
        momenta=np.vstack([p1, p2]),
        Omega1=float(Omega1),
        Omega2=float(Omega1 + np.pi),
        I1=I1,
        I2=I2,
    )


def cartesian_hamiltonian(cart, masses):
    """Direct evaluation of the heliocentric-canonical Hamiltonian."""
    m0, m1, m2 = masses.as_tuple()
    H = 0.0
    for (rv, pv, mj) in ((cart.positions[0], cart.momenta[0], m1), (cart.positions[1], cart.momenta[1], m2)):
        beta = mj * m0 / (m0 + mj)
        mu = m0 + mj
        H += pv @ pv / (2.0 * beta) - mu * beta / np.linalg.norm(rv)
    H += cart.momenta[0] @ cart.momenta[1] / m0
    H -= m1 * m2 / np.linalg.norm(cart.positions[0] - cart.positions[1])
    return float(H)


def cartesian_to_hill(positions, momenta):
    """Invert the chart: returns (HillState, C, Omega1).

    The invariant plane is taken perpendicular to the total angular momentum;
    w2 is measured from the same azimuth as w1 (the chart convention), both
    angles wrapped to (-pi, pi].
    """
    positions = np.asarray(positions, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    Ltot = np.cross(positions[0], momenta[0]) + np.cross(positions[1], momenta[1])
    C = float(np.linalg.norm(Ltot))
    zhat = Ltot / C
    h1 = np.cross(positions[0], momenta[0])
    n1 = np.cross(zhat, h1)
    norm_n1 = np.linalg.norm(n1)
    if norm_n1 < 1e-13 * np.linalg.norm(h1):
        # planar configuration: node azimuth is a free gauge, use x-axis of
        # an arbitrary in-plane frame
        trial = np.array([1.0, 0.0, 0.0])
        n1 = trial - (trial @ zhat) * zhat
        if np.linalg.norm(n1) < 1e-8:
            trial = np.array([0.0, 1.0, 0.0])
            n1 = trial - (trial @ zhat) * zhat
        norm_n1 = np.linalg.norm(n1)
    nhat = n1 / norm_n1
    Omega1 = float(np.arctan2(nhat[1], nhat[0]))

    vals = []
    for k in range(2):
        rv, pv = positions[k], momenta[k]
        r = float(np.linalg.norm(rv))
        hv = np.cross(rv, pv)
        G = float(np.linalg.norm(hv))
        R = float(rv @ pv / r)
        hhat = hv / G
        in_plane = float(np.arctan2(rv @ np.cross(hhat, nhat), rv @ nhat))
        w = float(np.mod(in_plane - 0.5 * np.pi + np.pi, 2.0 * np.pi) - np.pi)
        vals.append((r, w, R, G))
    (r1, w1, R1, G1), (r2, w2, R2, G2) = vals
    return HillState(r1, w1, R1, G1, r2, w2, R2, G2), ReducedParameter(C), Omega1


# ---------------------------------------------------------------------------
# Lagrange relative equilibrium
# ---------------------------------------------------------------------------


def kepler_radius(masses, omega):
    """Circle radius from omega**2 rho**3 = sigma (G = 1)."""
    return (masses.sigma / omega**2) ** (1.0 / 3.0)


def lagrange_equilibrium(masses, omega=TWO_PI):
    """Equilateral relative equilibrium, trailing convention w1 - w2 = 5 pi/3.

    Returns (HillState, ReducedParameter); the section w1 + w2 = 0 fixes the
    individual anomalies to (5 pi/6, -5 pi/6).  Planar: C = G1 + G2.
    """
    if omega <= 0:
        raise DomainError("mean motion must be positive")
    m0, m1, m2 = masses.as_tuple()
    sig = masses.sigma
    rho = kepler_radius(masses, omega)
    R1 = np.sqrt(3.0) * omega * rho * m1 * m2 / (2.0 * sig)
    G1 = omega * rho**2 * m1 * (2.0 * m0 + m2) / (2.0 * sig)
    G2 = omega * rho**2 * m2 * (2.0 * m0 + m1) / (2.0 * sig)
    state = HillState(
        r1=rho,
        w1=5.0 * np.pi / 6.0,
        R1=R1,
        G1=G1,
        r2=rho,
        w2=-5.0 * np.pi / 6.0,
        R2=-R1,
        G2=G2,
    )
    return state, ReducedParameter(G1 + G2)


def lagrange_anomaly_coeffs(masses):
    """Coefficients (a, b, c) of the equilibrium anomaly equation.

    The true anomalies on the equilateral equilibrium satisfy
        dw_j/dt = omega * (a + b sin(2 w_j + phi_j) + c cos(2 w_j + phi_j))
    with phase phi_j = (-1)**j * 2 pi/3 in this chart, and
    a**2 - b**2 - c**2 = 1.
    """
    m0, m1, m2 = masses.as_tuple()
    p = masses.pairwise
    p0 = m1 * m2
    s0 = m1 + m2
    d = m0 * (2.0 * m0 + m1) * (2.0 * m0 + m2) * (m0 + m1 + m2)
    a = (
        4.0 * m0**4
        + 6.0 * s0 * m0**3
        + (4.0 * s0**2 + p0) * m0**2
        + 5.0 * p0 * s0 * m0
        + 2.0 * p0**2
    ) / d
    b = -np.sqrt(3.0) * p * (m1 - m2) * m0 / d
    c = -p * (3.0 * s0 * m0 + 4.0 * m0**2 + 2.0 * p0) / d
    return float(a), float(b), float(c)


ANOMALY_PHASES = (-2.0 * np.pi / 3.0, 2.0 * np.pi / 3.0)


def lagrange_anomaly_rate(w, body, masses, omega=TWO_PI):
    """Right-hand side of the equilibrium anomaly equation for body 1 or 2."""
    a, b, c = lagrange_anomaly_coeffs(masses)
    phi = ANOMALY_PHASES[body - 1]
    return omega * (a + b * np.sin(2.0 * w + phi) + c * np.cos(2.0 * w + phi))


@dataclass(frozen=True)
class LagrangeSpectrum:
    """Closed-form Floquet multipliers of the equilateral relative equilibrium."""

    unit_multiplicity: int
    oscillatory: np.ndarray  # 4 complex multipliers
    elliptic: bool
    gascheau_ratio: float

    @property
    def all_multipliers(self):
        return np.concatenate([np.ones(self.unit_multiplicity, dtype=complex), self.oscillatory])


def lagrange_spectrum(masses, omega=TWO_PI):
    """Monodromy spectrum over one period T = 2 pi / omega.

    Multipliers exp(+-(i omega T/sqrt 2) sqrt(1 -+ sqrt(1 - 27 p/sigma**2)));
    below the Gascheau threshold all lie on the unit circle (elliptic).
    """
    g = masses.gascheau_ratio
    T = TWO_PI / omega
    disc = complex(1.0 - g) ** 0.5
    vals = []
    for branch in (-1.0, 1.0):
        expo = 1j * omega * T / np.sqrt(2.0) * (1.0 + branch * disc) ** 0.5
        vals.extend([np.exp(expo), np.exp(-expo)])
    osc = np.array(vals, dtype=complex)
    elliptic = g <= 1.0
    return LagrangeSpectrum(4, osc, elliptic, float(g))
