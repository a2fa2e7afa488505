import numpy as np
import pytest
import scipy.integrate

from conftest import random_admissible_state
from coorbital.errors import DomainError
from coorbital.hill import (
    GASCHEAU_EPS,
    HillState,
    MassConfig,
    ReducedParameter,
    cartesian_hamiltonian,
    cartesian_to_hill,
    hamiltonian,
    inclinations,
    lagrange_anomaly_coeffs,
    lagrange_anomaly_rate,
    lagrange_equilibrium,
    lagrange_spectrum,
    mutual_inclination,
    node_rate,
    to_cartesian,
    vector_field,
)
from coorbital.flow import integrate_node_precession, propagate


def state_with(G1, G2, C):
    return HillState(0.3, 0.4, 0.0, G1, 0.3, -0.4, 0.0, G2), C


class TestMassConfig:
    def test_derived_quantities(self):
        mc = MassConfig(0.998, 0.001, 0.001)
        assert mc.sigma == 1.0
        assert mc.pairwise == pytest.approx(0.998 * 0.002 + 1e-6)
        assert mc.eps == pytest.approx(0.002)
        assert mc.gascheau_ratio >= 0

    def test_positive_masses_required(self):
        with pytest.raises(DomainError):
            MassConfig(1.0, -1e-3, 1e-3)

    def test_gascheau_boundary_is_exact(self):
        mc = MassConfig.equal_pair(GASCHEAU_EPS)
        assert mc.gascheau_ratio == pytest.approx(1.0, abs=1e-14)


class TestMutualInclination:
    def test_coplanar_prograde(self):
        st, C = state_with(1.0, 1.0, 2.0)
        assert mutual_inclination(st, C) == 0.0

    def test_perpendicular(self):
        st, C = state_with(1.0, 1.0, np.sqrt(2.0))
        assert mutual_inclination(st, C) == pytest.approx(np.pi / 2, abs=1e-15)

    def test_generic_value(self):
        # direct evaluation of the closed form: cos J = (C^2 - 2)/2
        st, C = state_with(1.0, 1.0, 1.9)
        assert mutual_inclination(st, C) == pytest.approx(np.arccos(0.805), abs=1e-15)

    def test_inconsistent_raises(self):
        st, C = state_with(1.0, 1.0, 2.1)
        with pytest.raises(DomainError):
            mutual_inclination(st, C)

    def test_roundoff_clamped(self):
        st, C = state_with(1.0, 1.0, 2.0 * (1.0 + 2e-13))
        assert mutual_inclination(st, C) == 0.0


class TestHamiltonian:
    def test_constant_along_equilibrium_flow(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        res = propagate(st, C, masses_1e3, 1.0)
        assert res.max_energy_drift < 1e-12

    def test_planar_specialization(self, masses_1e3):
        # with C = G1 + G2 the Hamiltonian must equal its cos J = 1 form
        rng = np.random.default_rng(5)
        for _ in range(25):
            arr, _ = random_admissible_state(rng)
            C = arr[3] + arr[7]
            m0, m1, m2 = masses_1e3.as_tuple()
            r1, w1, R1, G1, r2, w2, R2, G2 = arr
            c1, s1, c2, s2 = np.cos(w1), np.sin(w1), np.cos(w2), np.sin(w2)
            kep = (
                (m0 + m1) / (2 * m0 * m1) * (R1**2 + G1**2 / r1**2)
                - m0 * m1 / r1
                + (m0 + m2) / (2 * m0 * m2) * (R2**2 + G2**2 / r2**2)
                - m0 * m2 / r2
            )
            pdot = (c1 * c2 + s1 * s2) * R1 * R2 + (s1 * s2 + c1 * c2) * G1 * G2 / (r1 * r2) \
                + (s1 * c2 - c1 * s2) * R1 * G2 / r2 + (c1 * s2 - s1 * c2) * G1 * R2 / r1
            d2 = r1**2 + r2**2 - 2 * r1 * r2 * np.cos(w1 - w2)
            planar = kep + pdot / m0 - m1 * m2 / np.sqrt(d2)
            assert hamiltonian(arr, C, masses_1e3) == pytest.approx(planar, rel=1e-13)

    def test_matches_cartesian_oracle(self, masses_1e3):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            arr, C = random_admissible_state(rng)
            cart = to_cartesian(arr, C)
            h_hill = hamiltonian(arr, C, masses_1e3)
            h_cart = cartesian_hamiltonian(cart, masses_1e3)
            assert h_hill == pytest.approx(h_cart, rel=1e-12)


class TestVectorField:
    def test_equilibrium_is_fixed_in_shape(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        d = vector_field(st, C, masses_1e3)
        assert np.max(np.abs(d[[0, 2, 3, 4, 6, 7]])) < 1e-12

    def test_equilibrium_anomaly_equation(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        for shift in (0.0, 0.4, 1.7):
            arr = st.as_array().copy()
            arr[1] += shift
            arr[5] += shift
            d = vector_field(arr, C, masses_1e3)
            for body, idx in ((1, 1), (2, 5)):
                expected = lagrange_anomaly_rate(arr[idx], body, masses_1e3)
                assert d[idx] == pytest.approx(expected, abs=1e-12)

    def test_energy_conservation_direction(self, masses_1e3):
        rng = np.random.default_rng(2)
        from coorbital.hill import gradient

        for _ in range(50):
            arr, C = random_admissible_state(rng)
            g = gradient(arr, C, masses_1e3)
            d = vector_field(arr, C, masses_1e3)
            scale = np.linalg.norm(g) * np.linalg.norm(d)
            assert abs(g @ d) / scale < 1e-11

    def test_matches_finite_differences(self, masses_1e3):
        rng = np.random.default_rng(4)
        count = 0
        while count < 20:
            arr, C = random_admissible_state(rng)
            J = mutual_inclination(arr, C)
            if not 0.2 < J < np.pi - 0.2:
                continue
            count += 1
            d = vector_field(arr, C, masses_1e3)
            pairing = [(0, 2, 1), (1, 3, 1), (2, 0, -1), (3, 1, -1),
                       (4, 6, 1), (5, 7, 1), (6, 4, -1), (7, 5, -1)]
            for out_i, grad_i, sign in pairing:
                # fourth-order stencil with scale-balanced steps keeps the
                # difference quotient above the Hamiltonian's roundoff floor
                h = 1e-5 * max(abs(arr[grad_i]), 0.03)

                def at(delta, i=grad_i):
                    q = arr.copy()
                    q[i] += delta
                    return hamiltonian(q, C, masses_1e3)

                fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h)
                assert d[out_i] == pytest.approx(sign * fd, rel=1e-6, abs=1e-11)


class TestToCartesian:
    def test_planar_has_no_vertical_component(self, masses_1e3):
        rng = np.random.default_rng(6)
        arr, _ = random_admissible_state(rng)
        C = arr[3] + arr[7]
        cart = to_cartesian(arr, C)
        assert np.max(np.abs(cart.positions[:, 2])) < 1e-14
        assert np.max(np.abs(cart.momenta[:, 2])) < 1e-14

    def test_construction_identities(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            arr, C = random_admissible_state(rng)
            cart = to_cartesian(arr, C, Omega1=rng.uniform(0, 2 * np.pi))
            for j, (ri, Ri, Gi) in enumerate(((arr[0], arr[2], arr[3]), (arr[4], arr[6], arr[7]))):
                assert np.linalg.norm(cart.positions[j]) == pytest.approx(ri, rel=1e-13)
                p2 = cart.momenta[j] @ cart.momenta[j]
                assert p2 == pytest.approx(Ri**2 + Gi**2 / ri**2, rel=1e-13)

    def test_total_angular_momentum_aligned(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            arr, C = random_admissible_state(rng)
            cart = to_cartesian(arr, C)
            L = np.cross(cart.positions[0], cart.momenta[0]) + np.cross(
                cart.positions[1], cart.momenta[1]
            )
            assert np.linalg.norm(L) == pytest.approx(C, rel=1e-12)
            assert abs(L[2] - np.linalg.norm(L)) < 1e-12 * C

    def test_equilateral_triangle(self):
        mc = MassConfig.equal_pair(1e-3)
        st, C = lagrange_equilibrium(mc)
        cart = to_cartesian(st, C)
        d01 = np.linalg.norm(cart.positions[0])
        d02 = np.linalg.norm(cart.positions[1])
        d12 = np.linalg.norm(cart.positions[0] - cart.positions[1])
        assert d01 == pytest.approx(d12, rel=1e-10)
        assert d02 == pytest.approx(d12, rel=1e-10)

    def test_roundtrip_through_cartesian(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            arr, C = random_admissible_state(rng)
            cart = to_cartesian(arr, C, Omega1=0.3)
            back, C2, Om = cartesian_to_hill(cart.positions, cart.momenta)
            barr = back.as_array()
            # angles match modulo 2 pi
            darr = barr - arr
            darr[1] = np.mod(darr[1] + np.pi, 2 * np.pi) - np.pi
            darr[5] = np.mod(darr[5] + np.pi, 2 * np.pi) - np.pi
            assert np.max(np.abs(darr)) < 1e-10
            assert C2 == pytest.approx(C, rel=1e-12)
            assert Om == pytest.approx(0.3, abs=1e-10)


class TestNodeRate:
    def test_equilibrium_average_vanishes(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        drift = integrate_node_precession(st, C, masses_1e3, 1.0)
        assert abs(drift) < 1e-10

    def test_linear_mass_scaling(self):
        # fixed orbital geometry, planet masses scaled together: the rate
        # must vanish linearly in (m1 + m2)
        rates = []
        scales = np.array([1.0, 0.5, 0.25, 0.125])
        for s in scales:
            mc = MassConfig(0.998, 0.0012 * s, 0.0008 * s)
            st, C = lagrange_equilibrium(mc)
            arr = st.as_array()
            # tilt the configuration so the node actually moves
            Jp = np.radians(30.0)
            C_t = np.sqrt(arr[3] ** 2 + arr[7] ** 2 + 2 * arr[3] * arr[7] * np.cos(Jp))
            rates.append(node_rate(arr, ReducedParameter(C_t), mc))
        rates = np.array(rates)
        ratio = rates / (scales * rates[0])
        assert np.max(np.abs(ratio - 1.0)) < 0.01


class TestLagrangeEquilibrium:
    def test_equal_mass_symmetry(self, masses_1e3):
        st, C = lagrange_equilibrium(masses_1e3)
        assert st.R1 == -st.R2
        assert st.G1 == st.G2
        assert st.w1 - st.w2 == pytest.approx(5 * np.pi / 3, abs=1e-15)

    def test_fixed_point_any_masses(self):
        for mc in (MassConfig(0.97, 0.02, 0.01), MassConfig(0.998, 0.0015, 0.0005)):
            st, C = lagrange_equilibrium(mc)
            d = vector_field(st, C, mc)
            assert np.max(np.abs(d[[0, 2, 3, 4, 6, 7]])) < 1e-12

    def test_angular_momentum_values(self):
        eps = 1e-3
        mc = MassConfig.equal_pair(eps)
        omega = 2 * np.pi
        st, C = lagrange_equilibrium(mc, omega)
        rho = (1.0 / omega**2) ** (1 / 3)
        expected = omega * rho**2 * eps * (2 - 3 * eps) / 2
        assert st.G1 == pytest.approx(expected, rel=1e-14)
        assert st.G2 == pytest.approx(expected, rel=1e-14)


class TestAnomalyCoeffs:
    def test_equal_masses_kill_b(self, masses_1e3):
        _, b, _ = lagrange_anomaly_coeffs(masses_1e3)
        assert b == 0.0

    def test_keplerian_limit(self):
        mc = MassConfig(1.0, 1e-9, 2e-9)
        a, b, c = lagrange_anomaly_coeffs(mc)
        assert a == pytest.approx(1.0, abs=1e-8)
        assert abs(b) < 1e-8
        assert abs(c) < 1e-7

    def test_identity(self):
        mc = MassConfig(0.998, 0.001, 0.001)
        a, b, c = lagrange_anomaly_coeffs(mc)
        assert abs(a * a - b * b - c * c - 1.0) < 1e-13

    def test_identity_on_mass_grid(self):
        for eps in np.geomspace(1e-6, 0.1, 9):
            mc = MassConfig.equal_pair(eps)
            a, b, c = lagrange_anomaly_coeffs(mc)
            assert abs(a * a - b * b - c * c - 1.0) < 1e-13
            mc = MassConfig(1.0, eps, 0.3 * eps)
            a, b, c = lagrange_anomaly_coeffs(mc)
            assert abs(a * a - b * b - c * c - 1.0) < 1e-13


class TestLagrangeSpectrum:
    def test_gascheau_boundary(self):
        mc = MassConfig.equal_pair(GASCHEAU_EPS)
        assert mc.gascheau_ratio == pytest.approx(1.0, abs=1e-13)
        spec = lagrange_spectrum(mc)
        assert spec.elliptic

    def test_multiplier_phases(self):
        # frozen from evaluating the closed form at eps = 1e-3
        mc = MassConfig.equal_pair(1e-3)
        spec = lagrange_spectrum(mc)
        phases = np.sort(np.abs(np.angle(spec.oscillatory))) / (2 * np.pi)
        # the fast pair (0.99314 revolutions) wraps to the smaller angle
        assert phases[0] == pytest.approx(1 - 0.99314, abs=5e-6)
        assert phases[1] == pytest.approx(1 - 0.99314, abs=5e-6)
        assert phases[2] == pytest.approx(0.11690, abs=5e-6)
        assert phases[3] == pytest.approx(0.11690, abs=5e-6)
        assert np.max(np.abs(np.abs(spec.oscillatory) - 1.0)) < 1e-14

    def test_unstable_above_threshold(self):
        mc = MassConfig.equal_pair(0.03)
        spec = lagrange_spectrum(mc)
        assert not spec.elliptic
        assert np.max(np.abs(np.abs(spec.oscillatory) - 1.0)) > 1e-3
        assert spec.unit_multiplicity == 4


class TestEquilibriumAnomalySolution:
    def test_propagated_w_matches_scalar_ode(self, masses_1e3, equilibrium_1e3):
        # the anomaly equation integrated on its own is an independent oracle
        st, C = equilibrium_1e3
        res = propagate(st, C, masses_1e3, 1.0)
        for body, idx in ((1, 1), (2, 5)):
            sol = scipy.integrate.solve_ivp(
                lambda t, w: lagrange_anomaly_rate(w[0], body, masses_1e3),
                (0.0, 1.0),
                [st.as_array()[idx]],
                rtol=1e-13,
                atol=1e-13,
                method="DOP853",
            )
            assert res.final_state.as_array()[idx] == pytest.approx(
                sol.y[0, -1], abs=1e-10
            )

    @pytest.mark.parametrize("eps", [1e-3, 1e-2])
    def test_second_order_closed_form(self, eps):
        # order-eps^2 solution from the anomaly equation at the section
        # phase (2 w0 + phi = pi):  w = w0 + om t - (c1/2 + c2/2) sin 2om t
        #   - (b2/2)(1 - cos 2om t) + (c1^2/8) sin 4om t + O(eps^3)
        mc = MassConfig.equal_pair(eps)
        st, C = lagrange_equilibrium(mc)
        om = 2 * np.pi
        m0 = mc.m0
        c1 = -(mc.m1 + mc.m2) / m0
        c2 = (3 * mc.m1**2 + 2 * mc.m1 * mc.m2 + 3 * mc.m2**2) / (4 * m0**2)
        b2 = np.sqrt(3.0) * (mc.m2**2 - mc.m1**2) / (4 * m0**2)
        ts = np.linspace(0.1, 1.0, 10)
        from coorbital.flow import sample_states

        states = sample_states(st, C, mc, ts)
        for k, t in enumerate(ts):
            th = 2 * om * t
            for idx, w0 in ((1, st.w1), (5, st.w2)):
                approx = (
                    w0
                    + om * t
                    - (c1 / 2) * np.sin(th)
                    - (c2 / 2) * np.sin(th)
                    - (b2 / 2) * (1 - np.cos(th))
                    + (c1**2 / 8) * np.sin(2 * th)
                )
                assert abs(states[k, idx] - approx) < 10 * eps**3


class TestInclinations:
    def test_sum_is_mutual_inclination(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            arr, C = random_admissible_state(rng)
            I1, I2 = inclinations(arr, C)
            J = mutual_inclination(arr, C)
            assert I1 + I2 == pytest.approx(J, abs=1e-12)
