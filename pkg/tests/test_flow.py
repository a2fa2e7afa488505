import numpy as np
import pytest

from conftest import random_admissible_state
from coorbital.errors import CollisionError, DomainError
from coorbital.flow import (
    integrate_node_precession,
    propagate,
    propagate_variational,
    sample_states,
    symplectic_defect,
)
from coorbital.hill import (
    MassConfig,
    ReducedParameter,
    lagrange_equilibrium,
    lagrange_spectrum,
)


class TestPropagate:
    def test_equilibrium_returns_after_one_period(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        res = propagate(st, C, masses_1e3, 1.0)
        a0, a1 = st.as_array(), res.final_state.as_array()
        assert np.max(np.abs((a1 - a0)[[0, 2, 3, 4, 6, 7]])) < 1e-12
        # anomalies advance one full revolution
        assert a1[1] - a0[1] == pytest.approx(2 * np.pi, abs=1e-11)
        assert a1[5] - a0[5] == pytest.approx(2 * np.pi, abs=1e-11)
        assert res.max_energy_drift < 1e-11

    def test_forward_backward_roundtrip(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[3] *= 1.001  # knock off the equilibrium
        C = ReducedParameter(arr[3] + arr[7])
        fwd = propagate(arr, C, masses_1e3, 1.0)
        back = propagate(fwd.final_state, C, masses_1e3, -1.0)
        assert np.max(np.abs(back.final_state.as_array() - arr)) < 1e-11

    def test_decoupled_keplerian_limit(self):
        # planet masses so small that the coupling is below roundoff: each
        # body follows its circular two-body orbit (r constant, w linear)
        mc = MassConfig(1.0, 1e-13, 1e-13)
        st, C = lagrange_equilibrium(mc)
        arr = st.as_array()
        res = propagate(st, C, mc, 0.7)
        out = res.final_state.as_array()
        assert np.max(np.abs(out[[0, 4]] - arr[[0, 4]])) < 1e-11
        # mean motion of the two-body problem with mu = m0 + mj, here ~ 2 pi
        mu = 1.0 + 1e-13
        n = np.sqrt(mu / arr[0] ** 3)
        for idx in (1, 5):
            assert out[idx] - arr[idx] == pytest.approx(0.7 * n, abs=1e-9)

    def test_dense_samples(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        ts = np.linspace(0.2, 1.0, 5)
        res = propagate(st, C, masses_1e3, 1.0, dense_times=ts)
        assert len(res.dense_samples) == 5
        t_last, s_last = res.dense_samples[-1]
        assert t_last == 1.0
        assert np.max(np.abs(s_last.as_array() - res.final_state.as_array())) == 0.0

    def test_tolerance_domain(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        with pytest.raises(DomainError):
            propagate(st, C, masses_1e3, 1.0, tol=(1e-6, 1e-16))

    @pytest.mark.parametrize("guard", [None, 1e-5])
    def test_collision_guard_fires(self, masses_1e3, equilibrium_1e3, guard):
        # two bodies on one circular orbit, deep inside their mutual Hill
        # sphere: they free-fall together within a hundredth of a period
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[1] = 0.0085
        arr[5] = -0.0085
        arr[2] = arr[6] = 0.0
        with pytest.raises(CollisionError) as exc:
            propagate(arr, C, masses_1e3, 0.5, collision_guard=guard)
        assert exc.value.time is not None and 0 < exc.value.time < 0.05

    def test_energy_drift_over_ten_periods(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        res = propagate(st, C, masses_1e3, 10.0)
        assert res.max_energy_drift < 1e-11

    def test_tolerance_convergence_monotone(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[0] *= 1.0005  # nontrivial orbit
        ref = propagate(arr, C, masses_1e3, 1.0, tol=(1e-16, 1e-16)).final_state.as_array()
        errs = []
        for tol in (1e-9, 1e-11, 1e-13):
            out = propagate(arr, C, masses_1e3, 1.0, tol=(tol, tol)).final_state.as_array()
            errs.append(np.max(np.abs(out - ref)))
        assert errs[0] > errs[1] > errs[2]


class TestVariational:
    def test_zero_time_is_identity(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        var = propagate_variational(st, C, masses_1e3, 0.0)
        assert np.array_equal(var.transition_matrix, np.eye(8))
        assert np.array_equal(var.dC_column, np.zeros(8))

    def test_equilibrium_monodromy_matches_closed_form(self):
        for eps in (1e-4, 1e-3, 1e-2):
            mc = MassConfig.equal_pair(eps)
            st, C = lagrange_equilibrium(mc)
            var = propagate_variational(st, C, mc, 1.0)
            ev = np.linalg.eigvals(var.transition_matrix)
            spec = lagrange_spectrum(mc)
            for lam in spec.oscillatory:
                assert np.min(np.abs(ev - lam)) < 1e-8
            # unit multipliers split by the defective-eigenvalue sensitivity,
            # well below the stability threshold
            assert np.sort(np.abs(ev - 1.0))[3] < 1e-5

    def test_symplectic(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[0] *= 1.0003
        var = propagate_variational(arr, C, masses_1e3, 1.0)
        assert symplectic_defect(var.transition_matrix) < 1e-9
        assert abs(np.linalg.det(var.transition_matrix) - 1.0) < 1e-9

    def test_matches_finite_differences(self, masses_1e3):
        rng = np.random.default_rng(21)
        arr, C = random_admissible_state(rng)
        t = 0.1
        var = propagate_variational(arr, C, masses_1e3, t)
        M = var.transition_matrix
        scale = np.array([1e-7 * max(abs(v), 1e-4) for v in arr])
        for i in range(8):

            def flow(delta, i=i):
                q = arr.copy()
                q[i] += delta
                return propagate(q, C, masses_1e3, t).final_state.as_array()

            h = scale[i]
            col = (-flow(2 * h) + 8 * flow(h) - 8 * flow(-h) + flow(-2 * h)) / (12 * h)
            assert np.linalg.norm(col - M[:, i]) / np.linalg.norm(M[:, i]) < 1e-5

    def test_dC_column_matches_finite_differences(self, masses_1e3):
        rng = np.random.default_rng(22)
        arr, C = random_admissible_state(rng)
        t = 0.1
        var = propagate_variational(arr, C, masses_1e3, t)
        h = 1e-7 * C
        fu = propagate(arr, C + h, masses_1e3, t).final_state.as_array()
        fd = propagate(arr, C - h, masses_1e3, t).final_state.as_array()
        col = (fu - fd) / (2 * h)
        denom = np.maximum(np.abs(var.dC_column), 1.0)
        assert np.max(np.abs(col - var.dC_column) / denom) < 1e-5

    def test_composition(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[0] *= 1.0002
        full = propagate_variational(arr, C, masses_1e3, 0.8)
        first = propagate_variational(arr, C, masses_1e3, 0.3)
        second = propagate_variational(
            first.final_state, C, masses_1e3, 0.5
        )
        prod = second.transition_matrix @ first.transition_matrix
        assert np.max(np.abs(prod - full.transition_matrix)) < 1e-9


class TestNodePrecession:
    def test_equilibrium_average_zero(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        assert abs(integrate_node_precession(st, C, masses_1e3, 1.0)) < 1e-9

    def test_additivity(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        arr = st.as_array().copy()
        arr[3] *= 1.0001
        C2 = ReducedParameter(np.sqrt(arr[3] ** 2 + arr[7] ** 2 + 2 * arr[3] * arr[7] * np.cos(0.3)))
        whole = integrate_node_precession(arr, C2, masses_1e3, 1.0)
        half1 = integrate_node_precession(arr, C2, masses_1e3, 0.5)
        mid = propagate(arr, C2, masses_1e3, 0.5).final_state
        half2 = integrate_node_precession(mid, C2, masses_1e3, 0.5)
        assert whole == pytest.approx(half1 + half2, abs=1e-11)


class TestSampling:
    def test_sample_states_consistency(self, masses_1e3, equilibrium_1e3):
        st, C = equilibrium_1e3
        ts = np.array([0.25, 0.5, 1.0])
        samples = sample_states(st, C, masses_1e3, ts)
        direct = propagate(st, C, masses_1e3, 1.0).final_state.as_array()
        assert np.max(np.abs(samples[-1] - direct)) < 1e-12
