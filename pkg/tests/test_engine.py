"""Backends and observables: exact evolution, state vectors, noisy densities."""

import math

import numpy as np
import pytest

from rksim.circuits import Circuit, Gate, synthesize_trotter
from rksim.engine import (ExactEvolver, NoiseModel, evolve_density, evolve_exact,
                          expect_correlation, expect_flippable,
                          orbit_correlation_values, orbit_flippable_values,
                          run_ideal, run_noisy, sampled_expectation,
                          state_fidelity, trotter_error)
from rksim.lattice import (LadderGeometry, apply_ring_exchange,
                           build_reference_state, flippable_count,
                           reachable_states)
from rksim.pauli import decompose_hamiltonian
from rksim.reduction import build_effective_hamiltonian, flippable_mask

ZERO = NoiseModel(p1=0.0, p2=0.0, p_readout=0.0, shots=8192)


def basis_vector(dim, k):
    vec = np.zeros(dim)
    vec[k] = 1.0
    return vec


class TestExactEvolution:
    def test_time_zero_identity(self):
        eff = build_effective_hamiltonian(6)
        psi0 = basis_vector(eff.dim, 0)
        assert np.max(np.abs(evolve_exact(eff, psi0, 0.0) - psi0)) < 1e-12

    def test_norm_preserved(self):
        eff = build_effective_hamiltonian(8)
        evolver = ExactEvolver(eff)
        psi0 = basis_vector(eff.dim, 0)
        for t in np.linspace(0.0, 10.0, 11):
            assert np.linalg.norm(evolver.state(psi0, t)) == pytest.approx(1.0, abs=1e-10)

    def test_negative_time_rejected(self):
        eff = build_effective_hamiltonian(4)
        with pytest.raises(ValueError):
            evolve_exact(eff, basis_vector(eff.dim, 0), -1.0)

    def test_short_time_flippable_curvature(self):
        # <F>(t) = 6 - 12 t^2 + O(t^4) out of the all-flippable state
        eff = build_effective_hamiltonian(6)
        evolver = ExactEvolver(eff)
        values = orbit_flippable_values(eff.basis)
        psi0 = basis_vector(eff.dim, 0)

        def f(t):
            return float(values @ np.abs(evolver.state(psi0, t)) ** 2)

        h = 1e-3
        second = (f(h) - 2 * f(0.0) + f(h)) / h ** 2  # <F> is even in t
        assert second == pytest.approx(-24.0, abs=1e-3)
        # quartic remainder: (f(t) - 6 + 12 t^2) / t^4 is bounded
        r1 = (f(0.02) - 6 + 12 * 0.02 ** 2) / 0.02 ** 4
        r2 = (f(0.04) - 6 + 12 * 0.04 ** 2) / 0.04 ** 4
        assert r1 == pytest.approx(r2, rel=0.2)


class TestIdealBackend:
    def test_empty_circuit_returns_input(self):
        psi = np.array([0.6, 0.8j, 0.0, 0.0])
        out = run_ideal(Circuit(2, ()), psi)
        assert np.array_equal(out, psi)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            run_ideal(Circuit(2, ()), np.array([1.0, 0.0]))

    def test_step_then_inverse_restores_state(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(6))
        step = synthesize_trotter(decomposition, 0.2, 1, "scaled")
        inverse_gates = []
        for gate in reversed(step.gates):
            if gate.angle is None:
                inverse_gates.append(gate)
            else:
                inverse_gates.append(Gate(gate.kind, gate.qubits, -gate.angle))
        inverse = Circuit(step.qubits, tuple(inverse_gates))
        psi = run_ideal(inverse, run_ideal(step))
        expected = np.zeros(8, dtype=complex)
        expected[0] = 1.0
        assert np.max(np.abs(psi - expected)) < 1e-10

    def test_norm_preserved_through_long_circuit(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(8))
        circuit = synthesize_trotter(decomposition, 0.1, 20, "native")
        assert np.linalg.norm(run_ideal(circuit)) == pytest.approx(1.0, abs=1e-10)


class TestTrotterError:
    def test_error_shrinks_with_step(self):
        grid = np.arange(0.2, 10.01, 0.2)
        errors = [trotter_error(4, 1.0, dt, 10.0, grid=grid) for dt in (0.2, 0.1, 0.05)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 0.01

    def test_observable_error_scales_quadratically(self):
        # the dt-linear coefficient of the flippable-count error cancels for
        # this real Hamiltonian, so halving dt quarters the observable error
        # (the state error itself halves, i.e. the product formula is first
        # order; see the acceptance analysis)
        grid = np.arange(0.2, 10.01, 0.2)
        e2 = trotter_error(4, 1.0, 0.2, 10.0, grid=grid)
        e1 = trotter_error(4, 1.0, 0.1, 10.0, grid=grid)
        assert 3.0 < e2 / e1 < 4.5

    def test_state_error_scales_linearly(self):
        eff = build_effective_hamiltonian(4)
        decomposition = decompose_hamiltonian(eff)
        evolver = ExactEvolver(eff)
        psi0 = basis_vector(eff.dim, 0)

        def state_err(dt):
            step = synthesize_trotter(decomposition, dt, 1)
            psi = np.zeros(4, dtype=complex)
            psi[0] = 1.0
            worst = 0.0
            for k in range(1, int(round(10.0 / dt)) + 1):
                psi = run_ideal(step, psi)
                exact = evolver.state(psi0, k * dt)
                overlap = abs(np.vdot(exact, psi[:3]))
                worst = max(worst, math.sqrt(max(0.0, 2.0 - 2.0 * overlap)))
            return worst

        ratio = state_err(0.2) / state_err(0.1)
        assert 1.7 < ratio < 2.3

    def test_incommensurate_grid_rejected(self):
        with pytest.raises(ValueError):
            trotter_error(4, 1.0, 0.3, 1.0, grid=np.array([0.5]))

    def test_eight_plaquette_fine_step_scale(self):
        # measured ~0.33 over t <= 10 at dt = 0.1; pinned loosely as a
        # regression guard
        error = trotter_error(8, 1.0, 0.1, 10.0, grid=np.arange(0.2, 10.01, 0.2))
        assert error < 0.5


class TestNoisyBackend:
    def test_zero_noise_density_is_pure_ideal_state(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(4))
        circuit = synthesize_trotter(decomposition, 0.3, 2, "scaled")
        rho = evolve_density(circuit, ZERO)
        psi = run_ideal(circuit)
        assert np.max(np.abs(rho - np.outer(psi, psi.conj()))) < 1e-10

    def test_zero_noise_counts_match_ideal_distribution(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(6))
        circuit = synthesize_trotter(decomposition, 0.2, 3, "scaled")
        probs = np.abs(run_ideal(circuit)) ** 2
        counts = run_noisy(circuit, ZERO, rng=np.random.default_rng(5))
        shots = ZERO.shots
        for index, p in enumerate(probs):
            observed = counts.get(format(index, "03b"), 0)
            sigma = math.sqrt(max(p * (1 - p) * shots, 1.0))
            assert abs(observed - p * shots) < 5 * sigma

    def test_full_two_qubit_depolarization_is_uniform(self):
        circuit = Circuit(2, (Gate("H", (0,)), Gate("CNOT", (0, 1))))
        noise = NoiseModel(p1=0.0, p2=1.0, p_readout=0.0, shots=8192)
        counts = run_noisy(circuit, noise, rng=np.random.default_rng(6))
        for index in range(4):
            observed = counts.get(format(index, "02b"), 0)
            assert abs(observed - 2048) < 5 * math.sqrt(8192 * 0.25 * 0.75)

    def test_density_matrix_invariants_under_noise(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(6))
        circuit = synthesize_trotter(decomposition, 0.2, 2, "native")
        rho = evolve_density(circuit, NoiseModel())
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
        assert np.linalg.eigvalsh(rho).min() > -1e-9

    def test_partial_depolarization_oracle(self):
        # depolarize one qubit of a Bell pair: kraus-sum oracle
        from rksim.engine import _depolarize
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / math.sqrt(2)
        rho = np.outer(bell, bell.conj())
        p = 0.37
        got = _depolarize(rho, p, (1,), 2)
        paulis = [np.eye(2), np.array([[0, 1], [1, 0]]),
                  np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
        mixed = sum(np.kron(np.eye(2), s) @ rho @ np.kron(np.eye(2), s).conj().T
                    for s in paulis) / 4
        want = (1 - p) * rho + p * mixed
        assert np.max(np.abs(got - want)) < 1e-12

    def test_same_seed_same_counts(self):
        decomposition = decompose_hamiltonian(build_effective_hamiltonian(4))
        circuit = synthesize_trotter(decomposition, 0.3, 2, "scaled")
        noise = NoiseModel(shots=512)
        a = run_noisy(circuit, noise, rng=123)
        b = run_noisy(circuit, noise, rng=123)
        assert a == b

    def test_scaled_noise_never_exceeds_native(self):
        noise = NoiseModel()
        for theta in np.linspace(-6.0, 6.0, 25):
            assert noise.p2_scaled(float(theta)) <= noise.p2 + 1e-15

    def test_noise_model_validation(self):
        with pytest.raises(ValueError):
            NoiseModel(p2=1.5)
        with pytest.raises(ValueError):
            NoiseModel(shots=0)


class TestObservables:
    def test_flippable_at_start(self):
        eff = build_effective_hamiltonian(6)
        assert expect_flippable(basis_vector(eff.dim, 0), eff.basis) == 6.0

    def test_flippable_of_pure_families(self):
        eff = build_effective_hamiltonian(6)
        # basis order: 0, 1, 13, 14, 135
        assert expect_flippable(basis_vector(eff.dim, 3), eff.basis) == 2.0
        assert expect_flippable(basis_vector(eff.dim, 4), eff.basis) == 3.0

    def test_uniform_counts_average(self):
        eff = build_effective_hamiltonian(6)
        counts = {format(i, "03b"): 100 for i in range(5)}
        assert expect_flippable(counts, eff.basis) == pytest.approx((6 + 4 + 3 + 2 + 3) / 5)

    def test_leaked_bitstrings_discarded(self):
        eff = build_effective_hamiltonian(6)
        counts = {"000": 300, "111": 100}  # index 7 is outside the 5-state block
        mean, stderr, discard = sampled_expectation(
            counts, orbit_flippable_values(eff.basis))
        assert mean == 6.0
        assert stderr == 0.0
        assert discard == pytest.approx(0.25)

    def test_all_shots_discarded_raises(self):
        eff = build_effective_hamiltonian(6)
        with pytest.raises(ValueError):
            expect_flippable({"111": 64}, eff.basis)

    def test_correlation_of_initial_state_is_one(self):
        for n in (4, 6, 8):
            eff = build_effective_hamiltonian(n)
            for r in range(1, n // 2 + 1):
                assert expect_correlation(basis_vector(eff.dim, 0), eff.basis, n, r) == 1.0

    def test_single_flip_family_neighbor_correlation(self):
        eff = build_effective_hamiltonian(6)
        assert expect_correlation(basis_vector(eff.dim, 1), eff.basis, 6, 1) == pytest.approx(1 / 3)

    def test_opposite_flip_family_has_no_adjacent_flippables(self):
        eff = build_effective_hamiltonian(6)
        assert expect_correlation(basis_vector(eff.dim, 3), eff.basis, 6, 1) == 0.0

    def test_correlation_values_match_anchor_averaged_enumeration(self):
        # independent oracle: average the indicator product over all anchor
        # plaquettes instead of picking one
        for n in (5, 6, 8):
            eff = build_effective_hamiltonian(n)
            for r in range(1, n // 2 + 1):
                values = orbit_correlation_values(eff.basis, n, r)
                for a, orbit in enumerate(eff.basis):
                    total = 0
                    for member in orbit.members:
                        fm = flippable_mask(n, member)
                        for p in range(n):
                            total += bool(fm >> p & 1) * bool(fm >> ((p + r) % n) & 1)
                    assert values[a] == pytest.approx(total / (n * orbit.size), abs=1e-12)

    def test_correlation_distance_out_of_range(self):
        eff = build_effective_hamiltonian(6)
        with pytest.raises(ValueError):
            orbit_correlation_values(eff.basis, 6, 4)
        with pytest.raises(ValueError):
            orbit_correlation_values(eff.basis, 6, 0)


class TestDynamicsEquivalenceLargerLadders:
    @pytest.mark.parametrize("n", [9, 10])
    def test_reduced_equals_configuration_space(self, n):
        from rksim.reduction import config_space_hamiltonian, enumerate_configs
        eff = build_effective_hamiltonian(n)
        reduced = ExactEvolver(eff)
        psi_red = basis_vector(eff.dim, 0)
        f_red = orbit_flippable_values(eff.basis)

        configs = enumerate_configs(n)
        f_cfg = np.array([float(bin(flippable_mask(n, m)).count("1"))
                          for m in configs])
        full = ExactEvolver(config_space_hamiltonian(n).toarray())
        psi_cfg = basis_vector(len(configs), 0)
        for t in np.arange(0.5, 10.01, 0.5):
            a = float(f_red @ np.abs(reduced.state(psi_red, t)) ** 2)
            b = float(f_cfg @ np.abs(full.state(psi_cfg, t)) ** 2)
            assert a == pytest.approx(b, abs=1e-10)


class TestSpinLevelAgreement:
    def test_reduced_dynamics_equals_spin_level(self):
        """Spin-level evolution restricted to the reachable sector matches the
        reduced dynamics of the flippable count (four plaquettes)."""
        n = 4
        geometry = LadderGeometry(n)
        reference = build_reference_state(geometry)
        states = sorted(reachable_states(reference), key=lambda s: s.bits)
        index = {s: i for i, s in enumerate(states)}
        dim = len(states)
        h_spin = np.zeros((dim, dim))
        for i, state in enumerate(states):
            h_spin[i, i] = flippable_count(state)
            for p in range(1, n + 1):
                flipped = apply_ring_exchange(state, p)
                if flipped is not None:
                    h_spin[i, index[flipped]] += -1.0
        f_spin = np.array([flippable_count(s) for s in states], float)
        evolver_spin = ExactEvolver(h_spin)
        psi_spin0 = basis_vector(dim, index[reference])

        eff = build_effective_hamiltonian(n)
        evolver_red = ExactEvolver(eff)
        values = orbit_flippable_values(eff.basis)
        psi_red0 = basis_vector(eff.dim, 0)
        for t in np.linspace(0.0, 10.0, 21):
            spin = float(f_spin @ np.abs(evolver_spin.state(psi_spin0, t)) ** 2)
            red = float(values @ np.abs(evolver_red.state(psi_red0, t)) ** 2)
            assert spin == pytest.approx(red, abs=1e-10)


class TestFidelityHelpers:
    def test_state_fidelity_pure(self):
        psi = np.array([1.0, 1.0j]) / math.sqrt(2)
        rho = np.outer(psi, psi.conj())
        assert state_fidelity(rho, psi) == pytest.approx(1.0, abs=1e-12)
        orth = np.array([1.0, 1.0j * -1]) / math.sqrt(2)
        assert state_fidelity(rho, orth) == pytest.approx(0.0, abs=1e-12)
