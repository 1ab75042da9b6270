"""Flip-configuration enumeration, orbits, and the reduced Hamiltonian."""

import math

import numpy as np
import pytest

from rksim.reduction import (build_effective_hamiltonian, build_reduction_report,
                             config_label, config_space_hamiltonian,
                             enumerate_configs, flippable_count_config,
                             num_qubits, orbit_decompose,
                             projection_matrix, rotate_config)

SQ2, SQ3, SQ6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)


def brute_force_configs(n):
    out = []
    for mask in range(1 << n):
        if all(not (mask >> p & 1 and mask >> ((p + 1) % n) & 1) for p in range(n)):
            out.append(mask)
    return out


def lucas(n):
    a, b = 2, 1  # L_0, L_1
    for _ in range(n):
        a, b = b, a + b
    return a


class TestEnumeration:
    @pytest.mark.parametrize("n", range(2, 13))
    def test_matches_brute_force_scan(self, n):
        assert enumerate_configs(n) == brute_force_configs(n)

    @pytest.mark.parametrize("n,count", [(4, 7), (6, 18), (8, 47)])
    def test_reported_cardinalities(self, n, count):
        assert len(enumerate_configs(n)) == count

    @pytest.mark.parametrize("n", range(3, 13))
    def test_counts_are_lucas_numbers(self, n):
        assert len(enumerate_configs(n)) == lucas(n)

    def test_two_plaquette_degenerate_cycle(self):
        assert enumerate_configs(2) == [0b00, 0b01, 0b10]

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            enumerate_configs(1)

    def test_ascending_order(self):
        configs = enumerate_configs(7)
        assert configs == sorted(configs)


class TestOrbits:
    @pytest.mark.parametrize("n,count", [(2, 2), (4, 3), (6, 5), (8, 8)])
    def test_orbit_counts(self, n, count):
        assert len(orbit_decompose(n)) == count

    @pytest.mark.parametrize("n", range(2, 15))
    def test_counts_match_necklace_formula(self, n):
        # Burnside: configurations fixed by rotation k form the independent
        # sets of a cycle of length gcd(k, n); a 1-cycle has only the empty set.
        total = 0
        for k in range(n):
            g = math.gcd(k, n)
            total += 1 if g == 1 else len(enumerate_configs(g))
        assert len(orbit_decompose(n)) * n == total

    @pytest.mark.parametrize("n", range(2, 13))
    def test_partition_and_divisibility(self, n):
        orbits = orbit_decompose(n)
        members = [m for o in orbits for m in o.members]
        assert sorted(members) == enumerate_configs(n)
        for orbit in orbits:
            assert n % orbit.size == 0
            assert orbit.canonical == min(orbit.members)
            assert {rotate_config(orbit.canonical, k, n) for k in range(n)} == set(orbit.members)
            assert all(flippable_count_config(n, m) == orbit.flippable
                       for m in orbit.members)

    def test_seventeen_plaquettes_fit_in_eight_qubits(self):
        orbits = orbit_decompose(17)
        assert 128 < len(orbits) <= 256
        assert num_qubits(len(orbits)) == 8

    @pytest.mark.parametrize("n", range(8, 21))
    def test_qubit_count_scaling_bound(self, n):
        assert num_qubits(len(orbit_decompose(n))) <= math.ceil(0.65 * n)

    def test_labels(self):
        labels = [config_label(o.canonical, 6) for o in orbit_decompose(6)]
        assert labels == ["0", "1", "13", "14", "135"]
        assert config_label(0b1000000001, 10) == "1,10"


class TestFlippableCountConfig:
    @pytest.mark.parametrize("mask,expected", [
        (0, 6),            # nothing flipped
        (0b000100, 4),     # plaquette 3 flipped
        (0b001001, 2),     # plaquettes 1 and 4 flipped
    ])
    def test_reported_examples(self, mask, expected):
        assert flippable_count_config(6, mask) == expected

    def test_invalid_configuration_rejected(self):
        with pytest.raises(ValueError):
            flippable_count_config(6, 0b000011)
        with pytest.raises(ValueError):
            flippable_count_config(6, 1 << 6)

    def test_two_plaquette_semantics(self):
        # flipping one plaquette of two leaves only the flipped one flippable
        assert flippable_count_config(2, 0b00) == 2
        assert flippable_count_config(2, 0b01) == 1
        assert flippable_count_config(2, 0b10) == 1


class TestEffectiveHamiltonian:
    @pytest.mark.parametrize("lam", [0.0, 0.7, 1.0])
    @pytest.mark.parametrize("j", [1.0, 2.5])
    def test_four_plaquette_matrix_exact(self, j, lam):
        expected = np.array([
            [4 * lam, -2 * j, 0.0],
            [-2 * j, 2 * lam, -SQ2 * j],
            [0.0, -SQ2 * j, 2 * lam],
        ])
        eff = build_effective_hamiltonian(4, j, lam)
        assert np.max(np.abs(eff.matrix - expected)) < 1e-12

    def test_six_plaquette_couplings(self):
        m = build_effective_hamiltonian(6).matrix
        assert m[0, 1] == pytest.approx(-SQ6, abs=1e-12)
        assert m[1, 2] == pytest.approx(-2.0, abs=1e-12)
        assert m[1, 3] == pytest.approx(-SQ2, abs=1e-12)
        # edge counting puts the sqrt(3) coupling on the |13>-type family
        assert m[2, 4] == pytest.approx(-SQ3, abs=1e-12)
        assert m[3, 4] == 0.0

    def test_six_plaquette_diagonal(self):
        lam = 0.6
        m = build_effective_hamiltonian(6, 1.0, lam).matrix
        assert np.allclose(np.diag(m), lam * np.array([6, 4, 3, 2, 3]), atol=1e-12)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_symmetric(self, n):
        m = build_effective_hamiltonian(n, 1.3, 0.4).matrix
        assert np.max(np.abs(m - m.T)) < 1e-12


class TestConfigSpaceOracle:
    def test_two_plaquette_diagonal(self):
        lam = 0.9
        h = config_space_hamiltonian(2, 1.0, lam).toarray()
        assert np.allclose(np.diag(h), [2 * lam, lam, lam], atol=1e-12)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_row_sum_from_empty_configuration(self, n):
        h = config_space_hamiltonian(n, 1.0, 1.0).toarray()
        off = h[0].copy()
        off[0] = 0.0
        assert off.sum() == pytest.approx(-n, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_projection_reproduces_reduced_matrix(self, n):
        j, lam = 1.0, 0.5
        proj = projection_matrix(n)
        assert np.allclose(proj @ proj.T, np.eye(proj.shape[0]), atol=1e-12)
        full = config_space_hamiltonian(n, j, lam).toarray()
        eff = build_effective_hamiltonian(n, j, lam)
        assert np.max(np.abs(proj @ full @ proj.T - eff.matrix)) < 1e-10

    @pytest.mark.parametrize("n", range(2, 11))
    def test_spectrum_containment(self, n):
        eff = build_effective_hamiltonian(n)
        full_evals = np.linalg.eigvalsh(config_space_hamiltonian(n).toarray())
        for value in np.linalg.eigvalsh(eff.matrix):
            assert np.min(np.abs(full_evals - value)) < 1e-10


class TestReductionReport:
    def test_four_plaquettes_no_discrepancies(self):
        report = build_reduction_report(4)
        assert (report.n_configs, report.n_orbits, report.qubits) == (7, 3, 2)
        assert report.discrepancies == []

    def test_six_plaquettes_single_confirmed_discrepancy(self):
        report = build_reduction_report(6)
        assert (report.n_configs, report.n_orbits, report.qubits) == (18, 5, 3)
        assert len(report.discrepancies) == 1
        entry = report.discrepancies[0]
        assert (entry.row_label, entry.col_label) == ("14", "135")
        assert entry.reported == pytest.approx(-SQ3)
        assert entry.computed == 0.0
        assert entry.oracle_confirms_computed

    def test_eight_plaquettes_match_reported_matrix(self):
        report = build_reduction_report(8)
        assert (report.n_configs, report.n_orbits, report.qubits) == (47, 8, 3)
        assert report.discrepancies == []

    def test_json_round_trip_fields(self):
        import json
        payload = json.loads(build_reduction_report(6).to_json())
        assert payload["basis"] == ["0", "1", "13", "14", "135"]
        assert payload["n_configs"] == 18
        assert len(payload["discrepancies"]) == 1
