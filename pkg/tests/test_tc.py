import math

import numpy as np
import pytest

from conftest import tridiagonal_dense
from tcaudit import fock, tc
from tcaudit.errors import EmptySectorError, SectorParityError
from tcaudit.fock import commutator, eigh_dense
from tcaudit.tc import (ModelParams, SectorKey, enumerate_box_sectors,
                        enumerate_sector, full_hamiltonian_truncated,
                        sector_hamiltonian, sector_spectrum,
                        spin_picture_hamiltonian, spin_sector_spectrum)


def brute_force_sector(two_j, two_lambda, n_c_limit=50):
    """Oracle: exhaustive scan over occupation triples, independent of the
    n_a parametrization used by enumerate_sector."""
    states = []
    for n_a in range(two_j + 1):
        for n_b in range(two_j + 1):
            for n_c in range(n_c_limit + 1):
                if n_a + n_b != two_j:
                    continue
                if 2 * n_c + (n_a - n_b) != two_lambda:
                    continue
                states.append((n_a, n_b, n_c))
    return sorted(states)


class TestEnumerateSector:

    def test_spec_doublet(self):
        basis = enumerate_sector(SectorKey(1, 1))
        assert basis.states == ((0, 1, 1), (1, 0, 0))
        assert basis.states == tuple(brute_force_sector(1, 1, 3))

    def test_single_state_sector(self):
        basis = enumerate_sector(SectorKey(1, -1))
        assert basis.states == ((0, 1, 0),)

    def test_empty_below_threshold(self):
        assert enumerate_sector(SectorKey(2, -4)).states == ()

    def test_parity_violation(self):
        with pytest.raises(SectorParityError):
            enumerate_sector(SectorKey(1, 0))

    def test_matches_brute_force_scan(self):
        for two_j in range(0, 7):
            for two_lambda in range(-two_j - 4, two_j + 9):
                if (two_j + two_lambda) % 2 != 0:
                    continue
                basis = enumerate_sector(SectorKey(two_j, two_lambda))
                assert list(basis.states) == brute_force_sector(two_j, two_lambda)
                # constraint and ordering invariants
                lam_plus_j = (two_j + two_lambda) // 2
                for i, (na, nb, nc) in enumerate(basis.states):
                    assert na + nb == two_j
                    assert 2 * nc + na - nb == two_lambda
                    assert na == i
                if lam_plus_j >= 0:
                    assert basis.dim == min(two_j, lam_plus_j) + 1
                else:
                    assert basis.dim == 0


class TestSectorHamiltonian:

    def test_spec_matrix_elements(self):
        h = sector_hamiltonian(ModelParams(1.0, 0.1), SectorKey(1, 1))
        assert h.diag == (2.0, 1.0)
        assert h.offdiag == (0.1,)

    def test_coupling_off(self):
        h = sector_hamiltonian(ModelParams(1.0, 0.0), SectorKey(4, 2))
        assert all(x == 0.0 for x in h.offdiag)

    def test_single_state(self):
        h = sector_hamiltonian(ModelParams(1.0, 0.3), SectorKey(1, -1))
        assert h.diag == (1.0,) and h.offdiag == ()

    def test_empty_sector_raises(self):
        with pytest.raises(EmptySectorError):
            sector_hamiltonian(ModelParams(1.0, 0.1), SectorKey(2, -4))

    def test_offdiag_against_direct_matrix_element(self):
        # oracle: <n_a+1, n_b-1, n_c-1| a+ b c |n_a, n_b, n_c>
        params = ModelParams(2.0, 0.7)
        key = SectorKey(3, 5)
        basis = enumerate_sector(key)
        h = sector_hamiltonian(params, key)
        for i, (na, nb, nc) in enumerate(basis.states[:-1]):
            assert h.offdiag[i] == params.g * math.sqrt((na + 1) * nb * nc)


class TestSectorSpectrum:

    def test_spec_doublet_closed_form(self):
        w = sector_spectrum(ModelParams(1.0, 0.1), SectorKey(1, 1))
        lo = (3.0 - math.sqrt(1.04)) / 2.0
        hi = (3.0 + math.sqrt(1.04)) / 2.0
        assert np.allclose(w, [lo, hi], atol=1e-12)

    def test_uncoupled_diagonal_case(self):
        w = sector_spectrum(ModelParams(1.0, 0.0), SectorKey(2, 2))
        assert np.array_equal(w, [2.0, 3.0, 4.0])

    def test_single_state_value(self):
        w = sector_spectrum(ModelParams(1.5, 0.2), SectorKey(1, -1))
        assert np.array_equal(w, [1.5])

    def test_g_to_zero_limit_exact(self):
        for key in (SectorKey(3, 3), SectorKey(4, 0), SectorKey(2, 6)):
            w = sector_spectrum(ModelParams(1.0, 0.0), key)
            basis = enumerate_sector(key)
            expected = np.sort([float(sum(s)) for s in basis.states])
            assert np.array_equal(w, expected)

    def test_sign_of_g_is_gauge(self):
        for key in (SectorKey(2, 2), SectorKey(5, 3)):
            plus = sector_spectrum(ModelParams(1.0, 0.37), key)
            minus = sector_spectrum(ModelParams(1.0, -0.37), key)
            assert np.max(np.abs(plus - minus)) <= 1e-12

    def test_against_dense_oracle(self):
        params = ModelParams(1.0, 0.25)
        for key in (SectorKey(4, 2), SectorKey(7, 5), SectorKey(2, 20)):
            h = sector_hamiltonian(params, key)
            w = sector_spectrum(params, key)
            w_dense, _ = eigh_dense(tridiagonal_dense(h.diag, h.offdiag))
            assert np.max(np.abs(w - w_dense)) <= 1e-10


class TestFullHamiltonian:

    def test_uncoupled_is_diagonal(self):
        h = full_hamiltonian_truncated(ModelParams(1.0, 0.0), (2, 2, 2))
        off = h.entries - np.diag(np.diag(h.entries))
        assert np.array_equal(off, np.zeros_like(off))
        for idx, (na, nb, nc) in enumerate(h.labels):
            assert h.entries[idx, idx] == float(na + nb + nc)

    def test_single_coupling_element(self):
        params = ModelParams(1.0, 0.37)
        h = full_hamiltonian_truncated(params, (1, 1, 1))
        i = h.labels.index((1, 0, 0))
        j = h.labels.index((0, 1, 1))
        assert h.entries[i, j] == params.g
        assert h.entries[j, i] == params.g

    def test_hermitian_exactly(self):
        h = full_hamiltonian_truncated(ModelParams(1.0, 0.3), (3, 2, 4))
        assert np.array_equal(h.entries, h.entries.conj().T)

    def test_charges_commute_exactly(self):
        params = ModelParams(1.0, 0.8)
        cutoffs = (3, 3, 3)
        h = full_hamiltonian_truncated(params, cutoffs)
        q1, q2 = tc.charge_operators(cutoffs)
        for q in (q1, q2):
            comm = commutator(h, q).entries
            assert np.array_equal(comm, np.zeros_like(comm))

    def test_sector_completeness_small_box(self):
        # union of all box-sector blocks reproduces the dense spectrum
        params = ModelParams(1.0, 0.2)
        cutoffs = (3, 3, 3)
        dense, _ = eigh_dense(full_hamiltonian_truncated(params, cutoffs))
        collected = []
        n_contained = 0
        for key, states in enumerate_box_sectors(cutoffs):
            if states == enumerate_sector(key).states:
                n_contained += 1
                collected.extend(sector_spectrum(params, key))
            else:
                diag, off = tc.box_sector_block(params, states)
                collected.extend(fock.eig_tridiagonal(diag, off))
        assert len(collected) == dense.size
        assert n_contained > 0
        assert np.max(np.abs(np.sort(collected) - dense)) <= 1e-9


class TestSpinPicture:

    def test_uncoupled_doublet_diagonal(self):
        h = spin_picture_hamiltonian(ModelParams(1.0, 0.0), 1, 3)
        for idx, (m_idx, nc) in enumerate(h.labels):
            assert h.entries[idx, idx] == nc + (m_idx - 0.5)

    def test_commutes_with_charge_exactly(self):
        h = spin_picture_hamiltonian(ModelParams(1.0, 0.4), 3, 4)
        lam = tc.spin_charge_operator(3, 4)
        comm = commutator(h, lam).entries
        assert np.array_equal(comm, np.zeros_like(comm))

    def test_one_atom_doublet_closed_form(self):
        # j = 1/2 sector: omega*lambda +/- g*sqrt(lambda + j)
        params = ModelParams(1.0, 0.1)
        w = spin_sector_spectrum(params, 1, 1)
        assert np.allclose(w, [0.4, 0.6], atol=1e-12)
        w5 = spin_sector_spectrum(params, 1, 9)  # lambda = 9/2, lambda+j = 5
        expected = [4.5 - 0.1 * math.sqrt(5), 4.5 + 0.1 * math.sqrt(5)]
        assert np.allclose(w5, expected, atol=1e-12)

    def test_schwinger_coupling_elements_match_boson_picture(self):
        # the two pictures share every coupling element; only the free
        # parts differ (omega J_z is not constant on a sector)
        params = ModelParams(1.0, 0.3)
        two_j, two_lambda = 4, 2
        key = SectorKey(two_j, two_lambda)
        tri = sector_hamiltonian(params, key)
        h = spin_picture_hamiltonian(params, two_j, 8)
        sel = [i for i, (idx, nc) in enumerate(h.labels)
               if 2 * nc + 2 * idx - two_j == two_lambda]
        sel.sort(key=lambda i: h.labels[i][0])  # by n_a = m + j
        block = h.entries[np.ix_(sel, sel)].real
        off = np.diag(block, 1)
        assert np.allclose(off, tri.offdiag, rtol=1e-15, atol=1e-15)

    def test_pictures_have_different_free_parts(self):
        # regression pin for the documented sector-level difference:
        # spin diag is omega*lambda (constant), boson diag varies with n_a
        params = ModelParams(1.0, 0.1)
        spin = spin_sector_spectrum(params, 1, 1)
        boson = sector_spectrum(params, SectorKey(1, 1))
        assert abs((spin[1] - spin[0]) - 0.2) <= 1e-12
        assert abs((boson[1] - boson[0]) - math.sqrt(1.04)) <= 1e-12


class TestModelParams:

    def test_omega_must_be_positive(self):
        with pytest.raises(ValueError):
            ModelParams(0.0, 0.1)

    def test_omega1_defaults_to_omega(self):
        assert ModelParams(2.5, 0.1).effective_omega1 == 2.5
        assert ModelParams(2.5, 0.1, omega1=1.0).effective_omega1 == 1.0

    def test_negative_two_j_rejected(self):
        with pytest.raises(ValueError):
            SectorKey(-1, 1)
