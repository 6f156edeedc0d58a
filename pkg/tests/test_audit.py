import itertools
import math

import numpy as np
import pytest

from tcaudit import audit, fock
from tcaudit.audit import (BogoliubovConvention, CouplingPower, MappingMode,
                           PhaseRealization, claimed_energy,
                           compare_claimed_vs_exact, composed_mode_commutator,
                           run_full_audit, scalar_control_commutator,
                           scalar_unitarity_residual, u_operator,
                           unitarity_forms_agreement, unitarity_residual,
                           v_operator)
from tcaudit.errors import DomainSingularError, EmptySectorError, SizeError
from tcaudit.tc import ModelParams, SectorKey

P = ModelParams(1.0, 0.1)
PAPER = BogoliubovConvention(coupling_power=CouplingPower.PAPER_G_SQUARED)
CORRECTED = BogoliubovConvention(coupling_power=CouplingPower.CORRECTED_G)
ADJOINT = BogoliubovConvention(phase_realization=PhaseRealization.ADJOINT_VARIANT)


class TestCoefficientOperators:

    def test_u_reduces_to_identity_at_zero_coupling(self):
        u = u_operator(ModelParams(1.0, 0.0), 4)
        assert np.array_equal(u.entries, np.eye(5, dtype=complex))

    def test_u_entry_closed_form(self):
        u = u_operator(P, 4)
        assert u.entries[0, 0] == 1.0
        assert abs(u.entries[1, 1].real - 1.0 / math.sqrt(0.99)) <= 1e-16
        assert abs(u.entries[1, 1].real - 1.00503782) < 5e-9

    def test_v_vanishes_at_zero_coupling(self):
        v = v_operator(ModelParams(1.0, 0.0), 4)
        assert np.array_equal(v.entries, np.zeros((5, 5)))

    def test_v_entry_both_powers(self):
        v2 = v_operator(P, 4, PAPER)
        v1 = v_operator(P, 4, CORRECTED)
        assert abs(v2.entries[0, 1].real - 0.01 / math.sqrt(0.99)) <= 1e-16
        assert abs(v2.entries[0, 1].real - 0.01005038) < 5e-9
        assert abs(v1.entries[0, 1].real - 0.10050378) < 5e-9
        # lowering realization: support strictly above the diagonal
        assert np.array_equal(np.tril(v2.entries), np.zeros((5, 5)))

    def test_adjoint_variant_transposes_support(self):
        v = v_operator(P, 4, ADJOINT)
        assert np.array_equal(np.triu(v.entries), np.zeros((5, 5)))

    def test_domain_guard(self):
        with pytest.raises(DomainSingularError):
            u_operator(ModelParams(1.0, 0.5), 8)
        with pytest.raises(DomainSingularError):
            v_operator(ModelParams(1.0, 0.5), 8)
        # just inside the domain is fine
        u_operator(ModelParams(1.0, 0.35), 8)


class TestUnitarityResidual:

    def test_zero_at_zero_coupling(self):
        rep = unitarity_residual(ModelParams(1.0, 0.0), 8)
        assert rep.frobenius == 0.0 and rep.spectral == 0.0

    def test_detects_defect_both_powers(self):
        # oracle: brute-force dense evaluation of u u+ - v v+ - I
        for conv in (PAPER, CORRECTED):
            u = u_operator(P, 8, conv).entries
            v = v_operator(P, 8, conv).entries
            defect = u @ u.conj().T - v @ v.conj().T - np.eye(9)
            brute = np.linalg.norm(defect[:8, :8], "fro")
            rep = unitarity_residual(P, 8, conv, drop_edge=1)
            assert rep.frobenius > 1e-8
            assert abs(rep.frobenius - brute) <= 1e-14

    def test_adjoint_variant_also_nonunitary(self):
        rep = unitarity_residual(P, 8, ADJOINT, drop_edge=1)
        assert rep.frobenius > 1e-8

    def test_scalar_control(self):
        rep = scalar_unitarity_residual(0.3, 0.7, 8, drop_edge=1)
        assert rep.frobenius <= 1e-15

    def test_two_forms_agree(self):
        for conv in (PAPER, CORRECTED, ADJOINT):
            for g in (0.02, 0.1, 0.2):
                params = ModelParams(1.0, g)
                assert unitarity_forms_agreement(params, 8, conv) <= 1e-12

    def test_monotone_in_coupling(self):
        for conv in (PAPER, CORRECTED):
            values = [
                unitarity_residual(ModelParams(1.0, g), 8, conv, 1).frobenius
                for g in (0.0, 0.02, 0.04, 0.06, 0.08, 0.1)
            ]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_bulk_defect_stable_under_cutoff_doubling(self):
        # same bulk window (8 lowest states) at n_max = 8 and 16
        r8 = unitarity_residual(P, 8, PAPER, drop_edge=1)
        r16 = unitarity_residual(P, 16, PAPER, drop_edge=9)
        assert abs(r16.frobenius - r8.frobenius) < 0.10 * r8.frobenius


class TestComposedModeCommutator:

    def test_zero_coupling_reduces_to_plain_bosons(self):
        defects = composed_mode_commutator(ModelParams(1.0, 0.0), (4, 3, 3), PAPER, 1)
        assert defects.b.frobenius <= 1e-12
        assert defects.c.frobenius <= 1e-12

    def test_defect_on_both_channels(self):
        defects = composed_mode_commutator(P, (6, 4, 4), PAPER, 1)
        assert defects.b.frobenius > 1e-8
        assert defects.c.frobenius > 1e-8

    def test_scalar_control_passes(self):
        control = scalar_control_commutator(0.3, 0.7, (6, 4, 4), 1)
        assert control.b.frobenius <= 1e-12
        assert control.c.frobenius <= 1e-12

    def test_size_guard(self):
        with pytest.raises(SizeError):
            composed_mode_commutator(P, (99, 99, 99), PAPER, 1)

    def test_brute_force_oracle_small_space(self):
        # dense product-space computation assembled independently via numpy
        cutoffs = (4, 3, 3)
        u = u_operator(P, 4).entries
        v = v_operator(P, 4, PAPER).entries
        f = np.diag(np.sqrt(np.arange(1, 4)), 1).astype(complex)
        d = np.diag(np.sqrt(np.arange(1, 4)), 1).astype(complex)
        i4, if_, id_ = np.eye(5), np.eye(4), np.eye(4)
        b = (np.kron(np.kron(u, f), id_)
             + np.kron(np.kron(v, if_), d.conj().T))
        comm = b @ b.conj().T - b.conj().T @ b
        # bulk indices: every mode at least one below its top
        labels = [(na, nf, nd) for na in range(5) for nf in range(4) for nd in range(4)]
        keep = [i for i, (na, nf, nd) in enumerate(labels)
                if na <= 3 and nf <= 2 and nd <= 2]
        brute = np.linalg.norm((comm - np.eye(80))[np.ix_(keep, keep)], "fro")
        rep = composed_mode_commutator(P, cutoffs, PAPER, 1)
        assert abs(rep.b.frobenius - brute) <= 1e-13


class TestClaimedEnergy:

    def test_vacuum_is_zero(self):
        assert claimed_energy(0, 0, 0, ModelParams(1.0, 0.5)) == 0.0

    def test_closed_form_value(self):
        val = claimed_energy(1, 1, 0, P)
        assert abs(val - 2.0 * math.sqrt(0.99)) <= 5e-16
        assert abs(val - 1.98997487) < 5e-9

    def test_uncoupled_reduces_to_oscillators(self):
        params = ModelParams(1.0, 0.0, omega1=1.0)
        for na, nf, nd in ((0, 0, 0), (2, 1, 3), (5, 0, 1)):
            assert claimed_energy(na, nf, nd, params) == float(na + nf + nd)

    def test_domain_guard(self):
        with pytest.raises(DomainSingularError):
            claimed_energy(5, 0, 0, ModelParams(1.0, 0.5))
        with pytest.raises(ValueError):
            claimed_energy(-1, 0, 0, P)


class TestCompareClaimedVsExact:

    def test_zero_coupling_matches_exactly(self):
        params = ModelParams(1.0, 0.0)
        for key in (SectorKey(1, 1), SectorKey(3, 3), SectorKey(2, 4)):
            comp = compare_claimed_vs_exact(params, key)
            assert comp.max_abs_deviation == 0.0

    def test_reference_point_frozen_values(self):
        comp = compare_claimed_vs_exact(P, SectorKey(1, 1))
        claimed = sorted(r.claimed for r in comp.rows)
        exact = sorted(r.exact for r in comp.rows)
        assert np.allclose(claimed, [math.sqrt(0.99), 2.0], atol=1e-15)
        lo = (3.0 - math.sqrt(1.04)) / 2.0
        hi = (3.0 + math.sqrt(1.04)) / 2.0
        assert np.allclose(exact, [lo, hi], atol=1e-12)
        assert abs(comp.max_abs_deviation - (hi - 2.0)) <= 1e-12
        assert abs(comp.max_abs_deviation - 0.00990195) < 5e-9

    def test_best_assignment_cannot_repair(self):
        comp = compare_claimed_vs_exact(P, SectorKey(1, 1),
                                        MappingMode.BEST_ASSIGNMENT)
        assert comp.max_abs_deviation > 1e-3

    def test_best_assignment_against_permutation_oracle(self):
        params = ModelParams(1.0, 0.2)
        key = SectorKey(3, 3)  # four states
        comp = compare_claimed_vs_exact(params, key, MappingMode.BEST_ASSIGNMENT)
        claimed = np.sort([r.claimed for r in comp.rows])
        exact = np.sort([r.exact for r in comp.rows])
        best_total = min(
            sum(abs(c - e) for c, e in zip(claimed, perm))
            for perm in itertools.permutations(exact)
        )
        total = sum(r.abs_deviation for r in comp.rows)
        assert abs(total - best_total) <= 1e-12

    def test_vanishes_with_coupling(self):
        comp = compare_claimed_vs_exact(ModelParams(1.0, 1e-6), SectorKey(1, 1))
        assert comp.max_abs_deviation < 1e-6

    def test_empty_sector(self):
        with pytest.raises(EmptySectorError):
            compare_claimed_vs_exact(P, SectorKey(2, -4))

    def test_offset_free_column_present(self):
        comp = compare_claimed_vs_exact(P, SectorKey(1, 1))
        assert comp.offset_free_max_abs_deviation >= 0.0


class TestRunFullAudit:

    def test_report_shape_and_controls(self):
        report = run_full_audit(P, (8, 4, 4))
        assert report.cutoffs == (8, 4, 4)
        assert report.unitarity_residual.frobenius > 1e-8
        assert report.commutator_defect_b.frobenius > 1e-8
        assert report.commutator_defect_c.frobenius > 1e-8
        assert report.scalar_control_defect.frobenius <= 1e-10
        mappings = {comp.mapping for _, comp in report.claimed_vs_exact}
        assert mappings == {MappingMode.NAIVE_IDENTIFICATION,
                            MappingMode.BEST_ASSIGNMENT}
