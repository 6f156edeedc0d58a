"""Exact spectra and transformation audits for the three-boson
Tavis-Cummings model and the k-photon Jaynes-Cummings ladder."""

__version__ = "0.1.0"

from .errors import (DegenerateBlockError, DimensionError, DomainSingularError,
                     EmptySectorError, HermiticityError, SectorParityError,
                     SizeError, TcAuditError)
from .fock import (FockCutoff, NormReport, OperatorMatrix, annihilation_matrix,
                   commutator, creation_matrix, eig_tridiagonal, eigh_dense,
                   identity_like, lowering_phase_matrix, number_matrix,
                   residual_norm, tensor)
from .tc import (ModelParams, SectorBasis, SectorKey, TridiagonalHamiltonian,
                 enumerate_sector, full_hamiltonian_truncated,
                 sector_hamiltonian, sector_spectrum,
                 spin_picture_hamiltonian, spin_sector_spectrum)
from .audit import (AuditReport, BogoliubovConvention, ClaimComparison,
                    CouplingPower, MappingMode, PhaseRealization,
                    claimed_energy, compare_claimed_vs_exact,
                    composed_mode_commutator, run_full_audit,
                    scalar_control_commutator, u_operator, unitarity_residual,
                    v_operator)
from .jc import (DiagonalizationCheck, JcBlock, JcParams, block_union_spectrum,
                 displacement_matrix, e20_eigenvalues, full_jc_truncated,
                 jc_block, verify_block_diagonalization)
