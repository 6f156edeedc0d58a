"""k-photon Jaynes-Cummings ladder: the positive control.

The interaction Hamiltonian Delta sigma_z + g (S+ a^k + S- (a†)^k)
decomposes into 2x2 blocks coupling |n+k, ground> with |n, excited>.
Each block is diagonalized exactly by a real rotation whose entries are
(1/sqrt(2)) sqrt(1 ± Delta/E) with E = sqrt(Delta^2 + g^2 (n+1)...(n+k)).
That rotation is orthogonal, which is precisely what the operator-valued
transformation audited in :mod:`tcaudit.audit` fails to be.

Sign convention: sigma_z assigns +Delta to the ground-state row, matching
the block form the rotation diagonalizes to diag(+E, -E).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import DegenerateBlockError
from .fock import OperatorMatrix


@dataclass(frozen=True)
class JcParams:
    """Two-level atom coupled to one field mode by a k-photon process, hbar = 1.

    delta = omega0/2 - omega is the detuning scale of the interaction
    picture.  The sign of g is a gauge.
    """

    omega0: float
    omega: float
    g: float
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        for name in ("omega0", "omega", "g"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def delta(self) -> float:
        return self.omega0 / 2.0 - self.omega

    @classmethod
    def from_delta(cls, delta: float, omega: float = 1.0, g: float = 0.0,
                   k: int = 1) -> "JcParams":
        return cls(omega0=2.0 * (omega + delta), omega=omega, g=g, k=k)


@dataclass(frozen=True)
class JcBlock:
    """One dressed doublet: the 2x2 block on (|n+k, g>, |n, e>).

    rabi = sqrt(delta^2 + g^2 (n+1)(n+2)...(n+k)); the interaction-picture
    eigenvalues are e_plus = +rabi, e_minus = -rabi.
    """

    n: int
    matrix: np.ndarray
    e_plus: float
    e_minus: float
    rabi: float


@dataclass(frozen=True)
class DiagonalizationCheck:
    """Norms from verify_block_diagonalization: both ~0 on success."""

    orthogonality_residual: float   # || D^T D - I ||_F
    off_diagonal_residual: float    # || offdiag(D^T block D) ||_F


def ladder_factor(n: int, k: int) -> int:
    """(n+1)(n+2)...(n+k), the k-photon matrix-element product."""
    return math.prod(range(n + 1, n + k + 1))


def jc_block(params: JcParams, n: int) -> JcBlock:
    """The 2x2 block coupling |n+k, ground> and |n, excited>."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    delta = params.delta
    coupling = params.g * math.sqrt(ladder_factor(n, params.k))
    matrix = np.array([[delta, coupling], [coupling, -delta]])
    rabi = math.hypot(delta, coupling)
    return JcBlock(n=n, matrix=matrix, e_plus=rabi, e_minus=-rabi, rabi=rabi)


def displacement_matrix(params: JcParams, n: int) -> np.ndarray:
    """Real orthogonal rotation with entries (1/sqrt(2)) sqrt(1 ± Delta/E)."""
    block = jc_block(params, n)
    if block.rabi == 0.0:
        raise DegenerateBlockError(
            f"block n={n} has zero Rabi splitting (delta = 0 and g * ladder = 0)"
        )
    ratio = params.delta / block.rabi
    c = math.sqrt((1.0 + ratio) / 2.0)
    s = math.sqrt((1.0 - ratio) / 2.0)
    return np.array([[c, -s], [s, c]])


def verify_block_diagonalization(params: JcParams, n: int,
                                 tol: float = fock.DEFAULT_TOL) -> DiagonalizationCheck:
    """Residuals of D^T D - I and of the off-diagonal part of D^T block D.

    The report carries the norms; callers decide pass/fail against tol.
    A zero-Rabi block is already diagonal and reports (0, 0).
    """
    block = jc_block(params, n)
    if block.rabi == 0.0:
        return DiagonalizationCheck(0.0, 0.0)
    d = displacement_matrix(params, n)
    orth = float(np.linalg.norm(d.T @ d - np.eye(2), "fro"))
    transformed = d.T @ block.matrix @ d
    off = float(np.linalg.norm(transformed - np.diag(np.diag(transformed)), "fro"))
    return DiagonalizationCheck(orth, off)


def e20_eigenvalues(params: JcParams, n: int,
                    allow_generalized: bool = False) -> tuple[float, float]:
    """Closed-form pair omega(n + k/2) ± sqrt(Delta^2 + g^2 (n+1)...(n+k)).

    Stated for the two-photon ladder (k = 2), where the free-field offset
    is omega (n + 1); other k require allow_generalized since that offset
    does not follow from the interaction picture alone.  Gaps are
    frame-invariant and always equal 2 * rabi of the matching block.
    """
    if params.k != 2 and not allow_generalized:
        raise ValueError(
            "closed form stated for the two-photon ladder (k = 2); "
            "pass allow_generalized=True for other k"
        )
    block = jc_block(params, n)
    base = params.omega * (n + params.k / 2.0)
    return (base + block.rabi, base - block.rabi)


def kphoton_lowering(cutoff, k: int) -> OperatorMatrix:
    """a^k with exact entries sqrt((n-k+1)...(n)) at (n-k, n)."""
    n_max = fock._nmax(cutoff)
    m = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(k, n_max + 1):
        m[n - k, n] = math.sqrt(ladder_factor(n - k, k))
    return OperatorMatrix(m, fock.single_mode_labels(n_max))


def full_jc_truncated(params: JcParams, cutoff) -> OperatorMatrix:
    """Dense interaction Hamiltonian on the (atom) ⊗ (Fock cutoff) basis.

    Atom basis index 0 = ground, 1 = excited; labels are (atom, n).
    """
    n_max = fock._nmax(cutoff)
    atom_labels = ((0,), (1,))
    sz = OperatorMatrix(np.diag([1.0, -1.0]).astype(complex), atom_labels)
    s_plus = OperatorMatrix(np.array([[0, 0], [1, 0]], dtype=complex), atom_labels)
    ak = kphoton_lowering(n_max, params.k)
    i_atom = fock.identity_like(sz)
    i_field = fock.identity_like(ak)
    h = (params.delta * fock.tensor(sz, i_field)
         + params.g * (fock.tensor(s_plus, ak) + fock.tensor(s_plus.H, ak.H)))
    return h


def block_union_spectrum(params: JcParams, cutoff) -> np.ndarray:
    """Predicted dense spectrum: ±rabi per interior block plus ±Delta singlets.

    Unpaired states are the k low ground states (no |n-k, e> partner,
    eigenvalue +Delta) and the k top excited states whose partner falls
    outside the cutoff (eigenvalue -Delta).
    """
    n_max = fock._nmax(cutoff)
    vals: list[float] = []
    for n in range(0, n_max - params.k + 1):
        block = jc_block(params, n)
        vals.extend((block.e_plus, block.e_minus))
    delta = params.delta
    vals.extend([delta] * min(params.k, n_max + 1))
    vals.extend([-delta] * (n_max + 1 - max(n_max - params.k + 1, 0)))
    return np.sort(np.array(vals))
