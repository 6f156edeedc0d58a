"""Tavis-Cummings spectra in both pictures.

The resonant collective-spin Hamiltonian

    H_spin = omega c†c + omega J_z + g (c J+ + c† J-)

and its three-boson counterpart under the Schwinger map J+ = a†b,
J- = a b†, J_z = (a†a - b†b)/2,

    H_boson = omega (a†a + b†b + c†c) + g (a†b c + a b†c†).

Both conserve 2j = n_a + n_b and lambda = n_c + (n_a - n_b)/2, so each
(j, lambda) sector is a finite block; in the boson picture it is real
symmetric tridiagonal in n_a.

Note the two pictures share all coupling matrix elements under the
Schwinger correspondence but have different free parts on a sector
(omega J_z is not constant on it, omega (n_a + n_b) is), so their
sector spectra and even their gaps differ.  Only the spin picture
reduces to the Jaynes-Cummings doublets at 2j = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import EmptySectorError, SectorParityError
from .fock import FockCutoff, OperatorMatrix, eig_tridiagonal


@dataclass(frozen=True)
class ModelParams:
    """Resonant model parameters, hbar = 1.

    omega is the common mode frequency, g the coupling.  The sign of g is
    a gauge (it only flips off-diagonal signs), so negative values are
    accepted.  omega1 is the coefficient of a†a in the transformed frame
    used by the audit; it defaults to omega.
    """

    omega: float
    g: float
    omega1: float | None = None

    def __post_init__(self):
        if not (self.omega > 0):
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not math.isfinite(self.g):
            raise ValueError(f"g must be finite, got {self.g}")
        if self.omega1 is None:
            object.__setattr__(self, "omega1", float(self.omega))

    @property
    def effective_omega1(self) -> float:
        return float(self.omega1)


@dataclass(frozen=True)
class SectorKey:
    """Conserved-charge labels stored as doubled integers, so keys stay exact.

    two_j = 2j = n_a + n_b, two_lambda = 2*lambda with
    lambda = n_c + (n_a - n_b)/2.
    """

    two_j: int
    two_lambda: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError(f"two_j must be >= 0, got {self.two_j}")

    @property
    def parity_ok(self) -> bool:
        return (self.two_j + self.two_lambda) % 2 == 0

    @property
    def lam_plus_j(self) -> int:
        """lambda + j; integral whenever parity holds."""
        return (self.two_lambda + self.two_j) // 2


@dataclass(frozen=True)
class SectorBasis:
    key: SectorKey
    states: tuple[tuple[int, int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    key: SectorKey
    diag: tuple[float, ...]
    offdiag: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.diag)


def enumerate_sector(key: SectorKey) -> SectorBasis:
    """All occupation triples (n_a, n_b, n_c) in the (j, lambda) sector.

    States are ordered by increasing n_a, with n_b = 2j - n_a and
    n_c = lambda + j - n_a.  Empty when lambda + j < 0.
    """
    if not key.parity_ok:
        raise SectorParityError(
            f"two_j + two_lambda must be even, got {key.two_j} + {key.two_lambda}"
        )
    lpj = key.lam_plus_j
    if lpj < 0:
        return SectorBasis(key, ())
    states = tuple(
        (n_a, key.two_j - n_a, lpj - n_a)
        for n_a in range(min(key.two_j, lpj) + 1)
    )
    return SectorBasis(key, states)


def sector_hamiltonian(params: ModelParams, key: SectorKey) -> TridiagonalHamiltonian:
    """Real symmetric tridiagonal block of the three-boson Hamiltonian.

    diag[i] = omega * (n_a + n_b + n_c) for the i-th state and
    offdiag[i] = g * sqrt((n_a+1) n_b n_c), the a†bc matrix element
    linking n_a and n_a + 1.
    """
    basis = enumerate_sector(key)
    if basis.dim == 0:
        raise EmptySectorError(f"sector two_j={key.two_j}, two_lambda={key.two_lambda} is empty")
    diag = tuple(params.omega * (na + nb + nc) for na, nb, nc in basis.states)
    offdiag = tuple(
        params.g * math.sqrt((na + 1) * nb * nc)
        for na, nb, nc in basis.states[:-1]
    )
    return TridiagonalHamiltonian(key, diag, offdiag)


def sector_spectrum(params: ModelParams, key: SectorKey,
                    tol: float = fock.DEFAULT_TOL) -> np.ndarray:
    """Exact sector eigenvalues, ascending."""
    h = sector_hamiltonian(params, key)
    return eig_tridiagonal(h.diag, h.offdiag, tol)


def full_hamiltonian_truncated(params: ModelParams, cutoffs) -> OperatorMatrix:
    """Dense three-boson Hamiltonian on the (a, b, c) product box.

    cutoffs is a triple of per-mode cutoffs (FockCutoff or int).  Hermitian
    by construction: the coupling enters as X + X†.
    """
    ca, cb, cc = cutoffs
    a = fock.annihilation_matrix(ca)
    b = fock.annihilation_matrix(cb)
    c = fock.annihilation_matrix(cc)
    na, nb, nc = (fock.number_matrix(x) for x in (ca, cb, cc))
    ia, ib, ic = (fock.identity_like(x) for x in (a, b, c))

    t3 = lambda x, y, z: fock.tensor(fock.tensor(x, y), z)
    free = t3(na, ib, ic) + t3(ia, nb, ic) + t3(ia, ib, nc)
    x = t3(a.H, b, c)  # a†  b  c
    return params.omega * free + params.g * (x + x.H)


def charge_operators(cutoffs) -> tuple[OperatorMatrix, OperatorMatrix]:
    """The two conserved charges on the product box: n_a + n_b and n_c + (n_a - n_b)/2."""
    ca, cb, cc = cutoffs
    na, nb, nc = (fock.number_matrix(x) for x in (ca, cb, cc))
    ia, ib, ic = (fock.identity_like(x) for x in (na, nb, nc))
    t3 = lambda x, y, z: fock.tensor(fock.tensor(x, y), z)
    q1 = t3(na, ib, ic) + t3(ia, nb, ic)
    q2 = t3(ia, ib, nc) + 0.5 * (t3(na, ib, ic) - t3(ia, nb, ic))
    return q1, q2


def enumerate_box_sectors(cutoffs) -> list[tuple[SectorKey, tuple[tuple[int, int, int], ...]]]:
    """Group the product-box basis states by their (2j, 2*lambda) sector.

    Returns (key, states) pairs with states ordered by n_a, keys sorted.
    A sector is wholly contained in the box iff its states equal
    enumerate_sector(key).states.
    """
    ca, cb, cc = (fock._nmax(x) for x in cutoffs)
    groups: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for n_a in range(ca + 1):
        for n_b in range(cb + 1):
            for n_c in range(cc + 1):
                key = (n_a + n_b, 2 * n_c + n_a - n_b)
                groups.setdefault(key, []).append((n_a, n_b, n_c))
    out = []
    for (two_j, two_lambda) in sorted(groups):
        states = tuple(sorted(groups[(two_j, two_lambda)]))
        out.append((SectorKey(two_j, two_lambda), states))
    return out


def box_sector_block(params: ModelParams, states) -> tuple[np.ndarray, np.ndarray]:
    """Tridiagonal (diag, offdiag) of the boson Hamiltonian restricted to
    a box-truncated run of sector states (consecutive in n_a)."""
    diag = np.array([params.omega * sum(s) for s in states])
    offdiag = np.array([
        params.g * math.sqrt((na + 1) * nb * nc)
        for na, nb, nc in states[:-1]
    ])
    return diag, offdiag


def spin_picture_hamiltonian(params: ModelParams, two_j: int,
                             cutoff_c) -> OperatorMatrix:
    """Collective-spin picture H = omega c†c + omega J_z + g (c J+ + c† J-).

    Basis |m> ⊗ |n_c> with m = -j ... j; labels carry (m + j, n_c) so the
    spin index doubles as the Schwinger n_a.  Standard angular-momentum
    matrix elements J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.
    """
    if two_j < 0:
        raise ValueError(f"two_j must be >= 0, got {two_j}")
    dim_s = two_j + 1
    j = two_j / 2.0
    jz = np.diag([idx - j for idx in range(dim_s)]).astype(complex)
    jp = np.zeros((dim_s, dim_s), dtype=complex)
    for idx in range(dim_s - 1):
        m = idx - j
        jp[idx + 1, idx] = math.sqrt(j * (j + 1) - m * (m + 1))
    spin_labels = tuple((idx,) for idx in range(dim_s))
    jz_m = OperatorMatrix(jz, spin_labels)
    jp_m = OperatorMatrix(jp, spin_labels)

    c = fock.annihilation_matrix(cutoff_c)
    n_c = fock.number_matrix(cutoff_c)
    i_s = fock.identity_like(jz_m)
    i_c = fock.identity_like(c)

    h = (params.omega * fock.tensor(i_s, n_c)
         + params.omega * fock.tensor(jz_m, i_c)
         + params.g * (fock.tensor(jp_m, c) + fock.tensor(jp_m.H, c.H)))
    return h


def spin_charge_operator(two_j: int, cutoff_c) -> OperatorMatrix:
    """Lambda = c†c + J_z on the spin-picture basis."""
    dim_s = two_j + 1
    j = two_j / 2.0
    spin_labels = tuple((idx,) for idx in range(dim_s))
    jz_m = OperatorMatrix(np.diag([idx - j for idx in range(dim_s)]).astype(complex),
                          spin_labels)
    n_c = fock.number_matrix(cutoff_c)
    return fock.tensor(jz_m, fock.identity_like(n_c)) + fock.tensor(
        fock.identity_like(jz_m), n_c)


def spin_sector_spectrum(params: ModelParams, two_j: int, two_lambda: int,
                         cutoff_c=None, tol: float = fock.DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of the spin-picture Hamiltonian within one lambda sector.

    The sector is selected exactly (the charge is diagonal in the product
    basis); cutoff_c defaults to the smallest box containing the sector.
    """
    key = SectorKey(two_j, two_lambda)
    basis = enumerate_sector(key)
    if basis.dim == 0:
        raise EmptySectorError(
            f"sector two_j={two_j}, two_lambda={two_lambda} is empty")
    max_nc = max(s[2] for s in basis.states)
    if cutoff_c is None:
        cutoff_c = max_nc
    if fock._nmax(cutoff_c) < max_nc:
        raise ValueError(f"cutoff_c={cutoff_c} does not contain the sector (needs {max_nc})")
    h = spin_picture_hamiltonian(params, two_j, cutoff_c)
    # basis label (idx_m, n_c); sector condition 2*n_c + 2*idx_m - two_j == two_lambda
    sel = [i for i, (idx, nc) in enumerate(h.labels)
           if 2 * nc + 2 * idx - two_j == two_lambda]
    block = h.entries[np.ix_(sel, sel)]
    w, _ = fock.eigh_dense(block, tol)
    return w
