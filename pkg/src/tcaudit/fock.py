"""Truncated Fock-space linear algebra.

Dense operator matrices on labeled occupation bases, Kronecker products,
commutators, edge-aware residual norms, and the two eigensolvers used
everywhere else in the toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, HermiticityError

DEFAULT_TOL = 1e-12

Label = tuple[int, ...]


@dataclass(frozen=True)
class FockCutoff:
    """Highest occupation number retained for one bosonic mode.

    The truncated single-mode space has dimension ``n_max + 1``
    (occupations 0 ... n_max).
    """

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


def _nmax(cutoff) -> int:
    """Accept a FockCutoff or a plain integer cutoff."""
    n = cutoff.n_max if isinstance(cutoff, FockCutoff) else int(cutoff)
    if n < 0:
        raise ValueError(f"n_max must be >= 0, got {n}")
    return n


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Complex square matrix together with the occupation labels of its basis.

    Labels are tuples of per-mode occupation numbers, one tuple per basis
    state, all of the same arity.  The label list is what lets
    :func:`residual_norm` exclude truncation-contaminated edge states mode
    by mode.  Entries are stored read-only; operations return new values.
    """

    entries: np.ndarray
    labels: tuple[Label, ...]

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"entries must be square, got shape {arr.shape}")
        labels = tuple(tuple(int(x) for x in lab) for lab in self.labels)
        if len(labels) != arr.shape[0]:
            raise DimensionError(
                f"{len(labels)} labels for a {arr.shape[0]}-dimensional matrix"
            )
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be duplicate-free")
        if labels and any(len(lab) != len(labels[0]) for lab in labels):
            raise ValueError("all basis labels must have the same number of modes")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_modes(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    @property
    def H(self) -> "OperatorMatrix":
        """Adjoint (conjugate transpose) on the same basis."""
        return OperatorMatrix(self.entries.conj().T, self.labels)

    def _check_same_basis(self, other: "OperatorMatrix"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.labels != other.labels:
            raise DimensionError("operands are labeled on different bases")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same_basis(other)
        return OperatorMatrix(self.entries @ other.entries, self.labels)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same_basis(other)
        return OperatorMatrix(self.entries + other.entries, self.labels)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same_basis(other)
        return OperatorMatrix(self.entries - other.entries, self.labels)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.entries * complex(scalar), self.labels)

    __rmul__ = __mul__


@dataclass(frozen=True)
class NormReport:
    """Frobenius and spectral (largest singular value) norms of a residual block."""

    frobenius: float
    spectral: float

    def __post_init__(self):
        if self.frobenius < 0 or self.spectral < 0:
            raise ValueError("norms must be non-negative")
        if self.spectral > self.frobenius + 1e-30:
            raise ValueError("spectral norm cannot exceed the Frobenius norm")


def single_mode_labels(n_max: int) -> tuple[Label, ...]:
    return tuple((n,) for n in range(n_max + 1))


def annihilation_matrix(cutoff) -> OperatorMatrix:
    """Bosonic lowering operator: entry (n-1, n) = sqrt(n)."""
    n_max = _nmax(cutoff)
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(1, n_max + 1):
        a[n - 1, n] = math.sqrt(n)
    return OperatorMatrix(a, single_mode_labels(n_max))


def creation_matrix(cutoff) -> OperatorMatrix:
    """Bosonic raising operator, the exact adjoint of :func:`annihilation_matrix`."""
    return annihilation_matrix(cutoff).H


def number_matrix(cutoff) -> OperatorMatrix:
    """Occupation-number operator diag(0, 1, ..., n_max).

    Built analytically so the diagonal is exact; it agrees with
    creation @ annihilation to one or two ulp (sqrt(n)**2 rounds).
    """
    n_max = _nmax(cutoff)
    return OperatorMatrix(np.diag(np.arange(n_max + 1, dtype=float)),
                          single_mode_labels(n_max))


def lowering_phase_matrix(cutoff) -> OperatorMatrix:
    """Susskind-Glogower one-sided shift E = sum_n |n><n+1|.

    This is the bounded phase factor in the polar decomposition
    a = E sqrt(n), used to realize sqrt(a / a^dagger).  On the truncated
    space E E^dagger = I - |n_max><n_max| and E^dagger E = I - |0><0|,
    both exactly; only the top-state corner deviates from the
    infinite-dimensional identity E E^dagger = I.
    """
    n_max = _nmax(cutoff)
    e = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(n_max):
        e[n, n + 1] = 1.0
    return OperatorMatrix(e, single_mode_labels(n_max))


def identity_like(m: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(np.eye(m.dim, dtype=complex), m.labels)


def tensor(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product; labels are concatenated pairs in row-major order."""
    labels = tuple(la + lb for la in a.labels for lb in b.labels)
    return OperatorMatrix(np.kron(a.entries, b.entries), labels)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """ab - ba on a common basis."""
    a._check_same_basis(b)
    return OperatorMatrix(a.entries @ b.entries - b.entries @ a.entries, a.labels)


def _bulk_indices(labels: tuple[Label, ...], drop_edge_rows: int) -> np.ndarray:
    """Indices of basis states at least drop_edge_rows below every mode's top occupation."""
    if drop_edge_rows == 0:
        return np.arange(len(labels))
    n_modes = len(labels[0])
    maxima = [max(lab[m] for lab in labels) for m in range(n_modes)]
    keep = [
        i
        for i, lab in enumerate(labels)
        if all(lab[m] <= maxima[m] - drop_edge_rows for m in range(n_modes))
    ]
    return np.array(keep, dtype=int)


def residual_norm(m: OperatorMatrix, target: OperatorMatrix,
                  drop_edge_rows: int = 0) -> NormReport:
    """Norms of (m - target) on the subblock away from truncation edges.

    drop_edge_rows highest-occupation states are excluded per mode, so a
    corner artifact of the cutoff does not masquerade as a genuine
    operator-identity violation.
    """
    m._check_same_basis(target)
    if not 0 <= drop_edge_rows < m.dim:
        raise ValueError(f"drop_edge_rows must be in [0, {m.dim}), got {drop_edge_rows}")
    keep = _bulk_indices(m.labels, drop_edge_rows)
    if keep.size == 0:
        return NormReport(0.0, 0.0)
    diff = (m.entries - target.entries)[np.ix_(keep, keep)]
    fro = float(np.linalg.norm(diff, "fro"))
    spec = float(np.linalg.norm(diff, 2)) if diff.size else 0.0
    return NormReport(fro, min(spec, fro))


def _as_array(m) -> np.ndarray:
    return m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)


def eigh_dense(m, tol: float = DEFAULT_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Rejects input whose largest entry of m - m^dagger exceeds tol.  Backed by
    LAPACK through numpy; the in-repo tridiagonal solver below provides the
    independent cross-check route.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect > tol:
        raise HermiticityError(
            f"max |m - m^dagger| entry {defect:.3e} exceeds tol {tol:.3e}"
        )
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    return w, v


def eig_tridiagonal(diag, offdiag, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of a real symmetric tridiagonal matrix, sorted ascending.

    Implicit-shift QL with deflation; eigenvalues only.  Convergence is
    declared when an off-diagonal entry is negligible relative to its
    diagonal neighbours at the given relative tolerance.
    """
    d = [float(x) for x in diag]
    e = [float(x) for x in offdiag]
    n = len(d)
    if len(e) != max(n - 1, 0):
        raise DimensionError(
            f"offdiag length {len(e)} does not match diag length {n}"
        )
    if n == 0:
        return np.array([])
    e.append(0.0)
    scale = max(max(abs(x) for x in d), max(abs(x) for x in e))
    if scale == 0.0:
        return np.zeros(n)

    for l in range(n):
        iterations = 0
        while True:
            # find the active block [l, m]: first negligible off-diagonal
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                thresh = tol * dd if dd > 0.0 else tol * scale
                if abs(e[m]) <= thresh:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > 60:
                raise ArithmeticError("tridiagonal QL failed to converge")
            # implicit shift from the 2x2 at the top of the block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    return np.sort(np.array(d))
