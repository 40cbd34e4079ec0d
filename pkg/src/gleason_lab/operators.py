"""Complex matrix algebra foundation: projectors, density matrices,
tensor products, partial traces, Bloch coordinates and seeded Haar
unitaries.

All public constructors validate their inputs and return immutable
values (numpy arrays are frozen with ``setflags(write=False)``), so
every operation here is safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionOverflow,
    NonPhysicalBloch,
    NotHermitian,
    NotIdempotent,
    NotPositive,
    NotUnitTrace,
)
from .tolerances import DEFAULT_TOLERANCES, MAX_COMPOSITE_DIM, Tolerances

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _p in (PAULI_X, PAULI_Y, PAULI_Z):
    _p.setflags(write=False)


def frozen_matrix(m: np.ndarray) -> np.ndarray:
    """Defensive complex copy with the write flag cleared."""
    out = np.array(m, dtype=complex, order="C", copy=True)
    out.setflags(write=False)
    return out


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, "fro"))


def hermitize(m: np.ndarray) -> np.ndarray:
    """(M + M†)/2, removing round-off asymmetry before eigensolves."""
    return 0.5 * (m + m.conj().T)


def hermitian_residual(m: np.ndarray) -> float:
    return frobenius(m - m.conj().T)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


@dataclass(frozen=True, eq=False)
class Projector:
    """Validated Hermitian idempotent on a d-dimensional space."""

    dim: int
    matrix: np.ndarray
    rank: int


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated non-negative unit-trace Hermitian operator."""

    dim: int
    matrix: np.ndarray


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector of qubit Pauli expectations; may lie outside the ball."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise ValueError("Bloch components must be finite")

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_physical(self, eps: float = DEFAULT_TOLERANCES.bloch) -> bool:
        return self.norm() <= 1.0 + eps

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def make_projector(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> Projector:
    """Validate a matrix as a projector and compute its rank.

    Raises NotHermitian or NotIdempotent with the offending Frobenius
    residual. The idempotency gate pins every eigenvalue within roughly
    the residual of {0, 1}, so the rank (the count of eigenvalues near
    1) equals the rounded trace; the trace is what gets computed.
    """
    m = as_complex_matrix(matrix)
    d = m.shape[0]
    if m.shape[1] != d:
        raise DimensionMismatch(f"projector matrix must be square, got {m.shape}")
    res_h = hermitian_residual(m)
    if res_h > tol.herm:
        raise NotHermitian(res_h)
    res_p = frobenius(m @ m - m)
    if res_p > tol.proj:
        raise NotIdempotent(res_p)
    trace = float(np.trace(m).real)
    rank = int(round(trace))
    if not 0 <= rank <= d or abs(trace - rank) > d * tol.eig:
        raise NotIdempotent(res_p)
    return Projector(dim=d, matrix=frozen_matrix(m), rank=rank)


def projector_from_ket(ket, tol: Tolerances = DEFAULT_TOLERANCES) -> Projector:
    """Rank-1 projector |psi><psi| from a (not necessarily normalized) vector."""
    v = np.asarray(ket, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot project onto the zero vector")
    v = v / n
    return make_projector(np.outer(v, v.conj()), tol)


def make_density(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    m = as_complex_matrix(matrix)
    d = m.shape[0]
    if m.shape[1] != d:
        raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
    res_h = hermitian_residual(m)
    if res_h > tol.herm:
        raise NotHermitian(res_h)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol.tr:
        raise NotUnitTrace(tr)
    low = float(np.linalg.eigvalsh(hermitize(m))[0])
    if low < -tol.psd:
        raise NotPositive(low)
    return DensityMatrix(dim=d, matrix=frozen_matrix(m))


def tensor(a, b, max_dim: int = MAX_COMPOSITE_DIM) -> np.ndarray:
    """Kronecker product with subsystem-A-major index convention:
    row (i_a, i_b) maps to i_a * rows_b + i_b."""
    ma = as_complex_matrix(a, "tensor operand a")
    mb = as_complex_matrix(b, "tensor operand b")
    rows = ma.shape[0] * mb.shape[0]
    cols = ma.shape[1] * mb.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionOverflow(max(rows, cols), max_dim)
    return np.kron(ma, mb)


def partial_trace_matrix(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out subsystem B of any square matrix on the composite space."""
    arr = as_complex_matrix(m, "composite matrix")
    d = dim_a * dim_b
    if arr.shape != (d, d):
        raise DimensionMismatch(
            f"matrix has shape {arr.shape} but dim_a * dim_b = {dim_a} * {dim_b} = {d}"
        )
    return np.einsum("ikjk->ij", arr.reshape(dim_a, dim_b, dim_a, dim_b))


def partial_trace_b(
    rho_ab: DensityMatrix, dim_a: int, dim_b: int, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Reduced state of subsystem A: (Tr_B rho)_ij = sum_k rho_(i,k),(j,k)."""
    if rho_ab.dim != dim_a * dim_b:
        raise DimensionMismatch(
            f"composite dimension {rho_ab.dim} is not dim_a * dim_b = {dim_a * dim_b}"
        )
    return make_density(partial_trace_matrix(rho_ab.matrix, dim_a, dim_b), tol)


def born_probability(
    p: Projector, rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Tr(P rho), clamped into [0, 1] after an epsilon sanity check."""
    if p.dim != rho.dim:
        raise DimensionMismatch(f"projector dim {p.dim} != state dim {rho.dim}")
    t = complex(np.trace(p.matrix @ rho.matrix))
    if abs(t.imag) > tol.herm:
        raise ValueError(f"Born trace has imaginary residual {t.imag:.3e}")
    val = t.real
    if val < -tol.prob or val > 1.0 + tol.prob:
        raise ValueError(f"Born value {val} outside [0, 1] beyond tolerance")
    return min(1.0, max(0.0, val))


def bloch_to_density(
    r: BlochVector, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2 for |r| <= 1."""
    n = r.norm()
    if n > 1.0 + tol.bloch:
        raise NonPhysicalBloch(n)
    m = 0.5 * (identity(2) + r.x * PAULI_X + r.y * PAULI_Y + r.z * PAULI_Z)
    return make_density(m, tol)


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    if rho.dim != 2:
        raise DimensionMismatch(f"Bloch coordinates need dim 2, got {rho.dim}")
    m = rho.matrix
    return BlochVector(
        x=float(np.trace(m @ PAULI_X).real),
        y=float(np.trace(m @ PAULI_Y).real),
        z=float(np.trace(m @ PAULI_Z).real),
    )


def bloch_of_matrix(m: np.ndarray) -> BlochVector:
    """Pauli expectations of an arbitrary 2x2 Hermitian matrix (no
    positivity assumed, e.g. reconstruction candidates)."""
    arr = as_complex_matrix(m)
    if arr.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {arr.shape}")
    return BlochVector(
        x=float(np.trace(arr @ PAULI_X).real),
        y=float(np.trace(arr @ PAULI_Y).real),
        z=float(np.trace(arr @ PAULI_Z).real),
    )


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary drawn from an explicit generator.

    QR of a complex Ginibre matrix; the triangular factor's diagonal is
    rephased to be real-positive, which removes the QR gauge bias.
    """
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar unitary; identical (dim, seed) gives identical output."""
    return haar_unitary(dim, np.random.default_rng(seed))


def random_density_matrix(
    dim: int, rng: np.random.Generator, tol: Tolerances = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Full-rank random state G G† / Tr(G G†) from a complex Ginibre draw."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return make_density(m / np.trace(m).real, tol)


def random_density(dim: int, seed: int, tol: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    return random_density_matrix(dim, np.random.default_rng(seed), tol)


def min_eigenvalue(h, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    m = as_complex_matrix(h)
    res = hermitian_residual(m)
    if res > tol.herm:
        raise NotHermitian(res)
    return float(np.linalg.eigvalsh(hermitize(m))[0])
