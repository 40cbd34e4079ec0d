"""Marginality certification: reconstruct a candidate state from frame
function values on an informationally complete projector set, decide
whether the assignment is the restriction of some composite-system
frame function, and construct explicit composite extensions.

The decision reduces an existence statement over all ancilla systems to
two finite checks: (a) the values must be linearly consistent with some
unit-trace Hermitian matrix on the spanning set, and (b) that matrix
must be positive semidefinite. Representability by a density matrix is
equivalent to marginality, with the product extension rho x sigma as
the constructive witness, so nothing is lost in the reduction; the
certificate records the spanning set it used.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, NotApplicable, UnsupportedDimension
from .frames import AXIS_BLOCH, FrameFunction, axis_projector
from .measurements import embed, projector_key
from .operators import (
    DensityMatrix,
    Projector,
    bloch_of_matrix,
    born_probability,
    frozen_matrix,
    hermitize,
    identity,
    make_density,
    partial_trace_b,
    projector_from_ket,
    tensor,
)
from .tolerances import DEFAULT_TOLERANCES, MAX_COMPOSITE_DIM, Tolerances


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.setflags(write=False)
    return out


class Verdict(str, enum.Enum):
    MARGINAL = "marginal"
    NON_MARGINAL = "non_marginal"
    INCONCLUSIVE = "inconclusive"


def hermitian_coords(m: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix.

    Coordinates are (diagonal, sqrt(2) Re upper, sqrt(2) Im upper), so the
    Euclidean dot product of two coordinate vectors equals Tr(A B).
    """
    d = m.shape[0]
    iu = np.triu_indices(d, k=1)
    return np.concatenate(
        [np.real(np.diagonal(m)), math.sqrt(2) * np.real(m[iu]), math.sqrt(2) * np.imag(m[iu])]
    )


def traceless_hermitian_basis(dim: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) traceless Hermitian basis, shape
    (dim^2 - 1, dim, dim): symmetric and antisymmetric pair matrices
    followed by the diagonal ladder."""
    mats = []
    for j in range(1, dim):
        for i in range(j):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[i, j] = sym[j, i] = 1.0 / math.sqrt(2)
            mats.append(sym)
            antisym = np.zeros((dim, dim), dtype=complex)
            antisym[i, j] = -1j / math.sqrt(2)
            antisym[j, i] = 1j / math.sqrt(2)
            mats.append(antisym)
    for level in range(1, dim):
        diag = np.zeros((dim, dim), dtype=complex)
        scale = 1.0 / math.sqrt(level * (level + 1))
        for k in range(level):
            diag[k, k] = scale
        diag[level, level] = -level * scale
        mats.append(diag)
    return np.stack(mats, axis=0)


@dataclass(frozen=True, eq=False)
class SpanningSet:
    """Projectors whose real span is the full Hermitian space.

    ``condition_number`` is sigma_max / sigma_min of the vectorized
    design matrix (one row of Hermitian coordinates per projector); the
    design data for reconstruction is precomputed and cached.
    """

    dim: int
    projectors: tuple[Projector, ...]
    labels: tuple[str, ...]
    condition_number: float
    set_id: str
    design: np.ndarray          # rows: hermitian_coords of each projector
    basis: np.ndarray           # traceless Hermitian basis, (d^2-1, d, d)
    basis_design: np.ndarray    # design restricted to the traceless basis

    def __len__(self) -> int:
        return len(self.projectors)


def _spanning_from_projectors(
    dim: int, projectors: list[Projector], labels: list[str], set_id: str
) -> SpanningSet:
    design = np.stack([hermitian_coords(p.matrix) for p in projectors], axis=0)
    singulars = np.linalg.svd(design, compute_uv=False)
    cond = float(singulars[0] / singulars[-1]) if singulars[-1] > 0 else float("inf")
    basis = traceless_hermitian_basis(dim)
    basis_coords = np.stack([hermitian_coords(b) for b in basis], axis=0)
    basis_design = design @ basis_coords.T
    return SpanningSet(
        dim=dim,
        projectors=tuple(projectors),
        labels=tuple(labels),
        condition_number=cond,
        set_id=set_id,
        design=_freeze(design),
        basis=_freeze(basis),
        basis_design=_freeze(basis_design),
    )


def spanning_projectors(dim: int, tol: Tolerances = DEFAULT_TOLERANCES) -> SpanningSet:
    """Informationally complete rank-1 projector set for 2 <= dim <= 8.

    For dim 2 these are the six signed Pauli-axis projectors. For larger
    dimensions: the basis states e_i, plus (e_i +- e_j)/sqrt(2) and
    (e_i +- i e_j)/sqrt(2) for every pair, which together span the full
    dim^2-dimensional Hermitian space.
    """
    if not 2 <= dim <= 8:
        raise UnsupportedDimension(f"spanning sets cover dimensions 2..8, got {dim}")
    if dim == 2:
        labels = list(AXIS_BLOCH)
        projectors = [axis_projector(axis, tol) for axis in labels]
        return _spanning_from_projectors(2, projectors, labels, "axes-d2")
    projectors = []
    labels = []
    eye = np.eye(dim, dtype=complex)
    for i in range(dim):
        projectors.append(projector_from_ket(eye[i], tol))
        labels.append(f"e{i}")
    for j in range(1, dim):
        for i in range(j):
            for sign, tag in ((1.0, "+"), (-1.0, "-")):
                projectors.append(projector_from_ket(eye[i] + sign * eye[j], tol))
                labels.append(f"e{i}{tag}e{j}")
            for sign, tag in ((1j, "+i"), (-1j, "-i")):
                projectors.append(projector_from_ket(eye[i] + sign * eye[j], tol))
                labels.append(f"e{i}{tag}e{j}")
    return _spanning_from_projectors(dim, projectors, labels, f"grid-d{dim}")


def reconstruct_density(
    f: FrameFunction,
    s: SpanningSet,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[np.ndarray, float]:
    """Least-squares unit-trace Hermitian fit to frame-function values.

    The candidate is expanded as I/d plus a traceless Hermitian
    combination, which eliminates the trace constraint instead of using
    multipliers; the reported residual is the max-norm misfit over the
    spanning set, the operationally meaningful per-outcome error.
    """
    if s.condition_number > 1e8:
        raise IllConditioned(s.condition_number)
    values = np.array([f(p) for p in s.projectors], dtype=float)
    offsets = np.array([p.rank / s.dim for p in s.projectors], dtype=float)
    coeffs, *_ = np.linalg.lstsq(s.basis_design, values - offsets, rcond=None)
    rho_hat = identity(s.dim) / s.dim + np.tensordot(coeffs, s.basis, axes=1)
    rho_hat = hermitize(rho_hat)
    fitted = offsets + s.basis_design @ coeffs
    residual = float(np.max(np.abs(values - fitted)))
    return frozen_matrix(rho_hat), residual


@dataclass(frozen=True)
class BlochWitness:
    """Non-physical qubit reconstruction: Bloch vector outside the ball."""

    bloch: tuple[float, float, float]
    norm: float

    @property
    def excess(self) -> float:
        return self.norm - 1.0


@dataclass(frozen=True, eq=False)
class EigenWitness:
    """Negative direction of the reconstructed operator for dim >= 3."""

    min_eig: float
    eigenvector: np.ndarray


@dataclass(frozen=True)
class ResidualWitness:
    """Spanning-set outcome whose value no Hermitian fit reproduces."""

    projector_key: str
    label: str
    residual: float


Witness = BlochWitness | EigenWitness | ResidualWitness


@dataclass(frozen=True, eq=False)
class MarginalityCertificate:
    verdict: Verdict
    dim: int
    rho_hat: np.ndarray
    linear_residual: float
    min_eig: float
    witness: Witness | None
    tolerances: Tolerances
    spanning_set_id: str


def _non_marginal_witness(
    s: SpanningSet,
    f: FrameFunction,
    rho_hat: np.ndarray,
    residual: float,
    tol: Tolerances,
) -> Witness:
    if residual > tol.lin:
        fits = np.array([np.trace(p.matrix @ rho_hat).real for p in s.projectors])
        values = np.array([f(p) for p in s.projectors], dtype=float)
        worst = int(np.argmax(np.abs(values - fits)))
        return ResidualWitness(
            projector_key=projector_key(s.projectors[worst], tol.key),
            label=s.labels[worst],
            residual=float(abs(values[worst] - fits[worst])),
        )
    if s.dim == 2:
        b = bloch_of_matrix(rho_hat)
        return BlochWitness(bloch=b.as_tuple(), norm=b.norm())
    eigvals, eigvecs = np.linalg.eigh(hermitize(rho_hat))
    return EigenWitness(min_eig=float(eigvals[0]), eigenvector=_freeze(eigvecs[:, 0]))


def certify_marginal(
    f: FrameFunction,
    s: SpanningSet | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> MarginalityCertificate:
    """Decide whether a frame function is the marginal of a composite one.

    Marginal: values fit a unit-trace Hermitian matrix within tol.lin
    and its smallest eigenvalue is >= -tol.psd. NonMarginal: the fit
    fails, or the eigenvalue drops below -tol.margin. Eigenvalues in the
    gap give Inconclusive, separating round-off from genuine
    non-positivity.
    """
    if s is None:
        s = spanning_projectors(f.dim, tol)
    rho_hat, residual = reconstruct_density(f, s, tol)
    low = float(np.linalg.eigvalsh(hermitize(rho_hat))[0])
    if residual <= tol.lin and low >= -tol.psd:
        verdict = Verdict.MARGINAL
    elif residual > tol.lin or low < -tol.margin:
        verdict = Verdict.NON_MARGINAL
    else:
        verdict = Verdict.INCONCLUSIVE
    witness = None
    if verdict is Verdict.NON_MARGINAL:
        witness = _non_marginal_witness(s, f, rho_hat, residual, tol)
    return MarginalityCertificate(
        verdict=verdict,
        dim=s.dim,
        rho_hat=rho_hat,
        linear_residual=residual,
        min_eig=low,
        witness=witness,
        tolerances=tol,
        spanning_set_id=s.set_id,
    )


def extend_to_composite(
    rho_f: DensityMatrix,
    sigma_b: DensityMatrix,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_dim: int = MAX_COMPOSITE_DIM,
) -> DensityMatrix:
    """Product extension rho x sigma on the composite space.

    Its partial trace over the second factor returns rho exactly, so the
    Born frame function it induces restricts to the one of rho; this is
    the constructive existence half of the marginality decision.
    """
    return make_density(tensor(rho_f.matrix, sigma_b.matrix, max_dim=max_dim), tol)


def marginality_witness(cert: MarginalityCertificate) -> str:
    """Human-readable description of why a verdict is NonMarginal."""
    if cert.verdict is not Verdict.NON_MARGINAL:
        raise NotApplicable(f"no witness for verdict {cert.verdict.value}")
    w = cert.witness
    if isinstance(w, BlochWitness):
        return f"Bloch norm {w.norm:.4f}, excess {w.excess:.4f}"
    if isinstance(w, EigenWitness):
        vec = ", ".join(f"{c.real:.4f}{c.imag:+.4f}j" for c in w.eigenvector)
        return f"negative eigenvalue {w.min_eig:.4e} with eigenvector [{vec}]"
    if isinstance(w, ResidualWitness):
        return (
            f"worst projector {w.label} (key {w.projector_key}): "
            f"residual {w.residual:.4e}"
        )
    raise NotApplicable("certificate carries no witness")


def verify_extension(
    rho_f: DensityMatrix,
    sigma_b: DensityMatrix,
    projectors: list[Projector],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[float, float]:
    """Check the product extension against its defining identities.

    Returns (partial-trace error, max embedding-probability deviation):
    the Frobenius distance between Tr_B of the extension and rho_f, and
    the largest |Tr((P x I) rho_F) - Tr(P rho_f)| over the projectors.
    """
    d_a, d_b = rho_f.dim, sigma_b.dim
    rho_big = extend_to_composite(rho_f, sigma_b, tol)
    back = partial_trace_b(rho_big, d_a, d_b, tol)
    pt_err = float(np.linalg.norm(back.matrix - rho_f.matrix, "fro"))
    dev = 0.0
    for p in projectors:
        lhs = born_probability(embed(p, d_b), rho_big, tol)
        rhs = born_probability(p, rho_f, tol)
        dev = max(dev, abs(lhs - rhs))
    return pt_err, dev
