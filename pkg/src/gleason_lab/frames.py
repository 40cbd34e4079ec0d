"""Frame functions: probability assignments to projectors that sum to 1
over every PVM.

Three representations are provided. Born-backed functions evaluate
Tr(P rho) and are exactly the quantum assignments. Deterministic
hemisphere functions assign definite 0/1 outcomes to qubit projectors;
they are valid frame functions on a single qubit because each qubit
projector occurs in exactly one measurement, yet they correspond to no
quantum state. Tabulated functions hold finitely many explicit values
and are partial by design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContextualConflict,
    DimensionMismatch,
    UndefinedProjector,
    UnsupportedDimension,
    UnsupportedRank,
    ValueOutOfRange,
)
from .measurements import PVM, embed, projector_key, validate_pvm
from .operators import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    BlochVector,
    DensityMatrix,
    Projector,
    bloch_of_matrix,
    born_probability,
    identity,
    make_projector,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class FrameFunction:
    """Base class; subclasses implement evaluation on projectors."""

    dim: int

    def __call__(self, p: Projector) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class HemisphereRule:
    """Antipodal-exclusive selector on Bloch vectors.

    Accepts n when z > 0, or z = 0 and x > 0, or z = x = 0 and y > 0
    (lexicographic sign test on (z, x, y)). Exactly one of {n, -n} is
    accepted for every nonzero n, which makes the induced deterministic
    assignment normalize exactly on every qubit PVM.
    """

    name: str = "lex-zxy"

    def accepts(self, n: BlochVector) -> bool:
        if n.z != 0.0:
            return n.z > 0.0
        if n.x != 0.0:
            return n.x > 0.0
        return n.y > 0.0


LEX_ZXY_RULE = HemisphereRule()


class BornFrameFunction(FrameFunction):
    """f(P) = Tr(P rho) for a fixed density matrix."""

    def __init__(self, rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES):
        self.rho = rho
        self.dim = rho.dim
        self._tol = tol

    def __call__(self, p: Projector) -> float:
        return born_probability(p, self.rho, self._tol)


class DeterministicFrameFunction(FrameFunction):
    """Definite 0/1 qubit assignment driven by a hemisphere rule."""

    def __init__(self, rule: HemisphereRule = LEX_ZXY_RULE):
        self.rule = rule
        self.dim = 2

    def __call__(self, p: Projector) -> float:
        if p.dim != 2:
            raise UnsupportedDimension(f"deterministic assignment is qubit-only, got dim {p.dim}")
        if p.rank == 0:
            return 0.0
        if p.rank == 2:
            return 1.0
        if p.rank != 1:
            raise UnsupportedRank(f"rank {p.rank} projector on a qubit")
        return 1.0 if self.rule.accepts(bloch_of_matrix(p.matrix)) else 0.0


class TabulatedFrameFunction(FrameFunction):
    """Finite explicit table; evaluation is defined on stored keys only."""

    def __init__(
        self,
        entries: list[tuple[Projector, float]],
        eps_key: float = DEFAULT_TOLERANCES.key,
    ):
        if not entries:
            raise ValueOutOfRange("a tabulated frame function needs at least one entry")
        dims = {p.dim for p, _ in entries}
        if len(dims) > 1:
            raise DimensionMismatch(f"tabulated projectors on mixed dimensions {sorted(dims)}")
        self.dim = entries[0][0].dim
        self.eps_key = eps_key
        self._values: dict[str, float] = {}
        self._entries: list[tuple[Projector, float]] = []
        for p, v in entries:
            v = float(v)
            if not 0.0 <= v <= 1.0:
                raise ValueOutOfRange(f"tabulated value {v} outside [0, 1]")
            k = projector_key(p, eps_key)
            if k in self._values:
                if self._values[k] != v:
                    raise ContextualConflict(k, self._values[k], v)
                continue
            self._values[k] = v
            self._entries.append((p, v))

    @property
    def entries(self) -> tuple[tuple[Projector, float], ...]:
        return tuple(self._entries)

    def __call__(self, p: Projector) -> float:
        k = projector_key(p, self.eps_key)
        try:
            return self._values[k]
        except KeyError:
            raise UndefinedProjector(k) from None


class InducedFrameFunction(FrameFunction):
    """Subsystem restriction of a composite frame function.

    Evaluates the composite function on P x I_b, i.e. on the local
    measurement outcome as represented in the composite system.
    """

    def __init__(self, composite: FrameFunction, dim_a: int, dim_b: int):
        if composite.dim != dim_a * dim_b:
            raise DimensionMismatch(
                f"composite dim {composite.dim} is not {dim_a} * {dim_b}"
            )
        self.composite = composite
        self.dim = dim_a
        self.dim_b = dim_b

    def __call__(self, p: Projector) -> float:
        if p.dim != self.dim:
            raise DimensionMismatch(f"projector dim {p.dim} != subsystem dim {self.dim}")
        return self.composite(embed(p, self.dim_b))


def born_backed(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES) -> BornFrameFunction:
    return BornFrameFunction(rho, tol)


def deterministic_qubit(rule: HemisphereRule = LEX_ZXY_RULE) -> DeterministicFrameFunction:
    return DeterministicFrameFunction(rule)


def tabulated(
    entries: list[tuple[Projector, float]],
    eps_key: float = DEFAULT_TOLERANCES.key,
) -> TabulatedFrameFunction:
    return TabulatedFrameFunction(entries, eps_key)


def induce(f_composite: FrameFunction, d_a: int, d_b: int) -> InducedFrameFunction:
    return InducedFrameFunction(f_composite, d_a, d_b)


def check_normalization(f: FrameFunction, m: PVM) -> float:
    """|sum_x f(P_x) - 1| over the PVM's outcomes."""
    total = 0.0
    for e in m.elements:
        total += f(e)
    return abs(total - 1.0)


AXIS_BLOCH: dict[str, tuple[float, float, float]] = {
    "+x": (1.0, 0.0, 0.0),
    "-x": (-1.0, 0.0, 0.0),
    "+y": (0.0, 1.0, 0.0),
    "-y": (0.0, -1.0, 0.0),
    "+z": (0.0, 0.0, 1.0),
    "-z": (0.0, 0.0, -1.0),
}


def axis_projector(axis: str, tol: Tolerances = DEFAULT_TOLERANCES) -> Projector:
    """Rank-1 qubit projector along one of the six signed Pauli axes."""
    try:
        x, y, z = AXIS_BLOCH[axis]
    except KeyError:
        raise ValueOutOfRange(f"unknown axis {axis!r}; expected one of {sorted(AXIS_BLOCH)}") from None
    m = 0.5 * (identity(2) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)
    return make_projector(m, tol)


def axis_table(
    values: dict[str, float],
    eps_key: float = DEFAULT_TOLERANCES.key,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TabulatedFrameFunction:
    """Tabulated qubit frame function keyed by signed Pauli axes.

    ``values`` maps axis names (subset of +x, -x, +y, -y, +z, -z) to
    probabilities. Antipodal pairs should sum to 1 for the result to be
    a normalized assignment; that is the caller's responsibility.
    """
    entries = [(axis_projector(axis, tol), v) for axis, v in values.items()]
    return tabulated(entries, eps_key)


def definite_xz_table(
    eps_key: float = DEFAULT_TOLERANCES.key,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> TabulatedFrameFunction:
    """The classic impossible qubit assignment: definite +x and +z.

    Assigns 1 to the +x and +z outcomes, 0 to their antipodes and 1/2 on
    the y axis. Each axis pair sums to 1, so the table is a valid
    partial frame function, but no density matrix reproduces it: the
    implied Bloch vector (1, 0, 1) has norm sqrt(2) > 1.
    """
    return axis_table(
        {"+x": 1.0, "-x": 0.0, "+y": 0.5, "-y": 0.5, "+z": 1.0, "-z": 0.0},
        eps_key,
        tol,
    )


def random_qubit_pvm_pair(rng: np.random.Generator, tol: Tolerances = DEFAULT_TOLERANCES) -> PVM:
    """Two-outcome qubit PVM {P, I - P} from a random ket.

    The complement is formed by exact subtraction so the two Bloch
    vectors are exactly antipodal in floating point, which makes
    deterministic assignments normalize with residual exactly zero.
    """
    ket = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    ket = ket / np.linalg.norm(ket)
    p = np.outer(ket, ket.conj())
    return validate_pvm(
        [make_projector(p, tol), make_projector(identity(2) - p, tol)], tol=tol
    )
