"""JSON wire formats.

Complex entries are two-element [re, im] arrays and matrices are
row-major nested lists. Values survive a JSON round trip at full double
precision because Python emits shortest round-trip float literals;
bit-exactness across platforms is not promised.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .errors import SerializationError
from .frames import (
    BornFrameFunction,
    DeterministicFrameFunction,
    FrameFunction,
    LEX_ZXY_RULE,
    TabulatedFrameFunction,
    born_backed,
    deterministic_qubit,
    tabulated,
)
from .marginality import (
    BlochWitness,
    EigenWitness,
    MarginalityCertificate,
    ResidualWitness,
)
from .measurements import PVM, IntertwineGraph, validate_pvm
from .operators import (
    DensityMatrix,
    Projector,
    as_complex_matrix,
    make_density,
    make_projector,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    arr = as_complex_matrix(m)
    return [
        [[float(z.real), float(z.imag)] for z in row]
        for row in arr
    ]


def matrix_from_json(data: Any, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SerializationError(f"{name} is not a nested [re, im] array: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise SerializationError(
            f"{name} must be rows x cols x [re, im], got shape {arr.shape}"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def operator_to_json(matrix: np.ndarray, kind: str) -> dict:
    arr = as_complex_matrix(matrix)
    if kind not in ("projector", "density", "unitary"):
        raise SerializationError(f"unknown operator kind {kind!r}")
    return {"dim": int(arr.shape[0]), "kind": kind, "matrix": matrix_to_json(arr)}


def projector_to_json(p: Projector) -> dict:
    return operator_to_json(p.matrix, "projector")


def density_to_json(rho: DensityMatrix) -> dict:
    return operator_to_json(rho.matrix, "density")


def operator_from_json(obj: Any) -> tuple[str, np.ndarray]:
    if not isinstance(obj, dict) or "kind" not in obj or "matrix" not in obj:
        raise SerializationError("operator object needs 'dim', 'kind' and 'matrix'")
    m = matrix_from_json(obj["matrix"])
    if "dim" in obj and int(obj["dim"]) != m.shape[0]:
        raise SerializationError(
            f"declared dim {obj['dim']} does not match matrix shape {m.shape}"
        )
    return str(obj["kind"]), m


def pvm_to_json(m: PVM) -> dict:
    return {
        "dim": m.dim,
        "elements": [matrix_to_json(e.matrix) for e in m.elements],
        "labels": list(m.labels),
    }


def pvm_from_json(obj: Any, tol: Tolerances = DEFAULT_TOLERANCES) -> PVM:
    if not isinstance(obj, dict) or "elements" not in obj:
        raise SerializationError("PVM object needs 'dim', 'elements' and 'labels'")
    elements = [
        make_projector(matrix_from_json(e, f"elements[{i}]"), tol)
        for i, e in enumerate(obj["elements"])
    ]
    labels = obj.get("labels")
    return validate_pvm(elements, labels=labels, tol=tol)


def frame_to_json(f: FrameFunction) -> dict:
    if isinstance(f, BornFrameFunction):
        return {"dim": f.dim, "repr": "born", "rho": matrix_to_json(f.rho.matrix)}
    if isinstance(f, DeterministicFrameFunction):
        return {"dim": f.dim, "repr": "deterministic", "rule": f.rule.name}
    if isinstance(f, TabulatedFrameFunction):
        return {
            "dim": f.dim,
            "repr": "table",
            "entries": [
                {"projector": matrix_to_json(p.matrix), "value": v}
                for p, v in f.entries
            ],
        }
    raise SerializationError(f"cannot serialize frame function of type {type(f).__name__}")


def frame_from_json(obj: Any, tol: Tolerances = DEFAULT_TOLERANCES) -> FrameFunction:
    if not isinstance(obj, dict) or "repr" not in obj:
        raise SerializationError("frame object needs a 'repr' field")
    kind = obj["repr"]
    if kind == "born":
        rho = make_density(matrix_from_json(obj["rho"], "rho"), tol)
        return born_backed(rho, tol)
    if kind == "deterministic":
        rule = obj.get("rule", LEX_ZXY_RULE.name)
        if rule != LEX_ZXY_RULE.name:
            raise SerializationError(f"unknown hemisphere rule {rule!r}")
        return deterministic_qubit()
    if kind == "table":
        entries = obj.get("entries")
        if not entries:
            raise SerializationError("tabulated frame needs non-empty 'entries'")
        pairs = [
            (
                make_projector(matrix_from_json(e["projector"], f"entries[{i}]"), tol),
                float(e["value"]),
            )
            for i, e in enumerate(entries)
        ]
        return tabulated(pairs, tol.key)
    raise SerializationError(f"unknown frame repr {kind!r}")


def graph_to_json(g: IntertwineGraph) -> dict:
    return {
        "nodes": [
            {"key": n.key, "rank": n.rank, "degree": n.degree} for n in g.nodes
        ],
        "incidence": [[key, idx] for key, idx in g.incidence],
    }


def witness_to_json(w) -> dict:
    if isinstance(w, BlochWitness):
        return {"bloch": [w.bloch[0], w.bloch[1], w.bloch[2]], "norm": w.norm}
    if isinstance(w, EigenWitness):
        return {
            "min_eig": w.min_eig,
            "eigenvector": [[float(c.real), float(c.imag)] for c in w.eigenvector],
        }
    if isinstance(w, ResidualWitness):
        return {
            "projector_key": w.projector_key,
            "label": w.label,
            "residual": w.residual,
        }
    raise SerializationError(f"cannot serialize witness of type {type(w).__name__}")


def certificate_to_json(cert: MarginalityCertificate) -> dict:
    out = {
        "verdict": cert.verdict.value,
        "dim": cert.dim,
        "rho_hat": matrix_to_json(cert.rho_hat),
        "linear_residual": cert.linear_residual,
        "min_eig": cert.min_eig,
        "tolerances": cert.tolerances.to_dict(),
        "spanning_set_id": cert.spanning_set_id,
    }
    if cert.witness is not None:
        out["witness"] = witness_to_json(cert.witness)
    return out
