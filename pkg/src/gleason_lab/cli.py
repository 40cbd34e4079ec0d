"""Command-line surface.

Subcommands: gen-pvm, eval, check-marginal, reconstruct,
demo-counterexample, demo-intertwine, verify-suite. Every run prints a
report (JSON by default, CSV summary with --format csv) to stdout;
--out writes the command's primary artifact atomically. The environment
variable GLEASON_LAB_SEED supplies a default seed.

Exit codes: 0 success (or verdict Marginal / all checks passed),
1 I/O failure, 2 parse or domain failure, 3 verdict NonMarginal or
failed checks, 4 verdict Inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import DimensionMismatch, GleasonLabError
from .frames import (
    born_backed,
    check_normalization,
    deterministic_qubit,
    random_qubit_pvm_pair,
)
from .marginality import (
    Verdict,
    certify_marginal,
    marginality_witness,
    reconstruct_density,
    spanning_projectors,
    verify_extension,
)
from .measurements import (
    PVM,
    embed_pvm,
    intertwine_graph,
    measurement_family_mpsi,
    projector_key,
    pvm_from_unitary,
    random_rank_partition,
)
from .operators import (
    frobenius,
    haar_unitary,
    identity,
    partial_trace_b,
    projector_from_ket,
    random_density_matrix,
    random_unitary,
)
from .report import build_report, checked, render_json, render_report, write_atomic
from .serialization import (
    certificate_to_json,
    frame_from_json,
    graph_to_json,
    matrix_to_json,
    pvm_from_json,
    pvm_to_json,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

ENV_SEED = "GLEASON_LAB_SEED"

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_NON_MARGINAL = 3
EXIT_INCONCLUSIVE = 4

_VERDICT_EXIT = {
    Verdict.MARGINAL: EXIT_OK,
    Verdict.NON_MARGINAL: EXIT_NON_MARGINAL,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gleason-lab",
        description="PVM generation, frame-function evaluation and marginality certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (default: ${ENV_SEED} or 0)")
        p.add_argument("--out", default=None, help="write the primary artifact to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       help="stdout/report format")
        p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE",
                       help="tolerance override, repeatable")

    p = sub.add_parser("gen-pvm", help="generate a seeded random PVM")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ranks", type=_int_list, default=None,
                   help="comma-separated projector ranks (default: all 1)")
    common(p)

    p = sub.add_parser("eval", help="evaluate a frame function on a PVM")
    p.add_argument("--frame", required=True, help="frame-function JSON file")
    p.add_argument("--pvm", default=None, help="PVM JSON file (default: generate from dim/ranks/seed)")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--ranks", type=_int_list, default=None)
    common(p)

    p = sub.add_parser("check-marginal", help="certify marginality of a frame function")
    p.add_argument("--frame", required=True)
    p.add_argument("--dim", type=int, default=None, help="expected dimension (cross-check)")
    common(p)

    p = sub.add_parser("reconstruct", help="reconstruct the candidate state from a frame function")
    p.add_argument("--frame", required=True)
    common(p)

    p = sub.add_parser("demo-counterexample",
                       help="non-quantum qubit assignment: normalized everywhere, yet non-marginal")
    p.add_argument("--rho-backed", action="store_true",
                   help="control case: use a Born-backed function instead")
    common(p)

    p = sub.add_parser("demo-intertwine",
                       help="shared-projector degrees for the composite measurement family")
    p.add_argument("--n-psi", type=int, default=10, help="number of family members")
    common(p)

    p = sub.add_parser("verify-suite", help="run the full invariant battery")
    p.add_argument("--dims", type=_int_list, default=[2, 3, 4])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--perturb", type=float, default=0.0,
                   help="inject this offset into normalization sums (fault mode)")
    common(p)

    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        seed = args.seed
    else:
        seed = int(os.environ.get(ENV_SEED, "0"))
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return seed


def _resolve_tolerances(args: argparse.Namespace) -> Tolerances:
    overrides = {}
    for item in args.tol:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"tolerance override {item!r} is not KEY=VALUE")
        overrides[key.strip()] = float(value)
    if not overrides:
        return DEFAULT_TOLERANCES
    return Tolerances.from_overrides(overrides)


def _pvm_residuals(m: PVM) -> tuple[float, float]:
    max_orth = 0.0
    for x in range(len(m.elements)):
        for y in range(x + 1, len(m.elements)):
            max_orth = max(max_orth, frobenius(m.elements[x].matrix @ m.elements[y].matrix))
    total = sum(e.matrix for e in m.elements)
    return max_orth, frobenius(total - identity(m.dim))


def _load_json(path: str):
    with open(path, "r") as handle:
        return json.load(handle)


def _config_echo(args: argparse.Namespace, seed: int, tol: Tolerances, extra: dict) -> dict:
    config = {
        "seed": seed,
        "format": args.format,
        "out": args.out,
        "tolerances": tol.to_dict(),
    }
    config.update(extra)
    return config


def _cmd_gen_pvm(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    ranks = args.ranks if args.ranks is not None else [1] * args.dim
    u = random_unitary(args.dim, seed)
    pvm = pvm_from_unitary(u, ranks, tol)
    max_orth, completeness = _pvm_residuals(pvm)
    pvm_json = pvm_to_json(pvm)
    config = _config_echo(args, seed, tol, {"dim": args.dim, "ranks": ranks})
    results = {
        "pvm": pvm_json,
        "checks": [
            checked("max_orthogonality_residual", max_orth, tol.pvm),
            checked("completeness_residual", completeness, tol.pvm),
        ],
    }
    summary = {
        "dim": pvm.dim,
        "outcomes": len(pvm),
        "max_orthogonality_residual": max_orth,
        "completeness_residual": completeness,
        "pass": max_orth <= tol.pvm and completeness <= tol.pvm,
    }
    report = build_report("gen-pvm", config, results, summary)
    return report, render_json(pvm_json), EXIT_OK


def _obtain_pvm(args, seed: int, tol: Tolerances) -> tuple[PVM, dict]:
    if args.pvm is not None:
        pvm = pvm_from_json(_load_json(args.pvm), tol)
        return pvm, {"pvm_file": args.pvm}
    if args.dim is None:
        raise ValueError("eval needs --pvm FILE or --dim (with optional --ranks)")
    ranks = args.ranks if args.ranks is not None else [1] * args.dim
    pvm = pvm_from_unitary(random_unitary(args.dim, seed), ranks, tol)
    return pvm, {"dim": args.dim, "ranks": ranks}


def _cmd_eval(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    frame = frame_from_json(_load_json(args.frame), tol)
    pvm, source = _obtain_pvm(args, seed, tol)
    if frame.dim != pvm.dim:
        raise DimensionMismatch(f"frame dim {frame.dim} != PVM dim {pvm.dim}")
    values = [frame(e) for e in pvm.elements]
    residual = check_normalization(frame, pvm)
    config = _config_echo(args, seed, tol, {"frame_file": args.frame, **source})
    results = {
        "values": [
            {"label": label, "value": value}
            for label, value in zip(pvm.labels, values)
        ],
        "normalization": checked("normalization_residual", residual, tol.frame),
    }
    summary = {
        "dim": pvm.dim,
        "outcomes": len(pvm),
        "normalization_residual": residual,
        "pass": residual <= tol.frame,
    }
    return build_report("eval", config, results, summary), None, EXIT_OK


def _cmd_check_marginal(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    frame = frame_from_json(_load_json(args.frame), tol)
    if args.dim is not None and args.dim != frame.dim:
        raise DimensionMismatch(f"frame dim {frame.dim} != requested dim {args.dim}")
    cert = certify_marginal(frame, spanning_projectors(frame.dim, tol), tol)
    cert_json = certificate_to_json(cert)
    config = _config_echo(args, seed, tol, {"frame_file": args.frame, "dim": frame.dim})
    results = {"certificate": cert_json}
    if cert.verdict is Verdict.NON_MARGINAL:
        results["witness_text"] = marginality_witness(cert)
    summary = {
        "verdict": cert.verdict.value,
        "linear_residual": cert.linear_residual,
        "min_eig": cert.min_eig,
        "pass": cert.verdict is Verdict.MARGINAL,
    }
    report = build_report("check-marginal", config, results, summary)
    return report, render_json(cert_json), _VERDICT_EXIT[cert.verdict]


def _cmd_reconstruct(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    frame = frame_from_json(_load_json(args.frame), tol)
    spanning = spanning_projectors(frame.dim, tol)
    rho_hat, residual = reconstruct_density(frame, spanning, tol)
    config = _config_echo(args, seed, tol, {"frame_file": args.frame, "dim": frame.dim})
    results = {
        "rho_hat": matrix_to_json(rho_hat),
        "linear_residual": checked("linear_residual", residual, tol.lin),
        "spanning_set_id": spanning.set_id,
        "condition_number": spanning.condition_number,
    }
    summary = {
        "dim": frame.dim,
        "linear_residual": residual,
        "consistent": residual <= tol.lin,
        "pass": True,
    }
    return build_report("reconstruct", config, results, summary), None, EXIT_OK


def _cmd_demo_counterexample(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    rng = np.random.default_rng(seed)
    if args.rho_backed:
        frame = born_backed(random_density_matrix(2, rng, tol), tol)
        expected = Verdict.MARGINAL
    else:
        frame = deterministic_qubit()
        expected = Verdict.NON_MARGINAL
    max_residual = 0.0
    n_pvms = 100
    for _ in range(n_pvms):
        pvm = random_qubit_pvm_pair(rng, tol)
        max_residual = max(max_residual, check_normalization(frame, pvm))
    cert = certify_marginal(frame, spanning_projectors(2, tol), tol)
    ok = max_residual <= tol.frame and cert.verdict is expected
    config = _config_echo(args, seed, tol, {"rho_backed": bool(args.rho_backed)})
    results = {
        "frame_repr": "born" if args.rho_backed else "deterministic",
        "normalization": {
            "pvms_checked": n_pvms,
            **checked("max_normalization_residual", max_residual, tol.frame),
        },
        "certificate": certificate_to_json(cert),
    }
    if cert.verdict is Verdict.NON_MARGINAL:
        results["witness_text"] = marginality_witness(cert)
    summary = {
        "verdict": cert.verdict.value,
        "expected_verdict": expected.value,
        "max_normalization_residual": max_residual,
        "pass": ok,
    }
    report = build_report("demo-counterexample", config, results, summary)
    return report, None, EXIT_OK if ok else EXIT_NON_MARGINAL


def _cmd_demo_intertwine(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    n = args.n_psi
    if n < 1:
        raise ValueError(f"--n-psi must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    family = []
    for _ in range(n):
        ket = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        family.append(measurement_family_mpsi(ket / np.linalg.norm(ket), tol))
    qubit_pvms = [
        pvm_from_unitary(haar_unitary(2, rng), [1, 1], tol) for _ in range(n)
    ]
    qubit_graph = intertwine_graph(qubit_pvms, tol.key)
    composite = family + [embed_pvm(m, 2, tol) for m in qubit_pvms]
    graph = intertwine_graph(composite, tol.key)
    pi_key = projector_key(family[0].elements[0], tol.key)
    pi_degree = graph.degree(pi_key)
    other_max = max((node.degree for node in graph.nodes if node.key != pi_key), default=0)
    ok = pi_degree == n and qubit_graph.max_degree() <= 1 and other_max <= 1
    config = _config_echo(args, seed, tol, {"n_psi": n})
    results = {
        "qubit_graph": graph_to_json(qubit_graph),
        "composite_graph": graph_to_json(graph),
        "shared_projector_key": pi_key,
    }
    summary = {
        "n_psi": n,
        "shared_projector_degree": pi_degree,
        "qubit_max_degree": qubit_graph.max_degree(),
        "other_composite_max_degree": other_max,
        "pass": ok,
    }
    report = build_report("demo-intertwine", config, results, summary)
    return report, None, EXIT_OK if ok else EXIT_NON_MARGINAL


def _battery_normalization(dims, trials, rng, tol, perturb):
    batteries = []
    for d in dims:
        failures = 0
        max_residual = 0.0
        for _ in range(trials):
            rho = random_density_matrix(d, rng, tol)
            pvm = pvm_from_unitary(haar_unitary(d, rng), random_rank_partition(d, rng), tol)
            frame = born_backed(rho, tol)
            total = sum(frame(e) for e in pvm.elements) + perturb
            residual = abs(total - 1.0)
            max_residual = max(max_residual, residual)
            if residual > tol.frame:
                failures += 1
        batteries.append({
            "name": "normalization",
            "dim": d,
            "trials": trials,
            "failures": failures,
            "max_residual": max_residual,
            "tolerance": tol.frame,
            "pass": failures == 0,
        })
    return batteries


def _battery_adjunction(dims, trials, rng, tol):
    batteries = []
    bound = 1e-12
    for d in dims:
        failures = 0
        max_dev = 0.0
        for _ in range(trials):
            rho_ab = random_density_matrix(d * 2, rng, tol)
            ket = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            p = projector_from_ket(ket, tol)
            full = np.trace(np.kron(p.matrix, identity(2)) @ rho_ab.matrix).real
            reduced = np.trace(p.matrix @ partial_trace_b(rho_ab, d, 2, tol).matrix).real
            dev = abs(full - reduced)
            max_dev = max(max_dev, dev)
            if dev > bound:
                failures += 1
        batteries.append({
            "name": "embed_trace_identity",
            "dim": d,
            "trials": trials,
            "failures": failures,
            "max_residual": max_dev,
            "tolerance": bound,
            "pass": failures == 0,
        })
    return batteries


def _battery_extension(dims, trials, rng, tol):
    batteries = []
    bound = 1e-12
    for d in dims:
        failures = 0
        max_dev = 0.0
        for _ in range(trials):
            rho_f = random_density_matrix(d, rng, tol)
            sigma = random_density_matrix(2, rng, tol)
            projectors = []
            for _ in range(10):
                ket = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                projectors.append(projector_from_ket(ket, tol))
            pt_err, dev = verify_extension(rho_f, sigma, projectors, tol)
            worst = max(pt_err, dev)
            max_dev = max(max_dev, worst)
            if worst > bound:
                failures += 1
        batteries.append({
            "name": "composite_extension",
            "dim": d,
            "trials": trials,
            "failures": failures,
            "max_residual": max_dev,
            "tolerance": bound,
            "pass": failures == 0,
        })
    return batteries


def _battery_soundness(dims, trials, rng, tol):
    batteries = []
    bound = 1e-9
    for d in dims:
        failures = 0
        non_marginal = 0
        max_err = 0.0
        spanning = spanning_projectors(d, tol)
        for _ in range(trials):
            rho = random_density_matrix(d, rng, tol)
            cert = certify_marginal(born_backed(rho, tol), spanning, tol)
            err = float(np.linalg.norm(cert.rho_hat - rho.matrix, "fro"))
            max_err = max(max_err, err)
            if cert.verdict is not Verdict.MARGINAL:
                non_marginal += 1
                failures += 1
            elif err > bound:
                failures += 1
        batteries.append({
            "name": "reconstruction_soundness",
            "dim": d,
            "trials": trials,
            "failures": failures,
            "non_marginal_count": non_marginal,
            "max_residual": max_err,
            "tolerance": bound,
            "pass": failures == 0,
        })
    return batteries


def _cmd_verify_suite(args, seed: int, tol: Tolerances) -> tuple[dict, str | None, int]:
    dims = args.dims
    trials = args.trials
    if trials < 0:
        raise ValueError(f"--trials must be >= 0, got {trials}")
    for d in dims:
        if not 2 <= d <= 8:
            raise ValueError(f"--dims entries must be in 2..8, got {d}")
    rng = np.random.default_rng(seed)
    batteries = []
    batteries += _battery_normalization(dims, trials, rng, tol, args.perturb)
    batteries += _battery_adjunction(dims, trials, rng, tol)
    batteries += _battery_extension(dims, trials, rng, tol)
    batteries += _battery_soundness(dims, trials, rng, tol)
    failures = sum(b["failures"] for b in batteries)
    total = sum(b["trials"] for b in batteries)
    config = _config_echo(args, seed, tol, {
        "dims": list(dims), "trials": trials, "perturb": args.perturb,
    })
    results = {"batteries": batteries}
    summary = {
        "total_trials": total,
        "total_failures": failures,
        "batteries": len(batteries),
        "pass": failures == 0,
    }
    report = build_report("verify-suite", config, results, summary)
    return report, None, EXIT_OK if failures == 0 else EXIT_NON_MARGINAL


_HANDLERS = {
    "gen-pvm": _cmd_gen_pvm,
    "eval": _cmd_eval,
    "check-marginal": _cmd_check_marginal,
    "reconstruct": _cmd_reconstruct,
    "demo-counterexample": _cmd_demo_counterexample,
    "demo-intertwine": _cmd_demo_intertwine,
    "verify-suite": _cmd_verify_suite,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = _resolve_tolerances(args)
        seed = _resolve_seed(args)
        report, artifact_text, code = _HANDLERS[args.command](args, seed, tol)
        rendered = render_report(report, args.format)
        if args.out is not None:
            if artifact_text is None:
                artifact_text = rendered
            write_atomic(artifact_text, args.out)
        sys.stdout.write(rendered)
        return code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GleasonLabError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
