"""Command-line front end.

Every command is a thin wrapper over library calls: it loads files, invokes
the corresponding functions, and serializes their reports.  Exit codes:
0 success / feasible, 2 well-formed negative verdict, 1 error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys

import numpy as np

from . import __version__
from .demo import COMPANION_3, MATRICES
from .exceptions import DynsampError, NotDiagonalizable, NotFound
from .feasibility import (
    SamplingScheme,
    brute_force_feasible,
    check_diagonalizable,
    check_fixed_L,
    check_jordan,
    minimal_uniform_L,
    rational_form_counterexample,
)
from .hardy import (
    carleson_products,
    circulant_riesz_demo,
    one_point_frame_verdict,
    reference_weights,
    truncated_gramian,
)
from .io import (
    atomic_write_text,
    canonical_json,
    carleson_report_to_dict,
    feasibility_report_to_dict,
    frame_report_to_dict,
    frame_verdict_to_dict,
    gramian_report_to_dict,
    load_factorization,
    load_matrix,
    load_samples,
    load_scheme,
    load_sequence,
    load_vector,
    placement_result_to_dict,
    reconstruction_to_dict,
    samples_to_dict,
    scheme_to_dict,
    sequence_from_dict,
    vector_to_dict,
)
from .placement import greedy_placement, minimal_placement_exhaustive
from .sampling import build_sampling_matrix, frame_bounds, reconstruct, simulate_samples
from .spectral import JordanStructure, eigendecompose, jordan_structure

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _parse_k_list(text: str) -> list[int]:
    ks = [int(t) for t in text.split(",") if t.strip()]
    if not ks or ks != sorted(ks):
        raise DynsampError(f"--K must be an ascending comma list, got {text!r}")
    return ks


def _parse_sites(text: str) -> list[int]:
    """1-based comma list on the command line, 0-based internally."""
    sites = [int(t) - 1 for t in text.split(",") if t.strip()]
    if not sites:
        raise DynsampError("empty site list")
    return sites


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = canonical_json(report)
    else:
        text = _render_text(report)
    sys.stdout.write(text)
    if getattr(args, "out", None):
        atomic_write_text(args.out, text)


def _render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key in obj:
            val = obj[key]
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(val)}")
        return "\n".join(lines) + ("\n" if indent == 0 else "")
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_scalar_text(v)}" if not isinstance(v, (dict, list))
                         else f"{pad}-\n{_render_text(v, indent + 1)}" for v in obj)
    return f"{pad}{_scalar_text(obj)}"


def _scalar_text(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _structure_for(A, args):
    """Auto-select the spectral path; returns (kind, structure)."""
    if getattr(args, "factorization", None):
        B, J = load_factorization(args.factorization)
        return "jordan", JordanStructure.from_factorization(B, J, args.tol_rank, A=A)
    try:
        return "diagonalizable", eigendecompose(A, args.tol_cluster, args.tol_rank)
    except NotDiagonalizable:
        return "jordan", jordan_structure(A, args.tol_cluster, args.tol_rank)


def cmd_analyze(args) -> int:
    A = load_matrix(args.matrix)
    scheme = load_scheme(args.scheme)
    scheme.validate(A.shape[0])
    kind, structure = _structure_for(A, args)
    if scheme.L is not None:
        js = structure if kind == "jordan" else JordanStructure.from_spectral(structure)
        _, structural = check_fixed_L(js, scheme.omega, scheme.L)
    elif kind == "diagonalizable":
        structural = check_diagonalizable(structure, scheme.omega)
    else:
        structural = check_jordan(structure, scheme.omega)
    oracle = brute_force_feasible(A, scheme, args.tol_rank)
    M = build_sampling_matrix(A, scheme)
    frame = frame_bounds(M, args.tol_rank)
    report = {
        "command": "analyze",
        "dimension": A.shape[0],
        "scheme": scheme_to_dict(scheme),
        "spectral_path": kind,
        "structural": feasibility_report_to_dict(structural),
        "oracle_feasible": oracle,
        "frame": frame_report_to_dict(frame),
        "feasible": oracle,
    }
    _emit(report, args)
    return EXIT_OK if oracle else EXIT_NEGATIVE


def cmd_reconstruct(args) -> int:
    A = load_matrix(args.matrix)
    samples = load_samples(args.samples)
    result = reconstruct(A, samples, args.tol_rank)
    report = {
        "command": "reconstruct",
        "dimension": A.shape[0],
        "scheme": scheme_to_dict(samples.scheme),
        "result": reconstruction_to_dict(result),
    }
    _emit(report, args)
    if args.signal_out:
        atomic_write_text(args.signal_out, canonical_json(vector_to_dict(result.estimate)))
    return EXIT_NEGATIVE if result.underdetermined else EXIT_OK


def cmd_sample(args) -> int:
    A = load_matrix(args.matrix)
    scheme = load_scheme(args.scheme)
    f = load_vector(args.signal)
    samples = simulate_samples(A, scheme, f, args.sigma, args.seed)
    report = samples_to_dict(samples)
    _emit(report, args)
    return EXIT_OK


def cmd_place(args) -> int:
    A = load_matrix(args.matrix)
    js = jordan_structure(A, args.tol_cluster, args.tol_rank)
    if args.greedy:
        result = greedy_placement(js)
    else:
        result = minimal_placement_exhaustive(js, args.size_cap)
    if result is None:
        _emit({"command": "place", "found": False,
               "size_cap": args.size_cap}, args)
        return EXIT_NEGATIVE
    report = {"command": "place", "found": True}
    report.update(placement_result_to_dict(result))
    _emit(report, args)
    return EXIT_OK


def cmd_minimal_l(args) -> int:
    A = load_matrix(args.matrix)
    omega = _parse_sites(args.omega)
    js = jordan_structure(A, args.tol_cluster, args.tol_rank)
    L = minimal_uniform_L(js, omega, args.l_max)
    report = {
        "command": "minimal-l",
        "omega": [i + 1 for i in omega],
        "l_max": args.l_max,
        "minimal_L": L,
        "found": L is not None,
    }
    _emit(report, args)
    return EXIT_OK if L is not None else EXIT_NEGATIVE


def _load_cli_sequence(args):
    if args.sequence in ("geometric", "polynomial"):
        spec = {"family": args.sequence, "K": max(args.K_list),
                "rate": args.rate, "power": args.power}
        return sequence_from_dict(spec)
    return load_sequence(args.sequence)


def cmd_carleson(args) -> int:
    args.K_list = _parse_k_list(args.K)
    seq, b = _load_cli_sequence(args)
    per_k = []
    products_rows = []
    gram_rows = []
    for K in args.K_list:
        K = min(K, seq.K)
        sub = seq.truncate(K)
        car = carleson_products(sub)
        gram = truncated_gramian(sub)
        bK = b[:K] if b is not None else reference_weights(sub)
        verdict = one_point_frame_verdict(sub, bK, delta_tol=args.delta)
        per_k.append({
            "K": K,
            "carleson": carleson_report_to_dict(car),
            "gramian": gramian_report_to_dict(gram),
            "verdict": frame_verdict_to_dict(verdict),
        })
        for n, p in enumerate(car.products, start=1):
            products_rows.append((K, n, p))
        gram_rows.append((K, gram.min_eigenvalue, gram.max_eigenvalue))
    report = {"command": "carleson", "K_list": args.K_list, "per_K": per_k}
    _emit(report, args)
    if args.csv:
        _write_csv(f"{args.csv}_products.csv", ("K", "n", "product"), products_rows)
        _write_csv(f"{args.csv}_gramian.csv",
                   ("K", "min_eigenvalue", "max_eigenvalue"), gram_rows)
    overall = per_k[-1]["verdict"]["overall"]
    return EXIT_OK if overall else EXIT_NEGATIVE


def cmd_gramian(args) -> int:
    args.K_list = _parse_k_list(args.K)
    seq, _ = _load_cli_sequence(args)
    per_k = []
    for K in args.K_list:
        K = min(K, seq.K)
        per_k.append(gramian_report_to_dict(truncated_gramian(seq.truncate(K))))
    report = {"command": "gramian", "K_list": args.K_list, "per_K": per_k}
    _emit(report, args)
    return EXIT_OK


def _write_csv(path: str, header, rows) -> None:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_scalar_text(v) if isinstance(v, float) else v for v in row])
    atomic_write_text(path, buf.getvalue())


def cmd_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    sections = {}
    featured = {
        "P": [([1], {"L": 4}), ([2], {"L": 20}), ([2, 3, 4], {"budgets": [1, 1, 1]})],
        "Q": [([0, 1, 3], {"budgets": [4, 4, 1]}), ([0, 1, 2], {"L": 20})],
        "R": [([0, 2], {"L": 5}), ([0, 1], {"L": 20})],
    }
    for name, A in MATRICES.items():
        d = A.shape[0]
        kind, structure = _structure_for(A, args)
        entry: dict = {"spectral_path": kind}
        if kind == "jordan":
            entry["block_sizes"] = {f"{b.eigenvalue.real:g}": list(b.sizes)
                                    for b in structure.blocks}
        else:
            entry["multiplicities"] = {f"{lam.real:g}": int(h) for lam, h in
                                       zip(structure.eigenvalues, structure.multiplicities)}
        js = structure if kind == "jordan" else jordan_structure(A)
        placement = minimal_placement_exhaustive(js)
        entry["minimal_sites"] = [i + 1 for i in placement.omega] if placement else None
        schemes = []
        for omega, kw in featured[name]:
            scheme = SamplingScheme(omega, kw.get("budgets"), kw.get("L"))
            feasible = brute_force_feasible(A, scheme, args.tol_rank)
            item = {"scheme": scheme_to_dict(scheme), "feasible": feasible}
            if feasible:
                f = rng.normal(size=d) + 1j * rng.normal(size=d)
                samples = simulate_samples(A, scheme, f, 0.0, args.seed)
                rec = reconstruct(A, samples, args.tol_rank)
                item["roundtrip_rel_error"] = float(
                    np.linalg.norm(rec.estimate - f) / np.linalg.norm(f))
            schemes.append(item)
        entry["schemes"] = schemes
        sections[name] = entry
    circ = {}
    for m in (2, 4, 10):
        res = circulant_riesz_demo(m)
        circ[str(m)] = {"dim": res.dim, "rank": res.rank, "is_basis": res.is_basis,
                        "condition_number": res.condition_number}
    sections["circulant"] = circ
    try:
        witness = rational_form_counterexample(COMPANION_3, seed=args.seed)
        sections["companion_witness"] = [float(x.real) for x in witness]
    except NotFound:
        sections["companion_witness"] = None
    _emit({"command": "demo", "sections": sections}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynsamp",
        description="Space-time sampling feasibility, reconstruction, sensor "
                    "placement, and disk-sequence frame diagnostics.")
    parser.add_argument("--version", action="version", version=f"dynsamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None, help="also write the report here")
        if tol:
            p.add_argument("--tol-rank", type=float, default=None, dest="tol_rank")
            p.add_argument("--tol-cluster", type=float, default=None, dest="tol_cluster")

    p = sub.add_parser("analyze", help="feasibility + stability of a scheme")
    p.add_argument("matrix")
    p.add_argument("scheme")
    p.add_argument("--factorization", default=None,
                   help="JSON file with a supplied {B, J} similarity")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="least-squares signal recovery")
    p.add_argument("matrix")
    p.add_argument("samples")
    p.add_argument("--signal-out", default=None, help="write the estimate vector here")
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("sample", help="simulate a sample set")
    p.add_argument("matrix")
    p.add_argument("scheme")
    p.add_argument("signal")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("place", help="search sensor placements")
    p.add_argument("matrix")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", default=True)
    group.add_argument("--greedy", action="store_true", default=False)
    p.add_argument("--size-cap", type=int, default=None, dest="size_cap")
    common(p)
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("minimal-l", help="smallest uniform budget for a site set")
    p.add_argument("matrix")
    p.add_argument("--omega", required=True, help="1-based comma list, e.g. 1,3")
    p.add_argument("--l-max", type=int, default=20, dest="l_max")
    common(p)
    p.set_defaults(func=cmd_minimal_l)

    p = sub.add_parser("carleson", help="separation products, Gramian, verdict")
    p.add_argument("sequence",
                   help="sequence JSON file, or 'geometric'/'polynomial'")
    p.add_argument("--K", default="25,50,100")
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--power", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--csv", default=None, help="prefix for plot-data CSV files")
    common(p, tol=False)
    p.set_defaults(func=cmd_carleson)

    p = sub.add_parser("gramian", help="truncated Gramian eigenvalue report")
    p.add_argument("sequence")
    p.add_argument("--K", default="25,50,100")
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--power", type=float, default=2.0)
    common(p, tol=False)
    p.set_defaults(func=cmd_gramian)

    p = sub.add_parser("demo", help="run the built-in fixtures end to end")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DynsampError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
