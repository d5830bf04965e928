"""File formats and canonical serialization.

Conventions fixed here and relied on by the golden tests:

* matrices: ``{"rows": n, "cols": n, "entries": [[re, im], ...]}`` row-major;
  a plain numeric CSV grid is accepted for real matrices;
* vectors: ``{"entries": [[re, im], ...]}``;
* schemes: ``{"omega": [...], "budgets": [...]}`` or ``{"omega": [...], "L": n}``
  with 1-based sites on disk, 0-based in the library;
* samples: ``{"scheme": ..., "values": [[re, im], ...], "noise": {...}|null}``
  in site-major, time-ascending order;
* sequences: ``{"lambdas": [[re, im], ...], "b": ...|null}`` or a generator
  spec ``{"family": "geometric"|"polynomial", ..., "K": n}``.

Serialization is deterministic: keys sorted, floats written with their
shortest round-trip representation (lossless at double precision), arrays in
fixed row-major order.  Identical inputs produce identical bytes.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, is_dataclass

import numpy as np

from .exceptions import DegenerateInput
from .feasibility import FeasibilityReport, SamplingScheme
from .hardy import (
    CarlesonReport,
    DiskSequence,
    FrameVerdict,
    GramianReport,
    sequence_from_spec,
)
from .sampling import FrameReport, ReconstructionResult, TimeSpaceSamples
from .placement import PlacementResult


# ---------------------------------------------------------------- helpers

def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _pairs(values) -> list[list[float]]:
    return [_pair(z) for z in np.asarray(values).reshape(-1)]


def _from_pairs(pairs, name: str) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DegenerateInput(f"{name}: expected [[re, im], ...] pairs: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DegenerateInput(f"{name}: expected [[re, im], ...] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex values."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [_pair(z) for z in obj.reshape(-1)]
        return [_jsonable(v) for v in obj.reshape(-1)]
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(complex(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def canonical_json(obj) -> str:
    """Deterministic JSON rendering: sorted keys, fixed separators."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2,
                      ensure_ascii=True) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dynsamp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DegenerateInput(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}") from None


# ---------------------------------------------------------------- matrices

def matrix_to_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"rows": M.shape[0], "cols": M.shape[1],
            "entries": _pairs(M.reshape(-1))}


def matrix_from_dict(data: dict, name: str = "matrix") -> np.ndarray:
    for key in ("rows", "cols", "entries"):
        if key not in data:
            raise DegenerateInput(f"{name}: missing key {key!r}")
    rows, cols = int(data["rows"]), int(data["cols"])
    flat = _from_pairs(data["entries"], f"{name}.entries")
    if flat.size != rows * cols:
        raise DegenerateInput(
            f"{name}: rows*cols = {rows * cols} but got {flat.size} entries")
    return flat.reshape(rows, cols)


def load_matrix(path: str) -> np.ndarray:
    """Matrix from JSON, or from a plain numeric CSV grid (real entries)."""
    if path.lower().endswith(".csv"):
        try:
            M = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
        except ValueError as exc:
            raise DegenerateInput(f"{path}: cannot parse CSV grid: {exc}") from None
        return M.astype(complex)
    return matrix_from_dict(_load_json(path), path)


def save_matrix(path: str, M) -> None:
    atomic_write_text(path, canonical_json(matrix_to_dict(M)))


# ---------------------------------------------------------------- vectors

def vector_to_dict(v) -> dict:
    return {"entries": _pairs(v)}


def load_vector(path: str) -> np.ndarray:
    data = _load_json(path)
    if "entries" not in data:
        raise DegenerateInput(f"{path}: vector file must contain 'entries'")
    return _from_pairs(data["entries"], f"{path}.entries")


def save_vector(path: str, v) -> None:
    atomic_write_text(path, canonical_json(vector_to_dict(v)))


# ---------------------------------------------------------------- schemes

def scheme_to_dict(scheme: SamplingScheme) -> dict:
    out: dict = {"omega": [i + 1 for i in scheme.omega]}
    if scheme.budgets is not None:
        out["budgets"] = list(scheme.budgets)
    else:
        out["L"] = scheme.L
    return out


def scheme_from_dict(data: dict, name: str = "scheme") -> SamplingScheme:
    if "omega" not in data:
        raise DegenerateInput(f"{name}: missing 'omega'")
    omega = [int(i) - 1 for i in data["omega"]]
    if any(i < 0 for i in omega):
        raise DegenerateInput(f"{name}: site indices are 1-based on disk")
    budgets = data.get("budgets")
    L = data.get("L")
    return SamplingScheme(omega, budgets, L)


def load_scheme(path: str) -> SamplingScheme:
    return scheme_from_dict(_load_json(path), path)


def save_scheme(path: str, scheme: SamplingScheme) -> None:
    atomic_write_text(path, canonical_json(scheme_to_dict(scheme)))


# ---------------------------------------------------------------- samples

def samples_to_dict(samples: TimeSpaceSamples) -> dict:
    noise = None
    if samples.noise_sigma > 0:
        noise = {"sigma": samples.noise_sigma, "seed": samples.noise_seed}
    return {"scheme": scheme_to_dict(samples.scheme),
            "values": _pairs(samples.values), "noise": noise}


def load_samples(path: str) -> TimeSpaceSamples:
    data = _load_json(path)
    if "scheme" not in data or "values" not in data:
        raise DegenerateInput(f"{path}: samples file needs 'scheme' and 'values'")
    scheme = scheme_from_dict(data["scheme"], f"{path}.scheme")
    values = _from_pairs(data["values"], f"{path}.values")
    noise = data.get("noise") or {}
    return TimeSpaceSamples(scheme, values,
                            float(noise.get("sigma", 0.0)),
                            noise.get("seed"))


def save_samples(path: str, samples: TimeSpaceSamples) -> None:
    atomic_write_text(path, canonical_json(samples_to_dict(samples)))


# ---------------------------------------------------------------- sequences

def sequence_from_dict(data: dict, name: str = "sequence"):
    """Returns (DiskSequence, b or None) from either explicit or generator form."""
    if "family" in data:
        seq = sequence_from_spec(data)
        return seq, None
    if "lambdas" not in data:
        raise DegenerateInput(f"{name}: need 'lambdas' or a generator 'family'")
    lams = _from_pairs(data["lambdas"], f"{name}.lambdas")
    seq = DiskSequence(lams)
    b = None
    if data.get("b") is not None:
        b = _from_pairs(data["b"], f"{name}.b")
    return seq, b


def load_sequence(path: str):
    return sequence_from_dict(_load_json(path), path)


# ---------------------------------------------------------------- factorization

def load_factorization(path: str) -> tuple[np.ndarray, np.ndarray]:
    data = _load_json(path)
    for key in ("B", "J"):
        if key not in data:
            raise DegenerateInput(f"{path}: factorization needs 'B' and 'J'")
    B = matrix_from_dict(data["B"], f"{path}.B")
    J = matrix_from_dict(data["J"], f"{path}.J")
    return B, J


# ---------------------------------------------------------------- reports

def feasibility_report_to_dict(report: FeasibilityReport) -> dict:
    return {
        "feasible": report.feasible,
        "method": report.method,
        "per_eigenvalue": [
            {"eigenvalue": _pair(d.eigenvalue),
             "required_rank": d.required_rank,
             "achieved_rank": d.achieved_rank}
            for d in report.per_eigenvalue
        ],
        "witnesses": [_pair(w) for w in report.witnesses],
        "used_budgets": list(report.used_budgets),
        "inert_sites": [i + 1 for i in report.inert_sites],
        "warnings": list(report.warnings),
    }


def frame_report_to_dict(report: FrameReport) -> dict:
    return {
        "lower": report.lower,
        "upper": report.upper,
        "condition_number": report.condition_number,
        "feasible": report.feasible,
        "rank": report.rank,
        "singular_values": [float(s) for s in report.singular_values],
    }


def placement_result_to_dict(result: PlacementResult) -> dict:
    return {
        "omega": [i + 1 for i in result.omega],
        "size": result.size,
        "method": result.method,
        "optimal": result.optimal,
        "certificate": feasibility_report_to_dict(result.certificate),
    }


def reconstruction_to_dict(result: ReconstructionResult) -> dict:
    return {
        "estimate": _pairs(result.estimate),
        "residual": result.residual,
        "underdetermined": result.underdetermined,
        "warnings": list(result.warnings),
        "frame": frame_report_to_dict(result.frame),
    }


def carleson_report_to_dict(report: CarlesonReport) -> dict:
    return {
        "K": report.K,
        "products": [float(p) for p in report.products],
        "infimum": report.infimum,
        "coincident": report.coincident,
    }


def gramian_report_to_dict(report: GramianReport) -> dict:
    return {
        "K": report.K,
        "min_eigenvalue": report.min_eigenvalue,
        "max_eigenvalue": report.max_eigenvalue,
        "condition_number": report.condition_number,
        "series_max_deviation": report.series_max_deviation,
        "series_checked_fraction": report.series_checked_fraction,
        "note": report.note,
    }


def frame_verdict_to_dict(verdict: FrameVerdict) -> dict:
    return {
        "K": verdict.K,
        "overall": verdict.overall,
        "note": verdict.note,
        "conditions": {
            key: {"passed": c.passed, "statistic": c.statistic, "detail": c.detail}
            for key, c in verdict.conditions().items()
        },
    }
