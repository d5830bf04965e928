"""The space-time sampling operator: forward model, stability, reconstruction.

The operator maps a signal f to the sample list ``(A^j f)(i)`` for sites i
and powers j in the scheme's (site-major, time-ascending) order.  Its rows
are conjugated adjoint iterates, so the squared extreme singular values are
exactly the stability constants of the sampling inequality
``c1 ||f||^2 <= sum |samples|^2 <= c2 ||f||^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_square_matrix, as_complex_vector, check_positive
from .exceptions import DegenerateInput
from .feasibility import SamplingScheme, brute_force_feasible
from .spectral import default_rank_tol


def build_sampling_matrix(A, scheme: SamplingScheme) -> np.ndarray:
    """Matrix M with M @ f = samples of f under the scheme.

    Rows are ordered site-major, time-minor: for each site in omega order,
    powers j = 0..l_i ascending.
    """
    A = as_square_matrix(A, "A")
    d = A.shape[0]
    scheme.validate(d)
    Ah = A.conj().T
    rows = []
    for i, l in zip(scheme.omega, scheme.budget_list()):
        v = np.zeros(d, dtype=complex)
        v[i] = 1.0
        for _ in range(l + 1):
            rows.append(np.conj(v))
            v = Ah @ v
    return np.stack(rows, axis=0)


@dataclass
class FrameReport:
    """Stability constants of a row stack: extreme eigenvalues of M*M."""

    lower: float
    upper: float
    feasible: bool
    singular_values: np.ndarray
    rank: int
    rank_tol: float

    @property
    def condition_number(self) -> float:
        if self.lower <= 0:
            return float("inf")
        return float(np.sqrt(self.upper / self.lower))


def frame_bounds(M, rank_tol: float | None = None) -> FrameReport:
    """Lower/upper bounds of ``c1 ||f||^2 <= ||M f||^2 <= c2 ||f||^2``.

    ``feasible`` reflects the numerical-rank verdict: the smallest squared
    singular value must clear the rank threshold.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        raise DegenerateInput("frame_bounds: empty matrix")
    d = M.shape[1]
    if rank_tol is None:
        rank_tol = default_rank_tol(max(M.shape))
    check_positive(rank_tol, "rank_tol")
    s = np.linalg.svd(M, compute_uv=False)
    smin = float(s[-1]) if M.shape[0] >= d else 0.0
    smax = float(s[0])
    cutoff = rank_tol * smax
    rank = int(np.sum(s > cutoff))
    return FrameReport(
        lower=smin**2,
        upper=smax**2,
        feasible=rank == d and smin > cutoff,
        singular_values=s,
        rank=rank,
        rank_tol=rank_tol,
    )


@dataclass
class TimeSpaceSamples:
    """Sample values in scheme order, with optional noise provenance."""

    scheme: SamplingScheme
    values: np.ndarray
    noise_sigma: float = 0.0
    noise_seed: int | None = None

    def __post_init__(self):
        self.values = as_complex_vector(self.values, name="values")
        if self.values.size != self.scheme.n_samples:
            raise DegenerateInput(
                f"expected {self.scheme.n_samples} sample values, got {self.values.size}")


def simulate_samples(A, scheme: SamplingScheme, f, sigma: float = 0.0,
                     seed: int = 0) -> TimeSpaceSamples:
    """Exact samples M f plus optional complex white noise.

    Noise draws are i.i.d. with standard deviation sigma/sqrt(2) per real
    and imaginary part, so E|eta_k|^2 = sigma^2; a fixed seed reproduces
    the identical sample set.
    """
    A = as_square_matrix(A, "A")
    d = A.shape[0]
    f = as_complex_vector(f, d, "f")
    if sigma < 0:
        raise DegenerateInput("sigma must be nonnegative")
    M = build_sampling_matrix(A, scheme)
    values = M @ f
    if sigma > 0:
        rng = np.random.default_rng(seed)
        eta = rng.normal(scale=sigma / np.sqrt(2), size=values.size) \
            + 1j * rng.normal(scale=sigma / np.sqrt(2), size=values.size)
        values = values + eta
    return TimeSpaceSamples(scheme, values, float(sigma), seed if sigma > 0 else None)


@dataclass
class ReconstructionResult:
    """Least-squares reconstruction with stability diagnostics."""

    estimate: np.ndarray
    residual: float
    frame: FrameReport
    underdetermined: bool
    warnings: list[str] = field(default_factory=list)


def reconstruct(A, samples: TimeSpaceSamples,
                rank_tol: float | None = None) -> ReconstructionResult:
    """Minimum-norm least-squares inversion of the sampling operator via SVD.

    When the scheme is not feasible the minimum-norm solution is still
    returned but flagged ``underdetermined`` (components outside the row
    space are unrecoverable); callers decide whether that is an error.
    """
    A = as_square_matrix(A, "A")
    d = A.shape[0]
    M = build_sampling_matrix(A, samples.scheme)
    y = as_complex_vector(samples.values, M.shape[0], "values")
    report = frame_bounds(M, rank_tol)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    cutoff = report.rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    f_hat = Vh.conj().T @ (inv * (U.conj().T @ y))
    residual = float(np.linalg.norm(M @ f_hat - y))
    # scheme-level verdict from the oracle, robust to long noisy power chains
    feasible = brute_force_feasible(A, samples.scheme, report.rank_tol)
    warnings = []
    if not feasible:
        warnings.append("scheme is not feasible: minimum-norm solution returned")
    return ReconstructionResult(
        estimate=f_hat,
        residual=residual,
        frame=report,
        underdetermined=not feasible,
        warnings=warnings,
    )
