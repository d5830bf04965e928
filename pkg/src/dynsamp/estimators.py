"""Estimator-style front ends so the toolkit composes with the ML ecosystem.

The operator is what gets fitted: ``fit(A)`` precomputes whatever spectral
or sampling structure the task needs, after which transform/predict-style
calls are cheap.  All fitted attributes carry the trailing underscore
convention and ``get_params``/``set_params`` come from
:class:`sklearn.base.BaseEstimator`.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_square_matrix
from .exceptions import NotDiagonalizable
from .feasibility import (
    FeasibilityReport,
    SamplingScheme,
    brute_force_feasible,
    check_diagonalizable,
    check_fixed_L,
    check_jordan,
)
from .placement import greedy_placement, minimal_placement_exhaustive
from .sampling import (
    TimeSpaceSamples,
    build_sampling_matrix,
    frame_bounds,
    reconstruct,
    simulate_samples,
)
from .spectral import eigendecompose, jordan_structure


class SpaceTimeSampler(TransformerMixin, BaseEstimator):
    """Forward space-time sampling operator with a stable inverse.

    Parameters
    ----------
    omega : sequence of int
        0-based site indices.
    budgets : sequence of int, optional
        Per-site largest applied power; mutually exclusive with ``L``.
    L : int, optional
        Uniform budget for every site.
    rank_tol : float, optional
        Relative singular-value threshold; library default when None.

    After ``fit(A)``, ``transform`` maps signals (rows) to their sample
    vectors and ``inverse_transform`` maps sample vectors back to
    least-squares signal estimates.
    """

    def __init__(self, omega=(0,), budgets=None, L=None, rank_tol=None):
        self.omega = omega
        self.budgets = budgets
        self.L = L
        self.rank_tol = rank_tol

    def _scheme(self) -> SamplingScheme:
        budgets = list(self.budgets) if self.budgets is not None else None
        return SamplingScheme(list(self.omega), budgets, self.L)

    def fit(self, X, y=None):
        A = as_square_matrix(X, "X")
        self.operator_ = A
        self.scheme_ = self._scheme()
        self.scheme_.validate(A.shape[0])
        self.sampling_matrix_ = build_sampling_matrix(A, self.scheme_)
        self.frame_report_ = frame_bounds(self.sampling_matrix_, self.rank_tol)
        self.feasible_ = brute_force_feasible(A, self.scheme_, self.rank_tol)
        self.condition_number_ = self.frame_report_.condition_number
        self.n_features_in_ = A.shape[0]
        return self

    def transform(self, X):
        """Sample each signal (rows of X); a single vector is also accepted."""
        check_is_fitted(self, "sampling_matrix_")
        F = np.asarray(X, dtype=complex)
        single = F.ndim == 1
        F = np.atleast_2d(F)
        out = F @ self.sampling_matrix_.T
        return out[0] if single else out

    def inverse_transform(self, Y):
        """Least-squares signal estimates from sample vectors (rows of Y)."""
        check_is_fitted(self, "sampling_matrix_")
        Y = np.asarray(Y, dtype=complex)
        single = Y.ndim == 1
        Y = np.atleast_2d(Y)
        M = self.sampling_matrix_
        U, s, Vh = np.linalg.svd(M, full_matrices=False)
        cutoff = self.frame_report_.rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
        inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
        out = (Vh.conj().T * inv) @ (U.conj().T @ Y.T)
        out = out.T
        return out[0] if single else out

    def sample(self, f, sigma: float = 0.0, seed: int = 0) -> TimeSpaceSamples:
        """Simulate one sample set, optionally noisy, reproducible per seed."""
        check_is_fitted(self, "operator_")
        return simulate_samples(self.operator_, self.scheme_, f, sigma, seed)

    def reconstruct(self, samples: TimeSpaceSamples):
        """Full reconstruction with diagnostics for one sample set."""
        check_is_fitted(self, "operator_")
        return reconstruct(self.operator_, samples, self.rank_tol)


class RecoverabilityAnalyzer(BaseEstimator):
    """Decides which site sets allow stable recovery under a fitted operator.

    ``fit(A)`` computes the spectral structure (diagonalization when it
    certifies, block structure otherwise); ``predict`` then labels
    candidate site sets, and ``report``/``fixed_budget``/``minimal_budget``
    expose the detailed criteria.
    """

    def __init__(self, method="auto", cluster_tol=None, rank_tol=None,
                 cond_cap=1e8):
        self.method = method
        self.cluster_tol = cluster_tol
        self.rank_tol = rank_tol
        self.cond_cap = cond_cap

    def fit(self, X, y=None):
        A = as_square_matrix(X, "X")
        self.operator_ = A
        if self.method not in ("auto", "diagonalizable", "jordan"):
            raise ValueError(f"unknown method {self.method!r}")
        structure = None
        used = None
        if self.method in ("auto", "diagonalizable"):
            try:
                structure = eigendecompose(A, self.cluster_tol, self.rank_tol,
                                           self.cond_cap)
                used = "diagonalizable"
            except NotDiagonalizable:
                if self.method == "diagonalizable":
                    raise
        if structure is None:
            structure = jordan_structure(A, self.cluster_tol, self.rank_tol,
                                         self.cond_cap)
            used = "jordan"
        self.structure_ = structure
        self.method_used_ = used
        self.trusted_ = getattr(structure, "trusted", True)
        self.n_features_in_ = A.shape[0]
        return self

    def report(self, omega) -> FeasibilityReport:
        check_is_fitted(self, "structure_")
        if self.method_used_ == "diagonalizable":
            return check_diagonalizable(self.structure_, omega)
        return check_jordan(self.structure_, omega)

    def predict(self, omegas):
        """Boolean feasibility label for each candidate site set."""
        check_is_fitted(self, "structure_")
        return np.array([self.report(om).feasible for om in omegas], dtype=bool)

    def fixed_budget(self, omega, L: int):
        """Feasibility when every site is iterated exactly L times."""
        check_is_fitted(self, "structure_")
        js = self._as_jordan()
        return check_fixed_L(js, omega, L)

    def minimal_budget(self, omega, L_max: int):
        """Smallest uniform budget accepted for omega, or None."""
        from .feasibility import minimal_uniform_L

        check_is_fitted(self, "structure_")
        return minimal_uniform_L(self._as_jordan(), omega, L_max)

    def oracle(self, scheme: SamplingScheme) -> bool:
        """Factorization-free rank verdict for an explicit scheme."""
        check_is_fitted(self, "operator_")
        return brute_force_feasible(self.operator_, scheme, self.rank_tol)

    def _as_jordan(self):
        if self.method_used_ == "jordan":
            return self.structure_
        if not hasattr(self, "_jordan_cache_"):
            self._jordan_cache_ = jordan_structure(
                self.operator_, self.cluster_tol, self.rank_tol, self.cond_cap)
        return self._jordan_cache_


class SensorPlacer(BaseEstimator):
    """Selects a feasible site set, exhaustively minimal or greedy.

    After ``fit(A)``: ``omega_`` holds the chosen 0-based sites, ``support_``
    the boolean site mask, ``result_`` the full certificate.
    """

    def __init__(self, method="exhaustive", size_cap=None, exhaustive_limit=20,
                 cluster_tol=None, rank_tol=None):
        self.method = method
        self.size_cap = size_cap
        self.exhaustive_limit = exhaustive_limit
        self.cluster_tol = cluster_tol
        self.rank_tol = rank_tol

    def fit(self, X, y=None):
        A = as_square_matrix(X, "X")
        js = jordan_structure(A, self.cluster_tol, self.rank_tol)
        if self.method == "exhaustive":
            result = minimal_placement_exhaustive(js, self.size_cap,
                                                  self.exhaustive_limit)
            if result is None:
                raise ValueError("no feasible site set within the size cap")
        elif self.method == "greedy":
            result = greedy_placement(js)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.result_ = result
        self.omega_ = list(result.omega)
        self.size_ = result.size
        self.optimal_ = result.optimal
        self.support_ = np.zeros(A.shape[0], dtype=bool)
        self.support_[self.omega_] = True
        self.n_features_in_ = A.shape[0]
        return self

    def get_support(self, indices: bool = False):
        check_is_fitted(self, "support_")
        return np.flatnonzero(self.support_) if indices else self.support_.copy()
