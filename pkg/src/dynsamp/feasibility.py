"""Recoverability criteria for space-time sampling schemes.

A signal evolving under ``A`` can be recovered from samples taken at sites
``omega`` with per-site time budgets iff the adjoint iterates
``A*^j e_i`` span the whole space.  The structural checks decide this from
the diagonalization or block structure of ``A*`` (projected sensor columns
must span each cyclic target space); :func:`brute_force_feasible` is the
independent oracle that only stacks iterates and measures rank.

Site indices are 0-based throughout the library; file formats are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_square_matrix, check_positive, check_sites
from .exceptions import DegenerateInput, NotFound
from .spectral import (
    JordanStructure,
    SpectralData,
    annihilator_degree,
    default_rank_tol,
    rank_with_tol,
    scaled_subrank,
)

_EPS = float(np.finfo(float).eps)


@dataclass
class SamplingScheme:
    """Sites and time budgets of a space-time sampling pattern.

    ``budgets[k]`` is the largest applied power for site ``omega[k]``; a
    uniform budget may be given as ``L`` instead.  "Unlimited" budgets are
    encoded as ``d - 1``: Krylov spans stabilize there, so nothing larger
    adds information.
    """

    omega: list[int]
    budgets: list[int] | None = None
    L: int | None = None

    def __post_init__(self):
        self.omega = [int(i) for i in self.omega]
        if (self.budgets is None) == (self.L is None):
            raise DegenerateInput("exactly one of budgets / L must be given")
        if self.budgets is not None:
            self.budgets = [int(l) for l in self.budgets]
            if len(self.budgets) != len(self.omega):
                raise DegenerateInput("budgets must match omega in length")
            if any(l < 0 for l in self.budgets):
                raise DegenerateInput("budgets must be nonnegative")
        else:
            self.L = int(self.L)
            if self.L < 0:
                raise DegenerateInput("L must be nonnegative")

    def validate(self, d: int) -> None:
        check_sites(self.omega, d)

    def budget_list(self) -> list[int]:
        if self.budgets is not None:
            return list(self.budgets)
        return [self.L] * len(self.omega)

    @classmethod
    def uniform(cls, omega, L: int) -> "SamplingScheme":
        return cls(list(omega), None, L)

    @classmethod
    def full(cls, omega, d: int) -> "SamplingScheme":
        """Per-site budgets d-1, the lossless stand-in for unlimited budgets."""
        return cls(list(omega), [d - 1] * len(list(omega)), None)

    @property
    def n_samples(self) -> int:
        return sum(l + 1 for l in self.budget_list())


@dataclass
class EigenvalueDiagnostic:
    eigenvalue: complex
    required_rank: int
    achieved_rank: int

    @property
    def satisfied(self) -> bool:
        return self.achieved_rank >= self.required_rank


@dataclass
class FeasibilityReport:
    """Outcome of a structural recoverability check."""

    feasible: bool
    per_eigenvalue: list[EigenvalueDiagnostic]
    witnesses: list[complex] = field(default_factory=list)
    used_budgets: list[int] = field(default_factory=list)
    inert_sites: list[int] = field(default_factory=list)
    method: str = ""
    warnings: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.feasible


def check_diagonalizable(spec: SpectralData, omega) -> FeasibilityReport:
    """Structural check for a diagonalized adjoint.

    Feasible iff for every eigenvalue cluster the sensor columns, projected
    to the cluster's coordinates, span them.  Budgets are reported as one
    less than each sensor column's annihilator degree under D.
    """
    d = spec.dim
    sites = check_sites(omega, d)
    B = spec.basis
    diags = []
    witnesses = []
    for j in range(spec.n_eigenvalues):
        required = int(spec.multiplicities[j])
        achieved = scaled_subrank(B, spec.slices[j], sites, spec.rank_tol)
        diags.append(EigenvalueDiagnostic(complex(spec.eigenvalues[j]), required, achieved))
        if achieved < required:
            witnesses.append(complex(spec.eigenvalues[j]))
    D = spec.diagonal()
    budgets = [annihilator_degree(D, B[:, i], spec.rank_tol) - 1 for i in sites]
    inert = [i for i, l in zip(sites, budgets) if l < 0]
    warn = []
    if spec.residual > 1e-8:
        warn.append(f"diagonalization residual {spec.residual:.3g}")
    return FeasibilityReport(
        feasible=not witnesses,
        per_eigenvalue=diags,
        witnesses=witnesses,
        used_budgets=[max(l, 0) for l in budgets],
        inert_sites=inert,
        method="diagonalizable",
        warnings=warn,
    )


def check_jordan(js: JordanStructure, omega) -> FeasibilityReport:
    """Structural check against the block structure of the adjoint.

    Feasible iff for every eigenvalue the sensor columns project onto the
    block-lead coordinates with full rank (one independent direction per
    block).  Untrusted similarities degrade to a warning, not a failure.
    """
    d = js.dim
    sites = check_sites(omega, d)
    B = js.basis
    diags = []
    witnesses = []
    for s, blk in enumerate(js.blocks):
        required = blk.gamma
        achieved = scaled_subrank(B, js.cyclic_rows(s), sites, js.rank_tol)
        diags.append(EigenvalueDiagnostic(complex(blk.eigenvalue), required, achieved))
        if achieved < required:
            witnesses.append(complex(blk.eigenvalue))
    budgets = [annihilator_degree(js.jordan, B[:, i], js.rank_tol) - 1 for i in sites]
    inert = [i for i, l in zip(sites, budgets) if l < 0]
    warn = list(js.notes) if not js.trusted else []
    return FeasibilityReport(
        feasible=not witnesses,
        per_eigenvalue=diags,
        witnesses=witnesses,
        used_budgets=[max(l, 0) for l in budgets],
        inert_sites=inert,
        method="jordan",
        warnings=warn,
    )


def _normalized_iterate_columns(T: np.ndarray, vectors: list[np.ndarray],
                                L: int) -> np.ndarray:
    """Columns {T^j v : v in vectors, j=0..L}, each scaled to unit norm.

    Iterates that fall to the roundoff floor of the power recursion are
    dropped (they are numerically zero, not new directions).
    """
    d = T.shape[0]
    opnorm = max(float(np.linalg.norm(T, 2)), 1.0)
    cols = []
    for v in vectors:
        w = np.asarray(v, dtype=complex)
        floor = d * _EPS * max(np.linalg.norm(w), 1e-300)
        for _ in range(L + 1):
            nw = np.linalg.norm(w)
            if nw <= floor:
                break
            cols.append(w / nw)
            w = T @ w
            floor = floor * opnorm
    if not cols:
        return np.zeros((d, 0), dtype=complex)
    return np.stack(cols, axis=1)


def check_fixed_L(js: JordanStructure, omega, L: int) -> tuple[bool, FeasibilityReport]:
    """Uniform-budget check: every site iterated exactly L times.

    True iff the structural per-block condition holds and each next iterate
    ``J^{L+1} b_i`` already lies in the span of the collected iterates,
    tested as equality of numerical ranks of the plain and augmented stacks.
    """
    L = int(L)
    if L < 0:
        raise DegenerateInput("L must be nonnegative")
    report = check_jordan(js, omega)
    if not report.feasible:
        return False, report
    sites = check_sites(omega, js.dim)
    B = js.basis
    J = js.jordan
    colnorms = np.linalg.norm(B[:, sites], axis=0)
    vecs = [B[:, i] for i, n in zip(sites, colnorms) if n > 0]
    E = _normalized_iterate_columns(J, vecs, L)
    base_rank = rank_with_tol(E, js.rank_tol)
    ok = True
    for i in sites:
        b = B[:, i]
        if np.linalg.norm(b) == 0:
            continue
        tail = np.linalg.matrix_power(J, L + 1) @ b
        nt = np.linalg.norm(tail)
        if nt <= js.dim * _EPS * max(np.linalg.norm(b), 1e-300) * \
                max(float(np.linalg.norm(J, 2)), 1.0) ** (L + 1):
            continue
        aug = np.concatenate([E, (tail / nt)[:, None]], axis=1)
        if rank_with_tol(aug, js.rank_tol) != base_rank:
            ok = False
            break
    if not ok:
        report = FeasibilityReport(
            feasible=False,
            per_eigenvalue=report.per_eigenvalue,
            witnesses=report.witnesses,
            used_budgets=report.used_budgets,
            inert_sites=report.inert_sites,
            method="jordan-fixed-L",
            warnings=report.warnings + [f"span condition fails at L={L}"],
        )
        return False, report
    return True, report


def minimal_uniform_L(js: JordanStructure, omega, L_max: int) -> int | None:
    """Smallest uniform budget L <= L_max accepted by check_fixed_L, if any.

    The span condition is monotone in L, so the scan stops at the first hit.
    """
    L_max = int(L_max)
    if L_max < 0:
        raise DegenerateInput("L_max must be nonnegative")
    base = check_jordan(js, omega)
    if not base.feasible:
        return None
    for L in range(L_max + 1):
        ok, _ = check_fixed_L(js, omega, L)
        if ok:
            return L
    return None


def brute_force_feasible(A, scheme: SamplingScheme,
                         rank_tol: float | None = None) -> bool:
    """Independent oracle: stack the adjoint iterates and measure rank.

    Uses no factorization.  Budgets are truncated to d-1 (Krylov spans are
    already stable there), which also keeps powers of badly non-normal
    matrices from drowning the rank decision in rounding noise.
    """
    A = as_square_matrix(A, "A")
    d = A.shape[0]
    scheme.validate(d)
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    check_positive(rank_tol, "rank_tol")
    Ah = A.conj().T
    opnorm = max(float(np.linalg.norm(Ah, 2)), 1.0)
    rows = []
    for i, l in zip(scheme.omega, scheme.budget_list()):
        l = min(l, d - 1)
        v = np.zeros(d, dtype=complex)
        v[i] = 1.0
        floor = d * _EPS
        for _ in range(l + 1):
            nv = np.linalg.norm(v)
            if nv <= floor:
                break
            rows.append(v / nv)
            v = Ah @ v
            floor = floor * opnorm
    if not rows:
        return False
    M = np.stack(rows, axis=0)
    return rank_with_tol(M, rank_tol) == d


def rational_form_counterexample(M, rank_tol: float | None = None,
                                 seed: int = 0, max_tries: int = 200,
                                 bound: float = 1e3) -> np.ndarray:
    """Vector b with leading coordinate nonzero whose iterates fail to span.

    For a companion-form matrix the lead coordinate is the cyclic one, yet
    spanning of the full Krylov stack is not implied: this searches the zero
    set of det([b, Mb, ..., M^{d-1} b]) for a witness.  Candidates fix the
    lead coordinate at 1, sweep the remaining free coordinates over a
    deterministic-then-seeded grid, and solve for the last coordinate as a
    polynomial root.  Roots with magnitude beyond ``bound`` are rejected:
    huge witnesses are numerically near-dependent for any matrix and prove
    nothing.

    Raises:
        NotFound: search budget exhausted; M may not admit such b.
    """
    M = as_square_matrix(M, "M")
    d = M.shape[0]
    if d < 2:
        raise DegenerateInput("need dimension >= 2")
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    rng = np.random.default_rng(seed)

    def krylov(b):
        cols = [b]
        for _ in range(d - 1):
            cols.append(M @ cols[-1])
        return np.stack(cols, axis=1)

    def middle_candidates():
        base = [0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0]
        if d == 2:
            yield np.zeros(0)
            return
        for v in base:
            mid = np.zeros(d - 2)
            mid[0] = v
            yield mid
        while True:
            yield rng.integers(-3, 4, d - 2).astype(float)

    tries = 0
    for mid in middle_candidates():
        tries += 1
        if tries > max_tries:
            break
        b = np.zeros(d)
        b[0] = 1.0
        if d > 2:
            b[1:d - 1] = mid
        ts = np.arange(d + 1, dtype=float)
        dets = []
        for tv in ts:
            bb = b.copy()
            bb[-1] = tv
            dets.append(np.linalg.det(krylov(bb)))
        coef = np.polynomial.polynomial.polyfit(ts, dets, d)
        roots = np.polynomial.polynomial.polyroots(coef)
        for r in sorted(roots, key=lambda z: abs(z)):
            if abs(r.imag) > 1e-9 or abs(r) > bound:
                continue
            bb = b.copy()
            bb[-1] = float(r.real)
            K = krylov(bb)
            nn = np.linalg.norm(K, axis=0)
            if np.any(nn == 0):
                continue
            if rank_with_tol(K / nn[None, :], max(rank_tol, 1e-10)) < d:
                return bb
    raise NotFound("no bounded deficient vector with nonzero lead coordinate found")
