"""Dense complex spectral analysis with tolerance-aware rank decisions.

Everything here analyzes the adjoint ``A*`` of the supplied evolution
operator, because the vectors that decide recoverability of a signal from
its space-time samples are the adjoint iterates ``A*^j e_i``.  Similarities
are stored as ``A* = B^{-1} T B`` (``T`` diagonal or block-triangular), so
the columns of ``B`` are the coordinates of the standard sensor vectors in
the structured frame.

Numerical-rank decisions use a relative threshold ``rank_tol * sigma_max``;
ranks of matrix powers anchor the threshold to ``||M||^k`` instead so that
numerically-zero powers of nilpotent factors are classified correctly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_square_matrix, as_complex_vector, check_positive
from .exceptions import DegenerateInput, NotDiagonalizable, UntrustedFactorizationWarning

_EPS = float(np.finfo(float).eps)

#: Condition-number cap above which a computed similarity is flagged untrusted.
DEFAULT_COND_CAP = 1e8

#: Relative residual cap for ``||A* - B^-1 T B||_F / ||A*||``.
DEFAULT_RESIDUAL_CAP = 1e-8


def default_rank_tol(d: int) -> float:
    """Relative singular-value threshold for numerical rank at dimension d."""
    return d * _EPS * 1e4


def default_cluster_tol(A: np.ndarray) -> float:
    """Eigenvalue clustering tolerance for the diagonalizable path."""
    return 1e-8 * max(float(np.linalg.norm(A, 2)), 1.0)


def default_jordan_cluster_tol(A: np.ndarray) -> float:
    """Coarser clustering for the Jordan path.

    A defective eigenvalue of a size-q block scatters numerically by roughly
    eps**(1/q), so the tolerance must sit well above that splitting radius.
    """
    return 1e-4 * max(float(np.linalg.norm(A, 2)), 1.0)


def _rank_from_singular_values(s: np.ndarray, cutoff: float) -> int:
    return int(np.sum(s > cutoff))


def rank_with_tol(M, rank_tol: float) -> int:
    """Numerical rank: count of singular values above ``rank_tol * sigma_max``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return 0
    if not (np.all(np.isfinite(M.real)) and np.all(np.isfinite(M.imag))):
        raise DegenerateInput("rank_with_tol: entries must be finite")
    check_positive(rank_tol, "rank_tol")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] <= 0:
        return 0
    return _rank_from_singular_values(s, rank_tol * s[0])


def scaled_subrank(B: np.ndarray, rows, cols, rank_tol: float) -> int:
    """Rank of ``B[rows, cols]`` with columns measured against the full columns.

    Each column of the submatrix is scaled by the norm of the corresponding
    full column of ``B``, so a projection that is zero up to roundoff stays
    numerically zero instead of being renormalized into a spurious direction.
    """
    full = np.linalg.norm(B[:, cols], axis=0)
    full[full == 0] = 1.0
    Z = B[np.ix_(list(rows), list(cols))] / full[None, :]
    if Z.size == 0:
        return 0
    s = np.linalg.svd(Z, compute_uv=False)
    if s.size == 0 or s[0] <= 0:
        return 0
    return _rank_from_singular_values(s, rank_tol * max(s[0], 1.0))


def annihilator_degree(T, b, rank_tol: float | None = None) -> int:
    """Degree of the minimal monic polynomial q with q(T) b = 0.

    Equals the dimension of the Krylov span {b, Tb, T^2 b, ...}; zero iff
    b = 0.  Iterates are renormalized so the result is scale-free, and the
    iteration stops early once an iterate falls to the roundoff floor.
    """
    T = as_square_matrix(T, "T")
    d = T.shape[0]
    b = as_complex_vector(b, d, "b")
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    check_positive(rank_tol, "rank_tol")

    nb = np.linalg.norm(b)
    if nb == 0:
        return 0
    opnorm = max(float(np.linalg.norm(T, 2)), 1e-300)
    cols = [b / nb]
    v = b / nb
    for _ in range(d):
        w = T @ v
        nw = np.linalg.norm(w)
        if nw <= d * _EPS * opnorm:
            break
        v = w / nw
        cols.append(v)
    K = np.stack(cols, axis=1)
    s = np.linalg.svd(K, compute_uv=False)
    return _rank_from_singular_values(s, rank_tol * s[0])


def _cluster_eigenvalues(w: np.ndarray, tol: float):
    """Group eigenvalues into connected components under |wi - wj| <= tol.

    Returns [(representative, indices)] sorted by (-|lam|, Re, Im) so all
    downstream reports are deterministic.
    """
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(w[i] - w[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = [(complex(np.mean(w[idx])), list(idx)) for idx in groups.values()]
    out.sort(key=lambda t: (-abs(t[0]), t[0].real, t[0].imag))
    return out


def _power_rank_profile(M: np.ndarray, rank_tol: float, h: int, d: int,
                        zero_floor: float = 0.0) -> list[int]:
    """Ranks of M^k for k = 0, 1, ... until the rank reaches d - h.

    The cutoff for M^k is ``rank_tol * ||M||^k``: the natural magnitude of a
    k-fold product, which stays meaningful when the power collapses to zero.
    ``zero_floor`` is the roundoff scale of the parent computation: a matrix
    whose norm sits below it is numerically the zero matrix.
    """
    nrm = float(np.linalg.norm(M, 2))
    if nrm <= zero_floor:
        return [d, 0]
    ranks = [d]
    P = np.eye(d, dtype=complex)
    k = 0
    while ranks[-1] > d - h and k < h:
        P = P @ M
        k += 1
        s = np.linalg.svd(P, compute_uv=False)
        ranks.append(_rank_from_singular_values(s, rank_tol * nrm**k))
    return ranks


def _power_nullspace(M: np.ndarray, k: int, rank_tol: float,
                     zero_floor: float = 0.0) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of M^k."""
    n = M.shape[0]
    nrm = float(np.linalg.norm(M, 2))
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    if nrm <= zero_floor:
        return np.eye(n, dtype=complex)
    P = np.eye(n, dtype=complex)
    for _ in range(k):
        P = P @ M
    _, s, vh = np.linalg.svd(P)
    r = _rank_from_singular_values(s, rank_tol * nrm**k)
    return vh.conj().T[:, r:]


@dataclass
class SpectralData:
    """Diagonalization of the adjoint: ``A* = B^{-1} D B``.

    ``eigenvalues[j]`` is the representative of the j-th merged cluster,
    ``multiplicities[j]`` its pooled dimension, and ``slices[j]`` the
    coordinate indices it occupies in the diagonalized frame.  ``basis`` is
    ``B`` (so its columns are the sensor coordinates b_i) and
    ``basis_inv`` is ``B^{-1}``.
    """

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    slices: list[list[int]]
    basis: np.ndarray
    basis_inv: np.ndarray
    residual: float
    basis_cond: float
    rank_tol: float
    cluster_tol: float

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def n_eigenvalues(self) -> int:
        return len(self.eigenvalues)

    def diagonal(self) -> np.ndarray:
        """The diagonal matrix D in cluster order."""
        d = self.dim
        D = np.zeros((d, d), dtype=complex)
        for lam, sl in zip(self.eigenvalues, self.slices):
            for i in sl:
                D[i, i] = lam
        return D

    def projection(self, j: int) -> np.ndarray:
        """Spectral projection of A* for cluster j (idempotent, sums to I)."""
        V = self.basis_inv
        sl = self.slices[j]
        return V[:, sl] @ self.basis[sl, :]

    @property
    def projections(self) -> list[np.ndarray]:
        return [self.projection(j) for j in range(self.n_eigenvalues)]

    @classmethod
    def from_factorization(cls, B, D, rank_tol: float | None = None,
                           cluster_tol: float = 0.0, A=None) -> "SpectralData":
        """Wrap a user-supplied pair with ``A* = B^{-1} D B``, D diagonal."""
        B = as_square_matrix(B, "B")
        D = as_square_matrix(D, "D")
        d = B.shape[0]
        if D.shape[0] != d:
            raise DegenerateInput("B and D must have matching dimensions")
        offdiag = D - np.diag(np.diag(D))
        if np.linalg.norm(offdiag) > 1e-12 * max(np.linalg.norm(D), 1.0):
            raise DegenerateInput("D must be diagonal")
        if rank_tol is None:
            rank_tol = default_rank_tol(d)
        w = np.diag(D)
        clusters = _cluster_eigenvalues(w, cluster_tol)
        eigenvalues = np.array([lam for lam, _ in clusters])
        multiplicities = np.array([len(idx) for _, idx in clusters])
        # reorder coordinates so clusters are contiguous in canonical order
        perm = [i for _, idx in clusters for i in idx]
        Pm = np.eye(d)[perm]
        Bp = Pm @ B
        Dp = Pm @ D @ Pm.T
        Binv = np.linalg.inv(Bp)
        slices, pos = [], 0
        for _, idx in clusters:
            slices.append(list(range(pos, pos + len(idx))))
            pos += len(idx)
        residual = 0.0
        if A is not None:
            As = as_square_matrix(A, "A").conj().T
            residual = float(np.linalg.norm(As - Binv @ Dp @ Bp)
                             / max(np.linalg.norm(As), 1e-300))
        return cls(eigenvalues, multiplicities, slices, Bp, Binv, residual,
                   float(np.linalg.cond(Bp)), rank_tol, cluster_tol)


def eigendecompose(A, cluster_tol: float | None = None,
                   rank_tol: float | None = None,
                   cond_cap: float = DEFAULT_COND_CAP) -> SpectralData:
    """Diagonalize the adjoint of A, merging eigenvalues within cluster_tol.

    Raises:
        NotDiagonalizable: some cluster has geometric multiplicity below its
            algebraic multiplicity, or the pooled eigenbasis is
            ill-conditioned beyond ``cond_cap``.
        DegenerateInput: non-square or non-finite input.
    """
    A = as_square_matrix(A, "A")
    As = A.conj().T
    d = As.shape[0]
    scale = max(float(np.linalg.norm(As, 2)), 1e-300)
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(As)
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    check_positive(cluster_tol, "cluster_tol")
    check_positive(rank_tol, "rank_tol")

    w = np.linalg.eigvals(As)
    clusters = _cluster_eigenvalues(w, cluster_tol)

    V_blocks = []
    eigenvalues = []
    multiplicities = []
    slices = []
    pos = 0
    for lam, idx in clusters:
        h = len(idx)
        M = As - lam * np.eye(d)
        spread = max(abs(w[i] - lam) for i in idx)
        _, s, vh = np.linalg.svd(M)
        cutoff = max(rank_tol * (s[0] if s[0] > 0 else 1.0), 10.0 * spread)
        null_dim = d - _rank_from_singular_values(s, cutoff)
        if null_dim != h:
            raise NotDiagonalizable(
                f"eigenvalue {lam:.6g}: geometric multiplicity {null_dim} "
                f"!= algebraic multiplicity {h}")
        V_blocks.append(vh.conj().T[:, d - null_dim:])
        eigenvalues.append(lam)
        multiplicities.append(h)
        slices.append(list(range(pos, pos + h)))
        pos += h

    V = np.concatenate(V_blocks, axis=1)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > cond_cap:
        raise NotDiagonalizable(
            f"pooled eigenbasis condition number {cond:.3g} exceeds cap {cond_cap:.3g}")
    B = np.linalg.inv(V)  # A* = V D V^-1 = B^-1 D B
    D = np.zeros((d, d), dtype=complex)
    for lam, sl in zip(eigenvalues, slices):
        for i in sl:
            D[i, i] = lam
    residual = float(np.linalg.norm(As - V @ D @ B) / scale)
    return SpectralData(np.array(eigenvalues), np.array(multiplicities), slices,
                        B, V, residual, cond, rank_tol, cluster_tol)


@dataclass
class EigenvalueBlocks:
    """Jordan data for one distinct eigenvalue: sizes are non-increasing."""

    eigenvalue: complex
    sizes: list[int]
    cyclic_rows: list[int] = field(default_factory=list)

    @property
    def gamma(self) -> int:
        return len(self.sizes)

    @property
    def multiplicity(self) -> int:
        return sum(self.sizes)


@dataclass
class JordanStructure:
    """Block structure and similarity for ``A* = B^{-1} J B``.

    ``basis`` is B; its columns are the sensor coordinate vectors.  J is in
    lower (subdiagonal) block form, blocks per eigenvalue ordered by
    non-increasing size, eigenvalues ordered by (-|lam|, Re, Im).
    ``cyclic_rows`` of each block record the row index of the block's lead
    coordinate; those coordinates span the target space that sensor
    projections must cover.
    """

    blocks: list[EigenvalueBlocks]
    jordan: np.ndarray
    basis: np.ndarray
    basis_inv: np.ndarray
    residual: float
    basis_cond: float
    rank_tol: float
    cluster_tol: float
    trusted: bool
    notes: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.jordan.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([b.eigenvalue for b in self.blocks])

    @property
    def max_gamma(self) -> int:
        return max(b.gamma for b in self.blocks)

    def cyclic_projection(self, s: int) -> np.ndarray:
        """Coordinate projection onto the lead rows of eigenvalue s's blocks."""
        d = self.dim
        P = np.zeros((d, d))
        for r in self.cyclic_rows(s):
            P[r, r] = 1.0
        return P

    def cyclic_rows(self, s: int) -> list[int]:
        return self.blocks[s].cyclic_rows

    def block_sizes(self) -> dict[complex, tuple[int, ...]]:
        return {b.eigenvalue: tuple(b.sizes) for b in self.blocks}

    def weyr_rank(self, s: int, k: int) -> int:
        """rank((J - lam_s I)^k) recomputed from the stored block sizes."""
        blk = self.blocks[s]
        other = self.dim - blk.multiplicity
        return other + sum(max(t - k, 0) for t in blk.sizes)

    @classmethod
    def from_spectral(cls, spec: "SpectralData") -> "JordanStructure":
        """View a diagonalization as the trivial block structure (all sizes 1)."""
        blocks = [
            EigenvalueBlocks(complex(lam), [1] * int(h), list(sl))
            for lam, h, sl in zip(spec.eigenvalues, spec.multiplicities, spec.slices)
        ]
        trusted = spec.residual <= DEFAULT_RESIDUAL_CAP and \
            spec.basis_cond <= DEFAULT_COND_CAP
        return cls(blocks, spec.diagonal(), spec.basis, spec.basis_inv,
                   spec.residual, spec.basis_cond, spec.rank_tol,
                   spec.cluster_tol, trusted)

    @classmethod
    def from_factorization(cls, B, J, rank_tol: float | None = None,
                           A=None) -> "JordanStructure":
        """Wrap a user-supplied similarity ``A* = B^{-1} J B``.

        J must already be in the canonical layout: block diagonal with
        constant diagonal per block and unit subdiagonals inside blocks.
        """
        B = as_square_matrix(B, "B")
        J = as_square_matrix(J, "J")
        d = B.shape[0]
        if J.shape[0] != d:
            raise DegenerateInput("B and J must have matching dimensions")
        if rank_tol is None:
            rank_tol = default_rank_tol(d)
        blocks = _parse_jordan_layout(J)
        Binv = np.linalg.inv(B)
        residual = 0.0
        if A is not None:
            As = as_square_matrix(A, "A").conj().T
            residual = float(np.linalg.norm(As - Binv @ J @ B)
                             / max(np.linalg.norm(As), 1e-300))
        cond = float(np.linalg.cond(B))
        trusted = cond <= DEFAULT_COND_CAP and residual <= DEFAULT_RESIDUAL_CAP
        js = cls(blocks, J.astype(complex), B, Binv, residual, cond, rank_tol,
                 0.0, trusted)
        if not trusted:
            js.notes.append("supplied similarity is ill-conditioned or inconsistent")
        return js


def _parse_jordan_layout(J: np.ndarray) -> list[EigenvalueBlocks]:
    """Validate the canonical block layout of J and extract the structure."""
    d = J.shape[0]
    sub = np.diag(J, -1)
    strict = J - np.diag(np.diag(J)) - np.diag(sub, -1)
    if np.linalg.norm(strict) > 1e-12 * max(np.linalg.norm(J), 1.0):
        raise DegenerateInput("J has entries outside the diagonal and first subdiagonal")
    if not np.all((np.abs(sub) < 1e-12) | (np.abs(sub - 1.0) < 1e-12)):
        raise DegenerateInput("J subdiagonal entries must be 0 or 1")
    # blocks continue across unit subdiagonal entries, break at zeros
    raw_blocks = []
    start = 0
    for i in range(d):
        continues = i < d - 1 and abs(sub[i] - 1.0) < 1e-12
        if continues:
            if abs(J[i, i] - J[i + 1, i + 1]) > 1e-12:
                raise DegenerateInput("J block has non-constant diagonal")
            continue
        raw_blocks.append((complex(J[start, start]), start, i - start + 1))
        start = i + 1
    grouped: dict[complex, list[tuple[int, int]]] = {}
    order = []
    for lam, st, size in raw_blocks:
        key = lam
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append((st, size))
    keys = sorted(grouped, key=lambda z: (-abs(z), z.real, z.imag))
    blocks = []
    for lam in keys:
        items = grouped[lam]
        sizes = [sz for _, sz in items]
        if sizes != sorted(sizes, reverse=True):
            raise DegenerateInput(
                f"blocks for eigenvalue {lam:.6g} are not in non-increasing size order")
        blocks.append(EigenvalueBlocks(lam, sizes, [st for st, _ in items]))
    return blocks


def jordan_structure(A, cluster_tol: float | None = None,
                     rank_tol: float | None = None,
                     cond_cap: float = DEFAULT_COND_CAP) -> JordanStructure:
    """Block structure of the adjoint from rank profiles of shifted powers.

    The block sizes for each clustered eigenvalue come from the rank
    sequence of ``(A* - lam I)^k``; generalized eigenvector chains are then
    assembled level by level to build the similarity.  The result always
    carries a residual and the condition number of the similarity; if either
    exceeds its cap the structure is flagged untrusted (and a warning is
    emitted) rather than rejected.
    """
    A = as_square_matrix(A, "A")
    As = A.conj().T
    d = As.shape[0]
    scale = max(float(np.linalg.norm(As, 2)), 1e-300)
    if cluster_tol is None:
        cluster_tol = default_jordan_cluster_tol(As)
    if rank_tol is None:
        rank_tol = default_rank_tol(d)
    check_positive(cluster_tol, "cluster_tol")
    check_positive(rank_tol, "rank_tol")

    w = np.linalg.eigvals(As)
    clusters = _cluster_eigenvalues(w, cluster_tol)

    notes: list[str] = []
    blocks: list[EigenvalueBlocks] = []
    zero_floor = d * _EPS * scale
    for lam, idx in clusters:
        h = len(idx)
        M = As - lam * np.eye(d)
        ranks = _power_rank_profile(M, rank_tol, h, d, zero_floor)
        if ranks[-1] != d - h:
            notes.append(f"rank profile inconsistent for eigenvalue {lam:.6g}")
        counts = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]
        sizes: list[int] = []
        q = len(counts)
        for k in range(1, q + 1):
            n_exact = counts[k - 1] - (counts[k] if k < q else 0)
            if n_exact > 0:
                sizes.extend([k] * n_exact)
        sizes.sort(reverse=True)
        if sum(sizes) != h:
            notes.append(f"block sizes for eigenvalue {lam:.6g} do not sum to {h}")
        blocks.append(EigenvalueBlocks(lam, sizes))

    V_cols: list[np.ndarray] = []
    J = np.zeros((d, d), dtype=complex)
    pos = 0
    for blk in blocks:
        lam, sizes = blk.eigenvalue, blk.sizes
        if not sizes:
            continue
        M = As - lam * np.eye(d)
        q = max(sizes)
        X = _power_nullspace(M, q, rank_tol, zero_floor)
        if X.shape[1] != blk.multiplicity:
            notes.append(f"generalized eigenspace dimension mismatch at {lam:.6g}")
        Msub = X.conj().T @ M @ X
        hs = X.shape[1]
        nulls = [np.zeros((hs, 0), dtype=complex)]
        for k in range(1, q + 1):
            nulls.append(_power_nullspace(Msub, k, rank_tol, zero_floor))
        m = [nb.shape[1] for nb in nulls]
        chains: list[dict] = []
        for k in range(q, 0, -1):
            inherited = [ch["vectors"][ch["height"] - k]
                         for ch in chains if ch["height"] > k]
            need = (m[k] - m[k - 1]) - len(inherited)
            if need <= 0:
                continue
            base = [nulls[k - 1]] + [np.asarray(v)[:, None] for v in inherited]
            Bmat = np.concatenate(base, axis=1)
            if Bmat.shape[1] > 0:
                Qb, _ = np.linalg.qr(Bmat)
                cand = nulls[k] - Qb @ (Qb.conj().T @ nulls[k])
            else:
                cand = nulls[k]
            u, _, _ = np.linalg.svd(cand)
            for t in range(need):
                v = u[:, t]
                vecs = [v]
                for _ in range(k - 1):
                    vecs.append(Msub @ vecs[-1])
                chains.append({"height": k, "vectors": vecs})
        chains.sort(key=lambda c: -c["height"])
        blk.cyclic_rows = []
        for ch in chains:
            t = ch["height"]
            blk.cyclic_rows.append(pos)
            for v in ch["vectors"]:
                V_cols.append(X @ v)
            for r in range(t):
                J[pos + r, pos + r] = lam
                if r + 1 < t:
                    J[pos + r + 1, pos + r] = 1.0
            pos += t

    trusted = not notes
    if len(V_cols) != d:
        notes.append("chain construction did not produce a full basis")
        V = np.eye(d, dtype=complex)
        Binv = V
        B = V
        residual = float("inf")
        cond = float("inf")
        trusted = False
    else:
        V = np.stack(V_cols, axis=1)  # A* = V J V^-1, so B = V^-1
        try:
            B = np.linalg.inv(V)
            cond = float(np.linalg.cond(V))
            residual = float(np.linalg.norm(As - V @ J @ B) / scale)
            Binv = V
        except np.linalg.LinAlgError:
            B = np.eye(d, dtype=complex)
            Binv = B
            residual = float("inf")
            cond = float("inf")
        if not np.isfinite(cond) or cond > cond_cap:
            notes.append(f"similarity condition number {cond:.3g} exceeds cap {cond_cap:.3g}")
            trusted = False
        if residual > DEFAULT_RESIDUAL_CAP:
            notes.append(f"similarity residual {residual:.3g} exceeds cap")
            trusted = False

    js = JordanStructure(blocks, J, B, Binv, residual, cond, rank_tol,
                         cluster_tol, trusted, notes)
    if not trusted:
        warnings.warn("; ".join(notes) or "untrusted Jordan similarity",
                      UntrustedFactorizationWarning, stacklevel=2)
    return js
