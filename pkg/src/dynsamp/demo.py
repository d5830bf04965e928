"""Built-in demonstration operators with contrasting spectral structure.

P has five simple eigenvalues, so single-site schemes can succeed but some
sites are blind to parts of the spectrum.  Q is diagonalizable with a
three-dimensional eigenspace, forcing at least three sites.  R is
non-diagonalizable (block sizes 2 and 3), exercising the Jordan path.  The
companion matrix COMPANION_3 is the standard cautionary example for
cyclic-coordinate reasoning: a nonzero lead coordinate does not guarantee
spanning iterates.
"""
from __future__ import annotations

import numpy as np

P = np.array([
    [9 / 2, 1 / 2, -7, 5, -3],
    [15 / 2, 3 / 2, -11, 5, -7],
    [5, 0, -7, 5, -5],
    [4, 0, -4, 3, -4],
    [1 / 2, 1 / 2, -1, 0, 1],
], dtype=complex)

Q = np.array([
    [3 / 2, -1 / 2, 2, 0, 1],
    [1 / 2, 5 / 2, 0, 0, -1],
    [0, 0, 3, 0, 0],
    [1, 0, -1, 3, -1],
    [-1 / 2, -1 / 2, 1, 0, 3],
], dtype=complex)

R = np.array([
    [0, -1, 4, -1, 2],
    [2, 1, -2, 1, -2],
    [-1 / 2, -1 / 2, 3, 0, 1],
    [1 / 2, -1 / 2, 0, 2, 0],
    [-1 / 2, -1 / 2, 2, -1, 2],
], dtype=complex)

COMPANION_3 = np.array([
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 2],
], dtype=complex)

MATRICES: dict[str, np.ndarray] = {"P": P, "Q": Q, "R": R}


def demo_matrix(name: str) -> np.ndarray:
    """Fetch a demo operator by name ('P', 'Q', 'R')."""
    try:
        return MATRICES[name].copy()
    except KeyError:
        raise KeyError(f"unknown demo matrix {name!r}; available: {sorted(MATRICES)}") from None
