r"""Symplectic invariants of covariance matrices.

Everything here operates on raw real matrices in the quadrature ordering
``(x1, p1, ..., xn, pn)``; partially transposed matrices are not physical
states, so no :class:`~gaussian_cnp.core.CovarianceState` is required.

The minor-sum invariants are

.. math::

    I_k = \sum_{R, C} \det \gamma[\bar R, \bar C],

where ``R`` and ``C`` run over all ``k``-element subsets of mode (block)
indices and :math:`\bar R` keeps the block rows not in ``R``. They equal the
elementary symmetric polynomial of degree ``n - k`` in the squared
symplectic eigenvalues, which :func:`invariants_from_nu` computes directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    IndexOutOfRange,
    NotPositiveDefinite,
    OddDimension,
    PairingFailure,
    UnsupportedModeCount,
)

#: Relative tolerance when pairing the +/- i nu eigenvalues of Omega gamma.
PAIRING_TOL = 1e-9

#: Largest mode count for which block-minor sums are supported.
MAX_MODES = 3

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@lru_cache(maxsize=None)
def _omega(n: int) -> np.ndarray:
    out = np.kron(np.eye(n), _J)
    out.setflags(write=False)
    return out


def omega(n: int) -> np.ndarray:
    """Symplectic form ``diag(J, ..., J)`` with ``J = [[0, 1], [-1, 0]]``."""
    return _omega(n).copy()


def n_modes_of(matrix: np.ndarray) -> int:
    dim = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != dim:
        raise OddDimension(f"expected a square matrix, got shape {matrix.shape}")
    if dim % 2 or dim == 0:
        raise OddDimension(f"matrix dimension {dim} is not a positive even number")
    return dim // 2


def mode_indices(modes) -> list[int]:
    """Quadrature row indices for a sequence of mode indices."""
    return [i for m in modes for i in (2 * m, 2 * m + 1)]


def block(matrix: np.ndarray, row_mode: int, col_mode: int) -> np.ndarray:
    """The 2x2 block coupling ``row_mode`` to ``col_mode``."""
    return matrix[2 * row_mode : 2 * row_mode + 2, 2 * col_mode : 2 * col_mode + 2]


@dataclass(frozen=True)
class InvariantSet:
    """Invariants ``I_0 .. I_{n-1}`` of one matrix.

    ``transposed`` marks invariants computed on a partially transposed matrix
    (the tilde quantities). ``I_n`` is 1 by convention and is not stored.
    """

    n_modes: int
    values: tuple[float, ...]
    transposed: bool = False

    def __post_init__(self):
        if len(self.values) != self.n_modes:
            raise ValueError(
                f"expected {self.n_modes} invariants, got {len(self.values)}"
            )

    def __getitem__(self, k: int) -> float:
        if k == self.n_modes:
            return 1.0
        return self.values[k]

    def __len__(self) -> int:
        return self.n_modes

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def to_dict(self) -> dict:
        return {
            "modes": self.n_modes,
            "transposed": self.transposed,
            "values": [float(v) for v in self.values],
        }


def partial_transpose(matrix, mode: int) -> np.ndarray:
    """Partial transpose of one mode: flip the sign of its momentum.

    This is the quadrature-basis image of swapping ``a`` and ``a^dagger`` on
    that mode. The result is symmetric but generally not a valid state.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = n_modes_of(matrix)
    if not 0 <= mode < n:
        raise IndexOutOfRange(f"mode {mode} out of range for {n} modes")
    signs = np.ones(2 * n)
    signs[2 * mode + 1] = -1.0
    return matrix * np.outer(signs, signs)


def symplectic_eigenvalues(matrix) -> np.ndarray:
    """Symplectic eigenvalues, ascending.

    Computed as the moduli of the eigenvalues of ``Omega @ matrix``, which
    come in ``+/- i nu`` pairs for positive definite input.

    Raises:
        NotPositiveDefinite: if ``matrix`` has a nonpositive eigenvalue.
        PairingFailure: if the spectrum does not split into conjugate pairs.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = n_modes_of(matrix)
    sym = 0.5 * (matrix + matrix.T)
    if np.linalg.eigvalsh(sym)[0] <= 0.0:
        raise NotPositiveDefinite("matrix is not positive definite")

    ev = np.linalg.eigvals(_omega(n) @ sym)
    scale = np.max(np.abs(ev))
    if np.max(np.abs(ev.real)) > PAIRING_TOL * scale:
        raise PairingFailure("eigenvalues of Omega*gamma are not purely imaginary")
    im = np.sort(ev.imag)
    upper = im[n:]
    lower = -im[:n][::-1]
    if np.any(np.abs(upper - lower) > PAIRING_TOL * np.maximum(upper, 1e-300)):
        raise PairingFailure("eigenvalues of Omega*gamma do not pair as +/- i nu")
    return 0.5 * (upper + lower)


@lru_cache(maxsize=None)
def _minor_index(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column index arrays selecting every (R, C) submatrix at once."""
    kept = [
        mode_indices(m for m in range(n) if m not in removed)
        for removed in itertools.combinations(range(n), k)
    ]
    pairs = [(r, c) for r in kept for c in kept]
    rows = np.array([np.ix_(r, c)[0] for r, c in pairs])
    cols = np.array([np.ix_(r, c)[1] for r, c in pairs])
    return rows, cols


def _minor_sum(matrix: np.ndarray, n: int, k: int) -> float:
    if k == 0:
        return float(np.linalg.det(matrix))
    rows, cols = _minor_index(n, k)
    return float(np.sum(np.linalg.det(matrix[rows, cols])))


def minor_invariants(matrix, transposed: bool = False) -> InvariantSet:
    """Minor-sum invariants of a symmetric ``2n x 2n`` matrix, ``n <= 3``.

    Minors are plain determinants with the original row and column order;
    each off-diagonal selection appears together with its transpose, which
    yields the familiar factors of two (e.g. ``I_1 = |A| + |B| + 2|x|`` for
    two modes).
    """
    matrix = np.asarray(matrix, dtype=float)
    n = n_modes_of(matrix)
    if n > MAX_MODES:
        raise UnsupportedModeCount(
            f"minor invariants are defined here for at most {MAX_MODES} modes, got {n}"
        )
    return InvariantSet(
        n, tuple(_minor_sum(matrix, n, k) for k in range(n)), transposed
    )


def elementary_symmetric(values) -> list[float]:
    """``[e_0, e_1, ..., e_m]`` for the given values (``e_0 = 1``)."""
    e = [1.0] + [0.0] * len(values)
    for v in values:
        for d in range(len(e) - 1, 0, -1):
            e[d] += v * e[d - 1]
    return e


def invariants_from_nu(nus, transposed: bool = False) -> InvariantSet:
    """Invariants from symplectic eigenvalues: ``I_k = e_{n-k}(nu^2)``."""
    sq = [float(v) ** 2 for v in nus]
    n = len(sq)
    if n < 1:
        raise ValueError("need at least one symplectic eigenvalue")
    e = elementary_symmetric(sq)
    return InvariantSet(n, tuple(e[n - k] for k in range(n)), transposed)


def g_eval(inv: InvariantSet, x: float) -> float:
    r"""Evaluate :math:`g(x) = 2\sum_{j=0}^{n} (-1)^{j+1} x^j I_j` with ``I_n = 1``.

    By Vieta this equals :math:`-2\prod_j (\nu_j^2 - x)`.
    """
    n = inv.n_modes
    return 2.0 * sum((-1) ** (j + 1) * x**j * inv[j] for j in range(n + 1))


def coupling_determinants(matrix) -> dict[str, float]:
    """Determinants of the inter-mode coupling blocks.

    For two modes: ``x`` (block B,A). For three modes additionally ``y``
    (C,B), ``z`` (C,A) and the 4x4 mixed minors ``Dx`` (rows B,C; cols A,B),
    ``Dy`` (rows C,A; cols B,C) and ``Dz`` (rows C,A; cols A,B).
    """
    matrix = np.asarray(matrix, dtype=float)
    n = n_modes_of(matrix)
    if n not in (2, 3):
        raise UnsupportedModeCount(f"coupling blocks need 2 or 3 modes, got {n}")
    det = np.linalg.det
    out = {"x": float(det(block(matrix, 1, 0)))}
    if n == 3:
        A, B, C = 0, 1, 2

        def minor(rows, cols):
            return float(det(matrix[np.ix_(mode_indices(rows), mode_indices(cols))]))

        out.update(
            y=float(det(block(matrix, C, B))),
            z=float(det(block(matrix, C, A))),
            Dx=minor((B, C), (A, B)),
            Dy=minor((C, A), (B, C)),
            Dz=minor((C, A), (A, B)),
        )
    return out
