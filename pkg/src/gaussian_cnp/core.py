"""Covariance-matrix representation of Gaussian states.

Conventions: quadrature ordering ``(x1, p1, ..., xn, pn)``, hbar = 1, so the
vacuum covariance matrix is ``I / 2``. The complex ``(a, a^dagger)`` form is
only reachable through :func:`convert_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    DuplicateIndex,
    IndexOutOfRange,
    InvalidCovariance,
    InvalidParameter,
    NotHermitian,
)
from .invariants import mode_indices, n_modes_of, symplectic_eigenvalues

#: Absolute tolerance for symmetry, positivity and the uncertainty bound.
VALIDITY_TOL = 1e-10

#: Symplectic eigenvalue of the vacuum.
VACUUM_NU = 0.5


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    positive: bool
    uncertainty_ok: bool
    nu_min: float

    @property
    def valid(self) -> bool:
        return self.symmetric and self.positive and self.uncertainty_ok

    @property
    def failed(self) -> list[str]:
        names = ("symmetric", "positive", "uncertainty")
        flags = (self.symmetric, self.positive, self.uncertainty_ok)
        return [name for name, ok in zip(names, flags) if not ok]

    def to_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "positive": self.positive,
            "uncertainty_ok": self.uncertainty_ok,
            "nu_min": float(self.nu_min),
            "valid": self.valid,
        }


def validate(matrix) -> ValidationReport:
    """Check that ``matrix`` is a physical covariance matrix.

    Raises:
        OddDimension: if the matrix is not square with even dimension.
    """
    matrix = np.asarray(matrix, dtype=float)
    n_modes_of(matrix)
    symmetric = bool(np.max(np.abs(matrix - matrix.T)) <= VALIDITY_TOL)
    sym = 0.5 * (matrix + matrix.T)
    lam_min = np.linalg.eigvalsh(sym)[0]
    positive = bool(lam_min > -VALIDITY_TOL)
    if lam_min > 0.0:
        nu_min = float(symplectic_eigenvalues(sym)[0])
    else:
        nu_min = 0.0
    uncertainty_ok = bool(nu_min >= VACUUM_NU - VALIDITY_TOL)
    return ValidationReport(symmetric, positive, uncertainty_ok, nu_min)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """An n-mode Gaussian state: covariance matrix plus mean vector.

    The matrix is symmetrised and validated on construction and stored
    read-only, so instances are safe to share.
    """

    matrix: np.ndarray
    mean: np.ndarray | None = None
    n_modes: int = field(init=False)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        n = n_modes_of(matrix)
        report = validate(matrix)
        if not report.valid:
            raise InvalidCovariance(
                "invalid covariance matrix: failed " + ", ".join(report.failed),
                report.failed,
            )
        mean = np.zeros(2 * n) if self.mean is None else np.asarray(self.mean, float)
        if mean.shape != (2 * n,):
            raise InvalidParameter(
                f"mean vector must have length {2 * n}, got shape {mean.shape}"
            )
        object.__setattr__(self, "matrix", _frozen(0.5 * (matrix + matrix.T)))
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "n_modes", n)

    def __eq__(self, other):
        if not isinstance(other, CovarianceState):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix) and np.array_equal(
            self.mean, other.mean
        )

    def __repr__(self):
        return f"CovarianceState(n_modes={self.n_modes})"

    def block(self, i: int, j: int) -> np.ndarray:
        return self.matrix[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    def with_mean(self, mean) -> "CovarianceState":
        return CovarianceState(self.matrix, mean)

    def allclose(self, other: "CovarianceState", atol: float = 1e-10) -> bool:
        return (
            self.n_modes == other.n_modes
            and np.allclose(self.matrix, other.matrix, rtol=0, atol=atol)
            and np.allclose(self.mean, other.mean, rtol=0, atol=atol)
        )


@dataclass(frozen=True)
class ModeStats:
    lambda_min: float
    lambda_max: float
    purity: float
    mean_photons: float


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _squeezed_thermal_block(r: float, phi: float, n_th: float) -> np.ndarray:
    rot = rotation(phi / 2)
    return (0.5 + n_th) * rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T


def _param(params: Mapping[str, float], name: str, default=None) -> float:
    if name in params:
        try:
            return float(params[name])
        except (TypeError, ValueError):
            raise InvalidParameter(f"parameter {name!r} must be a real number")
    if default is None:
        raise InvalidParameter(f"missing parameter {name!r}")
    return default


def make_state(kind: str, params: Mapping | None = None, n: int = 1) -> CovarianceState:
    """Build a standard state.

    Args:
        kind: one of ``vacuum``, ``thermal``, ``squeezed_thermal``, ``tmsv``,
            ``from_matrix``.
        params: ``n_th`` (thermal, squeezed_thermal), ``r`` and ``phi``
            (squeezed_thermal, tmsv), ``matrix`` and optional ``mean``
            (from_matrix).
        n: number of modes. ``thermal`` and ``squeezed_thermal`` produce n
            identical uncorrelated modes; ``tmsv`` requires ``n == 2``.

    Returns:
        CovarianceState: the requested state.
    """
    params = dict(params or {})
    if kind == "from_matrix":
        if "matrix" not in params:
            raise InvalidParameter("from_matrix needs a 'matrix' parameter")
        state = CovarianceState(params["matrix"], params.get("mean"))
        if params.get("n") is not None and state.n_modes != int(params["n"]):
            raise InvalidParameter("matrix size does not match n")
        return state

    if int(n) != n or n < 1:
        raise InvalidParameter(f"number of modes must be a positive integer, got {n}")
    n = int(n)
    if kind == "vacuum":
        return CovarianceState(0.5 * np.eye(2 * n))
    if kind in ("thermal", "squeezed_thermal"):
        n_th = _param(params, "n_th", 0.0)
        if n_th < 0:
            raise InvalidParameter(f"thermal photon number must be >= 0, got {n_th}")
        r = _param(params, "r", 0.0) if kind == "squeezed_thermal" else 0.0
        phi = _param(params, "phi", 0.0) if kind == "squeezed_thermal" else 0.0
        blk = _squeezed_thermal_block(r, phi, n_th)
        return CovarianceState(np.kron(np.eye(n), blk))
    if kind == "tmsv":
        if n != 2:
            raise InvalidParameter(f"tmsv is a two-mode state, got n={n}")
        r = _param(params, "r")
        phi = _param(params, "phi", 0.0)
        c, s = np.cosh(2 * r), np.sinh(2 * r)
        corr = s * rotation(phi) @ np.diag([1.0, -1.0])
        return CovarianceState(0.5 * np.block([[c * np.eye(2), corr], [corr.T, c * np.eye(2)]]))
    raise InvalidParameter(f"unknown state kind {kind!r}")


def _check_modes(n: int, modes: Iterable[int]) -> list[int]:
    modes = [int(m) for m in modes]
    if not modes:
        raise InvalidParameter("mode selection is empty")
    for m in modes:
        if not 0 <= m < n:
            raise IndexOutOfRange(f"mode {m} out of range for {n} modes")
    if len(set(modes)) != len(modes):
        raise DuplicateIndex(f"duplicate mode index in {modes}")
    return modes


def reduced_state(state: CovarianceState, modes: Iterable[int]) -> CovarianceState:
    """Trace out every mode not in ``modes``; original order is kept."""
    modes = sorted(_check_modes(state.n_modes, modes))
    idx = mode_indices(modes)
    return CovarianceState(state.matrix[np.ix_(idx, idx)], state.mean[idx])


def tensor(a: CovarianceState, b: CovarianceState) -> CovarianceState:
    """Uncorrelated joint state ``a (x) b`` (block-diagonal matrix)."""
    na, nb = 2 * a.n_modes, 2 * b.n_modes
    matrix = np.zeros((na + nb, na + nb))
    matrix[:na, :na] = a.matrix
    matrix[na:, na:] = b.matrix
    return CovarianceState(matrix, np.concatenate([a.mean, b.mean]))


def mode_stats(state: CovarianceState, mode: int) -> ModeStats:
    if not 0 <= mode < state.n_modes:
        raise IndexOutOfRange(f"mode {mode} out of range for {state.n_modes} modes")
    blk = state.block(mode, mode)
    lam, Lam = np.linalg.eigvalsh(blk)
    det = blk[0, 0] * blk[1, 1] - blk[0, 1] * blk[1, 0]
    mx, mp = state.mean[2 * mode : 2 * mode + 2]
    photons = 0.5 * np.trace(blk) - 0.5 + 0.5 * (mx**2 + mp**2)
    return ModeStats(float(lam), float(Lam), float(1.0 / (2.0 * np.sqrt(det))), float(photons))


# (a, a^dagger) = U (x, p) with a = (x + i p) / sqrt(2); the complex-basis
# matrix is conj(U) gamma U^T = V gamma V^H.
_V = np.array([[1.0, -1.0j], [1.0, 1.0j]]) / np.sqrt(2.0)


def convert_basis(matrix, direction: str) -> np.ndarray:
    """Convert a covariance matrix between quadrature and complex bases.

    Args:
        matrix: ``2n x 2n`` matrix in the source basis.
        direction: ``quadrature_to_complex`` or ``complex_to_quadrature``.

    Returns:
        np.ndarray: complex matrix for ``quadrature_to_complex``, real matrix
        otherwise.

    Raises:
        NotHermitian: complex input that is not Hermitian or does not have the
            per-mode ``[[a, b*], [b, a]]`` structure of a real covariance matrix.
    """
    matrix = np.asarray(matrix)
    n = n_modes_of(matrix)
    V = np.kron(np.eye(n), _V)
    if direction == "quadrature_to_complex":
        return V @ matrix.astype(float) @ V.conj().T
    if direction == "complex_to_quadrature":
        matrix = matrix.astype(complex)
        scale = max(1.0, float(np.max(np.abs(matrix))))
        if np.max(np.abs(matrix - matrix.conj().T)) > VALIDITY_TOL * scale:
            raise NotHermitian("complex-basis covariance matrix is not Hermitian")
        out = V.conj().T @ matrix @ V
        if np.max(np.abs(out.imag)) > VALIDITY_TOL * scale:
            raise NotHermitian(
                "complex-basis matrix lacks the [[a, b*], [b, a]] block structure"
            )
        return out.real.copy()
    raise ValueError(f"unknown direction {direction!r}")


def convert_mean(mean, direction: str) -> np.ndarray:
    """Mean-vector counterpart of :func:`convert_basis`."""
    mean = np.asarray(mean)
    n = mean.shape[0] // 2
    U = np.kron(np.eye(n), _V.conj())
    if direction == "quadrature_to_complex":
        return U @ mean.astype(float)
    if direction == "complex_to_quadrature":
        return (U.conj().T @ mean.astype(complex)).real.copy()
    raise ValueError(f"unknown direction {direction!r}")
