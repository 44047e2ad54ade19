"""Classical-nonclassical polarity (CNP) of 1-, 2- and 3-mode states.

Sign convention throughout: positive values mean nonclassical (single-mode
squeezing below vacuum noise, or bipartite entanglement), negative values
mean classical (excess noise, separability).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import CovarianceState, mode_stats, reduced_state
from .errors import CrossCheckFailure, IndexOutOfRange, UnsupportedModeCount
from .invariants import (
    MAX_MODES,
    g_eval,
    minor_invariants,
    partial_transpose,
    symplectic_eigenvalues,
)

BOUNDARY_TOL = 1e-10
CROSS_CHECK_TOL = 1e-9
TOTAL_CHECK_TOL = 1e-10

ENTANGLED = "entangled"
SEPARABLE = "separable"
BOUNDARY = "boundary"


def single_mode_cnp(state: CovarianceState, mode: int) -> float:
    """``-(lambda - 1/2)(Lambda - 1/2)`` from the reduced 2x2 block."""
    stats = mode_stats(state, mode)
    return -(stats.lambda_min - 0.5) * (stats.lambda_max - 0.5)


@dataclass(frozen=True)
class BipartiteDetail:
    value: float
    eigen_value: float
    pt_nus: tuple[float, ...]


def _bipartite_detail(matrix: np.ndarray, mode: int) -> BipartiteDetail:
    pt = partial_transpose(matrix, mode)
    value = g_eval(minor_invariants(pt, transposed=True), 0.25)
    nus = symplectic_eigenvalues(pt)
    eigen_value = -2.0 * float(np.prod(nus**2 - 0.25))
    if abs(value - eigen_value) > CROSS_CHECK_TOL * max(1.0, abs(value)):
        raise CrossCheckFailure(
            f"bipartite CNP minor path {value!r} vs eigenvalue path {eigen_value!r}"
        )
    return BipartiteDetail(value, eigen_value, tuple(float(v) for v in nus))


def _check_bipartite_args(state: CovarianceState, mode: int):
    n = state.n_modes
    if n < 2 or n > MAX_MODES:
        raise UnsupportedModeCount(f"bipartite CNP needs 2 or 3 modes, got {n}")
    if not 0 <= mode < n:
        raise IndexOutOfRange(f"mode {mode} out of range for {n} modes")


def bipartite_detail(state: CovarianceState, mode: int) -> BipartiteDetail:
    """Bipartite CNP of ``mode : rest`` with both computation paths."""
    _check_bipartite_args(state, mode)
    return _bipartite_detail(state.matrix, mode)


def bipartite_cnp(state: CovarianceState, mode: int) -> float:
    """``1 x (n-1)`` bipartite CNP, ``g(1/4)`` of the partially transposed matrix.

    Raises:
        UnsupportedModeCount: for n = 1 or n > 3.
        CrossCheckFailure: if the minor-sum and eigenvalue paths disagree.
    """
    return bipartite_detail(state, mode).value


def classify(value: float, boundary_tol: float = BOUNDARY_TOL) -> str:
    if value > boundary_tol:
        return ENTANGLED
    if value < -boundary_tol:
        return SEPARABLE
    return BOUNDARY


def log_negativity(state: CovarianceState, mode: int) -> float:
    """``max(0, -ln(2 nu_min))`` of the partial transpose on ``mode``."""
    if state.n_modes < 2:
        raise UnsupportedModeCount("logarithmic negativity needs at least 2 modes")
    if not 0 <= mode < state.n_modes:
        raise IndexOutOfRange(f"mode {mode} out of range for {state.n_modes} modes")
    nu_min = symplectic_eigenvalues(partial_transpose(state.matrix, mode))[0]
    return max(0.0, float(-np.log(2.0 * nu_min)))


def _pair_key(a: int, b: int) -> str:
    return f"{a}-{b}"


@dataclass(frozen=True)
class PolarityReport:
    """All CNP contributions of a state plus the two total computations.

    ``bipartite`` maps a mode to its ``mode : rest`` CNP; ``pairs`` (three
    modes only) maps ``"i-j"`` to the CNP of the reduced two-mode state.
    Classification keys are ``"bipartite/<mode>"`` and ``"pair/<i>-<j>"``.
    """

    n_modes: int
    single: tuple[float, ...]
    pairs: dict[str, float] = field(default_factory=dict)
    bipartite: dict[int, float] = field(default_factory=dict)
    total: float = 0.0
    total_closed_form: float = 0.0
    classifications: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "single": [float(v) for v in self.single],
            "pairs": {k: float(v) for k, v in self.pairs.items()},
            "bipartite": {str(k): float(v) for k, v in self.bipartite.items()},
            "total": float(self.total),
            "total_closed_form": float(self.total_closed_form),
            "classifications": dict(self.classifications),
        }


def closed_form_total(state: CovarianceState) -> float:
    """Total CNP from the symplectic invariants and the trace of the matrix."""
    n = state.n_modes
    gamma = state.matrix
    inv = minor_invariants(gamma)
    half_trace = 0.5 * float(np.trace(gamma))
    if n == 1:
        return -inv[0] + half_trace - 0.25
    if n == 2:
        return half_trace - 0.5 * inv[1] - 5.0 / 8.0 - 2.0 * inv[0]
    if n == 3:
        return (
            -3.0 / 8.0 * inv[2]
            - 0.5 * inv[1]
            - 6.0 * inv[0]
            - 33.0 / 32.0
            + half_trace
        )
    raise UnsupportedModeCount(f"no total CNP is defined for {n} modes")


def total_cnp(state: CovarianceState, boundary_tol: float = BOUNDARY_TOL) -> PolarityReport:
    """Sum of single-mode, reduced-pair and bipartite CNPs.

    Two modes: ``P_A + P_B + P_{A:B}``. Three modes: three single-mode terms,
    three reduced-pair terms and three ``alpha : rest`` terms, each counted
    once. The sum is checked against :func:`closed_form_total`.
    """
    n = state.n_modes
    if n > MAX_MODES:
        raise UnsupportedModeCount(f"no total CNP is defined for {n} modes")
    single = tuple(single_mode_cnp(state, m) for m in range(n))
    pairs: dict[str, float] = {}
    bipartite: dict[int, float] = {}
    labels: dict[str, str] = {}

    if n >= 2:
        for m in range(n):
            bipartite[m] = bipartite_cnp(state, m)
            labels[f"bipartite/{m}"] = classify(bipartite[m], boundary_tol)
    if n == 3:
        for a, b in itertools.combinations(range(n), 2):
            key = _pair_key(a, b)
            pairs[key] = bipartite_cnp(reduced_state(state, (a, b)), 0)
            labels[f"pair/{key}"] = classify(pairs[key], boundary_tol)

    total = sum(single)
    if n == 2:
        total += bipartite[0]
    elif n == 3:
        total += sum(pairs.values()) + sum(bipartite.values())

    closed = closed_form_total(state)
    if abs(total - closed) > TOTAL_CHECK_TOL * max(1.0, abs(total)):
        raise CrossCheckFailure(f"summed total {total!r} vs closed form {closed!r}")
    return PolarityReport(n, single, pairs, bipartite, float(total), float(closed), labels)
