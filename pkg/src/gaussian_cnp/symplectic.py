"""Symplectic matrices for linear-optical and squeezing elements.

Element conventions (quadrature ordering, ``R(t)`` the 2x2 rotation
``[[cos t, -sin t], [sin t, cos t]]``):

* beamsplitter on modes (i, j) with transmissivity ``tau`` and phase ``phi``::

      [[ sqrt(tau) I,              sqrt(1 - tau) R(phi)],
       [-sqrt(1 - tau) R(-phi),    sqrt(tau) I         ]]

* phase(angle) is ``R(angle)`` on one mode.
* squeeze(r, phi) is ``R(phi/2) diag(e^-r, e^r) R(-phi/2)``; phi = 0 squeezes x.
* two_mode_squeeze(r, phi) mixes ``(x_i, x_j)`` with ``[[cosh, sinh], [sinh, cosh]]``
  and ``(p_i, p_j)`` with ``[[cosh, -sinh], [-sinh, cosh]]``, conjugated by
  ``R(phi/2)`` on both modes.

Random networks use numpy's PCG64 generator (``numpy.random.default_rng``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import VACUUM_NU, CovarianceState, rotation
from .errors import (
    DimensionMismatch,
    InvalidCovariance,
    InvalidOp,
    InvalidParameter,
    NotPure,
    NotSymplectic,
    OddDimension,
    PairingFailure,
)
from .invariants import mode_indices, omega, symplectic_eigenvalues

SYMPLECTIC_TOL = 1e-10
PURE_TOL = 1e-8
SEED_MASK = (1 << 64) - 1

OP_KINDS = ("beamsplitter", "phase", "squeeze", "two_mode_squeeze", "raw")
_N_OP_MODES = {"beamsplitter": 2, "phase": 1, "squeeze": 1, "two_mode_squeeze": 2}


def check_seed(seed) -> int:
    if int(seed) != seed or not 0 <= seed <= SEED_MASK:
        raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


@dataclass(frozen=True, eq=False)
class GaussianOp:
    """One network element.

    ``params`` holds ``transmissivity``/``phase`` (beamsplitter), ``angle``
    (phase), ``r``/``phi`` (squeezers). Raw ops carry ``matrix`` and act on
    ``modes``, or on every mode of the network when ``modes`` is empty.
    """

    kind: str
    modes: tuple[int, ...] = ()
    params: Mapping[str, float] = field(default_factory=dict)
    matrix: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        object.__setattr__(self, "params", dict(self.params))
        if self.kind not in OP_KINDS:
            raise InvalidOp(f"unknown op type {self.kind!r}")
        if len(set(self.modes)) != len(self.modes) or any(m < 0 for m in self.modes):
            raise InvalidOp(f"op modes must be distinct nonnegative indices: {self.modes}")
        if self.kind == "raw":
            if self.matrix is None:
                raise InvalidOp("raw op needs a matrix")
            S = np.array(self.matrix, dtype=float)
            if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
                raise InvalidOp(f"raw matrix must be square with even size, got {S.shape}")
            if self.modes and S.shape[0] != 2 * len(self.modes):
                raise InvalidOp("raw matrix size does not match its modes")
            if not check_symplectic(S)["symplectic"]:
                raise NotSymplectic("raw op matrix is not symplectic")
            S.setflags(write=False)
            object.__setattr__(self, "matrix", S)
            return
        if len(self.modes) != _N_OP_MODES[self.kind]:
            raise InvalidOp(f"{self.kind} acts on {_N_OP_MODES[self.kind]} mode(s), got {self.modes}")
        if self.kind == "beamsplitter":
            tau = self.params.get("transmissivity", 0.5)
            if not 0.0 <= tau <= 1.0:
                raise InvalidOp(f"transmissivity must lie in [0, 1], got {tau}")

    @property
    def max_mode(self) -> int:
        if self.modes:
            return max(self.modes)
        return self.matrix.shape[0] // 2 - 1

    def local_matrix(self) -> np.ndarray:
        """Matrix on the op's own modes (``2k x 2k``)."""
        p = self.params
        if self.kind == "beamsplitter":
            tau = p.get("transmissivity", 0.5)
            phi = p.get("phase", 0.0)
            t, s = np.sqrt(tau), np.sqrt(1.0 - tau)
            return np.block(
                [[t * np.eye(2), s * rotation(phi)], [-s * rotation(-phi), t * np.eye(2)]]
            )
        if self.kind == "phase":
            return rotation(p.get("angle", 0.0))
        if self.kind == "squeeze":
            r, phi = p.get("r", 0.0), p.get("phi", 0.0)
            return rotation(phi / 2) @ np.diag([np.exp(-r), np.exp(r)]) @ rotation(-phi / 2)
        if self.kind == "two_mode_squeeze":
            r, phi = p.get("r", 0.0), p.get("phi", 0.0)
            c, s = np.cosh(r), np.sinh(r)
            z = np.diag([1.0, -1.0])
            S0 = np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
            rot = np.kron(np.eye(2), rotation(phi / 2))
            return rot @ S0 @ rot.T
        return np.array(self.matrix)

    def to_dict(self) -> dict:
        p = self.params
        if self.kind == "beamsplitter":
            return {
                "type": "beamsplitter",
                "modes": list(self.modes),
                "transmissivity": float(p.get("transmissivity", 0.5)),
                "phase": float(p.get("phase", 0.0)),
            }
        if self.kind == "phase":
            return {"type": "phase", "mode": self.modes[0], "angle": float(p.get("angle", 0.0))}
        if self.kind == "squeeze":
            return {
                "type": "squeeze",
                "mode": self.modes[0],
                "r": float(p.get("r", 0.0)),
                "phi": float(p.get("phi", 0.0)),
            }
        if self.kind == "two_mode_squeeze":
            return {
                "type": "two_mode_squeeze",
                "modes": list(self.modes),
                "r": float(p.get("r", 0.0)),
                "phi": float(p.get("phi", 0.0)),
            }
        out = {"type": "raw", "matrix": self.matrix.tolist()}
        if self.modes:
            out["modes"] = list(self.modes)
        return out


def beamsplitter(i: int, j: int, transmissivity: float = 0.5, phase: float = 0.0) -> GaussianOp:
    return GaussianOp("beamsplitter", (i, j), {"transmissivity": transmissivity, "phase": phase})


def phase_shift(i: int, angle: float) -> GaussianOp:
    return GaussianOp("phase", (i,), {"angle": angle})


def squeeze(i: int, r: float, phi: float = 0.0) -> GaussianOp:
    return GaussianOp("squeeze", (i,), {"r": r, "phi": phi})


def two_mode_squeeze(i: int, j: int, r: float, phi: float = 0.0) -> GaussianOp:
    return GaussianOp("two_mode_squeeze", (i, j), {"r": r, "phi": phi})


def raw(matrix, modes=()) -> GaussianOp:
    return GaussianOp("raw", tuple(modes), matrix=matrix)


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    n_modes: int
    ops: tuple[GaussianOp, ...] = ()

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise InvalidParameter(f"n_modes must be a positive integer, got {self.n_modes}")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if op.max_mode >= self.n_modes:
                raise InvalidOp(f"{op.kind} addresses mode {op.max_mode} in a {self.n_modes}-mode network")
            if op.kind == "raw" and not op.modes and op.matrix.shape[0] != 2 * self.n_modes:
                raise InvalidOp("raw matrix size does not match the network")

    def matrix(self) -> np.ndarray:
        """Composite symplectic matrix (last op leftmost)."""
        S = np.eye(2 * self.n_modes)
        for op in self.ops:
            S = op_matrix(op, self.n_modes) @ S
        return S

    def __eq__(self, other):
        if not isinstance(other, NetworkSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {"modes": self.n_modes, "ops": [op.to_dict() for op in self.ops]}


def op_matrix(op: GaussianOp, n: int) -> np.ndarray:
    """Embed ``op`` into ``n`` modes (identity on untouched modes)."""
    if op.max_mode >= n:
        raise InvalidOp(f"{op.kind} addresses mode {op.max_mode} but n={n}")
    local = op.local_matrix()
    if op.kind == "raw" and not op.modes:
        if local.shape[0] != 2 * n:
            raise InvalidOp("raw matrix size does not match n")
        return local
    S = np.eye(2 * n)
    idx = mode_indices(op.modes)
    S[np.ix_(idx, idx)] = local
    return S


def check_symplectic(S) -> dict[str, bool]:
    """``{"symplectic": S Omega S^T == Omega, "passive": also S S^T == I}``."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise OddDimension(f"expected an even square matrix, got shape {S.shape}")
    n = S.shape[0] // 2
    Om = omega(n)
    symp = bool(np.max(np.abs(S @ Om @ S.T - Om)) <= SYMPLECTIC_TOL)
    passive = symp and bool(np.max(np.abs(S @ S.T - np.eye(2 * n))) <= SYMPLECTIC_TOL)
    return {"symplectic": symp, "passive": passive}


def transform(state: CovarianceState, S: np.ndarray) -> CovarianceState:
    """``gamma -> S gamma S^T``, ``mean -> S mean``."""
    S = np.asarray(S, dtype=float)
    if S.shape != state.matrix.shape:
        raise DimensionMismatch(f"matrix of shape {S.shape} on a {state.n_modes}-mode state")
    try:
        return CovarianceState(S @ state.matrix @ S.T, S @ state.mean)
    except InvalidCovariance as exc:
        raise InvalidCovariance(
            f"state lost validity under the network: {exc}", exc.failed
        ) from exc


def apply(state: CovarianceState, network: NetworkSpec) -> CovarianceState:
    if state.n_modes != network.n_modes:
        raise DimensionMismatch(
            f"{network.n_modes}-mode network applied to a {state.n_modes}-mode state"
        )
    return transform(state, network.matrix())


def random_passive_network(n: int, depth: int, seed: int) -> NetworkSpec:
    """Random beamsplitter/phase-shifter mesh.

    Each of ``depth`` layers draws, in this order: an ordered mode pair,
    ``tau ~ U(0, 1)``, ``phi ~ U(0, 2 pi)`` for a beamsplitter, then a mode
    and an ``angle ~ U(0, 2 pi)`` for a phase shifter.
    """
    if n < 2:
        raise InvalidParameter(f"random networks need at least 2 modes, got {n}")
    if depth < 1:
        raise InvalidParameter(f"depth must be positive, got {depth}")
    rng = np.random.default_rng(check_seed(seed))
    ops = []
    for _ in range(depth):
        i, j = rng.choice(n, size=2, replace=False)
        tau = rng.uniform(0.0, 1.0)
        phi = rng.uniform(0.0, 2 * np.pi)
        ops.append(beamsplitter(int(i), int(j), tau, phi))
        m = rng.integers(n)
        ops.append(phase_shift(int(m), rng.uniform(0.0, 2 * np.pi)))
    return NetworkSpec(n, ops)


def haar_passive_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random passive symplectic matrix (image of a random unitary)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    u = q * (d / np.abs(d))
    X, Y = u.real, u.imag
    # a -> u a maps (x, p) -> [[X, -Y], [Y, X]] in (x..., p...) ordering.
    S = np.zeros((2 * n, 2 * n))
    S[0::2, 0::2] = X
    S[0::2, 1::2] = -Y
    S[1::2, 0::2] = Y
    S[1::2, 1::2] = X
    return S


def squeezing_spectrum(state: CovarianceState) -> list[float]:
    """Squeezing parameters ``r_1 <= ... <= r_n`` of a pure state.

    The eigenvalues of ``2 gamma`` of a pure state come in reciprocal pairs
    ``exp(+/- 2 r_k)``.
    """
    nus = symplectic_eigenvalues(state.matrix)
    if np.max(np.abs(nus - VACUUM_NU)) > PURE_TOL:
        raise NotPure(f"state is not pure (symplectic eigenvalues {nus})")
    ev = np.linalg.eigvalsh(2.0 * state.matrix)
    n = state.n_modes
    small, large = ev[:n], ev[::-1][:n]
    if np.any(np.abs(small * large - 1.0) > PURE_TOL):
        raise PairingFailure("eigenvalues of 2*gamma do not pair reciprocally")
    r = 0.25 * (np.log(large) - np.log(small))
    return sorted(float(max(v, 0.0)) for v in r)
