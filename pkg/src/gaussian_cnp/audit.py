"""Randomized audits of the conservation laws and theorems.

Every trial ``i`` draws from its own generator seeded with ``seed ^ i``
(numpy PCG64), so an audit gives identical results run sequentially or
across worker threads, and any failing trial can be replayed on its own.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import CovarianceState, make_state, tensor
from .errors import CNPError, InvalidCovariance, InvalidParameter
from .invariants import (
    coupling_determinants,
    invariants_from_nu,
    minor_invariants,
    partial_transpose,
    symplectic_eigenvalues,
)
from .polarity import BOUNDARY_TOL, bipartite_detail, total_cnp
from .symplectic import (
    NetworkSpec,
    apply,
    check_seed,
    haar_passive_matrix,
    random_passive_network,
    squeeze,
    squeezing_spectrum,
    two_mode_squeeze,
    op_matrix,
)

KINDS = ("conservation", "theorem1", "theorem2", "oracle", "ppt_consistency", "biseparable")
FAMILIES = ("pure", "mixed", "product", "biseparable")

_DEFAULT_FAMILY = {
    "conservation": "mixed",
    "theorem1": "pure",
    "theorem2": "pure",
    "oracle": "mixed",
    "ppt_consistency": "mixed",
    "biseparable": "biseparable",
}

# Lower bound, as a fraction of r_max / nth_max, for the biseparable audit's
# squeezing and thermal draws; keeps the mixed-C polarity above tolerance.
_BISEP_FLOOR = 0.05


@dataclass(frozen=True, eq=False)
class AuditConfig:
    """Audit parameters.

    ``state`` and ``network`` replace the random sampler and the random
    passive network in every trial, for replaying a specific case.
    """

    kind: str
    n_modes: int = 2
    trials: int = 100
    depth: int = 10
    seed: int = 0
    family: str | None = None
    r_max: float = 1.5
    nth_max: float = 2.0
    tol: float = 1e-8
    state: CovarianceState | None = None
    network: NetworkSpec | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown audit kind {self.kind!r}")
        family = self.family or _DEFAULT_FAMILY[self.kind]
        object.__setattr__(self, "family", family)
        if family not in FAMILIES:
            raise InvalidParameter(f"unknown state family {family!r}")
        if self.state is not None:
            object.__setattr__(self, "n_modes", self.state.n_modes)
        if self.n_modes not in (2, 3):
            raise InvalidParameter(f"audits run on 2 or 3 modes, got {self.n_modes}")
        if self.trials < 1:
            raise InvalidParameter("trials must be >= 1")
        if self.depth < 1:
            raise InvalidParameter("depth must be >= 1")
        if not self.tol > 0:
            raise InvalidParameter("tol must be positive")
        if self.r_max < 0 or self.nth_max < 0:
            raise InvalidParameter("r_max and nth_max must be nonnegative")
        check_seed(self.seed)
        if self.kind in ("theorem1", "theorem2") and family != "pure":
            raise InvalidParameter(f"{self.kind} audits need the pure family")
        if self.kind == "theorem1" and self.n_modes != 3:
            raise InvalidParameter("theorem1 audits need 3 modes")
        if (self.kind == "biseparable" or family == "biseparable") and self.n_modes != 3:
            raise InvalidParameter("biseparable states need 3 modes")
        if self.network is not None and self.network.n_modes != self.n_modes:
            raise InvalidParameter("network and state mode counts differ")


@dataclass(frozen=True)
class AuditReport:
    kind: str
    n_modes: int
    family: str
    seed: int
    trials_run: int
    max_abs_drift: float
    max_rel_drift: float
    ppt_violations: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_modes": self.n_modes,
            "family": self.family,
            "seed": self.seed,
            "trials_run": self.trials_run,
            "max_abs_drift": float(self.max_abs_drift),
            "max_rel_drift": float(self.max_rel_drift),
            "ppt_violations": self.ppt_violations,
            "failures": list(self.failures),
            "passed": self.passed,
        }


def fingerprint(state: CovarianceState) -> str:
    return hashlib.sha256(np.ascontiguousarray(state.matrix).tobytes()).hexdigest()[:16]


# --------------------------------------------------------------------------
# state samplers


def _single_mode(rng, r_max, nth_max) -> CovarianceState:
    params = {
        "r": rng.uniform(0.0, r_max),
        "phi": rng.uniform(0.0, 2 * np.pi),
        "n_th": rng.uniform(0.0, nth_max),
    }
    return make_state("squeezed_thermal", params)


def sample_pure(n: int, rng: np.random.Generator, r_max: float):
    """Random pure state and its squeezing content.

    Either single-mode squeezers on every mode, or one two-mode squeezer on a
    random pair plus single-mode squeezers elsewhere; then a Haar-random
    passive transformation. A two-mode squeezer of strength r contributes
    ``(r, r)`` to the spectrum.

    Returns:
        tuple[CovarianceState, list[float]]: state and sorted squeezing
        parameters.
    """
    use_tms = rng.uniform() < 0.5
    pair = tuple(int(m) for m in rng.choice(n, size=2, replace=False))
    S = np.eye(2 * n)
    spectrum = []
    if use_tms:
        r = rng.uniform(0.0, r_max)
        S = op_matrix(two_mode_squeeze(*pair, r, rng.uniform(0.0, 2 * np.pi)), n)
        spectrum += [r, r]
    for m in range(n):
        if use_tms and m in pair:
            continue
        r = rng.uniform(0.0, r_max)
        S = op_matrix(squeeze(m, r, rng.uniform(0.0, 2 * np.pi)), n) @ S
        spectrum.append(r)
    S = haar_passive_matrix(n, rng) @ S
    return CovarianceState(0.5 * S @ S.T), sorted(spectrum)


def sample_mixed(n: int, rng: np.random.Generator, r_max: float, nth_max: float):
    """Williamson construction ``S diag(nu) S^T`` with ``S = O1 Z O2``."""
    nus = 0.5 + rng.uniform(0.0, nth_max, size=n)
    Z = np.eye(2 * n)
    for m in range(n):
        Z = op_matrix(squeeze(m, rng.uniform(0.0, r_max), rng.uniform(0.0, 2 * np.pi)), n) @ Z
    S = haar_passive_matrix(n, rng) @ Z @ haar_passive_matrix(n, rng)
    return CovarianceState(S @ np.diag(np.repeat(nus, 2)) @ S.T)


def _sample_biseparable(rng, r_max, nth_max) -> CovarianceState:
    ab = make_state(
        "tmsv", {"r": rng.uniform(0.0, r_max), "phi": rng.uniform(0.0, 2 * np.pi)}, 2
    )
    return tensor(ab, _single_mode(rng, r_max, nth_max))


def _sample(family, n, rng, r_max, nth_max) -> CovarianceState:
    if family == "pure":
        return sample_pure(n, rng, r_max)[0]
    if family == "mixed":
        return sample_mixed(n, rng, r_max, nth_max)
    if family == "product":
        state = _single_mode(rng, r_max, nth_max)
        for _ in range(n - 1):
            state = tensor(state, _single_mode(rng, r_max, nth_max))
        return state
    if family == "biseparable":
        if n != 3:
            raise InvalidParameter("biseparable states need 3 modes")
        return _sample_biseparable(rng, r_max, nth_max)
    raise InvalidParameter(f"unknown state family {family!r}")


def random_state(family: str, n: int, seed: int, r_max: float = 1.5, nth_max: float = 2.0) -> CovarianceState:
    if n not in (2, 3):
        raise InvalidParameter(f"random states are drawn for 2 or 3 modes, got {n}")
    if r_max < 0 or nth_max < 0:
        raise InvalidParameter("r_max and nth_max must be nonnegative")
    rng = np.random.default_rng(check_seed(seed))
    return _sample(family, n, rng, r_max, nth_max)


# --------------------------------------------------------------------------
# per-trial checks


def ppt_violations(state: CovarianceState, band: float = BOUNDARY_TOL) -> list[str]:
    """Inconsistencies between bipartite CNP signs and the PPT spectrum.

    Checked for every ``mode : rest`` split and, for three modes, every
    reduced pair. A violation is either more than one partially transposed
    symplectic eigenvalue below 1/2, or a CNP whose sign (outside ``band``)
    contradicts ``nu_min`` vs 1/2 (outside ``band``).
    """
    cases = [(f"{m}:rest", state.matrix, m) for m in range(state.n_modes)]
    if state.n_modes == 3:
        for a, b in ((0, 1), (0, 2), (1, 2)):
            idx = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1]
            cases.append((f"{a}:{b}", state.matrix[np.ix_(idx, idx)], 0))
    out = []
    for label, matrix, mode in cases:
        detail = bipartite_detail(CovarianceState(matrix), mode)
        nus = np.asarray(detail.pt_nus)
        if np.count_nonzero(nus < 0.5 - band) > 1:
            out.append(f"{label}: more than one PT symplectic eigenvalue below 1/2")
        gap = 0.5 - nus[0]
        if (detail.value > band and gap < -band) or (detail.value < -band and gap > band):
            out.append(f"{label}: CNP {detail.value:.3e} disagrees with nu_min {nus[0]:.12g}")
    return out


@dataclass
class _Trial:
    index: int
    seed: int
    drift: float
    rel_drift: float
    fingerprint: str
    ok: bool = True
    notes: list[str] = field(default_factory=list)
    ppt: list[str] = field(default_factory=list)


def _rel(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(1e-300, np.abs(b))))


def _oracle_drift(state: CovarianceState) -> float:
    n = state.n_modes
    matrices = [state.matrix] + [partial_transpose(state.matrix, m) for m in range(n)]
    drift = max(
        _rel(minor_invariants(g).as_array(), invariants_from_nu(symplectic_eigenvalues(g)).as_array())
        for g in matrices
    )
    inv = minor_invariants(state.matrix)
    inv_t = minor_invariants(matrices[1], transposed=True)
    d = coupling_determinants(state.matrix)
    if n == 2:
        pairs = [(inv_t[1], inv[1] - 4 * d["x"])]
    else:
        pairs = [
            (inv_t[1], inv[1] - 4 * d["Dx"] - 4 * d["Dy"]),
            (inv_t[2], inv[2] - 4 * d["x"] - 4 * d["z"]),
        ]
    for got, want in pairs:
        drift = max(drift, abs(got - want) / max(1.0, abs(want)))
    return drift


def _run_trial(cfg: AuditConfig, index: int) -> _Trial:
    seed = cfg.seed ^ index
    rng = np.random.default_rng(seed)
    n = cfg.n_modes
    notes: list[str] = []
    ppt: list[str] = []

    def draw():
        if cfg.state is not None:
            return cfg.state
        return _sample(cfg.family, n, rng, cfg.r_max, cfg.nth_max)

    if cfg.kind == "conservation":
        state = draw()
        network = cfg.network
        if network is None:
            network = random_passive_network(n, cfg.depth, int(rng.integers(1 << 63)))
        out = apply(state, network)
        before = total_cnp(state).total
        after = total_cnp(out).total
        drift = abs(before - after)
        rel = drift / max(1.0, abs(before))
        ppt += ppt_violations(state) + ppt_violations(out)
        ok = rel <= cfg.tol
    elif cfg.kind == "theorem1":
        state = draw()
        drift = rel = max(abs(v) for v in total_cnp(state).bipartite.values())
        ppt += ppt_violations(state)
        ok = drift <= cfg.tol
    elif cfg.kind == "theorem2":
        state = draw()
        total = total_cnp(state).total
        photons = sum(np.sinh(r) ** 2 for r in squeezing_spectrum(state))
        drift = abs(total - photons)
        rel = drift / max(1.0, abs(photons))
        ppt += ppt_violations(state)
        ok = drift <= cfg.tol
    elif cfg.kind == "oracle":
        state = draw()
        drift = rel = _oracle_drift(state)
        ppt += ppt_violations(state)
        ok = drift <= cfg.tol
    elif cfg.kind == "ppt_consistency":
        state = draw()
        ppt += ppt_violations(state)
        drift = rel = float(len(ppt))
        ok = True
    else:
        # biseparable: TMSV (x) C with C pure, then the same C with thermal noise
        lo_r, lo_n = _BISEP_FLOOR * cfg.r_max, _BISEP_FLOOR * cfg.nth_max
        ab = make_state("tmsv", {"r": rng.uniform(lo_r, cfg.r_max), "phi": rng.uniform(0, 2 * np.pi)}, 2)
        c_params = {"r": rng.uniform(0.0, cfg.r_max), "phi": rng.uniform(0, 2 * np.pi)}
        pure = tensor(ab, make_state("squeezed_thermal", c_params))
        c_params["n_th"] = rng.uniform(lo_n, cfg.nth_max)
        state = tensor(ab, make_state("squeezed_thermal", c_params))
        drift = rel = abs(bipartite_detail(pure, 0).value)
        p_mixed = bipartite_detail(state, 0).value
        if not p_mixed > cfg.tol:
            notes.append(f"mixed C gives P(A:BC) = {p_mixed:.3e}, expected > {cfg.tol:g}")
        ppt += ppt_violations(pure) + ppt_violations(state)
        ok = drift <= cfg.tol and not notes

    return _Trial(index, seed, drift, rel, fingerprint(state), ok and not ppt, notes, ppt)


def _guarded_trial(cfg: AuditConfig, index: int) -> _Trial:
    try:
        return _run_trial(cfg, index)
    except InvalidCovariance as exc:
        raise InvalidCovariance(f"trial {index} (seed {cfg.seed ^ index}): {exc}", exc.failed) from exc
    except CNPError as exc:
        raise type(exc)(f"trial {index} (seed {cfg.seed ^ index}): {exc}") from exc


def run_audit(config: AuditConfig, workers: int = 1) -> AuditReport:
    """Run ``config.trials`` independent trials and aggregate them.

    A trial fails when its drift exceeds ``config.tol`` (relative drift for
    conservation audits) or when any PPT consistency check fails on a state
    it touched. Errors propagate with the trial index and seed attached.
    """
    indices = range(config.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _guarded_trial(config, i), indices))
    else:
        results = [_guarded_trial(config, i) for i in indices]

    failures = [
        {
            "trial": t.index,
            "seed": t.seed,
            "drift": float(t.drift),
            "fingerprint": t.fingerprint,
            "notes": t.notes + t.ppt,
        }
        for t in sorted(results, key=lambda t: t.index)
        if not t.ok
    ]
    ppt = sum(len(t.ppt) for t in results)
    return AuditReport(
        kind=config.kind,
        n_modes=config.n_modes,
        family=config.family,
        seed=config.seed,
        trials_run=len(results),
        max_abs_drift=max(t.drift for t in results),
        max_rel_drift=max(t.rel_drift for t in results),
        ppt_violations=ppt,
        failures=failures,
    )
