import math

import numpy as np
import pytest

from gaussian_cnp.audit import (
    AuditConfig,
    fingerprint,
    ppt_violations,
    random_state,
    run_audit,
    sample_pure,
)
from gaussian_cnp.core import make_state, tensor, validate
from gaussian_cnp.errors import InvalidParameter
from gaussian_cnp.invariants import partial_transpose, symplectic_eigenvalues
from gaussian_cnp.polarity import total_cnp
from gaussian_cnp.symplectic import NetworkSpec, beamsplitter, squeeze, squeezing_spectrum

from conftest import nu_oracle


@pytest.mark.parametrize("family, n", [("pure", 2), ("pure", 3), ("mixed", 2), ("mixed", 3), ("product", 3), ("biseparable", 3)])
def test_random_state_is_valid_and_deterministic(family, n):
    for seed in (0, 1, 2**64 - 1):
        a = random_state(family, n, seed)
        assert validate(a.matrix).valid
        assert a == random_state(family, n, seed)
    assert random_state(family, n, 5) != random_state(family, n, 6)


def test_random_state_zero_squeezing_is_vacuum():
    for seed in range(5):
        assert random_state("pure", 3, seed, r_max=0.0).allclose(make_state("vacuum", n=3), atol=1e-12)


def test_random_pure_state_has_vacuum_nus():
    for seed in range(10):
        nus = symplectic_eigenvalues(random_state("pure", 2, seed).matrix)
        assert nus == pytest.approx([0.5, 0.5], abs=1e-8)


def test_mixed_nus_within_bounds(rng):
    for seed in range(10):
        nus = nu_oracle(random_state("mixed", 3, seed, nth_max=1.0).matrix)
        assert np.all(nus >= 0.5 - 1e-9) and np.all(nus <= 1.5 + 1e-9)


def test_sample_pure_records_spectrum(rng):
    for _ in range(20):
        state, truth = sample_pure(3, rng, 1.2)
        assert squeezing_spectrum(state) == pytest.approx(truth, abs=1e-8)


def test_random_state_errors():
    with pytest.raises(InvalidParameter):
        random_state("mixed", 4, 0)
    with pytest.raises(InvalidParameter):
        random_state("bogus", 2, 0)
    with pytest.raises(InvalidParameter):
        random_state("biseparable", 2, 0)
    with pytest.raises(InvalidParameter):
        random_state("mixed", 2, -1)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        AuditConfig("conservation", trials=0)
    with pytest.raises(InvalidParameter):
        AuditConfig("conservation", tol=0.0)
    with pytest.raises(InvalidParameter):
        AuditConfig("theorem1", n_modes=2)
    with pytest.raises(InvalidParameter):
        AuditConfig("theorem2", family="mixed")
    with pytest.raises(InvalidParameter):
        AuditConfig("nonsense")
    assert AuditConfig("oracle").family == "mixed"


def test_conservation_example_squeezed_through_beamsplitter():
    state = tensor(make_state("squeezed_thermal", {"r": 0.5}), make_state("vacuum"))
    cfg = AuditConfig("conservation", trials=1, state=state, network=NetworkSpec(2, [beamsplitter(0, 1, 0.5)]))
    report = run_audit(cfg)
    assert report.passed
    assert report.max_abs_drift < 1e-12
    assert total_cnp(state).total == pytest.approx(0.2715403, abs=1e-7)


def test_theorem1_example():
    state = tensor(make_state("tmsv", {"r": 0.5}, 2), make_state("vacuum"))
    report = run_audit(AuditConfig("theorem1", n_modes=3, trials=1, state=state))
    assert report.passed and report.max_abs_drift < 1e-8


def test_theorem2_example():
    state = make_state("tmsv", {"r": 0.5}, 2)
    report = run_audit(AuditConfig("theorem2", trials=1, state=state))
    assert report.passed and report.max_abs_drift < 1e-12
    assert total_cnp(state).total == pytest.approx(2 * math.sinh(0.5) ** 2, abs=1e-12)


def test_active_squeezer_breaks_conservation():
    r = 0.5
    vac = make_state("vacuum", n=2)
    net = NetworkSpec(2, [squeeze(0, r)])
    report = run_audit(AuditConfig("conservation", trials=3, state=vac, network=net))
    assert not report.passed
    assert len(report.failures) == 3
    assert report.max_abs_drift == pytest.approx(math.sinh(r) ** 2, abs=1e-10)
    failure = report.failures[0]
    assert set(failure) >= {"trial", "seed", "drift", "fingerprint"}
    assert failure["fingerprint"] == fingerprint(vac)


@pytest.mark.parametrize(
    "kind, n",
    [("conservation", 2), ("conservation", 3), ("theorem1", 3), ("theorem2", 2), ("theorem2", 3),
     ("oracle", 2), ("oracle", 3), ("ppt_consistency", 2), ("ppt_consistency", 3), ("biseparable", 3)],
)
def test_small_audits_pass(kind, n):
    report = run_audit(AuditConfig(kind, n_modes=n, trials=40, depth=8, seed=314))
    assert report.passed, report.failures[:3]
    assert report.ppt_violations == 0
    assert report.trials_run == 40


def test_workers_give_identical_report():
    cfg = AuditConfig("conservation", n_modes=3, trials=30, depth=5, seed=2**63 + 17)
    assert run_audit(cfg, workers=1).to_dict() == run_audit(cfg, workers=4).to_dict()


def test_trial_seed_is_xor():
    vac = make_state("vacuum", n=2)
    net = NetworkSpec(2, [squeeze(1, 0.2)])
    report = run_audit(AuditConfig("conservation", trials=4, seed=6, state=vac, network=net))
    assert [f["seed"] for f in report.failures] == [6 ^ i for i in range(4)]


def test_report_serialization():
    doc = run_audit(AuditConfig("oracle", trials=3, seed=1)).to_dict()
    assert doc["passed"] is True and doc["failures"] == []
    assert {"kind", "trials_run", "max_abs_drift", "max_rel_drift"} <= set(doc)


def test_ppt_violations_empty_for_valid_states():
    assert ppt_violations(make_state("tmsv", {"r": 0.4}, 2)) == []
    assert ppt_violations(random_state("mixed", 3, 9)) == []


def test_at_most_one_pt_nu_below_half():
    for seed in range(50):
        state = random_state("mixed" if seed % 2 else "pure", 3, seed)
        for m in range(3):
            nus = symplectic_eigenvalues(partial_transpose(state.matrix, m))
            assert np.count_nonzero(nus < 0.5 - 1e-10) <= 1


def test_errors_carry_trial_context(monkeypatch):
    from gaussian_cnp import audit
    from gaussian_cnp.errors import PairingFailure

    def boom(*args, **kwargs):
        raise PairingFailure("synthetic")

    monkeypatch.setattr(audit, "_oracle_drift", boom)
    with pytest.raises(PairingFailure, match=r"trial 0 \(seed 11\)"):
        run_audit(AuditConfig("oracle", trials=2, seed=11))
