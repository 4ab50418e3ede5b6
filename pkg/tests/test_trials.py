import cmath
import json
from pathlib import Path

import numpy as np
import pytest

from harness import section2, trials
from harness.report import TheoremReport, render, write_json_report
from harness.theorems import verify_thm_1_3
from spectral.circle import CirclePoint, OpenArc
from spectral.codec import dumps
from spectral.errors import PreconditionError, SpectralError
from spectral.rankone import unitarity_defect, unitary_eigs
from spectral.szego import VerblunskyWord


def test_random_instance_is_deterministic():
    cfg = trials.TrialConfig(seed=42, trials=1, n_max=10)
    first, second = trials.random_instance(cfg, 0), trials.random_instance(cfg, 0)
    assert first.to_dict() == second.to_dict()
    assert first.to_dict() != trials.random_instance(cfg, 1).to_dict()


def test_random_instance_shape():
    cfg = trials.TrialConfig(seed=42, trials=1, n_min=2, n_max=10, alpha_radius_max=0.5)
    inst = trials.random_instance(cfg, 0)
    word, betas, n = inst
    assert 2 <= n <= 10 and n < inst.m <= 11
    assert len(word) == 11 and len(betas) == 12
    assert np.all(np.abs(word.coefficients) <= 0.5)
    assert inst.beta(1) is betas[0]


def test_config_validation():
    with pytest.raises(SpectralError):
        trials.TrialConfig(n_min=0)
    with pytest.raises(SpectralError):
        trials.TrialConfig(n_min=5, n_max=4)
    with pytest.raises(SpectralError):
        trials.TrialConfig(alpha_radius_max=1.0)
    assert "workers" not in trials.TrialConfig(workers=4).to_dict()


def test_haar_unitary_is_unitary():
    rng = trials.trial_rng(0, 0)
    for size in (1, 5, 12):
        assert unitarity_defect(trials.haar_unitary(rng, size)) <= 1e-10


def test_streams_are_independent():
    a = trials.trial_rng(1, 2, 0).uniform(size=4)
    b = trials.trial_rng(1, 2, 1).uniform(size=4)
    assert not np.allclose(a, b)
    np.testing.assert_array_equal(a, trials.trial_rng(1, 2, 0).uniform(size=4))


def test_worker_count_does_not_change_report():
    serial = verify_thm_1_3(trials.TrialConfig(seed=7, trials=6, n_max=6, workers=1))
    threaded = verify_thm_1_3(trials.TrialConfig(seed=7, trials=6, n_max=6, workers=3))
    assert render(serial) == render(threaded)


def test_report_json_and_summary(tmp_path):
    rep = TheoremReport("1.3", seed=3, config={"trials": 1})
    rep.absorb(TheoremReport("1.3", trials=1))
    rep.slack(3.14159e-14)
    data = rep.to_dict()
    assert data["max_slack"] == 3.142e-14
    assert data["passed"] is True and data["trials"] == 1
    assert "PASS" in rep.summary()

    rep.fail({"seed": 3}, reason="not interlaced")
    out = tmp_path / "report.json"
    text = write_json_report([rep], out)
    assert out.read_text() == text
    assert '"passed": false' in text
    assert "FAIL" in rep.summary()


def test_section_2_examples():
    swap = np.array([[0, 1], [1, 0]])
    assert section2.check_cyclic_interlace(swap, [1, 0], -1).passed

    u = np.diag(np.exp(1j * np.array([2.0, 3.0, 4.0, 5.0])))
    phi = np.array([1, 2j, -1, 0.5]) / np.linalg.norm([1, 2, 1, 0.5])
    arc = OpenArc(1, np.exp(1j))
    assert section2.check_gap_count(u, phi, np.exp(0.7j), arc).passed

    s = 1 / np.sqrt(2)
    rep = section2.check_direct_sum(
        np.diag([1, 1j]), np.diag([1, -1j]), [s, s], [s, s], s, s, -1, [1]
    )
    assert rep.passed


def test_section_2_non_cyclic_vector():
    # φ only sees two of the four eigenvalues
    u = np.diag(np.exp(1j * np.array([0.5, 1.5, 3.0, 5.0])))
    phi = np.array([1, 0, 1, 0]) / np.sqrt(2)
    assert section2.check_closed_arcs(u, phi, np.exp(2.0j)).passed
    with pytest.raises(PreconditionError):
        section2.check_cyclic_interlace(u, phi, np.exp(2.0j))


def test_section_2_suite():
    cfg = trials.TrialConfig(seed=5, trials=3, n_max=6)
    rep = section2.check_section_2(section2.PROPS, cfg)
    assert rep.theorem == "2.x"
    assert rep.passed
    assert sum(rep.tallies[p] for p in section2.PROPS) + rep.tallies.get("skipped", 0) == 15

    single = section2.check_section_2(["2.4"], cfg)
    assert single.theorem == "2.4" and single.passed


def test_section_2_rejects_unknown_statement():
    with pytest.raises(PreconditionError):
        section2.check_section_2(["2.9"], trials.TrialConfig(trials=1))


SNAPSHOT = Path(__file__).parent / "snapshots" / "random_instance_seed42.json"


def test_random_instance_snapshot():
    inst = trials.random_instance(trials.TrialConfig(seed=42, trials=1, n_max=10), 0)
    text = dumps(inst.to_dict())
    if not SNAPSHOT.exists():
        SNAPSHOT.parent.mkdir(exist_ok=True)
        SNAPSHOT.write_text(text)
        pytest.skip("snapshot recorded")
    assert json.loads(SNAPSHOT.read_text()) == json.loads(text)


def test_zero_separation_exempts_the_designed_common_zero():
    lam = CirclePoint(cmath.exp(0.3j))
    n = 5
    betas = [CirclePoint(np.conj(lam.value) ** k) for k in range(1, n + 2)]
    plain = trials.Instance(VerblunskyWord(np.zeros(n)), betas, n, n + 1, seed=0, trial_index=0)
    assert trials.zero_separation(plain) < 1e-10
    designed = trials.Instance(VerblunskyWord(np.zeros(n)), betas, n, n + 1, seed=0, trial_index=0, common=lam)
    assert trials.zero_separation(designed) > 1e-2
    assert designed.to_dict()["common"] == [lam.value.real, lam.value.imag]


def test_report_writer_accepts_a_generator():
    reports = (TheoremReport(name, trials=1) for name in ("1.2", "1.3"))
    data = json.loads(write_json_report(reports))
    assert [r["theorem"] for r in data] == ["1.2", "1.3"]


def test_eigen_defect_above_tolerance_fails():
    rep = TheoremReport("1.3", trials=1)
    rep.eigen_defect({"seed": 0}, 1e-15)
    assert rep.passed and rep.max_slack == 1e-15
    rep.eigen_defect({"seed": 0}, 1e-9)
    assert not rep.passed
    assert rep.failures[0].witness["reason"] == "eigen-decomposition outside tolerance"
    assert rep.max_slack == 1e-9


def test_unitary_eigs_reports_defect():
    eig = unitary_eigs(trials.haar_unitary(trials.trial_rng(3, 0), 8))
    assert eig.defect == max(eig.residual, eig.modulus)
    assert eig.defect <= 1e-12
