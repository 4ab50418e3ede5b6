import cmath
import logging

import numpy as np
import pytest

from harness import theorems
from harness.trials import TrialConfig
from spectral.circle import OpenArc
from spectral.cmv import printed_lambda
from spectral.errors import NotOnCircleError, PreconditionError
from spectral.szego import VerblunskyWord

LAM = cmath.exp(0.3j)


def rotated_betas(count, lam=LAM):
    return [np.conj(lam) ** k for k in range(1, count + 1)]


def test_estimate_gap_zero_word_has_none():
    assert theorems.estimate_gap(VerblunskyWord.constant(0, theorems.GAP_DEGREE)) is None


def test_geronimus_gap_holds_at_most_one_zero():
    word = VerblunskyWord.constant(0.5, theorems.GAP_DEGREE)
    gap = theorems.estimate_gap(word)
    assert gap is not None and gap.length > 0.5
    betas = np.exp(2j * np.pi * np.arange(8) / 8 + 0.1j)
    rep = theorems.check_thm_1_1(word, gap, betas, range(1, 26))
    assert rep.passed
    assert rep.label == "empirical-gap"
    assert "zeros_in_gap=2" not in rep.tallies


def test_thm_1_1_vacuous_and_tiny_gap():
    rep = theorems.check_thm_1_1(np.zeros(5), None, [1], [3])
    assert rep.passed and rep.tallies["vacuous"] == 1
    tiny = OpenArc(cmath.exp(0.2j), cmath.exp(0.2001j))
    rep = theorems.check_thm_1_1(np.zeros(5), tiny, [1, -1], [2, 3, 4])
    assert rep.passed and rep.tallies["zeros_in_gap=0"] == 6


def test_thm_1_1_reports_two_zeros_in_an_arc_that_meets_the_support():
    # the free measure has the whole circle as support; a wide arc catches several zeros
    arc = OpenArc(1j, -1j)
    rep = theorems.check_thm_1_1(np.zeros(8), arc, [1], [8])
    assert not rep.passed
    assert rep.failures[0].witness["count"] >= 2


@pytest.mark.parametrize("word", [[0], [0.5]])
def test_thm_1_2_small_cases(word):
    rep = theorems.check_thm_1_2(word, 1, 2)
    assert rep.passed
    assert rep.max_slack < 1e-10


def test_thm_1_3_roots_of_unity():
    assert theorems.check_thm_1_3(np.zeros(1), 2, 1, -1).passed
    assert theorems.check_thm_1_3(np.zeros(2), 3, 1, -1).passed


def test_thm_1_3_needs_distinct_boundaries():
    with pytest.raises(PreconditionError):
        theorems.check_thm_1_3(np.zeros(2), 3, 1j, 1j)


def test_thm_1_4_rotated_family_is_case_ii():
    n = 4
    betas = rotated_betas(n + 1)
    rep = theorems.check_thm_1_4(np.zeros(n), betas[n - 1], betas[n], n)
    assert rep.passed
    assert rep.tallies["case_ii"] == 1


def test_thm_1_4_generic_is_case_i():
    rep = theorems.check_thm_1_4(np.zeros(3), 1, cmath.exp(0.01j), 3)
    assert rep.passed
    assert rep.tallies["case_i"] == 1


def test_thm_1_4_rejects_printed_decoupling_value():
    n = 4
    betas = rotated_betas(n + 1)
    rep = theorems.check_thm_1_4(np.zeros(n), betas[n - 1], betas[n], n, lambda_rule=printed_lambda)
    assert not rep.passed
    assert rep.failures[0].witness["reason"] == "λ_n is not the common zero"


def test_thm_3_4_roots_of_unity():
    ones = [1] * 9
    for n, m in [(2, 3), (3, 5), (4, 9), (1, 4)]:
        assert theorems.check_thm_3_4(np.zeros(8), ones, n, m).passed


def test_thm_3_4_rotated_family_logs_split_chain(caplog):
    with caplog.at_level(logging.DEBUG, logger="harness.theorems"):
        rep = theorems.check_thm_3_4(np.zeros(6), rotated_betas(7), 3, 7)
    assert rep.passed
    assert "split chain" in caplog.text


def test_thm_3_4_needs_larger_degree():
    with pytest.raises(PreconditionError):
        theorems.check_thm_3_4(np.zeros(4), [1] * 5, 3, 3)


def test_corollary_sequence_for_zero_word():
    betas = theorems.corollary_beta_sequence(LAM, np.zeros(10), 10)
    np.testing.assert_allclose([b.value for b in betas], rotated_betas(10), atol=1e-12)
    ones = theorems.corollary_beta_sequence(1, np.zeros(5), 6)
    np.testing.assert_allclose([b.value for b in ones], np.ones(6), atol=1e-15)


def test_corollary_sequence_makes_common_zero():
    word = [0.3, -0.2j, 0.1 + 0.1j, -0.4, 0.25j, 0.5 - 0.1j, -0.3 - 0.3j, 0.05, 0.6j, -0.2 + 0.2j, 0.1, 0.7]
    lam = cmath.exp(0.9j)
    betas = theorems.corollary_beta_sequence(lam, word, 12)
    residuals = theorems.common_zero_residuals(lam, word, betas)
    assert residuals.shape == (12,)
    assert np.all(residuals <= theorems.COMMON_ZERO_TOL)


def test_corollary_sequence_needs_enough_coefficients():
    with pytest.raises(PreconditionError):
        theorems.corollary_beta_sequence(1, [0.1], 4)


def test_corollary_sequence_rejects_off_circle_point():
    with pytest.raises(NotOnCircleError):
        theorems.corollary_beta_sequence(1.2, [0.1], 2)


SMALL = TrialConfig(seed=11, trials=6, n_min=1, n_max=7)


@pytest.mark.parametrize(
    "runner", [theorems.verify_thm_1_2, theorems.verify_thm_1_3, theorems.verify_thm_1_4, theorems.verify_thm_3_4]
)
def test_random_suites_pass(runner):
    rep = runner(SMALL)
    assert rep.passed
    assert rep.seed == 11
    assert rep.trials + rep.tallies.get("skipped", 0) >= SMALL.trials


def test_thm_1_4_suite_includes_constructed_case_ii():
    rep = theorems.verify_thm_1_4(TrialConfig(seed=4, trials=20, n_min=2, n_max=6))
    assert rep.passed
    assert rep.tallies["case_ii"] >= 1


def test_thm_1_4_suite_catches_printed_formula():
    rep = theorems.verify_thm_1_4(TrialConfig(seed=4, trials=20, n_min=2, n_max=6), lambda_rule=printed_lambda)
    assert not rep.passed
    assert all("instance" in f.to_dict() for f in rep.failures)


def test_thm_1_1_suite_is_labelled():
    rep = theorems.verify_thm_1_1(TrialConfig(seed=2, trials=2, n_min=1, n_max=6, alpha_radius_max=0.8))
    assert rep.passed
    assert rep.to_dict()["label"] == "empirical-gap"


def test_zero_trials_is_an_empty_pass():
    rep = theorems.verify_thm_1_4(TrialConfig(trials=0))
    assert rep.passed and rep.trials == 0 and rep.failures == []


def test_thm_1_4_constructed_instances_are_separated_and_case_ii():
    rep = theorems.verify_thm_1_4(TrialConfig(seed=1, trials=500, n_max=20))
    assert rep.passed
    assert rep.tallies["case_ii"] == 50
    assert "skipped" not in rep.tallies
