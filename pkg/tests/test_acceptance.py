"""Full-scale acceptance criteria.  Each test prints one PASS/FAIL line.

Set MONOLEARN_ACCEPT_SCALE below 1 to shrink trial counts for a quick run.
"""

import os

import pytest

from monolearn import verify

SCALE = float(os.environ.get("MONOLEARN_ACCEPT_SCALE", "1"))

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def learner_reports():
    return verify.criteria_8_9(scale=SCALE)


def _check(report, capsys):
    with capsys.disabled():
        print("\n" + report.line())
        for failure in report.failures[:5]:
            print(f"    failure: {failure}")
    assert report.passed, report.line()


def test_criterion_01_hypercube_corrector(capsys):
    _check(verify.criterion_1(scale=SCALE), capsys)


def test_criterion_02_k_valued_corrector_on_dags(capsys):
    _check(verify.criterion_2(scale=SCALE), capsys)


def test_criterion_03_matching_equals_distance(capsys):
    _check(verify.criterion_3(scale=SCALE), capsys)


def test_criterion_04_layered_matching_weight(capsys):
    _check(verify.criterion_4(scale=SCALE), capsys)


def test_criterion_05_threshold_rounding(capsys):
    _check(verify.criterion_5(scale=SCALE), capsys)


def test_criterion_06_uniform_concentration(capsys):
    _check(verify.criterion_6(scale=SCALE), capsys)


def test_criterion_07_separation_oracle(capsys):
    _check(verify.criterion_7(scale=SCALE), capsys)


def test_criterion_08_learner_error(learner_reports, capsys):
    _check(learner_reports[0], capsys)


def test_criterion_09_distance_estimate(learner_reports, capsys):
    _check(learner_reports[1], capsys)


def test_criterion_10_ellipsoid_feasibility(capsys):
    _check(verify.criterion_10(scale=SCALE), capsys)


def test_criterion_11_randomized_labels(capsys):
    _check(verify.criterion_11(scale=SCALE), capsys)


def test_negative_control_corrupted_corrector_fails():
    reports = verify.run_criteria([1, 2], scale=0.1, corrupt=True)
    assert not any(r.passed for r in reports)
