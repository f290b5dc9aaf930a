"""The ten acceptance criteria at their stated sizes.

Each test records one PASS/FAIL line; the lines are listed together at the
end of the pytest run.
"""

from df3forge import checks as K
from df3forge.checks import CheckResult


def test_c01_soundness(report):
    r = report(1, K.check_soundness(instances=1000, random_models=500, max_n=6, depth=5))
    assert r.passed and r.seconds < 300, r.summary


def test_c02_substitution(report):
    # the simulation presupposes two distinct elements, so |U| = 1 is out
    r = report(2, K.check_substitution(corpus_size=500, sizes=(2, 3)))
    assert r.passed and r.seconds < 600, r.summary


def test_c03_bridge(report):
    r = report(3, K.check_bridge(sample3=10_000))
    assert r.passed and r.seconds < 60, r.summary


def test_c04_modal_correspondence(report):
    r = report(4, K.check_modal_correspondence(size=200))
    assert r.passed, r.summary


def test_c05_equational(report):
    a = K.check_equational_agreement(size=200)
    b = K.check_equational_axioms(trials=1000, max_n=4)
    r = report(5, CheckResult("5", "equational agreement and set-algebra axioms",
                              a.passed and b.passed, f"{a.summary}; {b.summary}",
                              a.seconds + b.seconds))
    assert r.passed, r.summary


def test_c06_proof_library(report):
    r = report(6, K.check_proof_library(mutations=1000))
    assert r.passed and r.seconds < 60, r.summary


def test_c07_ax_build(report):
    # time and memory limits are checked inside, per subprocess run
    r = report(7, K.check_ax_build(runs=2))
    assert r.passed, r.summary


def test_c08_reduct(report):
    r = report(8, K.check_reduct(relations=200))
    assert r.passed and r.seconds < 900, r.summary


def test_c09_pipeline(report):
    r = report(9, K.check_pipeline(pairs=20, time_limit=120.0))
    assert r.passed, r.summary


def test_c10_reduce_f(report):
    r = report(10, K.check_reduce_f(sentences=100))
    assert r.passed, r.summary
