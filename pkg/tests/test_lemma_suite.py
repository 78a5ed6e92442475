"""The shared lemma runner used by the CLI."""

import pytest

from dampedwave import lemmas


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in lemmas.run_all(max_k=8, seed=1234)}


EXPECTED_SUITES = [
    "wave-base-kernels",
    "recurrence-vs-direct",
    "wave-kernel-vanishes-at-zero",
    "radial-derivative-recurrence",
    "small-r-limit",
    "cos-derivative-recurrence-oracle",
    "cos-derivative-bound",
    "wave-derivative-oracle",
    "sqrt-shift-derivatives",
    "exp-derivative-structure",
    "product-derivative-structure",
    "diffusive-derivative-oracle",
    "moment-decay",
    "branch-continuity",
    "symbol-identities",
    "cutoff-partition",
    "remainder-consistency",
    "low-frequency-split",
]


def test_all_suites_present(results):
    assert sorted(results) == sorted(EXPECTED_SUITES)


@pytest.mark.parametrize("name", EXPECTED_SUITES)
def test_suite_passes(results, name):
    r = results[name]
    assert r.passed, f"{name}: {r.detail} {r.counterexample}"


def test_corrupt_mode_detected():
    corrupted = {r.name: r for r in lemmas.run_all(max_k=4, seed=1234, corrupt=True)}
    assert not corrupted["recurrence-vs-direct"].passed
    assert corrupted["recurrence-vs-direct"].counterexample == {"k": 4}


def test_results_are_deterministic():
    a = lemmas.run_all(max_k=5, seed=99)
    b = lemmas.run_all(max_k=5, seed=99)
    assert [(r.name, r.passed, r.detail) for r in a] == [
        (r.name, r.passed, r.detail) for r in b
    ]
