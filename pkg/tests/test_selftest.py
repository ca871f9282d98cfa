"""The seeded self-check suites: all green, deterministic, field-generic."""

from __future__ import annotations

from chaintower.fields import F101, RATIONAL
from chaintower.selftest import run_selftest

EXPECTED_SUITES = (
    "rank-nullity",
    "factor-acyclic-fibration",
    "factor-fibration",
    "lift-against-certificate",
    "canonical-tower",
)


def test_all_suites_pass():
    results = run_selftest(F101, 7, 10)
    assert tuple(r.name for r in results) == EXPECTED_SUITES
    for r in results:
        assert r.ok, f"{r.name}: {r.failed} failures"
        assert r.passed == 10


def test_deterministic_given_seed():
    a = run_selftest(F101, 42, 4)
    b = run_selftest(F101, 42, 4)
    assert [(r.name, r.passed, r.failed) for r in a] == [
        (r.name, r.passed, r.failed) for r in b
    ]


def test_rational_field():
    results = run_selftest(RATIONAL, 3, 3)
    assert all(r.ok for r in results)
