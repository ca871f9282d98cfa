"""Seeded self-check suites: each suite replays a core invariant on
freshly drawn random instances and reports a pass/fail count.  The same
field, seed, and count always reproduce the same table."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .certificates import verify_postnikov_cert
from .complexes import is_degreewise_mono
from .diagrams import verify_diag_postnikov_cert
from .factor import factor_acyclic_fibration, factor_fibration
from .fields import FieldSpec
from .lifting import classify, make_square, solve_lift
from .linalg import kernel_basis, rank
from .randgen import (
    rand_acyclic_cofibration,
    rand_complex,
    rand_diagram,
    rand_map,
    rand_matrix,
    rand_nat,
    rand_reedy,
)
from .reedy import reedy_canonical_tower


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failed": self.failed}


def _suite_rank_nullity(field: FieldSpec, rng: random.Random, count: int) -> SuiteResult:
    passed = failed = 0
    for _ in range(count):
        m = rand_matrix(field, rng.randrange(0, 5), rng.randrange(0, 5), rng)
        if rank(m) + kernel_basis(m).cols == m.cols:
            passed += 1
        else:
            failed += 1
    return SuiteResult("rank-nullity", passed, failed)


def _suite_factor_z(field: FieldSpec, rng: random.Random, count: int) -> SuiteResult:
    passed = failed = 0
    for _ in range(count):
        a = rand_complex(field, rng, 3, 3)
        b = rand_complex(field, rng, 3, 3)
        f = rand_map(a, b, rng)
        res = factor_acyclic_fibration(f)
        ok = (
            is_degreewise_mono(res.left)
            and verify_postnikov_cert(res.cert).ok
            and res.right @ res.left == f
        )
        passed, failed = (passed + 1, failed) if ok else (passed, failed + 1)
    return SuiteResult("factor-acyclic-fibration", passed, failed)


def _suite_factor_x(field: FieldSpec, rng: random.Random, count: int) -> SuiteResult:
    passed = failed = 0
    for _ in range(count):
        a = rand_complex(field, rng, 3, 3)
        b = rand_complex(field, rng, 3, 3)
        f = rand_map(a, b, rng)
        res = factor_fibration(f)
        ok = (
            classify(res.left).acyclic_cofibration
            and verify_postnikov_cert(res.cert).ok
            and res.right @ res.left == f
        )
        passed, failed = (passed + 1, failed) if ok else (passed, failed + 1)
    return SuiteResult("factor-fibration", passed, failed)


def _suite_lifting(field: FieldSpec, rng: random.Random, count: int) -> SuiteResult:
    passed = failed = 0
    for _ in range(count):
        a = rand_complex(field, rng, 3, 3)
        i = rand_acyclic_cofibration(a, rng)
        x = rand_complex(field, rng, 3, 3)
        f = rand_map(i.target, x, rng)
        res = factor_fibration(f)
        # acyclic cofibration against the certified fibration composite
        sq = make_square(i, res.right, res.left @ i, f)
        ok = solve_lift(sq) is not None
        passed, failed = (passed + 1, failed) if ok else (passed, failed + 1)
    return SuiteResult("lift-against-certificate", passed, failed)


def _suite_reedy_tower(field: FieldSpec, rng: random.Random, count: int) -> SuiteResult:
    passed = failed = 0
    for _ in range(count):
        r = rand_reedy(rng, max_objects=3)
        phi = rand_diagram(r.cat, field, rng, max_top=2, max_dim=2)
        psi = rand_diagram(r.cat, field, rng, max_top=2, max_dim=2)
        tau = rand_nat(phi, psi, rng)
        cert = reedy_canonical_tower(r, tau)
        ok = verify_diag_postnikov_cert(cert).ok and cert.claimed_composite == tau
        passed, failed = (passed + 1, failed) if ok else (passed, failed + 1)
    return SuiteResult("canonical-tower", passed, failed)


_SUITES = (
    _suite_rank_nullity,
    _suite_factor_z,
    _suite_factor_x,
    _suite_lifting,
    _suite_reedy_tower,
)


def run_selftest(field: FieldSpec, seed: int, count: int) -> list[SuiteResult]:
    """Run every suite with its own derived seed; deterministic."""
    results = []
    for k, suite in enumerate(_SUITES):
        results.append(suite(field, random.Random((seed, k)), count))
    return results
