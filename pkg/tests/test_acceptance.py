"""Acceptance criteria, one PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) or through pytest, where the
lines are repeated in the terminal summary.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path
from typing import Callable

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from epsverify.cli.suites import DET_GRID, formal_checks, gauss_checks, serre_checks, sweep_units
from epsverify.errors import EpsVerifyError
from epsverify.euler import VERIFIED, run_pipeline, tamper
from epsverify.euler.matrices import (
    StarFillPolicy,
    build_M_Cn,
    closed_form_M_Cn,
    det_M_Cn,
    det_script_M,
    euler_char_rep,
    main_group_ring,
)
from epsverify.euler.ucris import (
    check_inertia_matrices,
    det_frobenius_circulant,
    frobenius_circulant,
    inertia_matrix_A,
    inertia_matrix_B,
)
from epsverify.gauss import ResolventData
from epsverify.gauss.resolvents import e_twist_scalar
from epsverify.group_ring import GroupRing, is_unit_in_integral_groupring
from epsverify.params import TowerParams
from epsverify.tower import make_tower

from oracles import cofactor_det, leibniz_det

GRID = [params for p, m, d in DET_GRID for params in sweep_units(p, m, d, N=20)]


def _suite_ok(results) -> tuple[bool, str]:
    failed = [r for r in results if not r.ok]
    detail = f"{len(results) - len(failed)}/{len(results)} checks"
    if failed:
        detail += "; first failure: " + failed[0].name + " " + failed[0].detail
    return not failed, detail


def criterion_1() -> tuple[bool, str]:
    rng = random.Random(0)
    gr = GroupRing(3, 2, make_tower(3, 2, 1, 16))
    count = 0
    for n in range(1, 7):
        for k in range(20):
            C = gr.random_padic_element(rng)
            det_M_Cn(C, n)
            count += 1
            if k == 0 and n <= 5:
                oracle = cofactor_det(build_M_Cn(C, n), gr.zero(), gr.one())
                assert oracle.equals(closed_form_M_Cn(C, n)), f"cofactor oracle disagrees at n={n}"
    return True, f"{count} determinants, n = 1..6"


def criterion_2() -> tuple[bool, str]:
    for params in GRID:
        det_script_M(params)
    branches = sorted({q.branch for q in GRID})
    return True, f"{len(GRID)} tuples, branches {branches}"


def criterion_3() -> tuple[bool, str]:
    for params in GRID:
        gr = main_group_ring(params)
        for policy in (StarFillPolicy("zeros"), StarFillPolicy("random_integral", 0)):
            euler_char_rep(params, policy, gr)
    return True, f"{len(GRID)} tuples x 2 star fills"


def criterion_4() -> tuple[bool, str]:
    gr = GroupRing(3, 4, make_tower(3, 2, 1, 16))
    for size in range(1, 5):
        det = det_frobenius_circulant(gr, 2, size)
        oracle = cofactor_det(frobenius_circulant(gr, 2, size), gr.zero(), gr.one())
        assert det.equals(oracle.transform()), f"circulant size {size}"
    for size in range(1, 5):
        for index in range(1, 6):
            a, b = check_inertia_matrices(size, index)
            assert leibniz_det(inertia_matrix_A(size, index)) == a == (-1) ** (size + 1) * index
            assert leibniz_det(inertia_matrix_B(size)) == b == -1
    return True, "circulants d_K <= 4, inertia matrices d_K <= 4, index <= 5"


def criterion_5() -> tuple[bool, str]:
    return _suite_ok(list(gauss_checks()))


def criterion_6() -> tuple[bool, str]:
    return _suite_ok(list(formal_checks(p=3, degree=8)))


def criterion_7() -> tuple[bool, str]:
    return _suite_ok(list(serre_checks(seed=0, samples=50, tuples=200)))


def criterion_8() -> tuple[bool, str]:
    tuples = [TowerParams(3, 1, 5, 2), TowerParams(3, 1, 2, 2), TowerParams(3, 2, 5, 2), TowerParams(5, 1, 2, 2)]
    found = next((q for q in sweep_units(5, 1, 3, N=24) if q.omega == 0), None)
    assert found is not None, "sweep found no omega = 0 tuple at p = 5"
    tuples.append(found)
    tampered = 0
    for params in tuples:
        result = run_pipeline(params)
        assert result.verdict == VERIFIED, f"{params.describe()}: {result.verdict}"
        for chi in result.rtildetilde.gr.characters():
            verdict = is_unit_in_integral_groupring(tamper(result.rtildetilde, chi))
            assert not verdict.is_unit, f"tampering {chi} at {params.describe()} kept a unit"
            tampered += 1
    omegas = ", ".join(f"{q.describe()} omega={q.omega}" for q in tuples)
    return True, f"{omegas}; {tampered} tamperings all NOT_UNIT"


def criterion_9() -> tuple[bool, str]:
    for params in GRID:
        data = ResolventData(params)
        E = data.E()
        assert E.is_unit(), f"E not a unit at {params.describe()}"
        assert E.frobenius().congruent(E * e_twist_scalar(params), 1), f"E^F != u E mod p at {params.describe()}"
        assert is_unit_in_integral_groupring(data.W()).is_unit, f"W not a unit at {params.describe()}"
    return True, f"{len(GRID)} tuples"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float]] = [
    (1, "M_(C,n) determinant identity", criterion_1, 5.0),
    (2, "kernel-component matrix determinants", criterion_2, 30.0),
    (3, "Euler characteristic closed forms, both star fills", criterion_3, 120.0),
    (4, "U_cris sub-determinants", criterion_4, 5.0),
    (5, "Gauss sum identities", criterion_5, 10.0),
    (6, "Lubin-Tate formal group at D = 8", criterion_6, 5.0),
    (7, "induced-module coboundary round trips", criterion_7, 20.0),
    (8, "unit verdict at the parameter tuples, tampering", criterion_8, 300.0),
    (9, "E congruence and W unit on the grid", criterion_9, 30.0),
]


def evaluate(number: int, label: str, fn, limit: float) -> tuple[bool, str]:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except (AssertionError, EpsVerifyError) as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if seconds > limit:
        ok = False
        detail += f"; over the {limit:g}s budget"
    status = "PASS" if ok else "FAIL"
    return ok, f"{status}  criterion {number}: {label} ({seconds:.2f}s / {limit:g}s) {detail}"


@pytest.mark.parametrize("number,label,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, label, fn, limit, acceptance_log):
    ok, line = evaluate(number, label, fn, limit)
    print(line)
    acceptance_log.append(line)
    assert ok, line


if __name__ == "__main__":
    failures = 0
    for entry in CRITERIA:
        ok, line = evaluate(*entry)
        print(line, flush=True)
        failures += not ok
    sys.exit(1 if failures else 0)
