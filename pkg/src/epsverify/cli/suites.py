"""Seeded property suites run by ``epsverify suite``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Iterator

from ..errors import EpsVerifyError
from ..formal_group import (
    TruncatedSeries,
    formal_exp,
    law_from_log,
    lubin_tate_law,
    subtraction_expansion,
)
from ..gauss import LocalMultChar, gauss_sum, gauss_sum_cosets, quadratic_character
from ..group_ring import GroupRing
from ..params import TowerParams
from ..serre import SerreModel
from ..tower.ring import make_tower

SUITES = ("formal", "gauss", "dets", "serre", "all")


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


def _run(suite: str, name: str, fn: Callable[[], str | None]) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = fn() or ""
        ok = True
    except (AssertionError, EpsVerifyError) as exc:
        detail, ok = f"{type(exc).__name__}: {exc}", False
    return CheckResult(suite, name, ok, detail, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# formal groups


def formal_checks(p: int = 3, u: int = 2, degree: int | None = None, N: int = 20) -> Iterator[CheckResult]:
    D = p + 5 if degree is None else degree
    group = lubin_tate_law(p, u, D, N)
    law = group.law
    Nw = law.N

    def commutative():
        X, Y = TruncatedSeries.variable(p, Nw, 2, D, 0), TruncatedSeries.variable(p, Nw, 2, D, 1)
        assert law.compose([Y, X]).equals(law), "F(Y, X) != F(X, Y)"

    def associative():
        X, Y, Z = (TruncatedSeries.variable(p, Nw, 3, D, i) for i in range(3))
        left = law.compose([law.compose([X, Y]), Z])
        right = law.compose([X, law.compose([Y, Z])])
        assert left.equals(right), "F(F(X,Y),Z) != F(X,F(Y,Z))"

    def integral():
        assert law.is_integral(), "law has non-integral coefficients"

    def log_linearizes():
        log = group.log
        X, Y = TruncatedSeries.variable(p, Nw, 2, D, 0), TruncatedSeries.variable(p, Nw, 2, D, 1)
        lhs = log.compose([law])
        rhs = log.compose([X]) + log.compose([Y])
        assert lhs.equals(rhs), "log(F(X,Y)) != log X + log Y"

    def matches_exp_of_log():
        assert law_from_log(group.log).equals(law), "degree induction and exp(log X + log Y) differ"

    def subtraction_pattern():
        a = subtraction_expansion(group)
        return f"A = {a}"

    def exp_log_roundtrip():
        X = TruncatedSeries.variable(p, Nw, 1, D, 0)
        assert formal_exp(group.log).compose([group.log]).equals(X), "exp(log X) != X"

    for name, fn in [
        ("commutativity", commutative),
        ("associativity", associative),
        ("integrality", integral),
        ("log linearizes the law", log_linearizes),
        ("law equals exp(log X + log Y)", matches_exp_of_log),
        ("subtraction pattern (A, -A, 0)", subtraction_pattern),
        ("exp after log is the identity", exp_log_roundtrip),
    ]:
        yield _run("formal", f"{name} (p={p}, D={D})", fn)


# ---------------------------------------------------------------------------
# Gauss sums


def gauss_checks(primes=(3, 5, 7), N: int = 12) -> Iterator[CheckResult]:
    for p in primes:
        ring = make_tower(p, 1, 1, N)

        def tame_products(p=p, ring=ring):
            for k in range(1, p - 1):
                eta = LocalMultChar(ring, 1, k)
                lhs = gauss_sum(eta) * gauss_sum(eta.inverse())
                rhs = eta.value(-1) * p
                assert lhs.agrees_with(rhs), f"tau(eta) tau(eta^-1) != eta(-1) p for exponent {k}"
            return f"{p - 2} characters"

        def quadratic(p=p, ring=ring):
            tau = gauss_sum(quadratic_character(ring))
            sign = 1 if (p - 1) // 2 % 2 == 0 else -1
            assert (tau * tau).agrees_with(ring.from_int(sign * p)), "tau^2 != (-1)^((p-1)/2) p"

        yield _run("gauss", f"tau(eta) tau(eta^-1) = eta(-1) p (p={p})", tame_products)
        yield _run("gauss", f"quadratic tau^2 (p={p})", quadratic)

    def two_forms():
        ring = make_tower(3, 1, 2, N)
        count = 0
        for level in (1, 2):
            order = 2 * 3 ** (level - 1)
            for k in range(order):
                eta = LocalMultChar(ring, level, k)
                assert gauss_sum(eta).agrees_with(gauss_sum_cosets(eta)), f"level {level}, exponent {k}"
                count += 1
        return f"{count} characters"

    yield _run("gauss", "direct and coset sums agree (p=3, level <= 2)", two_forms)


# ---------------------------------------------------------------------------
# determinant identities

DET_GRID = [(3, 1, 5), (3, 2, 5), (5, 1, 2), (5, 2, 3)]


def sweep_units(p: int, m: int, d: int, count: int = 3, N: int = 20) -> list[TowerParams]:
    """The first ``count`` candidate units (Teichmueller lifts first) with u^(dm) != 1."""
    candidates = [f"teich:{r}" for r in range(2, p)] + [str(r) for r in range(2, 4 * p) if r % p]
    out = []
    for cand in candidates:
        params = TowerParams(p, m, d, cand, N=N)
        if params.branch == "twist_trivial":
            continue
        if any(params.u_int == q.u_int for q in out):
            continue
        out.append(params)
        if len(out) == count:
            break
    return out


def det_checks(seed: int = 0, N: int = 20) -> Iterator[CheckResult]:
    from ..euler.matrices import StarFillPolicy, det_M_Cn, det_script_M, euler_char_rep, main_group_ring
    from ..euler.ucris import check_inertia_matrices, det_frobenius_circulant

    rng = random.Random(seed)
    gr = GroupRing(3, 2, make_tower(3, 2, 1, 16))

    def m_cn():
        for n in range(1, 7):
            for _ in range(20):
                det_M_Cn(gr.random_padic_element(rng), n)
        return "n = 1..6, 20 elements each"

    yield _run("dets", "M_(C,n) determinant identity", m_cn)

    for p, m, d in DET_GRID:
        for params in sweep_units(p, m, d, N=N):
            label = f"{params.describe()} omega={params.omega}"

            def small(params=params):
                det_script_M(params)

            def big(params=params):
                group_ring = main_group_ring(params)
                for policy in (StarFillPolicy("zeros"), StarFillPolicy("random_integral", seed)):
                    euler_char_rep(params, policy, group_ring)

            yield _run("dets", f"kernel-component matrix {label}", small)
            yield _run("dets", f"Euler characteristic, both star fills {label}", big)

    def circulants():
        ring = make_tower(3, 2, 1, 16)
        group_ring = GroupRing(3, 4, ring)
        for size in range(1, 5):
            det_frobenius_circulant(group_ring, 2, size)
        return "sizes 1..4"

    def inertia():
        for size in range(1, 5):
            for index in range(1, 6):
                check_inertia_matrices(size, index)

    yield _run("dets", "Frobenius circulant determinants", circulants)
    yield _run("dets", "inertia matrices A and B", inertia)


# ---------------------------------------------------------------------------
# induced module


def serre_checks(seed: int = 0, samples: int = 50, tuples: int = 200) -> Iterator[CheckResult]:
    for d in (2, 5):
        model = SerreModel(3, d, 2)

        def roundtrips(model=model):
            rng = random.Random(seed)
            for _ in range(samples):
                model.solve_coboundary(model.random_cocycle(rng))
            return f"{samples} round trips, {model.describe()}"

        def composite(model=model):
            rng = random.Random(seed + 1)
            for _ in range(tuples):
                assert model.w_map(model.differential(model.random_tuple(rng))) == 0
            return f"{tuples} tuples"

        yield _run("serre", f"coboundary round trips (d={d})", roundtrips)
        yield _run("serre", f"w after the differential vanishes (d={d})", composite)


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    chosen = SUITES[:-1] if name == "all" else (name,)
    results: list[CheckResult] = []
    for suite in chosen:
        if suite == "formal":
            results.extend(formal_checks())
        elif suite == "gauss":
            results.extend(gauss_checks())
        elif suite == "dets":
            results.extend(det_checks(seed))
        elif suite == "serre":
            results.extend(serre_checks(seed))
    return results


__all__ = ["CheckResult", "DET_GRID", "SUITES", "run_suite", "sweep_units"]
