"""Assemble the representative r~, factor it, and decide whether the remaining factor is a unit."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..errors import FactorizationMismatch, InvalidParameters, TwistTrivialOnN
from ..group_ring import (
    NOT_UNIT,
    PRECISION_EXHAUSTED,
    UNIT,
    Character,
    CenterVector,
    GroupRing,
    UnitVerdict,
    is_unit_in_integral_groupring,
)
from ..params import OMEGA_POS, OMEGA_ZERO, TWIST_TRIVIAL, TowerParams
from .matrices import ZEROS, StarFillPolicy, check_vectors, euler_char_rep, main_group_ring
from .ucris import ucris_rep

VERIFIED = "CONJECTURE_VERIFIED_AT_PARAMS"
VERDICT_NOT_UNIT = "NOT_UNIT"
VERDICT_PRECISION = "PRECISION_EXHAUSTED"


def theta_epsilon_ratio(params: TowerParams, gr: GroupRing) -> CenterVector:
    """The combined normal-basis / epsilon-constant term divided by W."""
    ring = gr.ring
    p, m = params.p, params.m
    u = ring.from_int(params.u_int)
    sigma4 = gr.sigma4().transform()
    values = {}
    for i, j in gr.characters():
        if i == 0:
            values[(i, j)] = ring.from_int(p) ** (2 * m)
        else:
            values[(i, j)] = ring.from_int(p) ** m * sigma4[(i, j)] * gr.phi_b(-2 * j) * u ** (-2 * m)
    return CenterVector(gr, values)


def rtilde(
    params: TowerParams,
    gr: GroupRing | None = None,
    policy: StarFillPolicy = ZEROS,
    euler: CenterVector | None = None,
) -> CenterVector:
    """r~ / W: the theta/epsilon ratio times U_cris divided by the Euler characteristic."""
    gr = gr or main_group_ring(params)
    euler = euler if euler is not None else euler_char_rep(params, policy, gr)
    return theta_epsilon_ratio(params, gr) * ucris_rep(params, gr=gr) / euler


def prefactor(params: TowerParams, gr: GroupRing) -> CenterVector:
    """The factor between r~ / W and r~~."""
    ring = gr.ring
    m, mt = params.m, params.m_tilde
    u = ring.from_int(params.u_int)
    values = {}
    for i, j in gr.characters():
        phi = gr.phi_b(j)
        if params.omega == 0:
            values[(i, j)] = -((u**m * phi).inverse()) / (1 - u**m * phi)
        else:
            values[(i, j)] = -(phi ** (-1 - mt)) * u ** (-m - m * mt)
    return CenterVector(gr, values)


def rtildetilde(params: TowerParams, gr: GroupRing | None = None) -> CenterVector:
    """(1 - p^m u^m b) e_a + (-u~)^m sigma4 [u^(m^2 mt - m)] (1 - e_a), in character coordinates."""
    gr = gr or main_group_ring(params)
    ring = gr.ring
    p, m, mt = params.p, params.m, params.m_tilde
    u = ring.from_int(params.u_int)
    u_tilde = gr.u_tilde()
    sigma4 = gr.sigma4().transform()
    extra = ring.one() if params.omega == 0 else u ** (m * m * mt - m)
    pm_um = ring.from_int(p) ** m * u**m
    values = {}
    for i, j in gr.characters():
        if i == 0:
            values[(i, j)] = 1 - pm_um * gr.phi_b(j)
        else:
            values[(i, j)] = (-u_tilde[(i, j)]) ** m * sigma4[(i, j)] * extra
    return CenterVector(gr, values)


def check_factorization(rt: CenterVector, pref: CenterVector, rtt: CenterVector) -> None:
    check_vectors(rt, pref * rtt, "factorization of r~", FactorizationMismatch)


def tamper(rtt: CenterVector, chi: Character, factor: int | None = None) -> CenterVector:
    """Copy of ``rtt`` with one component multiplied by p (or ``factor``)."""
    factor = rtt.gr.p if factor is None else factor
    return rtt.map(lambda c, v: v * factor if c == (chi[0] % rtt.gr.p, chi[1] % rtt.gr.d) else v)


def verdict_label(unit: UnitVerdict) -> str:
    return {UNIT: VERIFIED, NOT_UNIT: VERDICT_NOT_UNIT, PRECISION_EXHAUSTED: VERDICT_PRECISION}[unit.verdict]


@dataclass
class PipelineResult:
    params: TowerParams
    omega: int
    branch: str
    euler: CenterVector
    ucris: CenterVector
    ratio: CenterVector
    rtilde: CenterVector
    prefactor: CenterVector
    rtildetilde: CenterVector
    unit: UnitVerdict
    prefactor_unit: bool
    w_unit: UnitVerdict | None
    verdict: str
    runtime_ms: int = 0
    timings: dict[str, float] = field(default_factory=dict)


def run_pipeline(
    params: TowerParams,
    policy: StarFillPolicy = ZEROS,
    check_w: bool = True,
    gr: GroupRing | None = None,
) -> PipelineResult:
    """omega, branch, the three components, r~, its factorization and the unit verdict."""
    start = time.perf_counter()
    timings: dict[str, float] = {}

    def lap(name: str, t0: float) -> float:
        now = time.perf_counter()
        timings[name] = now - t0
        return now

    branch = params.branch
    if branch == TWIST_TRIVIAL:
        raise TwistTrivialOnN(
            f"{params.describe()} has u^(dm) = 1; the full assembly for that branch is not covered"
        )
    if branch not in (OMEGA_ZERO, OMEGA_POS):
        raise InvalidParameters(f"unknown branch {branch}")
    gr = gr or main_group_ring(params)
    t = time.perf_counter()
    euler = euler_char_rep(params, policy, gr)
    t = lap("euler", t)
    ucris = ucris_rep(params, branch, gr)
    ratio = theta_epsilon_ratio(params, gr)
    rt = ratio * ucris / euler
    pref = prefactor(params, gr)
    rtt = rtildetilde(params, gr)
    check_factorization(rt, pref, rtt)
    t = lap("assembly", t)
    pref_unit = all(not v.is_zero() and v.valuation() == 0 for _, v in pref.items())
    unit = is_unit_in_integral_groupring(rtt)
    t = lap("unit_check", t)
    w_unit = None
    if check_w:
        from ..gauss.resolvents import ResolventData

        data = ResolventData(params)
        w_unit = is_unit_in_integral_groupring(data.W())
        t = lap("w_unit", t)
    verdict = verdict_label(unit)
    if verdict == VERIFIED and (not pref_unit or (w_unit is not None and not w_unit.is_unit)):
        verdict = VERDICT_NOT_UNIT
    runtime = int((time.perf_counter() - start) * 1000)
    return PipelineResult(
        params, params.omega, branch, euler, ucris, ratio, rt, pref, rtt, unit, pref_unit, w_unit, verdict, runtime, timings
    )
