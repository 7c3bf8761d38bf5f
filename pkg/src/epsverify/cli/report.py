"""Verification reports: a JSON-ready dict and a tab-delimited text rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from ..euler.assembly import PipelineResult
from ..tower.ring import TowerElement

REPORT_KEYS = ("params", "omega", "branch", "characters", "unit_check", "verdict", "seed", "runtime_ms")


def _valuation(x: TowerElement) -> str | None:
    if x.is_zero():
        return None
    v = x.valuation()
    return str(v) if isinstance(v, Fraction) else str(Fraction(v))


def _component(x: TowerElement) -> dict[str, Any]:
    return {"valuation": _valuation(x), "value": repr(x)}


def build_report(result: PipelineResult, include_timing: bool = True) -> dict[str, Any]:
    params = result.params
    gr = result.euler.gr
    rows = []
    for chi in gr.characters():
        rows.append(
            {
                "chi": chi[0],
                "phi": chi[1],
                "euler_valuation": _valuation(result.euler[chi]),
                "ucris": _component(result.ucris[chi]),
                "theta_epsilon": _component(result.ratio[chi]),
                "rtilde_valuation": _valuation(result.rtilde[chi]),
                "rtildetilde_valuation": _valuation(result.rtildetilde[chi]),
            }
        )
    unit = result.unit
    return {
        "params": params.as_dict(),
        "omega": result.omega,
        "branch": result.branch,
        "characters": rows,
        "unit_check": {
            "forward_integral": unit.forward_integral,
            "inverse_integral": unit.inverse_integral,
            "components_are_units": unit.components_are_units,
            "prefactor_is_unit": result.prefactor_unit,
            "w_is_unit": None if result.w_unit is None else result.w_unit.is_unit,
            "reason": unit.reason,
            # dropped from every epsilon component; a unit, so no verdict depends on it
            "omitted_unit_factor": "det(Ind chi)(-1)",
        },
        "verdict": result.verdict,
        "seed": params.seed,
        "runtime_ms": result.runtime_ms if include_timing else None,
    }


def to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def render_text(report: dict[str, Any]) -> str:
    """Delimited text with one tab-separated row per character."""
    params = report["params"]
    label = ", ".join(f"{k}={params[k]}" for k in ("p", "m", "d", "u"))
    lines = [f"=== verify ({label}) ==="]
    for key in ("precision", "tower_degree", "seed"):
        lines.append(f"{key}\t{params[key]}")
    lines.append(f"omega\t{report['omega']}")
    lines.append(f"branch\t{report['branch']}")
    lines.append("--- characters ---")
    lines.append("chi\tphi\teuler_v\tucris_v\ttheta_eps_v\trtilde_v\trtildetilde_v")
    for row in report["characters"]:
        cells = [
            row["chi"],
            row["phi"],
            row["euler_valuation"],
            row["ucris"]["valuation"],
            row["theta_epsilon"]["valuation"],
            row["rtilde_valuation"],
            row["rtildetilde_valuation"],
        ]
        lines.append("\t".join("-" if c is None else str(c) for c in cells))
    lines.append("--- unit check ---")
    for key, value in report["unit_check"].items():
        if key != "reason" or value:
            lines.append(f"{key}\t{value}")
    if report["runtime_ms"] is not None:
        lines.append(f"runtime_ms\t{report['runtime_ms']}")
    lines.append(f"=== verdict: {report['verdict']} ===")
    return "\n".join(lines) + "\n"
