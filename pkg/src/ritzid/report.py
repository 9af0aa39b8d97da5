"""JSON run reports with a stable key order."""

import json
import math

import numpy as np

from .estimator import IdReport, IntervalRecord

FORMAT = "ritzid-report"
VERSION = 1


def _num(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _record(r: IntervalRecord) -> dict:
    return {
        "lower": _num(r.lower),
        "upper": _num(r.upper),
        "eta": _num(r.eta),
        "eta_raw": _num(r.eta_raw),
        "count_window": [_num(r.count_lower), _num(r.count_upper)],
        "alpha_contrib": _num(r.alpha_contrib),
        "cumulative_ratio": _num(r.cumulative_ratio),
    }


def report_body(rep: IdReport) -> dict:
    out = {}
    if rep.tau is not None:
        out["tau"] = {
            "value": _num(rep.tau.tau),
            "n_v": rep.tau.n_v_used,
            "std_error": _num(rep.tau.standard_error()),
        }
    if rep.ritz is not None:
        src = rep.ritz.source
        out["ritz"] = {
            "values": [_num(v) for v in rep.ritz.values],
            "converged": [bool(c) for c in rep.ritz.converged()],
            "iterations_run": src.iterations_run,
            "breakdown": src.breakdown,
            "rhs": src.rhs,
        }
    out["records"] = [_record(r) for r in rep.records]
    if rep.refinements:
        out["refinements"] = [_record(r) for r in rep.refinements]
    out["d_fractional"] = _num(rep.d_fractional)
    out["d_rounded"] = int(rep.d_rounded)
    out["stop_reason"] = rep.stop_reason
    if rep.per_cluster is not None:
        out["cluster_sizes"] = rep.cluster_sizes
        out["per_cluster"] = [report_body(s) for s in rep.per_cluster]
    return out


def build_report(rep: IdReport, config: dict, input_info: dict | None = None,
                 oracle: dict | None = None, wall_time_ms: float | None = None) -> dict:
    doc = {"format": FORMAT, "version": VERSION, "config": dict(config), "seed": config.get("seed")}
    if input_info:
        doc["input"] = input_info
    doc.update(report_body(rep))
    if oracle is not None:
        doc["oracle"] = oracle
    if wall_time_ms is not None:
        doc["wall_time_ms"] = round(float(wall_time_ms), 3)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "wall_time_ms"}
