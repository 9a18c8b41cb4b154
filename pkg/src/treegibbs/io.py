"""Serialization of sweeps and phase results (CSV and JSON)."""

from __future__ import annotations

import csv
import json

from .model import ModelParams
from .phase import Region, SweepRow, classify, phase_regions

CSV_HEADER = ["theta", "classification", "lambda_star", "c1", "lambda1", "c2", "lambda2", "c3", "lambda3", "residual"]
REGIONS_HEADER = ["lo", "hi", "lo_closed", "hi_closed", "classification"]


def fmt(x) -> str:
    """17 significant digits, empty for missing values."""
    return "" if x is None else format(float(x), ".17g")


def csv_record(row: SweepRow) -> list[str]:
    branches = list(row.branches) + [(None, None)] * (3 - len(row.branches))
    cells = [fmt(row.theta), row.classification.value, fmt(row.lambda_star)]
    for c, lam in branches:
        cells += [fmt(c), fmt(lam)]
    cells.append(fmt(row.residual))
    return cells


def params_dict(params: ModelParams) -> dict:
    return {
        "k": params.k,
        "n": params.n,
        "literal_kernel": params.literal_kernel,
        "theta_domain_bound": params.theta_domain_bound,
    }


def thresholds_dict(params: ModelParams) -> dict:
    res = classify(params.with_theta(0.0))
    return {
        "theta1": res.theta1,
        "theta_sequence": list(res.thresholds),
        "theta_ratio": res.theta_ratio,
        "theta_top": res.theta_top,
        "domain_bound": res.domain_bound,
    }


def row_dict(row: SweepRow) -> dict:
    return {
        "theta": row.theta,
        "classification": row.classification.value,
        "stated_classification": row.stated_classification.value if row.stated_classification else None,
        "lambda_star": row.lambda_star,
        "branches": [{"c": c, "lambda": lam} for c, lam in row.branches],
        "residual": row.residual,
        "near_threshold": row.near_threshold,
    }


def sweep_warnings(rows) -> list[str]:
    seen: dict[str, None] = {}
    for row in rows:
        for w in row.warnings:
            # the theta-specific kernel warning repeats per row; keep distinct texts only
            seen.setdefault(w, None)
    return list(seen)


def write_sweep(stream, params: ModelParams, rows, fmt_name: str = "csv") -> None:
    if fmt_name == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(csv_record(row))
    elif fmt_name == "json":
        doc = {
            "params": params_dict(params),
            "rows": [row_dict(r) for r in rows],
            "regions": [r.as_dict() for r in phase_regions(params)],
            "thresholds": thresholds_dict(params),
            "warnings": sweep_warnings(rows),
        }
        json.dump(doc, stream, indent=2, sort_keys=False)
        stream.write("\n")
    else:
        raise ValueError(f"unknown format {fmt_name!r}")


def write_regions_csv(stream, regions: list[Region]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REGIONS_HEADER)
    for r in regions:
        writer.writerow([fmt(r.lo), fmt(r.hi), int(r.lo_closed), int(r.hi_closed), r.classification.value])
