"""CSV rows shaped like the published path-length, ABT and latency tables."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .metrics import (
    DEFAULT_FLOW_BUDGET,
    PRESETS,
    ROUTING_LATENCY_US,
    abt,
    latency,
    path_length_survey,
    preset,
)
from .topology import TopologyParams

PATH_LENGTH_ROWS = [(16, 3), (16, 4), (16, 5), (32, 3), (32, 4), (48, 3), (64, 3), (80, 3), (128, 3)]
CUMULATIVE_ROWS = [(16, 3), (16, 5), (32, 4), (80, 3), (128, 3)]
ABT_ROWS = PATH_LENGTH_ROWS
LATENCY_ROWS = list(ROUTING_LATENCY_US)
LATENCY_TABLES = {"1g-std": "table6", "10g-std": "tableA1", "1g-jumbo": "tableA2", "10g-jumbo": "tableA3"}

SP_TAG = "sp-cw"

PATH_LENGTH_HEADER = ["n", "k", "servers", "avg_path_len_min", "avg_path_len_sp", "avg_length_improve_pct", "non_min_paths_pct"]
CUMULATIVE_HEADER = ["n", "k", "alg"] + [str(length) for length in range(10)]
ABT_HEADER = ["n", "k", "servers", "abt_min", "abt_sp", "abt_improve_pct", "method"]
LATENCY_HEADER = ["n", "k", "L_hop_min", "L_hop_sp", "L_hop_decl_pct", "L_total_min", "L_total_sp", "L_total_improve_pct"]


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def path_length_row(n: int, k: int) -> list:
    params = TopologyParams(n, k)
    mn = path_length_survey(params, "min")
    sp = path_length_survey(params, SP_TAG)
    improve = 100 * (sp.mean - mn.mean) / sp.mean
    return [n, k, params.num_servers, f"{mn.mean:.2f}", f"{sp.mean:.2f}", f"{improve:.0f}", f"{100 * sp.nonminimal_fraction:.0f}"]


def cumulative_rows(n: int, k: int) -> list[list]:
    params = TopologyParams(n, k)
    rows = []
    for tag, alg in (("SP", SP_TAG), ("Min", "min")):
        cum = path_length_survey(params, alg).cumulative()
        cells = [f"{c:.1f}" if c < 100 else "100" for c in cum[:10]]
        rows.append([n, k, tag] + cells + [""] * (10 - len(cells)))
    return rows


def abt_row(n: int, k: int, method: str = "translate", workers: int | None = None, flow_budget: int = DEFAULT_FLOW_BUDGET) -> list:
    params = TopologyParams(n, k)
    mn = abt(params, "min", method, workers, flow_budget)
    sp = abt(params, SP_TAG, method, workers, flow_budget)
    improve = 100 * (mn.abt - sp.abt) / sp.abt
    return [n, k, params.num_servers, f"{mn.abt:.2f}", f"{sp.abt:.2f}", f"{improve:.0f}", method]


def latency_row(n: int, k: int, preset_name: str) -> list:
    params = TopologyParams(n, k)
    lr = ROUTING_LATENCY_US[(n, k)]
    mn = latency(preset(preset_name, lr["min"]), path_length_survey(params, "min").mean)
    sp = latency(preset(preset_name, lr["sp"]), path_length_survey(params, SP_TAG).mean)
    decl = 100 * (mn.per_hop_us - sp.per_hop_us) / sp.per_hop_us
    improve = 100 * (sp.total_us - mn.total_us) / sp.total_us
    return [
        n,
        k,
        f"{mn.per_hop_us:.2f}",
        f"{sp.per_hop_us:.2f}",
        f"{decl:.0f}",
        f"{mn.total_us:.1f}",
        f"{sp.total_us:.1f}",
        f"{improve:.0f}",
    ]


def repro_tables(
    workers: int | None = None,
    flow_budget: int = DEFAULT_FLOW_BUDGET,
    include_orbit: bool = False,
) -> dict[str, str]:
    """Every table as CSV text, keyed by file stem.

    ABT rows whose all-to-all flow count exceeds ``flow_budget`` are skipped
    unless ``include_orbit`` asks for the per-slot-class shortcut instead.
    """
    out = {
        "table2": to_csv(PATH_LENGTH_HEADER, [path_length_row(n, k) for n, k in PATH_LENGTH_ROWS]),
        "table3": to_csv(CUMULATIVE_HEADER, [row for n, k in CUMULATIVE_ROWS for row in cumulative_rows(n, k)]),
    }
    abt_rows = []
    for n, k in ABT_ROWS:
        servers = TopologyParams(n, k).num_servers
        if servers * (servers - 1) <= flow_budget:
            abt_rows.append(abt_row(n, k, "translate", workers, flow_budget))
        elif include_orbit:
            abt_rows.append(abt_row(n, k, "orbit"))
    out["table4"] = to_csv(ABT_HEADER, abt_rows)
    for name in PRESETS:
        out[LATENCY_TABLES[name]] = to_csv(LATENCY_HEADER, [latency_row(n, k, name) for n, k in LATENCY_ROWS])
    return out
