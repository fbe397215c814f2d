"""Plain-text tables and the fixed CSV layout shared by every command."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Sequence

from .counterexamples import Counterexample, ReplayReport
from .network import Classification
from .oracle import QUALIFIER
from .runs import RunReport, SweepReport

CSV_COLUMNS = ("scenario_label", "component_id", "classification", "distributed_sum",
               "oracle_sum", "gap", "verdict")

EXISTS = "EXISTS"
NOT_EXISTS = "DOES NOT EXIST"


def universal_verdict(tags: Iterable[Classification]) -> str:
    return EXISTS if all(t.qualifies for t in tags) else NOT_EXISTS


def format_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def csv_text(rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        if len(r) != len(CSV_COLUMNS):
            raise ValueError(f"CSV rows need {len(CSV_COLUMNS)} fields, got {len(r)}")
        w.writerow(["" if c is None else c for c in r])
    return buf.getvalue()


def write_csv(path: str | Path, rows: Iterable[Sequence]) -> None:
    Path(path).write_text(csv_text(rows))


def _members(m) -> str:
    return "{" + ",".join(map(str, m)) + "}"


# --- per-command rows ---------------------------------------------------------

def run_rows(report: RunReport, with_oracle: bool = True) -> list[tuple]:
    rows = []
    for c in report.components:
        o = c.oracle_sum if with_oracle else None
        gap = (o - c.distributed_sum) if o is not None else None
        rows.append((report.label, c.component_id, str(c.tag), c.distributed_sum, o, gap,
                     EXISTS if c.tag.qualifies else NOT_EXISTS))
    o = report.oracle_sum if with_oracle else None
    rows.append((report.label, "total", "-", report.distributed_sum, o,
                 None if o is None else o - report.distributed_sum,
                 universal_verdict(c.tag for c in report.components)))
    return rows


def replay_rows(pairs: Sequence[tuple[Counterexample, ReplayReport]]) -> list[tuple]:
    rows = []
    for c, r in pairs:
        status = "pass" if r.ok else "fail: " + "; ".join(r.failed_steps)
        rows.append((c.label, 1, "Other", c.forced_sum, r.oracle_sum, r.oracle_sum - c.forced_sum, status))
    return rows


def sweep_rows(label: str, report: SweepReport) -> list[tuple]:
    rows = [(f"{label} {case.gains.describe()}", "all", "-", case.distributed_sum,
             case.oracle_sum, case.gap, "gap") for case in report.gap_cases]
    rows += [(f"{label} {gm.describe()}", "all", "-", None, None, None, "decode failure")
             for gm in report.decode_failures]
    rows.append((f"{label} summary", "all", "qualifying" if report.qualifies else "non-qualifying",
                 None, None, report.max_gap, "consistent" if report.consistent else "INCONSISTENT"))
    return rows


# --- human-readable renderings --------------------------------------------------

def render_run(report: RunReport) -> str:
    q = report.strategy.q
    users = []
    for k in report.gains.topology.users:
        levels = report.strategy.levels(k)
        used = (_members(levels) if levels is not None
                else " ".join(format(c, f"0{q}b") for c in report.strategy.columns[k - 1]))
        users.append((f"T{k}", report.cases[k - 1], used, report.rates[k - 1]))
    comps = [(c.component_id, _members(c.members), str(c.tag), c.distributed_sum,
              c.oracle_sum if c.oracle_sum is not None else "skipped",
              c.gap if c.gap is not None else "-") for c in report.components]
    out = [f"scenario {report.label}: K={report.gains.K}, q={q}, genie={'on' if report.genie else 'off'}",
           "",
           format_table(("tx", "case", "levels / coded columns", "rate"), users),
           "",
           format_table(("component", "users", "classification", "distributed",
                         f"oracle ({QUALIFIER})", "gap"), comps)]
    notices = [c.notice for c in report.components if c.notice]
    out += [""] + notices if notices else []
    total_o = report.oracle_sum
    out += ["",
            f"distributed sum {report.distributed_sum}; "
            + (f"oracle sum {total_o} ({QUALIFIER}); gap {report.gap}" if total_o is not None
               else "oracle sum unavailable for at least one component"),
            f"universally optimal strategy {universal_verdict(c.tag for c in report.components)}"]
    return "\n".join(out)


def render_replays(pairs: Sequence[tuple[Counterexample, ReplayReport]], verbose: bool = False) -> str:
    rows = []
    for c, r in pairs:
        rows.append((c.label, c.gains.describe(), c.forced_sum, c.centralized_sum, r.oracle_sum,
                     c.claimed_gap, "pass" if r.ok else "FAIL " + ", ".join(r.failed_steps)))
    out = [format_table(("label", "gains", "forced sum", "centralized sum", f"oracle ({QUALIFIER})",
                         "gap", "replay"), rows)]
    if verbose:
        for c, r in pairs:
            out.append("")
            out.append(f"({c.label})")
            for i, s in enumerate(r.steps):
                out.append(f"  {'abcd'[i]}. {s.name}: {'ok' if s.ok else 'FAILED'} ({s.detail})")
            for s in r.view_claims:
                out.append(f"  view: {s.name}: {'ok' if s.ok else 'FAILED'}")
    passed = sum(r.ok for _, r in pairs)
    out.append("")
    out.append(f"{passed}/{len(pairs)} replays pass all four steps")
    return "\n".join(out)


def render_sweep(label: str, r: SweepReport) -> str:
    mode = "sampled" if r.sampled else "exhaustive"
    lines = [f"{label}: {mode} sweep of {r.assignments} gain assignments, gains 0..{r.gain_bound}, "
             f"genie {'on' if r.genie else 'off'}",
             f"topology {'qualifies' if r.qualifies else 'does not qualify'} "
             f"(universally optimal strategy {EXISTS if r.qualifies else NOT_EXISTS})",
             f"max gap {r.max_gap} against the {QUALIFIER} oracle; "
             f"{r.gap_positive} assignments with positive gap; "
             f"{len(r.decode_failures)} decodability failures"]
    if r.gap_cases:
        worst = max(r.gap_cases, key=lambda c: c.gap)
        lines.append(f"worst case: {worst.gains.describe()} (distributed {worst.distributed_sum}, "
                     f"oracle {worst.oracle_sum})")
    lines.append("consistent" if r.consistent else "INCONSISTENT: qualifying topology shows a gap or a decoding failure")
    return "\n".join(lines)
