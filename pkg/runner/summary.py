"""Human-readable summary of a report."""

from typing import List

from .report import CheckEntry, Report


def _value(entry: CheckEntry) -> str:
    if entry.kind == "error":
        return entry.error_type or "error"
    if entry.value is None:
        return ""
    return f"{entry.value:.4g}"


def _bound(entry: CheckEntry) -> str:
    if entry.kind == "positivity" and entry.report is not None:
        return f"> {entry.report.tolerance:.0e}"
    if entry.kind == "residual" and entry.tolerance is not None:
        return f"<= {entry.tolerance:.0e}"
    if entry.kind == "value" and entry.expected is not None:
        return f"= {entry.expected:g}"
    return ""


def summary_lines(report: Report) -> List[str]:
    lines = [
        "=" * 65,
        f"{report.scenario.upper()} ({report.recipe})",
        "=" * 65,
        "",
        f"{'Check':32} {'Value':>12} {'Bound':>10}  Result",
        "-" * 65,
    ]
    for entry in report.checks:
        mark = "✅" if entry.passed else "❌"
        lines.append(f"{entry.name[:32]:32} {_value(entry):>12} {_bound(entry):>10}  {mark}")
    lines.append("-" * 65)
    failed = report.failed_checks()
    lines.append(f"{'TOTAL':32} {len(report.checks):>12} {len(failed):>10}  {'PASS' if report.passed else 'FAIL'}")
    for entry in failed:
        if entry.kind == "error":
            lines.append(f"   {entry.name}: {entry.error}")
    if report.warnings:
        lines.append("")
        lines.extend(f"⚠️  {w}" for w in report.warnings)
    lines.append("")
    lines.append(f"📊 Resolutions: {report.provenance.resolutions}  wall time {report.provenance.wall_time:.1f}s")
    return lines


def print_summary(report: Report) -> None:
    print("\n".join(summary_lines(report)))
