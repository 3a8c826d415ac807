"""Text serializations of a :class:`~sigsim.simlab.RunReport`.

CSV carries full float precision (``repr``); the Markdown table rounds
p-values to four decimals, the way results tables usually print them.
Missing selections are empty CSV fields and an em dash in Markdown.
"""

import csv
import io

__all__ = ["CSV_COLUMNS", "report_csv", "report_markdown", "critical_csv", "ttest_csv_line"]

CSV_COLUMNS = (
    "size",
    "width",
    "height",
    "trials",
    "alpha",
    "n_significant",
    "selected_trial",
    "selected_p",
)
ABSENT_MD = "—"


def _blank_if_none(value, fmt=str):
    return "" if value is None else fmt(value)


def report_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    alpha = report.config.alpha
    for s in report.summaries:
        writer.writerow([
            s.size,
            s.width,
            s.height,
            s.n_trials,
            repr(alpha),
            s.n_significant,
            _blank_if_none(s.selected_trial),
            _blank_if_none(s.selected_p, repr),
        ])
    return buf.getvalue()


def report_markdown(report):
    alpha = report.config.alpha
    lines = [
        f"| Random Distribution Size | P-value of Pair Presented "
        f"| Number of Random Cases with p < {alpha:g} | Selected Trial |",
        "|---|---|---|---|",
    ]
    for s in report.summaries:
        p = ABSENT_MD if s.selected_p is None else f"{s.selected_p:.4f}"
        trial = ABSENT_MD if s.selected_trial is None else str(s.selected_trial)
        lines.append(f"| {s.label} | {p} | {s.n_significant}/{s.n_trials} | {trial} |")
    return "\n".join(lines) + "\n"


def critical_csv(rows):
    """``rows`` is an iterable of ``(n, delta)``."""
    out = ["n,delta"]
    out.extend(f"{n},{delta!r}" for n, delta in rows)
    return "\n".join(out) + "\n"


def ttest_csv_line(outcome):
    fields = (outcome.t, outcome.df, outcome.p, outcome.mean_diff, outcome.cohen_d,
              outcome.ci_low, outcome.ci_high)
    return ",".join(repr(float(v)) for v in fields) + "\n"
