"""Report rendering: aligned summary table, delimited deltas, and figures."""

from pathlib import Path

_SUMMARY_ROWS = (
    ("No. of Queries", lambda r: str(r.num_topics)),
    ("Retrieved", lambda r: str(r.retrieved)),
    ("Relevant", lambda r: str(r.relevant)),
    ("Relevant Retrieved", lambda r: str(r.relevant_retrieved)),
    ("Average Precision", lambda r: f"{r.mean_ap:.4f}"),
)


def format_summary_table(reports: dict, header_lines=()) -> str:
    """Aligned per-run summary, one column per run, one metric per row."""
    names = list(reports)
    label_width = max(len(label) for label, _ in _SUMMARY_ROWS)
    cells = {
        name: [render(report) for _, render in _SUMMARY_ROWS]
        for name, report in reports.items()
    }
    widths = {
        name: max(len(name), max(len(v) for v in cells[name])) for name in names
    }
    lines = [f"# {line}" for line in header_lines]
    header = " " * label_width + "  " + "  ".join(
        name.rjust(widths[name]) for name in names
    )
    lines.append(header)
    for row_index, (label, _) in enumerate(_SUMMARY_ROWS):
        lines.append(
            label.ljust(label_width)
            + "  "
            + "  ".join(cells[name][row_index].rjust(widths[name]) for name in names)
        )
    return "\n".join(lines) + "\n"


def format_method_summaries(deltas) -> str:
    """One line per method: improved-topic share and mean-AP movement."""
    lines = []
    for delta in deltas:
        lines.append(
            f"{delta.method}: improved {delta.improved}/{len(delta.rows)} topics "
            f"({delta.improved_pct:.1f}%), mean AP {delta.map_before:.4f} -> "
            f"{delta.map_after:.4f} ({delta.map_rel_change_pct:+.2f}%)"
        )
    return "\n".join(lines) + "\n"


def write_comparison_csv(deltas, sink):
    """Per-topic AP deltas as "topic,method,ap_before,ap_after,delta" rows."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_comparison_csv(deltas, fh)
        return
    sink.write("topic,method,ap_before,ap_after,delta\n")
    for delta in deltas:
        for topic, before, after, diff in delta.rows:
            sink.write(f"{topic},{delta.method},{before:.4f},{after:.4f},{diff:+.4f}\n")


def render_improvement_figure(deltas, path):
    """Bar chart of the share of topics each method improved, saved to path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    methods = [d.method for d in deltas]
    pcts = [d.improved_pct for d in deltas]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    bars = ax.bar(methods, pcts, color="#4878a8", width=0.6)
    for bar, pct in zip(bars, pcts):
        ax.annotate(
            f"{pct:.0f}%",
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=9,
        )
    ax.set_ylabel("Topics improved (%)")
    ax.set_ylim(0, 100)
    ax.set_title("Share of topics with higher AP than the baseline")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
