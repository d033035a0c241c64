"""
Report formatter for SpanTag
Renders scores and statistics as TSV reports and as terminal text
"""


def _number(value):
    if isinstance(value, float):
        return format(value, ".6f")
    return str(value)


def format_si_report(score):
    """
    SI scores as a two-column metric/value TSV.

    Args:
        score (SiScore): Pooled span scores

    Returns:
        str: TSV text with a header row
    """
    rows = [("metric", "value"),
            ("precision", _number(score.precision)),
            ("recall", _number(score.recall)),
            ("f1", _number(score.f1)),
            ("predicted_spans", str(score.predicted_spans)),
            ("gold_spans", str(score.gold_spans))]
    return "".join("\t".join(row) + "\n" for row in rows)


def format_tc_report(score):
    """
    TC scores as TSV: the summary metrics, then one row per class.

    Args:
        score (TcScore): Classification scores

    Returns:
        str: TSV text
    """
    low, high = score.f1_spread
    lines = ["metric\tvalue",
             f"micro_f1\t{_number(score.micro_f1)}",
             f"macro_f1\t{_number(score.macro_f1)}",
             f"min_class_f1\t{_number(low)}",
             f"max_class_f1\t{_number(high)}",
             f"instances\t{score.instances}",
             "",
             "class\tprecision\trecall\tf1\tsupport"]
    for name, cls in score.per_class.items():
        lines.append(f"{name}\t{_number(cls.precision)}\t{_number(cls.recall)}\t{_number(cls.f1)}\t{cls.support}")
    return "\n".join(lines) + "\n"


def format_si_summary(score, title="Span identification"):
    """Terminal summary of an SI score."""
    return (f"{title}\n"
            f"  precision: {score.precision:.4f}\n"
            f"  recall:    {score.recall:.4f}\n"
            f"  F1:        {score.f1:.4f}\n"
            f"  spans:     {score.predicted_spans} predicted, {score.gold_spans} gold")


def format_tc_summary(score, title="Technique classification", width=80):
    """Terminal summary of a TC score with a per-class table."""
    low, high = score.f1_spread
    lines = [title,
             f"  micro F1: {score.micro_f1:.4f}",
             f"  macro F1: {score.macro_f1:.4f}",
             f"  class F1 range: {low:.4f} - {high:.4f}",
             f"  instances: {score.instances}"]
    if score.per_class:
        name_width = max(5, min(max(len(name) for name in score.per_class), width - 40))
        lines.append(f"  {'class':<{name_width}}  {'P':>6}  {'R':>6}  {'F1':>6}  {'n':>5}")
        for name, cls in score.per_class.items():
            label = name if len(name) <= name_width else name[:name_width - 1] + "~"
            lines.append(f"  {label:<{name_width}}  {cls.precision:6.3f}  {cls.recall:6.3f}  {cls.f1:6.3f}  {cls.support:5d}")
    return "\n".join(lines)


def format_stats(stats, title="Corpus statistics"):
    """
    Key/value statistics, one per line.

    Args:
        stats (dict): Statistic name -> value
        title (str): Heading line

    Returns:
        str: Formatted text
    """
    width = max((len(key) for key in stats), default=0)
    lines = [title]
    for key, value in stats.items():
        shown = f"{value:.4f}" if isinstance(value, float) else str(value)
        lines.append(f"  {key.replace('_', ' '):<{width}}  {shown}")
    return "\n".join(lines)
