"""
Tagging schemes for SpanTag
Turns character spans into per-token tags and predicted tags back into spans
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from enum import Enum

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from src.corpus import CharSpan
from src.errors import TagSchemeError
from src.tokenizer import snap_span

OUTSIDE = "O"
POSITIVE_LABELS = frozenset("PBIES")


class TaggingScheme(Enum):
    PNP = "PNP"
    BIO = "BIO"
    BIOE = "BIOE"
    BIOES = "BIOES"

    @property
    def labels(self) -> tuple:
        """O first, then the rest sorted; a label's model row is its position here."""
        others = {"PNP": "P", "BIO": "BI", "BIOE": "BIE", "BIOES": "BIES"}[self.value]
        return (OUTSIDE,) + tuple(sorted(others))

    @classmethod
    def parse(cls, name):
        try:
            return cls[name.upper().replace("/", "")]
        except KeyError:
            raise TagSchemeError(f"unknown tagging scheme {name!r}") from None


@dataclass(frozen=True)
class TagSequence:
    scheme: TaggingScheme
    labels: tuple

    def __post_init__(self):
        allowed = self.scheme.labels
        for i, label in enumerate(self.labels):
            if label not in allowed:
                raise TagSchemeError(f"label {label!r} at index {i} is not in the {self.scheme.value} scheme")

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class Violation:
    index: int
    message: str


def _run_labels(scheme, n):
    if scheme is TaggingScheme.PNP:
        return ["P"] * n
    if scheme is TaggingScheme.BIO:
        return ["B"] + ["I"] * (n - 1)
    if scheme is TaggingScheme.BIOE:
        if n == 1:
            return ["B"]
        return ["B"] + ["I"] * (n - 2) + ["E"]
    if n == 1:
        return ["S"]
    return ["B"] + ["I"] * (n - 2) + ["E"]


def encode_ranges(scheme, token_count, ranges):
    """
    Tag token ranges under a scheme.

    Overlapping or touching ranges become one run.

    Args:
        scheme (TaggingScheme): Target scheme
        token_count (int): Number of tokens
        ranges (iterable): Token index ranges

    Returns:
        TagSequence: one label per token
    """
    positive = [False] * token_count
    for token_range in ranges:
        if len(token_range) == 0:
            continue
        if token_range.start < 0 or token_range.stop > token_count:
            raise TagSchemeError(
                f"token range [{token_range.start}, {token_range.stop}) outside {token_count} tokens")
        for i in token_range:
            positive[i] = True

    labels = [OUTSIDE] * token_count
    for run in _runs(positive):
        labels[run.start:run.stop] = _run_labels(scheme, len(run))
    return TagSequence(scheme, tuple(labels))


def encode(scheme, tokens, spans):
    """
    Tag tokens from character spans.

    Args:
        scheme (TaggingScheme): Target scheme
        tokens (list): Tokens of one sentence
        spans (iterable): CharSpans; each is snapped to the tokens it overlaps

    Returns:
        TagSequence: one label per token
    """
    return encode_ranges(scheme, len(tokens), [snap_span(span, tokens) for span in spans])


def _runs(flags):
    runs = []
    start = None
    for i, flag in enumerate(flags):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append(range(start, i))
            start = None
    if start is not None:
        runs.append(range(start, len(flags)))
    return runs


def positive_runs(tag_sequence):
    """Maximal runs of consecutive positive tokens, ignoring B/I/E structure."""
    return _runs([label in POSITIVE_LABELS for label in tag_sequence.labels])


def decode(tag_sequence, tokens):
    """
    Turn tags back into character spans.

    Every token tagged P, B, I, E or S counts as propaganda, whatever the
    surrounding structure; consecutive positive tokens merge into one span.

    Args:
        tag_sequence (TagSequence): Predicted or gold tags
        tokens (list): The tokens the tags belong to

    Returns:
        list: CharSpans, sorted and disjoint
    """
    if len(tag_sequence) != len(tokens):
        raise TagSchemeError(f"{len(tag_sequence)} labels for {len(tokens)} tokens")
    return [
        CharSpan(tokens[run.start].span.begin, tokens[run.stop - 1].span.end)
        for run in positive_runs(tag_sequence)
    ]


def validate(tag_sequence):
    """
    Report structural problems in a tag sequence.

    Args:
        tag_sequence (TagSequence): Tags to check

    Returns:
        list: Violation per problem, empty for a well-formed sequence
    """
    scheme = tag_sequence.scheme
    labels = tag_sequence.labels
    if scheme is TaggingScheme.PNP:
        return []

    has_end = scheme in (TaggingScheme.BIOE, TaggingScheme.BIOES)
    # BIOE writes a one-token span as a lone B
    lone_b_ok = scheme is TaggingScheme.BIOE
    violations = []

    def close_run(prev, index):
        if has_end and prev in ("B", "I") and not (lone_b_ok and prev == "B"):
            violations.append(Violation(index, "unterminated B-run"))

    prev = OUTSIDE
    for i, label in enumerate(labels):
        if label in ("I", "E") and prev not in ("B", "I"):
            violations.append(Violation(i, f"{label} without preceding B"))
        if label not in ("I", "E"):
            close_run(prev, i - 1)
        if label == "S":
            following = labels[i + 1] if i + 1 < len(labels) else OUTSIDE
            if prev in ("B", "I", "E") or following in ("B", "I", "E"):
                violations.append(Violation(i, "S adjacent to a B/I/E run"))
        prev = label
    close_run(prev, len(labels) - 1)

    return violations


def convert(tag_sequence, target_scheme):
    """Re-tag the positive runs of a sequence under another scheme."""
    return encode_ranges(target_scheme, len(tag_sequence), positive_runs(tag_sequence))


def format_tags(tag_sequence):
    """One sentence's tags as a space-separated line (no newline)."""
    return " ".join(tag_sequence.labels)


def parse_tags(line, scheme):
    """Inverse of format_tags."""
    return TagSequence(scheme, tuple(line.split()))
