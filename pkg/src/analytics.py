"""
Dataset analytics for SpanTag
Class imbalance, span-length distributions by technique or category,
average span lengths and corpus sequence statistics
"""

from __future__ import annotations

import os
import sys
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from src.errors import DataError
from src.tagcodec import TaggingScheme, encode
from src.tokenizer import split_sentences, tokenize

# Techniques whose span lengths share a peaky distribution; every other technique is category 2
CATEGORY_ONE = frozenset({
    "Loaded_Language",
    "Name_Calling,Labeling",
    "Repetition",
    "Slogans",
    "Thought-terminating_Cliches",
    "Exaggeration,Minimisation",
    "Flag-Waving",
})

OFFICIAL_TECHNIQUES = (
    "Appeal_to_Authority",
    "Appeal_to_fear-prejudice",
    "Bandwagon,Reductio_ad_hitlerum",
    "Black-and-White_Fallacy",
    "Causal_Oversimplification",
    "Doubt",
    "Exaggeration,Minimisation",
    "Flag-Waving",
    "Loaded_Language",
    "Name_Calling,Labeling",
    "Repetition",
    "Slogans",
    "Thought-terminating_Cliches",
    "Whataboutism,Straw_Men,Red_Herring",
)


class LengthUnit(Enum):
    CHARS = "CHARS"
    WORDS = "WORDS"


class Grouping(Enum):
    TECHNIQUE = "TECHNIQUE"
    CATEGORY = "CATEGORY"
    ALL = "ALL"


@dataclass(frozen=True)
class LengthHistogram:
    group: str
    unit: LengthUnit
    bin_width: int
    bins: dict  # bin_low -> count, ascending
    mean: float
    median: float

    @property
    def count(self) -> int:
        return sum(self.bins.values())


@dataclass(frozen=True)
class CategoryMap:
    categories: dict  # technique -> 1 or 2

    @classmethod
    def for_techniques(cls, techniques):
        return cls({name: 1 if name in CATEGORY_ONE else 2 for name in techniques})

    def category_of(self, technique):
        return self.categories.get(technique, 1 if technique in CATEGORY_ONE else 2)

    def members(self, category):
        return sorted(name for name, value in self.categories.items() if value == category)


def class_histogram(annotations):
    """
    Count TC annotations per technique.

    Args:
        annotations (list): SpanAnnotation records with techniques

    Returns:
        dict: technique -> count, largest first (ties by name)
    """
    counts = Counter(a.technique for a in annotations)
    return dict(sorted(counts.items(), key=lambda item: (-item[1], item[0])))


def _span_length(annotation, unit, articles):
    if unit is LengthUnit.CHARS:
        return len(annotation.span)
    article = articles.get(annotation.article_id) if articles else None
    if article is None:
        raise DataError(f"word lengths need the text of article {annotation.article_id}")
    span = annotation.span
    return len(tokenize(article.text[span.begin:span.end]))


def _group_key(annotation, grouping, category_map):
    if grouping is Grouping.ALL:
        return "all"
    if annotation.technique is None:
        raise DataError(f"{grouping.value} grouping needs techniques; article {annotation.article_id} has none")
    if grouping is Grouping.TECHNIQUE:
        return annotation.technique
    return f"category_{category_map.category_of(annotation.technique)}"


def span_length_distribution(annotations, unit=LengthUnit.CHARS, grouping=Grouping.TECHNIQUE,
                             bin_width=None, articles=None):
    """
    Histogram span lengths per group.

    Args:
        annotations (list): SpanAnnotation records
        unit (LengthUnit): Characters (end - begin) or tokenized words
        grouping (Grouping): Per technique, per category, or all together
        bin_width (int, optional): Bin width; 10 chars or 2 words by default
        articles (dict, optional): Article texts, needed for WORDS

    Returns:
        dict: group -> LengthHistogram, groups in name order
    """
    if bin_width is None:
        bin_width = config.DEFAULT_CHAR_BIN_WIDTH if unit is LengthUnit.CHARS else config.DEFAULT_WORD_BIN_WIDTH
    if bin_width < 1:
        raise ValueError(f"bin width must be positive, got {bin_width}")

    category_map = CategoryMap.for_techniques({a.technique for a in annotations if a.technique})
    lengths = defaultdict(list)
    for annotation in annotations:
        lengths[_group_key(annotation, grouping, category_map)].append(_span_length(annotation, unit, articles))

    histograms = {}
    for group in sorted(lengths):
        values = np.array(lengths[group], dtype=np.int64)
        lows, counts = np.unique((values // bin_width) * bin_width, return_counts=True)
        histograms[group] = LengthHistogram(
            group=group,
            unit=unit,
            bin_width=bin_width,
            bins={int(low): int(count) for low, count in zip(lows, counts)},
            mean=float(values.mean()),
            median=float(np.median(values)),
        )
    return histograms


def histograms_to_frame(histograms):
    """Flatten histograms into a (group, bin_low, bin_high, count) table."""
    rows = [
        {"group": h.group, "bin_low": low, "bin_high": low + h.bin_width - 1, "count": count}
        for h in histograms.values()
        for low, count in h.bins.items()
    ]
    return pd.DataFrame(rows, columns=["group", "bin_low", "bin_high", "count"])


def histograms_to_csv(histograms):
    return histograms_to_frame(histograms).to_csv(index=False, lineterminator="\n")


def class_histogram_to_csv(histogram):
    frame = pd.DataFrame(list(histogram.items()), columns=["technique", "count"])
    return frame.to_csv(index=False, lineterminator="\n")


def average_span_length(spans):
    """
    Mean span length in characters.

    Args:
        spans (list): CharSpans

    Returns:
        float: arithmetic mean of end - begin
    """
    if not spans:
        raise DataError("average span length of no spans is undefined")
    return sum(len(span) for span in spans) / len(spans)


def compare_span_lengths(predicted, gold):
    """
    Average predicted vs gold span length, as used to compare tagging schemes.

    Args:
        predicted (list): Predicted SpanAnnotation records
        gold (list): Gold SpanAnnotation records

    Returns:
        dict: predicted_avg, gold_avg and their difference (None where undefined)
    """
    predicted_avg = average_span_length([a.span for a in predicted]) if predicted else None
    gold_avg = average_span_length([a.span for a in gold]) if gold else None
    difference = None
    if predicted_avg is not None and gold_avg is not None:
        difference = predicted_avg - gold_avg
    return {"predicted_avg": predicted_avg, "gold_avg": gold_avg, "difference": difference}


def sequence_statistics(articles, si_annotations=None):
    """
    Sentence and token statistics of a corpus.

    Args:
        articles (dict): article id -> Article
        si_annotations (list, optional): Gold spans; adds the positive-token fraction

    Returns:
        dict: articles, sentences, max_words, tokens and (with spans) positive_tokens
            and positive_fraction
    """
    spans_by_article = defaultdict(list)
    for annotation in si_annotations or []:
        spans_by_article[annotation.article_id].append(annotation.span)

    sentences = tokens = positive = max_words = 0
    for article in articles.values():
        spans = spans_by_article.get(article.id, [])
        for sentence in split_sentences(article):
            sentences += 1
            tokens += sentence.word_count
            max_words = max(max_words, sentence.word_count)
            if spans:
                tags = encode(TaggingScheme.PNP, sentence.tokens,
                              [s for s in spans if s.overlap(sentence.span)])
                positive += sum(1 for label in tags.labels if label == "P")

    stats = {"articles": len(articles), "sentences": sentences, "max_words": max_words, "tokens": tokens}
    if si_annotations is not None:
        stats["positive_tokens"] = positive
        stats["positive_fraction"] = positive / tokens if tokens else 0.0
    return stats
