"""
Scoring for SpanTag
Overlap-based span F1 for span identification and micro-averaged F1 for
technique classification
"""

from __future__ import annotations

import os
import sys
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from src.corpus import CharSpan
from src.errors import ScoringError


@dataclass(frozen=True)
class SiScore:
    precision: float
    recall: float
    f1: float
    per_article: dict = field(default_factory=dict)
    predicted_spans: int = 0
    gold_spans: int = 0


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class TcScore:
    micro_f1: float
    per_class: dict
    macro_f1: float = 0.0
    instances: int = 0

    @property
    def f1_spread(self):
        """(lowest, highest) per-class F1 over classes with gold support."""
        supported = [score.f1 for score in self.per_class.values() if score.support > 0]
        if not supported:
            return (0.0, 0.0)
        return (min(supported), max(supported))


def f1_score(precision, recall):
    if precision == recall:
        return precision
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def overlap_fraction(s, t, h):
    """
    Characters shared by two spans, divided by a normaliser.

    Args:
        s (CharSpan): First span
        t (CharSpan): Second span
        h (int): Normalising length, usually len(s) or len(t)

    Returns:
        float: |s ∩ t| / h
    """
    if h <= 0:
        raise ValueError(f"normaliser must be positive, got {h}")
    return s.overlap(t) / h


def merge_spans(spans):
    """Union overlapping spans; the result is sorted and pairwise disjoint."""
    merged = []
    for span in sorted(spans):
        if merged and span.begin < merged[-1].end:
            if span.end > merged[-1].end:
                merged[-1] = CharSpan(merged[-1].begin, span.end)
        else:
            merged.append(span)
    return merged


def _group_spans(annotations):
    grouped = defaultdict(list)
    for annotation in annotations:
        grouped[annotation.article_id].append(annotation.span)
    merged = {}
    for article_id, spans in grouped.items():
        spans = merge_spans(spans)
        for a, b in zip(spans, spans[1:]):
            if a.overlap(b):
                raise ScoringError(f"overlapping spans survived merging in article {article_id}")
        merged[article_id] = spans
    return merged


def _overlap_sums(pred_spans, gold_spans):
    precision_sum = 0.0
    recall_sum = 0.0
    for s in pred_spans:
        for t in gold_spans:
            shared = s.overlap(t)
            if shared:
                precision_sum += overlap_fraction(s, t, len(s))
                recall_sum += overlap_fraction(s, t, len(t))
    return precision_sum, recall_sum


def _prf(precision_sum, recall_sum, n_pred, n_gold):
    if n_pred == 0 and n_gold == 0:
        return 1.0, 1.0, 1.0
    precision = precision_sum / n_pred if n_pred else 0.0
    recall = recall_sum / n_gold if n_gold else 0.0
    return precision, recall, f1_score(precision, recall)


def score_si(pred, gold):
    """
    Score predicted propaganda spans against gold spans.

    Each (predicted, gold) pair in the same article earns its shared
    characters divided by the predicted length towards precision and by
    the gold length towards recall; sums are pooled over all articles.

    Args:
        pred (list): Predicted SpanAnnotation records
        gold (list): Gold SpanAnnotation records

    Returns:
        SiScore: pooled scores plus a per-article breakdown
    """
    pred_by_article = _group_spans(pred)
    gold_by_article = _group_spans(gold)

    total_p = total_r = 0.0
    n_pred = n_gold = 0
    per_article = {}
    for article_id in sorted(set(pred_by_article) | set(gold_by_article)):
        pred_spans = pred_by_article.get(article_id, [])
        gold_spans = gold_by_article.get(article_id, [])
        p_sum, r_sum = _overlap_sums(pred_spans, gold_spans)
        per_article[article_id] = _prf(p_sum, r_sum, len(pred_spans), len(gold_spans))

        total_p += p_sum
        total_r += r_sum
        n_pred += len(pred_spans)
        n_gold += len(gold_spans)

    precision, recall, f1 = _prf(total_p, total_r, n_pred, n_gold)
    return SiScore(precision, recall, f1, per_article, n_pred, n_gold)


def _aligned_labels(pred, gold):
    if len(pred) != len(gold):
        raise ScoringError(f"{len(pred)} predictions for {len(gold)} gold instances")
    pred_labels, gold_labels = [], []
    for i, (p, g) in enumerate(zip(pred, gold), 1):
        if p.article_id != g.article_id or p.span != g.span:
            raise ScoringError(
                f"instance {i} misaligned: predicted {p.article_id}[{p.span.begin},{p.span.end}) "
                f"vs gold {g.article_id}[{g.span.begin},{g.span.end})")
        if p.technique is None or g.technique is None:
            raise ScoringError(f"instance {i} has no technique")
        pred_labels.append(p.technique)
        gold_labels.append(g.technique)
    return pred_labels, gold_labels


def confusion_matrix(pred_labels, gold_labels, classes):
    """Counts with gold classes on rows and predicted classes on columns."""
    index = {name: i for i, name in enumerate(classes)}
    matrix = np.zeros((len(classes), len(classes)), dtype=np.int64)
    np.add.at(matrix, ([index[g] for g in gold_labels], [index[p] for p in pred_labels]), 1)
    return matrix


def score_tc(pred, gold):
    """
    Score technique predictions against gold techniques, instance by instance.

    Args:
        pred (list): Predicted SpanAnnotation records
        gold (list): Gold SpanAnnotation records in the same order

    Returns:
        TcScore: micro F1 plus per-class precision, recall, F1 and support
    """
    pred_labels, gold_labels = _aligned_labels(pred, gold)
    if not gold_labels:
        return TcScore(0.0, {}, 0.0, 0)

    classes = sorted(set(pred_labels) | set(gold_labels))
    matrix = confusion_matrix(pred_labels, gold_labels, classes)
    tp = np.diag(matrix)
    predicted = matrix.sum(axis=0)
    support = matrix.sum(axis=1)

    per_class = {}
    for i, name in enumerate(classes):
        precision = tp[i] / predicted[i] if predicted[i] else 0.0
        recall = tp[i] / support[i] if support[i] else 0.0
        per_class[name] = ClassScore(float(precision), float(recall),
                                     float(f1_score(precision, recall)), int(support[i]))

    total_tp = int(tp.sum())
    n = len(gold_labels)
    micro_f1 = f1_score(total_tp / n, total_tp / n)
    supported = [score.f1 for score in per_class.values() if score.support > 0]
    macro_f1 = float(np.mean(supported)) if supported else 0.0
    return TcScore(micro_f1, per_class, macro_f1, n)
