"""
Context extraction for SpanTag
Builds (fragment, context) pairs for technique classification from the
sentences around a fragment or from the article title
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from enum import Enum

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from src.corpus import CharSpan
from src.errors import DataError, OffsetError
from src.tokenizer import snap_span, split_sentences, tokenize

logger = logging.getLogger(__name__)

MISSING_FIELD = "-"
_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


class ContextKind(Enum):
    SENTENCE = "SENTENCE"
    TITLE = "TITLE"
    NONE = "NONE"

    @classmethod
    def parse(cls, name):
        try:
            return cls[name.upper()]
        except KeyError:
            raise DataError(f"unknown context kind {name!r}") from None


@dataclass(frozen=True)
class ContextPair:
    article_id: str
    span: CharSpan | None
    fragment_text: str
    context_text: str
    context_kind: ContextKind
    technique: str | None = None


def _check_span(article, span):
    if span.end > len(article.text):
        raise OffsetError(
            f"span [{span.begin}, {span.end}) exceeds article {article.id} of length {len(article.text)}")


def _window_tokens(article, span, sentences):
    touched = [s for s in sentences if s.span.overlap(span)]
    if not touched:
        # the fragment sits in whitespace-only lines
        return tokenize(article.text[span.begin:span.end], span.begin)
    return [token for sentence in touched for token in sentence.tokens]


def extract_sentence_context(article, span, cap=config.DEFAULT_CONTEXT_CAP,
                             include_fragment=config.CAP_INCLUDES_FRAGMENT, sentences=None):
    """
    Build the sentence context of a fragment.

    The window is every sentence the fragment touches. Starting from the
    fragment's own words, whole words are added alternately on the left
    and on the right until both sides reach the window edge or the word
    budget runs out; once one side is exhausted the other side takes the
    rest of the budget.

    Args:
        article (Article): Article holding the fragment
        span (CharSpan): Fragment offsets
        cap (int): Word budget of the context
        include_fragment (bool): Whether fragment words count against the cap
        sentences (list, optional): Precomputed split_sentences(article)

    Returns:
        ContextPair: kind SENTENCE
    """
    _check_span(article, span)
    if sentences is None:
        sentences = split_sentences(article)

    window = _window_tokens(article, span, sentences)
    fragment_text = article.text[span.begin:span.end]
    fragment = snap_span(span, window)
    left, right = fragment.start, fragment.stop

    if include_fragment and len(fragment) > cap:
        kept = window[left:left + cap]
        context_text = article.text[kept[0].span.begin:kept[-1].span.end]
        return ContextPair(article.id, span, fragment_text, context_text, ContextKind.SENTENCE)

    budget = cap - len(fragment) if include_fragment else cap
    take_left = True
    while budget > 0 and (left > 0 or right < len(window)):
        if (take_left and left > 0) or right >= len(window):
            left -= 1
        else:
            right += 1
        budget -= 1
        take_left = not take_left

    begin, end = span.begin, span.end
    if right > left:
        begin = min(begin, window[left].span.begin)
        end = max(end, window[right - 1].span.end)
    context_text = article.text[begin:end]
    return ContextPair(article.id, span, fragment_text, context_text, ContextKind.SENTENCE)


def extract_title_context(article, span=None):
    """
    Use the article's headline as context.

    Args:
        article (Article): The article
        span (CharSpan, optional): Fragment to attach; omitted for a bare title context

    Returns:
        ContextPair: kind TITLE
    """
    fragment_text = ""
    if span is not None:
        _check_span(article, span)
        fragment_text = article.text[span.begin:span.end]
    return ContextPair(article.id, span, fragment_text, article.title, ContextKind.TITLE)


def build_tc_dataset(articles, annotations, context_kind=ContextKind.SENTENCE,
                     cap=config.DEFAULT_CONTEXT_CAP, include_fragment=config.CAP_INCLUDES_FRAGMENT):
    """
    Build one context pair per TC annotation.

    Args:
        articles (dict): article id -> Article
        annotations (list): SpanAnnotation records, order preserved
        context_kind (ContextKind): Which context to attach
        cap (int): Word budget for sentence contexts
        include_fragment (bool): Whether fragment words count against the cap

    Returns:
        list: ContextPair per annotation
    """
    sentence_cache = {}
    pairs = []
    for annotation in annotations:
        article = articles.get(annotation.article_id)
        if article is None:
            raise DataError(f"annotation references missing article {annotation.article_id}")

        if context_kind is ContextKind.SENTENCE:
            if article.id not in sentence_cache:
                sentence_cache[article.id] = split_sentences(article)
            pair = extract_sentence_context(article, annotation.span, cap, include_fragment,
                                            sentences=sentence_cache[article.id])
        elif context_kind is ContextKind.TITLE:
            pair = extract_title_context(article, annotation.span)
        else:
            _check_span(article, annotation.span)
            pair = ContextPair(article.id, annotation.span,
                               article.text[annotation.span.begin:annotation.span.end], "", ContextKind.NONE)

        pairs.append(ContextPair(pair.article_id, pair.span, pair.fragment_text, pair.context_text,
                                 pair.context_kind, annotation.technique))

    logger.info("Built %d %s context pairs", len(pairs), context_kind.value.lower())
    return pairs


def _escape(text):
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def _unescape(text):
    out = []
    chars = iter(text)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, "")
            out.append(_UNESCAPES.get(nxt, "\\" + nxt))
        else:
            out.append(ch)
    return "".join(out)


def write_context_pairs(pairs):
    """
    Serialize pairs as TSV rows:
    article_id, begin, end, technique, context_kind, fragment_text, context_text
    """
    rows = []
    for pair in pairs:
        begin = str(pair.span.begin) if pair.span is not None else MISSING_FIELD
        end = str(pair.span.end) if pair.span is not None else MISSING_FIELD
        technique = pair.technique if pair.technique is not None else MISSING_FIELD
        rows.append("\t".join([pair.article_id, begin, end, technique, pair.context_kind.value,
                               _escape(pair.fragment_text), _escape(pair.context_text)]) + "\n")
    return "".join(rows)


def parse_context_pairs(tsv_text, source=None):
    """Inverse of write_context_pairs."""
    pairs = []
    for line_no, line in enumerate(tsv_text.split("\n"), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 7:
            raise DataError(f"expected 7 fields, got {len(fields)}", path=source, line=line_no)
        article_id, begin, end, technique, kind, fragment_text, context_text = fields
        try:
            span = None if begin == MISSING_FIELD else CharSpan(int(begin), int(end))
        except ValueError:
            raise DataError(f"bad offsets {begin!r}, {end!r}", path=source, line=line_no) from None
        pairs.append(ContextPair(article_id, span, _unescape(fragment_text), _unescape(context_text),
                                 ContextKind.parse(kind), None if technique == MISSING_FIELD else technique))
    return pairs
