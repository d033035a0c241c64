"""
Tokenizer for SpanTag
Splits articles into line sentences and offset-exact word tokens
"""

from __future__ import annotations

import bisect
import os
import re
import sys
from dataclasses import dataclass

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from src.corpus import CharSpan

_RUN = re.compile(r"\S+")
_LINE = re.compile(r"[^\n]+")

# characters that never get peeled off a word
_WORD_JOINERS = frozenset("-'’")


@dataclass(frozen=True)
class Token:
    text: str
    span: CharSpan


@dataclass(frozen=True)
class Sentence:
    article_id: str
    span: CharSpan
    tokens: tuple

    @property
    def word_count(self) -> int:
        return len(self.tokens)


def _is_punct(ch):
    return not ch.isalnum() and ch not in _WORD_JOINERS


def tokenize(sentence_text, offset=0):
    """
    Split text into tokens with absolute character offsets.

    Each maximal run of non-whitespace becomes a token, except that
    punctuation at either edge of the run is split off one character
    at a time.

    Args:
        sentence_text (str): Text to split
        offset (int): Position of sentence_text inside the article

    Returns:
        list: Token objects in order
    """
    tokens = []
    for match in _RUN.finditer(sentence_text):
        start, end = match.span()

        while start < end and _is_punct(sentence_text[start]):
            tokens.append(Token(sentence_text[start], CharSpan(offset + start, offset + start + 1)))
            start += 1

        tail = []
        while end > start and _is_punct(sentence_text[end - 1]):
            end -= 1
            tail.append(Token(sentence_text[end], CharSpan(offset + end, offset + end + 1)))

        if start < end:
            tokens.append(Token(sentence_text[start:end], CharSpan(offset + start, offset + end)))
        tokens.extend(reversed(tail))

    return tokens


def split_sentences(article):
    """
    Split an article into its nonblank lines.

    Args:
        article (Article): The article

    Returns:
        list: Sentence objects, each tokenized
    """
    sentences = []
    for match in _LINE.finditer(article.text):
        begin, end = match.span()
        line = match.group(0)
        if line.endswith("\r"):
            end -= 1
            line = line[:-1]
        if not line.strip():
            continue
        tokens = tuple(tokenize(line, begin))
        sentences.append(Sentence(article.id, CharSpan(begin, end), tokens))
    return sentences


def tokenize_article(article):
    """All tokens of an article, sentence by sentence."""
    return [token for sentence in split_sentences(article) for token in sentence.tokens]


def snap_span(span, tokens):
    """
    Find the tokens a character span touches.

    Any nonzero character overlap includes a token, so a span cutting
    through the middle of a word still claims the whole word.

    Args:
        span (CharSpan): Character span
        tokens (list): Tokens ordered by position

    Returns:
        range: Indices of the overlapping tokens; empty when none overlap
    """
    ends = [token.span.end for token in tokens]
    begins = [token.span.begin for token in tokens]
    first = bisect.bisect_right(ends, span.begin)
    stop = bisect.bisect_left(begins, span.end)
    if stop <= first:
        return range(first, first)
    return range(first, stop)
