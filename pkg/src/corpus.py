"""
Corpus access for SpanTag
Loads shared-task articles and span/technique label files, and writes
predictions back in the same formats
"""

from __future__ import annotations

import logging
import os
import re
import sys
from dataclasses import dataclass
from enum import Enum

from tqdm import tqdm

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from src.errors import (
    AnnotationFormatError,
    ArticleDecodeError,
    ArticleIdError,
    ArticleNotFoundError,
    DataError,
    OffsetError,
)
from utils.file_utils import list_files, read_text

logger = logging.getLogger(__name__)

_DIGITS = re.compile(r"\d+")
_OFFSET = re.compile(r"[0-9]+")

# Technique placeholder used by shared-task TC templates
UNKNOWN_TECHNIQUE = "?"


@dataclass(frozen=True, order=True)
class CharSpan:
    """Half-open character interval [begin, end) into an article's text."""

    begin: int
    end: int

    def __post_init__(self):
        if self.begin < 0 or self.begin >= self.end:
            raise ValueError(f"invalid span [{self.begin}, {self.end})")

    def __len__(self):
        return self.end - self.begin

    def overlap(self, other: CharSpan) -> int:
        """Number of characters shared with another span."""
        return max(0, min(self.end, other.end) - max(self.begin, other.begin))


@dataclass(frozen=True)
class Article:
    id: str
    text: str

    @property
    def title(self) -> str:
        """
        Text up to the first newline.

        For CRLF articles the carriage return before that newline is dropped
        too, so the title reads the same whatever the line endings.
        """
        return self.text.split("\n", 1)[0].rstrip("\r")


class AnnotationKind(Enum):
    SI = 3
    TC = 4

    @property
    def columns(self) -> int:
        return self.value


@dataclass(frozen=True)
class SpanAnnotation:
    article_id: str
    span: CharSpan
    technique: str | None = None


@dataclass(frozen=True)
class LabelInventory:
    """Sorted technique names; a name's class index is its position."""

    names: tuple

    def __post_init__(self):
        if list(self.names) != sorted(set(self.names)):
            raise ValueError("inventory names must be unique and sorted")

    def __len__(self):
        return len(self.names)

    @property
    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    def index_of(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"unknown technique {name!r}") from None


def article_id_from_path(path):
    """
    Extract the article id from a file name.

    Args:
        path (str): Article file path, e.g. ".../article123.txt"

    Returns:
        str: The first run of digits in the base name
    """
    match = _DIGITS.search(os.path.basename(path))
    if match is None:
        raise ArticleIdError("file name contains no digits to use as article id", path=path)
    return match.group(0)


def load_article(path):
    """
    Load one article file.

    Args:
        path (str): Path to a UTF-8 article file

    Returns:
        Article: id from the file name, text exactly as stored
    """
    if not os.path.isfile(path):
        raise ArticleNotFoundError("article file not found", path=path)
    article_id = article_id_from_path(path)

    with open(path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ArticleDecodeError(f"not valid UTF-8 at byte {e.start}", path=path) from None

    return Article(id=article_id, text=text)


def parse_annotations(tsv_text, kind, articles=None, source=None):
    """
    Parse an SI or TC label file.

    SI rows are ``id, begin, end``; TC rows are ``id, technique, begin, end``.
    Rows keep their order and a fragment listed once per technique stays
    listed once per technique.

    Args:
        tsv_text (str): File contents
        kind (AnnotationKind): Expected row layout
        articles (dict, optional): article id -> Article, to check offsets against
        source (str, optional): File name used in error messages

    Returns:
        list: SpanAnnotation per row
    """
    annotations = []
    for line_no, line in enumerate(tsv_text.splitlines(), 1):
        if not line.strip():
            logger.debug("Skipping blank row %s in %s", line_no, source or "<text>")
            continue

        fields = line.split("\t")
        if len(fields) != kind.columns:
            raise AnnotationFormatError(
                f"expected {kind.columns} tab-separated fields for {kind.name}, got {len(fields)}",
                path=source, line=line_no)

        if kind is AnnotationKind.SI:
            article_id, begin_text, end_text = fields
            technique = None
        else:
            article_id, technique, begin_text, end_text = fields
            if not technique:
                raise AnnotationFormatError("empty technique field", path=source, line=line_no)

        if not (_OFFSET.fullmatch(begin_text) and _OFFSET.fullmatch(end_text)):
            raise AnnotationFormatError(
                f"offsets must be plain decimal integers, got {begin_text!r} and {end_text!r}",
                path=source, line=line_no)
        begin, end = int(begin_text), int(end_text)
        if begin < 0 or begin >= end:
            raise AnnotationFormatError(f"invalid span [{begin}, {end})", path=source, line=line_no)

        annotation = SpanAnnotation(article_id, CharSpan(begin, end), technique)
        if articles is not None:
            _check_offsets(annotation, articles, source, line_no)
        annotations.append(annotation)

    return annotations


def _check_offsets(annotation, articles, source=None, line_no=None):
    article = articles.get(annotation.article_id)
    if article is None:
        raise DataError(f"unknown article {annotation.article_id}", path=source, line=line_no)
    if annotation.span.end > len(article.text):
        raise OffsetError(
            f"span [{annotation.span.begin}, {annotation.span.end}) exceeds article "
            f"{article.id} of length {len(article.text)}",
            path=source, line=line_no)


def write_annotations(annotations, kind):
    """
    Serialize annotations in the SI or TC label format.

    Args:
        annotations (list): SpanAnnotation records
        kind (AnnotationKind): Row layout to write

    Returns:
        str: One row per annotation, each ending in a newline
    """
    rows = []
    for annotation in annotations:
        span = annotation.span
        if kind is AnnotationKind.SI:
            if annotation.technique is not None:
                raise DataError(f"SI record for article {annotation.article_id} carries a technique")
            rows.append(f"{annotation.article_id}\t{span.begin}\t{span.end}\n")
        else:
            if annotation.technique is None:
                raise DataError(f"TC record for article {annotation.article_id} has no technique")
            rows.append(f"{annotation.article_id}\t{annotation.technique}\t{span.begin}\t{span.end}\n")
    return "".join(rows)


def sniff_kind(tsv_text):
    """Guess SI or TC from the column count of the first nonblank row."""
    for line in tsv_text.splitlines():
        if line.strip():
            columns = len(line.split("\t"))
            return AnnotationKind.TC if columns == AnnotationKind.TC.columns else AnnotationKind.SI
    return AnnotationKind.SI


def load_annotations(path, kind=None, articles=None):
    """
    Load a label file, or every ``.labels`` file of a directory in name order.

    Args:
        path (str): File or directory
        kind (AnnotationKind, optional): Row layout; sniffed when omitted
        articles (dict, optional): Articles to validate offsets against

    Returns:
        list: SpanAnnotation records
    """
    if os.path.isdir(path):
        annotations = []
        for file_path in list_files(path, extension=".labels"):
            annotations.extend(load_annotations(file_path, kind, articles))
        return annotations

    if not os.path.isfile(path):
        raise DataError("label file not found", path=path)
    text = read_text(path)
    kind = kind or sniff_kind(text)
    return parse_annotations(text, kind, articles=articles, source=path)


def build_label_inventory(annotations):
    """
    Collect the technique names used by TC annotations.

    Args:
        annotations (list): SpanAnnotation records, each with a technique

    Returns:
        LabelInventory: distinct names sorted lexicographically
    """
    if not annotations:
        raise DataError("cannot build a label inventory from no annotations")

    names = set()
    for annotation in annotations:
        if annotation.technique is None:
            raise DataError(f"annotation in article {annotation.article_id} has no technique")
        if annotation.technique == UNKNOWN_TECHNIQUE:
            raise DataError(f"template row in article {annotation.article_id} has no gold technique")
        names.add(annotation.technique)
    return LabelInventory(tuple(sorted(names)))


class CorpusManager:
    """Finds and loads the article files of a corpus directory"""

    def __init__(self, articles_dir=None, show_progress=None):
        """
        Initialize the corpus manager.

        Args:
            articles_dir (str, optional): Directory holding one .txt file per article
            show_progress (bool, optional): Show a progress bar while loading
        """
        self.articles_dir = articles_dir or config.ARTICLES_DIR
        self.show_progress = config.SHOW_PROGRESS if show_progress is None else show_progress

    def list_articles(self):
        """
        List article files, ordered by numeric id.

        Returns:
            list: (article_id, path) tuples
        """
        if not os.path.isdir(self.articles_dir):
            raise DataError("article directory not found", path=self.articles_dir)

        entries = [(article_id_from_path(p), p) for p in list_files(self.articles_dir, ".txt")]
        entries.sort(key=lambda entry: (int(entry[0]), entry[1]))
        return entries

    def load_all(self):
        """
        Load every article of the directory.

        Returns:
            dict: article id -> Article, in id order
        """
        articles = {}
        entries = self.list_articles()
        for article_id, path in tqdm(entries, desc="Loading articles", disable=not self.show_progress):
            if article_id in articles:
                raise DataError(f"duplicate article id {article_id}", path=path)
            articles[article_id] = load_article(path)

        logger.info("Loaded %d articles from %s", len(articles), self.articles_dir)
        return articles
