import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.corpus import Article, CharSpan, SpanAnnotation  # noqa: E402

NEUTRAL_WORDS = ["the", "council", "met", "on", "tuesday", "to", "review", "budget", "plans",
                 "for", "schools", "and", "roads", "members", "discussed", "several", "items"]
PROPAGANDA_WORDS = ["traitors", "disgraceful", "evil", "cowards", "shameful", "monstrous", "treason"]


def write_article(directory, article_id, text):
    path = os.path.join(directory, f"article{article_id}.txt")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return path


def write_labels(path, annotations):
    with open(path, "w", encoding="utf-8", newline="") as f:
        for a in annotations:
            if a.technique is None:
                f.write(f"{a.article_id}\t{a.span.begin}\t{a.span.end}\n")
            else:
                f.write(f"{a.article_id}\t{a.technique}\t{a.span.begin}\t{a.span.end}\n")


def synthetic_article(rng, article_id, n_sentences=3):
    """
    An article of neutral sentences, some carrying a run of propaganda words.

    Returns:
        tuple: (Article, list of gold SI SpanAnnotations)
    """
    lines, spans = [], []
    offset = 0
    title = " ".join(rng.choice(NEUTRAL_WORDS) for _ in range(4))
    lines.append(title)
    offset += len(title) + 2
    for _ in range(n_sentences):
        words = [rng.choice(NEUTRAL_WORDS) for _ in range(rng.randint(5, 9))]
        positive = None
        if rng.random() < 0.7:
            start = rng.randint(1, len(words) - 1)
            length = rng.randint(1, 3)
            words[start:start] = [rng.choice(PROPAGANDA_WORDS) for _ in range(length)]
            positive = (start, start + length)
        sentence = " ".join(words) + "."
        if positive is not None:
            begin = offset + len(" ".join(words[:positive[0]])) + 1
            end = offset + len(" ".join(words[:positive[1]]))
            spans.append(SpanAnnotation(article_id, CharSpan(begin, end)))
        lines.append(sentence)
        offset += len(sentence) + 2
    text = "\n\n".join(lines) + "\n"
    return Article(article_id, text), spans


@pytest.fixture
def sample_article():
    text = "Big Lies In The News\r\n\r\nThe evil traitors struck again, said the mayor.\r\nCitizens were shocked.\r\n"
    return Article("111", text)


@pytest.fixture
def corpus_dir(tmp_path):
    """A small on-disk corpus: articles, SI labels and TC labels."""
    rng = random.Random(5)
    articles_dir = tmp_path / "articles"
    articles_dir.mkdir()
    si, tc = [], []
    for i in range(10):
        article_id = str(700 + i)
        article, spans = synthetic_article(rng, article_id, n_sentences=4)
        write_article(str(articles_dir), article_id, article.text)
        si.extend(spans)
        for j, a in enumerate(spans):
            technique = "Loaded_Language" if j % 2 == 0 else "Name_Calling,Labeling"
            tc.append(SpanAnnotation(a.article_id, a.span, technique))
    write_labels(str(tmp_path / "si.labels"), si)
    write_labels(str(tmp_path / "tc.labels"), tc)
    return tmp_path
