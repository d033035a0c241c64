"""
Text encoder for SpanTag
Deterministic hashed-feature stand-in for a pre-trained transformer, plus the
strategies that combine a sequence vector S and a context vector C into V
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from src.errors import DataError, DimensionMismatchError
from src.tokenizer import tokenize
from utils.file_utils import read_text

logger = logging.getLogger(__name__)

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class PositionBucket(Enum):
    BEGIN = "begin"
    MIDDLE = "middle"
    END = "end"


class VectorRole(Enum):
    SEQUENCE = "S"
    CONTEXT = "C"
    COMBINED = "V"


class CombinationKind(Enum):
    NONE = "NONE"
    CONCAT_TEXT = "CONCAT_TEXT"
    CONCAT_EMBED = "CONCAT_EMBED"
    CONCAT_EMBED_HIDDEN = "CONCAT_EMBED_HIDDEN"
    ADD = "ADD"
    WEIGHTED_AVG = "WEIGHTED_AVG"


@dataclass(frozen=True, eq=False)
class SeqVector:
    values: np.ndarray
    role: VectorRole

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class CombinationStrategy:
    """
    How S and C become V.

    Args:
        kind (CombinationKind): Combination method
        alpha (float, optional): Weight of S, WEIGHTED_AVG only
        hidden_dim (int, optional): Reduced context size, CONCAT_EMBED_HIDDEN only
    """

    kind: CombinationKind = CombinationKind.NONE
    alpha: float | None = None
    hidden_dim: int | None = None

    def __post_init__(self):
        if self.kind is CombinationKind.WEIGHTED_AVG:
            if self.alpha is None:
                raise ValueError("WEIGHTED_AVG needs alpha")
            if not 0.0 <= self.alpha <= 1.0:
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        elif self.alpha is not None:
            raise ValueError(f"alpha only applies to WEIGHTED_AVG, not {self.kind.value}")
        if self.hidden_dim is not None:
            if self.kind is not CombinationKind.CONCAT_EMBED_HIDDEN:
                raise ValueError(f"hidden_dim only applies to CONCAT_EMBED_HIDDEN, not {self.kind.value}")
            if self.hidden_dim < 1:
                raise ValueError(f"hidden_dim must be positive, got {self.hidden_dim}")

    @classmethod
    def from_names(cls, kind, alpha=None, hidden_dim=None):
        try:
            kind = CombinationKind[kind.upper()]
        except KeyError:
            raise DataError(f"unknown combination strategy {kind!r}") from None
        if kind is CombinationKind.WEIGHTED_AVG and alpha is None:
            alpha = config.DEFAULT_ALPHA
        if kind is not CombinationKind.WEIGHTED_AVG:
            alpha = None
        if kind is not CombinationKind.CONCAT_EMBED_HIDDEN:
            hidden_dim = None
        return cls(kind, alpha, hidden_dim)

    def reduced_dim(self, dim):
        """Size of the reduced context vector for a d-dimensional encoder."""
        reduced = self.hidden_dim if self.hidden_dim is not None else max(1, dim // 4)
        if reduced >= dim:
            raise ValueError(f"hidden_dim {reduced} must be smaller than the encoder dimension {dim}")
        return reduced

    def output_dim(self, dim):
        if self.kind is CombinationKind.CONCAT_EMBED:
            return 2 * dim
        if self.kind is CombinationKind.CONCAT_EMBED_HIDDEN:
            return dim + self.reduced_dim(dim)
        return dim

    def describe(self):
        if self.kind is CombinationKind.WEIGHTED_AVG:
            return f"{self.kind.value}(alpha={self.alpha})"
        if self.kind is CombinationKind.CONCAT_EMBED_HIDDEN and self.hidden_dim is not None:
            return f"{self.kind.value}(hidden_dim={self.hidden_dim})"
        return self.kind.value


def hash_feature(feature, dim):
    """
    64-bit FNV-1a of the feature's UTF-8 bytes, reduced modulo dim.

    Args:
        feature (str): Feature string
        dim (int): Number of buckets

    Returns:
        int: Bucket index in [0, dim)
    """
    if dim <= 0:
        raise ValueError(f"dim must be positive, got {dim}")
    h = FNV_OFFSET_BASIS
    for byte in feature.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h % dim


def position_bucket(index, length):
    if index == 0:
        return PositionBucket.BEGIN
    if index == length - 1:
        return PositionBucket.END
    return PositionBucket.MIDDLE


def _shape(text):
    if text.isdigit():
        return "Digit"
    if not any(ch.isalnum() for ch in text):
        return "Punct"
    if len(text) > 1 and text.isupper():
        return "Caps"
    if text[0].isupper():
        return "Cap"
    if text.islower():
        return "Lower"
    return "Mixed"


def featurize_token(token, bucket=None):
    """
    Sparse features of one token.

    Args:
        token (str): Token text
        bucket (PositionBucket, optional): Where the token sits in its sentence;
            omitted for sequence encodings, which are order-free

    Returns:
        frozenset: feature strings
    """
    if not token:
        return frozenset()

    lower = token.lower()
    padded = f"<{lower}>"
    features = {f"lower={lower}", f"shape={_shape(token)}"}
    features.update(f"tri={padded[i:i + 3]}" for i in range(len(padded) - 2))
    for n in range(1, min(3, len(lower)) + 1):
        features.add(f"pre{n}={lower[:n]}")
        features.add(f"suf{n}={lower[-n:]}")
    if bucket is not None:
        features.add(f"pos={bucket.value}")
    return frozenset(features)


def feature_indices(features, dim):
    """Sorted distinct bucket indices of a feature set."""
    return sorted({hash_feature(feature, dim) for feature in features})


def indicator_vector(features, dim):
    vector = np.zeros(dim, dtype=np.float64)
    vector[feature_indices(features, dim)] = 1.0
    return vector


def encode_sequence(text, dim=config.DEFAULT_DIM):
    """
    Encode a text as the L2-normalised mean of its tokens' indicator vectors.

    Args:
        text (str): Text to encode
        dim (int): Vector dimension

    Returns:
        SeqVector: role SEQUENCE; the zero vector for text without tokens
    """
    tokens = tokenize(text)
    if not tokens:
        return SeqVector(np.zeros(dim, dtype=np.float64), VectorRole.SEQUENCE)

    matrix = np.stack([indicator_vector(featurize_token(token.text), dim) for token in tokens])
    mean = matrix.mean(axis=0)
    return SeqVector(mean / np.linalg.norm(mean), VectorRole.SEQUENCE)


def combine(s, c, strategy, hidden_weight=None, hidden_bias=None):
    """
    Combine sequence and context vectors into the contextual representation V.

    Args:
        s (SeqVector): Sequence vector S
        c (SeqVector): Context vector C
        strategy (CombinationStrategy): How to combine
        hidden_weight (np.ndarray, optional): (dc, d) reduction weights, CONCAT_EMBED_HIDDEN only
        hidden_bias (np.ndarray, optional): (dc,) reduction bias, CONCAT_EMBED_HIDDEN only

    Returns:
        SeqVector: role COMBINED
    """
    kind = strategy.kind
    if kind is CombinationKind.CONCAT_TEXT:
        raise ValueError("CONCAT_TEXT encodes the joined text instead of combining vectors")
    if s.dim != c.dim:
        raise DimensionMismatchError(f"S has dimension {s.dim} but C has {c.dim}")

    if kind is CombinationKind.NONE:
        values = s.values.copy()
    elif kind is CombinationKind.CONCAT_EMBED:
        values = np.concatenate([s.values, c.values])
    elif kind is CombinationKind.CONCAT_EMBED_HIDDEN:
        if hidden_weight is None or hidden_bias is None:
            raise ValueError("CONCAT_EMBED_HIDDEN needs the hidden layer parameters")
        if hidden_weight.shape != (strategy.reduced_dim(s.dim), c.dim):
            raise DimensionMismatchError(f"hidden weights of shape {hidden_weight.shape} do not fit C of dimension {c.dim}")
        values = np.concatenate([s.values, np.tanh(hidden_weight @ c.values + hidden_bias)])
    elif kind is CombinationKind.ADD:
        values = s.values + c.values
    else:
        alpha = strategy.alpha
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        if alpha == 1.0:
            values = s.values.copy()
        elif alpha == 0.0:
            values = c.values.copy()
        else:
            values = alpha * s.values + (1.0 - alpha) * c.values
    return SeqVector(values, VectorRole.COMBINED)


def fragment_key(article_id, span):
    return f"{article_id}:{span.begin}:{span.end}"


def title_key(article_id):
    return f"{article_id}:TITLE"


def sentence_context_key(article_id, span):
    return f"{fragment_key(article_id, span)}:CONTEXT"


def load_external_vectors(path, dim):
    """
    Read precomputed vectors: one row per key, then dim floats, tab-separated.

    Args:
        path (str): TSV file
        dim (int): Expected dimension

    Returns:
        dict: key -> np.ndarray
    """
    vectors = {}
    for line_no, line in enumerate(read_text(path).splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != dim + 1:
            raise DimensionMismatchError(f"expected key plus {dim} values, got {len(fields) - 1} values",
                                         path=path, line=line_no)
        try:
            values = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError:
            raise DataError("vector values must be numbers", path=path, line=line_no) from None
        if not np.all(np.isfinite(values)):
            raise DataError("vector values must be finite", path=path, line=line_no)
        vectors[fields[0]] = values
    return vectors


class HashingEncoder:
    """Encodes tokens and texts with hashed features, with optional external overrides"""

    def __init__(self, dim=config.DEFAULT_DIM, vectors_path=None):
        """
        Initialize the encoder.

        Args:
            dim (int): Vector dimension d
            vectors_path (str, optional): TSV of precomputed vectors that replace
                the hashed encoding for matching keys
        """
        if dim <= 0:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self.vectors_path = vectors_path
        self.vectors = None

    def load_vectors(self):
        """Load the external vector file into memory, once."""
        if self.vectors is None:
            if self.vectors_path is None:
                self.vectors = {}
            else:
                self.vectors = load_external_vectors(self.vectors_path, self.dim)
                logger.info("Loaded %d external vectors from %s", len(self.vectors), self.vectors_path)
        return self.vectors

    def token_features(self, tokens):
        """
        Hashed feature indices of each token of one sentence.

        Args:
            tokens (list): Tokens of a sentence

        Returns:
            list: sorted index lists, one per token
        """
        n = len(tokens)
        return [feature_indices(featurize_token(token.text, position_bucket(i, n)), self.dim)
                for i, token in enumerate(tokens)]

    def token_matrix(self, tokens):
        """Dense (tokens x d) indicator matrix of one sentence."""
        return densify(self.token_features(tokens), self.dim)

    def encode_sequence(self, text, key=None, role=VectorRole.SEQUENCE):
        override = self.load_vectors().get(key) if key is not None else None
        if override is not None:
            return SeqVector(override.copy(), role)
        vector = encode_sequence(text, self.dim)
        return SeqVector(vector.values, role)

    def encode_pair(self, pair):
        """
        Sequence and context vectors of a context pair.

        Args:
            pair (ContextPair): Fragment with its context

        Returns:
            tuple: (S, C) SeqVectors
        """
        s_key = fragment_key(pair.article_id, pair.span) if pair.span is not None else None
        s = self.encode_sequence(pair.fragment_text, key=s_key)

        kind = pair.context_kind.value
        if kind == "TITLE":
            c_key = title_key(pair.article_id)
        elif kind == "SENTENCE" and pair.span is not None:
            c_key = sentence_context_key(pair.article_id, pair.span)
        else:
            c_key = None
        c = self.encode_sequence(pair.context_text, key=c_key, role=VectorRole.CONTEXT)
        return s, c

    def represent(self, pair, strategy, hidden_weight=None, hidden_bias=None):
        """
        The contextual representation V of a pair under a strategy.

        CONCAT_TEXT encodes context and fragment as one text, so S and C are
        never formed; every other strategy goes through combine.
        """
        if strategy.kind is CombinationKind.CONCAT_TEXT:
            joined = f"{pair.context_text} {pair.fragment_text}".strip()
            return SeqVector(encode_sequence(joined, self.dim).values, VectorRole.COMBINED)
        s, c = self.encode_pair(pair)
        return combine(s, c, strategy, hidden_weight, hidden_bias)


def densify(index_lists, dim):
    """Stack index lists into a dense 0/1 matrix."""
    matrix = np.zeros((len(index_lists), dim), dtype=np.float64)
    for row, indices in enumerate(index_lists):
        matrix[row, indices] = 1.0
    return matrix
