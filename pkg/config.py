"""
Configuration file for SpanTag
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

# Base directories
ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(ROOT_DIR, "data")
MODEL_DIR = os.path.join(ROOT_DIR, "models")

# Data directories
ARTICLES_DIR = os.path.join(DATA_DIR, "articles")
LABELS_DIR = os.path.join(DATA_DIR, "labels")
OUTPUT_DIR = os.path.join(DATA_DIR, "outputs")

# Span identification
DEFAULT_SCHEME = "BIOE"  # Options: PNP, BIO, BIOE, BIOES

# Technique classification
DEFAULT_STRATEGY = "NONE"  # Options: NONE, CONCAT_TEXT, CONCAT_EMBED, CONCAT_EMBED_HIDDEN, ADD, WEIGHTED_AVG
DEFAULT_ALPHA = 0.5
DEFAULT_CONTEXT_KIND = "SENTENCE"  # Options: SENTENCE, TITLE, NONE
DEFAULT_CONTEXT_CAP = 130  # words
CAP_INCLUDES_FRAGMENT = True

# Encoder
DEFAULT_DIM = 256

# Trainer (plain mini-batch gradient descent)
DEFAULT_LEARNING_RATE = 0.1
DEFAULT_EPOCHS = 20
DEFAULT_BATCH_SIZE = 8
DEFAULT_SEED = 13
DEFAULT_SPLIT = 0.9
SEED_ENV_VAR = "SPANTAG_SEED"

# Analytics
DEFAULT_LENGTH_UNIT = "CHARS"  # Options: CHARS, WORDS
DEFAULT_CHAR_BIN_WIDTH = 10
DEFAULT_WORD_BIN_WIDTH = 2

# Runtime
LOG_LEVEL = "INFO"
SHOW_PROGRESS = True
MODEL_FORMAT_VERSION = 1

# Create directories if they don't exist
os.makedirs(DATA_DIR, exist_ok=True)
os.makedirs(MODEL_DIR, exist_ok=True)


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob a pipeline run depends on, after file and flag overrides."""

    scheme: str = DEFAULT_SCHEME
    strategy: str = DEFAULT_STRATEGY
    alpha: float | None = None
    hidden_dim: int | None = None
    context_kind: str = DEFAULT_CONTEXT_KIND
    context_cap: int = DEFAULT_CONTEXT_CAP
    cap_includes_fragment: bool = CAP_INCLUDES_FRAGMENT
    dim: int = DEFAULT_DIM
    learning_rate: float = DEFAULT_LEARNING_RATE
    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = DEFAULT_SEED
    split: float = DEFAULT_SPLIT
    class_weighting: bool = False
    length_feature: bool = False
    length_unit: str = DEFAULT_LENGTH_UNIT
    grouping: str = "TECHNIQUE"
    bin_width: int | None = None

    def __post_init__(self):
        if not 0.0 < self.split <= 1.0:
            raise ValueError(f"split must lie in (0, 1], got {self.split}")
        if self.context_cap < 1:
            raise ValueError(f"context_cap must be positive, got {self.context_cap}")
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")

    def updated(self, values):
        """
        Return a copy with the given fields replaced, ignoring None values.

        Args:
            values (dict): field name -> new value (strings are coerced)

        Returns:
            PipelineConfig: the updated configuration
        """
        known = {f.name: f for f in fields(self)}
        changes = {}
        for key, value in values.items():
            if value is None:
                continue
            if key not in known:
                raise KeyError(key)
            changes[key] = _coerce(value, getattr(self, key), key)
        return replace(self, **changes)


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}

_OPTIONAL_FLOATS = {"alpha"}
_OPTIONAL_INTS = {"hidden_dim", "bin_width"}


def _coerce(value, current, key):
    if not isinstance(value, str):
        return value
    text = value.strip()
    if key in _OPTIONAL_FLOATS:
        return float(text)
    if key in _OPTIONAL_INTS:
        return int(text)
    if isinstance(current, bool):
        try:
            return _BOOL_WORDS[text.lower()]
        except KeyError:
            raise ValueError(f"{key}: expected a boolean, got {value!r}") from None
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    return text


def load_config_file(path):
    """
    Read a flat key=value config file.

    Args:
        path (str): Path to the config file

    Returns:
        dict: key -> raw string value
    """
    values = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values
