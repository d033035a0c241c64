"""
Baseline models for SpanTag
A per-token tag classifier for span identification and a softmax technique
classifier for technique classification, both trained with seeded
mini-batch gradient descent
"""

from __future__ import annotations

import logging
import math
import os
import sys
from collections import Counter
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F
from tqdm import tqdm

# Add the project root to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import config
from src.corpus import LabelInventory
from src.encoder import CombinationKind, CombinationStrategy, HashingEncoder, densify
from src.errors import DataError, DimensionMismatchError, ModelFormatError, TagSchemeError
from src.tagcodec import TaggingScheme, TagSequence, decode
from src.tokenizer import split_sentences
from utils.file_utils import read_text, write_atomic

logger = logging.getLogger(__name__)

MODEL_MAGIC = "spantag-model"
DTYPE = torch.float64


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = config.DEFAULT_LEARNING_RATE
    epochs: int = config.DEFAULT_EPOCHS
    batch_size: int = config.DEFAULT_BATCH_SIZE
    seed: int = config.DEFAULT_SEED
    dim: int = config.DEFAULT_DIM
    class_weighting: bool = False
    show_progress: bool = config.SHOW_PROGRESS

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be at least 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch size must be at least 1, got {self.batch_size}")
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")


def tagger_loss(weight, bias, inputs, targets, class_weights=None):
    """
    Mean cross-entropy of per-token logits ``inputs @ weight.T + bias``.

    Args:
        weight (torch.Tensor): (labels, d)
        bias (torch.Tensor): (labels,)
        inputs (torch.Tensor): (tokens, d) feature rows
        targets (torch.Tensor): (tokens,) label ids
        class_weights (torch.Tensor, optional): per-label loss weights

    Returns:
        torch.Tensor: scalar loss
    """
    return F.cross_entropy(F.linear(inputs, weight, bias), targets, weight=class_weights)


def classifier_features(inputs, context=None, hidden_weight=None, hidden_bias=None, lengths=None):
    """
    The classifier's input rows: V, with the reduced context appended when a
    hidden layer is present and the length feature appended last.
    """
    parts = [inputs]
    if hidden_weight is not None:
        parts.append(torch.tanh(F.linear(context, hidden_weight, hidden_bias)))
    if lengths is not None:
        parts.append(lengths.unsqueeze(1))
    if len(parts) == 1:
        return inputs
    return torch.cat(parts, dim=1)


def classifier_loss(weight, bias, inputs, targets, class_weights=None,
                    context=None, hidden_weight=None, hidden_bias=None, lengths=None):
    """Mean cross-entropy of the technique classifier."""
    features = classifier_features(inputs, context, hidden_weight, hidden_bias, lengths)
    return F.cross_entropy(F.linear(features, weight, bias), targets, weight=class_weights)


def _inverse_frequency(label_ids, n_labels):
    counts = Counter(label_ids)
    total = len(label_ids)
    weights = [total / (n_labels * counts[i]) if counts[i] else 0.0 for i in range(n_labels)]
    return torch.tensor(weights, dtype=DTYPE)


class TaggerModel(nn.Module):
    """Multinomial logistic regression over hashed token features"""

    def __init__(self, scheme, train_config):
        super().__init__()
        self.scheme = scheme
        self.config = train_config
        self.linear = nn.Linear(train_config.dim, len(scheme.labels), dtype=DTYPE)
        nn.init.zeros_(self.linear.weight)
        nn.init.zeros_(self.linear.bias)
        self.loss_history = []

    @property
    def labels(self):
        return self.scheme.labels

    def forward(self, inputs):
        return self.linear(inputs)


class ClassifierModel(nn.Module):
    """Softmax regression over the contextual representation V"""

    def __init__(self, inventory, strategy, train_config, length_feature=False, length_scale=1.0,
                 generator=None):
        super().__init__()
        self.inventory = inventory
        self.strategy = strategy
        self.config = train_config
        self.length_feature = length_feature
        self.length_scale = float(length_scale)
        self.loss_history = []

        dim = train_config.dim
        self.hidden = None
        if strategy.kind is CombinationKind.CONCAT_EMBED_HIDDEN:
            reduced = strategy.reduced_dim(dim)
            self.hidden = nn.Linear(dim, reduced, dtype=DTYPE)
            # zero hidden weights would never receive a gradient
            bound = 1.0 / math.sqrt(dim)
            with torch.no_grad():
                self.hidden.weight.uniform_(-bound, bound, generator=generator)
                self.hidden.bias.zero_()

        in_dim = strategy.output_dim(dim) + (1 if length_feature else 0)
        self.classifier = nn.Linear(in_dim, len(inventory), dtype=DTYPE)
        nn.init.zeros_(self.classifier.weight)
        nn.init.zeros_(self.classifier.bias)

    def hidden_parameters(self):
        if self.hidden is None:
            return None, None
        return self.hidden.weight, self.hidden.bias

    def forward(self, inputs, context=None, lengths=None):
        hidden_weight, hidden_bias = self.hidden_parameters()
        features = classifier_features(inputs, context, hidden_weight, hidden_bias, lengths)
        return self.classifier(features)


def _fit(model, n_items, batch_loss, train_config, generator, desc):
    optimizer = torch.optim.SGD(model.parameters(), lr=train_config.learning_rate)
    history = []
    epochs = tqdm(range(train_config.epochs), desc=desc, disable=not train_config.show_progress)
    for epoch in epochs:
        order = torch.randperm(n_items, generator=generator).tolist()
        total, count = 0.0, 0
        for start in range(0, n_items, train_config.batch_size):
            loss, weight = batch_loss(order[start:start + train_config.batch_size])
            if weight == 0:
                continue
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += loss.item() * weight
            count += weight

        epoch_loss = total / count if count else 0.0
        if not math.isfinite(epoch_loss):
            raise DataError(f"training diverged at epoch {epoch + 1}; lower the learning rate")
        history.append(epoch_loss)
        logger.debug("%s epoch %d/%d loss %.6f", desc, epoch + 1, train_config.epochs, epoch_loss)

    if history:
        logger.info("%s finished %d epochs, final loss %.6f", desc, len(history), history[-1])
    return history


def train_si(examples, scheme, train_config=None, encoder=None):
    """
    Train the token tagger.

    Args:
        examples (list): (Sentence, TagSequence) pairs
        scheme (TaggingScheme): Scheme the tags use
        train_config (TrainConfig, optional): Trainer settings
        encoder (HashingEncoder, optional): Token featurizer; built from train_config.dim if omitted

    Returns:
        TaggerModel: trained parameters with the per-epoch loss trace
    """
    train_config = train_config or TrainConfig()
    encoder = encoder or HashingEncoder(train_config.dim)
    if encoder.dim != train_config.dim:
        raise DimensionMismatchError(f"encoder dimension {encoder.dim} != configured {train_config.dim}")
    if not examples:
        raise DataError("cannot train a tagger on an empty corpus")

    label_index = {label: i for i, label in enumerate(scheme.labels)}
    features, targets = [], []
    for sentence, tags in examples:
        if tags.scheme is not scheme:
            raise TagSchemeError(f"tags use {tags.scheme.value} but the model is {scheme.value}")
        if len(tags) != len(sentence.tokens):
            raise TagSchemeError(f"{len(tags)} tags for {len(sentence.tokens)} tokens in article {sentence.article_id}")
        if not sentence.tokens:
            continue
        features.append(encoder.token_features(sentence.tokens))
        targets.append([label_index[label] for label in tags.labels])

    if not features:
        raise DataError("cannot train a tagger on sentences without tokens")

    class_weights = None
    if train_config.class_weighting:
        class_weights = _inverse_frequency([t for row in targets for t in row], len(scheme.labels))

    generator = torch.Generator().manual_seed(train_config.seed)
    model = TaggerModel(scheme, train_config)

    def batch_loss(batch):
        rows = [row for i in batch for row in features[i]]
        inputs = torch.from_numpy(densify(rows, train_config.dim))
        labels = torch.tensor([t for i in batch for t in targets[i]], dtype=torch.long)
        loss = tagger_loss(model.linear.weight, model.linear.bias, inputs, labels, class_weights)
        return loss, len(rows)

    model.loss_history = _fit(model, len(features), batch_loss, train_config, generator, f"train-si {scheme.value}")
    return model


def _check_encoder(model, encoder):
    encoder = encoder or HashingEncoder(model.config.dim)
    if encoder.dim != model.config.dim:
        raise DimensionMismatchError(f"encoder dimension {encoder.dim} does not match model dimension {model.config.dim}")
    return encoder


def predict_si(model, article, encoder=None):
    """
    Predict the propaganda spans of an article.

    Ties between label scores go to O, then to the lexicographically
    first label, because argmax keeps the first of the scheme's labels.

    Args:
        model (TaggerModel): Trained tagger
        article (Article): Article to tag
        encoder (HashingEncoder, optional): Featurizer matching the model's dimension

    Returns:
        list: CharSpans, sorted and disjoint
    """
    encoder = _check_encoder(model, encoder)
    labels = model.labels
    spans = []
    for sentence in split_sentences(article):
        inputs = torch.from_numpy(encoder.token_matrix(sentence.tokens))
        with torch.no_grad():
            scores = model(inputs).numpy()
        best = np.argmax(scores, axis=1)
        tags = TagSequence(model.scheme, tuple(labels[i] for i in best))
        spans.extend(decode(tags, sentence.tokens))
    return sorted(spans)


def _pair_tensors(pairs, strategy, encoder, hidden, length_scale=None):
    if hidden:
        encoded = [encoder.encode_pair(pair) for pair in pairs]
        inputs = np.stack([s.values for s, _ in encoded])
        context = torch.from_numpy(np.stack([c.values for _, c in encoded]))
    else:
        inputs = np.stack([encoder.represent(pair, strategy).values for pair in pairs])
        context = None

    lengths = None
    if length_scale is not None:
        lengths = torch.tensor([len(pair.fragment_text) / length_scale for pair in pairs], dtype=DTYPE)
    return torch.from_numpy(inputs), context, lengths


def train_tc(pairs, strategy, train_config=None, inventory=None, encoder=None, length_feature=False):
    """
    Train the technique classifier.

    Args:
        pairs (list): ContextPairs with techniques
        strategy (CombinationStrategy): How V is built from S and C
        train_config (TrainConfig, optional): Trainer settings
        inventory (LabelInventory, optional): Class list; built from the pairs if omitted
        encoder (HashingEncoder, optional): Text encoder matching train_config.dim
        length_feature (bool): Append the normalised fragment length to V

    Returns:
        ClassifierModel: trained parameters with the per-epoch loss trace
    """
    train_config = train_config or TrainConfig()
    encoder = encoder or HashingEncoder(train_config.dim)
    if encoder.dim != train_config.dim:
        raise DimensionMismatchError(f"encoder dimension {encoder.dim} != configured {train_config.dim}")
    if not pairs:
        raise DataError("cannot train a classifier on no pairs")
    for pair in pairs:
        if pair.technique is None:
            raise DataError(f"pair in article {pair.article_id} has no technique")

    if inventory is None:
        inventory = LabelInventory(tuple(sorted({pair.technique for pair in pairs})))
    targets = [inventory.index_of(pair.technique) for pair in pairs]

    length_scale = None
    if length_feature:
        length_scale = float(max(1, max(len(pair.fragment_text) for pair in pairs)))

    generator = torch.Generator().manual_seed(train_config.seed)
    model = ClassifierModel(inventory, strategy, train_config, length_feature,
                            length_scale or 1.0, generator=generator)
    inputs, context, lengths = _pair_tensors(pairs, strategy, encoder, model.hidden is not None, length_scale)
    labels = torch.tensor(targets, dtype=torch.long)

    class_weights = None
    if train_config.class_weighting:
        class_weights = _inverse_frequency(targets, len(inventory))

    def batch_loss(batch):
        index = torch.tensor(batch, dtype=torch.long)
        hidden_weight, hidden_bias = model.hidden_parameters()
        loss = classifier_loss(
            model.classifier.weight, model.classifier.bias, inputs[index], labels[index], class_weights,
            context=context[index] if context is not None else None,
            hidden_weight=hidden_weight, hidden_bias=hidden_bias,
            lengths=lengths[index] if lengths is not None else None)
        return loss, len(batch)

    model.loss_history = _fit(model, len(pairs), batch_loss, train_config, generator,
                              f"train-tc {strategy.describe()}")
    return model


def predict_tc_batch(model, pairs, encoder=None):
    """
    Class probabilities for many pairs at once.

    Returns:
        np.ndarray: (pairs, classes) rows summing to 1
    """
    encoder = _check_encoder(model, encoder)
    if not pairs:
        return np.zeros((0, len(model.inventory)))
    length_scale = model.length_scale if model.length_feature else None
    inputs, context, lengths = _pair_tensors(pairs, model.strategy, encoder, model.hidden is not None, length_scale)
    with torch.no_grad():
        return torch.softmax(model(inputs, context, lengths), dim=1).numpy()


def predict_tc(model, pair, encoder=None):
    """
    Classify one fragment.

    Args:
        model (ClassifierModel): Trained classifier
        pair (ContextPair): Fragment and context
        encoder (HashingEncoder, optional): Text encoder matching the model

    Returns:
        tuple: (technique, probability vector); ties go to the lowest class index
    """
    probabilities = predict_tc_batch(model, [pair], encoder)[0]
    return model.inventory.names[int(np.argmax(probabilities))], probabilities


def _format_row(values):
    return " ".join(format(float(v), ".17g") for v in values)


def _section(name, matrix):
    matrix = np.atleast_2d(matrix)
    lines = [f"@{name} {matrix.shape[0]} {matrix.shape[1]}"]
    lines.extend(_format_row(row) for row in matrix)
    return lines


def _config_fields(train_config):
    return (f"dim={train_config.dim} lr={train_config.learning_rate!r} epochs={train_config.epochs} "
            f"batch_size={train_config.batch_size} seed={train_config.seed} "
            f"class_weighting={int(train_config.class_weighting)}")


def save_model(model, path):
    """
    Write a model as text: one header line, then named sections of
    space-separated floats with 17 significant digits.

    Args:
        model (TaggerModel | ClassifierModel): Trained model
        path (str): Destination file
    """
    version = config.MODEL_FORMAT_VERSION
    if isinstance(model, TaggerModel):
        lines = [f"{MODEL_MAGIC} {version} tagger scheme={model.scheme.value} {_config_fields(model.config)}"]
    else:
        strategy = model.strategy
        alpha = "-" if strategy.alpha is None else repr(strategy.alpha)
        hidden_dim = "-" if strategy.hidden_dim is None else str(strategy.hidden_dim)
        lines = [f"{MODEL_MAGIC} {version} classifier strategy={strategy.kind.value} alpha={alpha} "
                 f"hidden_dim={hidden_dim} length_feature={int(model.length_feature)} "
                 f"length_scale={model.length_scale!r} {_config_fields(model.config)}"]
        lines.append(f"@labels {len(model.inventory)}")
        lines.extend(model.inventory.names)

    lines.extend(_section("loss", np.array([model.loss_history], dtype=np.float64)))
    with torch.no_grad():
        if isinstance(model, TaggerModel):
            lines.extend(_section("weight", model.linear.weight.numpy()))
            lines.extend(_section("bias", model.linear.bias.numpy()))
        else:
            if model.hidden is not None:
                lines.extend(_section("hidden_weight", model.hidden.weight.numpy()))
                lines.extend(_section("hidden_bias", model.hidden.bias.numpy()))
            lines.extend(_section("weight", model.classifier.weight.numpy()))
            lines.extend(_section("bias", model.classifier.bias.numpy()))

    write_atomic(path, "\n".join(lines) + "\n")
    logger.info("Saved model to %s", path)


def _read_sections(lines, path):
    sections = {}
    labels = []
    i = 1
    while i < len(lines):
        head = lines[i].split()
        if not head or not head[0].startswith("@"):
            raise ModelFormatError(f"expected a section header, got {lines[i]!r}", path=path, line=i + 1)
        name = head[0][1:]
        try:
            sizes = [int(x) for x in head[1:]]
        except ValueError:
            raise ModelFormatError(f"bad size in section header {lines[i]!r}", path=path, line=i + 1) from None
        if name == "labels":
            if len(sizes) != 1 or i + 1 + sizes[0] > len(lines):
                raise ModelFormatError("bad labels section", path=path, line=i + 1)
            labels = lines[i + 1:i + 1 + sizes[0]]
            i += 1 + sizes[0]
            continue
        if len(sizes) != 2:
            raise ModelFormatError(f"section {name} needs rows and columns", path=path, line=i + 1)
        rows, cols = sizes
        try:
            matrix = np.array([[float(x) for x in lines[i + 1 + r].split()] for r in range(rows)], dtype=np.float64)
        except (ValueError, IndexError):
            raise ModelFormatError(f"bad rows in section {name}", path=path, line=i + 1) from None
        if matrix.shape != (rows, cols):
            raise ModelFormatError(f"section {name} is not {rows}x{cols}", path=path, line=i + 1)
        sections[name] = matrix
        i += 1 + rows
    return sections, labels


def _required(sections, name, path):
    if name not in sections:
        raise ModelFormatError(f"missing section @{name}", path=path)
    return sections[name]


def _header_fields(tokens, path):
    fields = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ModelFormatError(f"bad header field {token!r}", path=path, line=1)
        fields[key] = value
    return fields


def _assign(parameter, matrix, name, path):
    if matrix.size != parameter.numel():
        raise ModelFormatError(f"section {name} has shape {tuple(matrix.shape)}, expected {tuple(parameter.shape)}", path=path)
    value = torch.from_numpy(matrix.reshape(tuple(parameter.shape)))
    with torch.no_grad():
        parameter.copy_(value)


def _build_model(kind, fields, labels, path):
    try:
        train_config = TrainConfig(learning_rate=float(fields["lr"]), epochs=int(fields["epochs"]),
                                   batch_size=int(fields["batch_size"]), seed=int(fields["seed"]),
                                   dim=int(fields["dim"]), class_weighting=fields["class_weighting"] == "1")
        if kind == "tagger":
            return TaggerModel(TaggingScheme.parse(fields["scheme"]), train_config)
        alpha = None if fields["alpha"] == "-" else float(fields["alpha"])
        hidden_dim = None if fields["hidden_dim"] == "-" else int(fields["hidden_dim"])
        strategy = CombinationStrategy(CombinationKind[fields["strategy"]], alpha, hidden_dim)
        return ClassifierModel(LabelInventory(tuple(labels)), strategy, train_config,
                               fields["length_feature"] == "1", float(fields["length_scale"]))
    except KeyError as e:
        raise ModelFormatError(f"bad header: missing or unknown {e.args[0]!r}", path=path, line=1) from None
    except (ValueError, DataError) as e:
        raise ModelFormatError(f"bad header: {e}", path=path, line=1) from None


def load_model(path):
    """
    Read a model written by save_model.

    Args:
        path (str): Model file

    Returns:
        TaggerModel | ClassifierModel: the model, parameters restored exactly
    """
    if not os.path.isfile(path):
        raise ModelFormatError("model file not found", path=path)
    lines = read_text(path).splitlines()
    head = lines[0].split() if lines else []
    if len(head) < 3 or head[0] != MODEL_MAGIC:
        raise ModelFormatError("not a spantag model file", path=path, line=1)
    if head[1] != str(config.MODEL_FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model format version {head[1]}", path=path, line=1)
    if head[2] not in ("tagger", "classifier"):
        raise ModelFormatError(f"unknown model type {head[2]!r}", path=path, line=1)

    fields = _header_fields(head[3:], path)
    sections, labels = _read_sections(lines, path)
    model = _build_model(head[2], fields, labels, path)

    if isinstance(model, TaggerModel):
        _assign(model.linear.weight, _required(sections, "weight", path), "weight", path)
        _assign(model.linear.bias, _required(sections, "bias", path), "bias", path)
    else:
        if model.hidden is not None:
            _assign(model.hidden.weight, _required(sections, "hidden_weight", path), "hidden_weight", path)
            _assign(model.hidden.bias, _required(sections, "hidden_bias", path), "hidden_bias", path)
        _assign(model.classifier.weight, _required(sections, "weight", path), "weight", path)
        _assign(model.classifier.bias, _required(sections, "bias", path), "bias", path)

    model.loss_history = [float(x) for x in _required(sections, "loss", path)[0]]
    logger.info("Loaded %s model from %s", head[2], path)
    return model
