import numpy as np
import pytest

from src.context import ContextKind, ContextPair
from src.corpus import CharSpan
from src.encoder import (
    FNV_OFFSET_BASIS,
    CombinationKind,
    CombinationStrategy,
    HashingEncoder,
    PositionBucket,
    SeqVector,
    VectorRole,
    combine,
    encode_sequence,
    featurize_token,
    fragment_key,
    hash_feature,
    indicator_vector,
    position_bucket,
    sentence_context_key,
    title_key,
)
from src.errors import DimensionMismatchError
from src.tokenizer import tokenize

HUGE = 1 << 64


def vec(*values, role=VectorRole.SEQUENCE):
    return SeqVector(np.array(values, dtype=np.float64), role)


def strategy(kind, **kwargs):
    return CombinationStrategy(CombinationKind[kind], **kwargs)


def test_fnv1a_reference_values():
    assert hash_feature("", HUGE) == FNV_OFFSET_BASIS == 0xCBF29CE484222325
    assert hash_feature("a", HUGE) == 0xAF63DC4C8601EC8C
    assert hash_feature("a", 256) == 0xAF63DC4C8601EC8C % 256
    assert hash_feature("héllo", 97) == hash_feature("héllo", 97)


def test_hash_feature_rejects_bad_dim():
    with pytest.raises(ValueError):
        hash_feature("a", 0)


def test_featurize_token():
    features = featurize_token("Hello", PositionBucket.BEGIN)
    assert {"lower=hello", "shape=Cap", "pos=begin"} <= features
    assert {"tri=<he", "tri=lo>", "pre3=hel", "suf1=o"} <= features
    assert featurize_token("") == frozenset()
    assert featurize_token("Hello", PositionBucket.BEGIN) == features
    assert "shape=Caps" in featurize_token("NATO")
    assert "shape=Digit" in featurize_token("2019")
    assert "shape=Punct" in featurize_token("!")


def test_position_bucket():
    assert position_bucket(0, 5) is PositionBucket.BEGIN
    assert position_bucket(2, 5) is PositionBucket.MIDDLE
    assert position_bucket(4, 5) is PositionBucket.END


def test_encode_sequence_norms():
    empty = encode_sequence("", 64)
    assert empty.values.shape == (64,)
    assert not empty.values.any()

    vector = encode_sequence("Some words here", 64)
    assert np.linalg.norm(vector.values) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.isfinite(vector.values))


def test_encode_single_token_is_normalised_indicator():
    indicator = indicator_vector(featurize_token("dictator"), 128)
    np.testing.assert_allclose(encode_sequence("dictator", 128).values,
                               indicator / np.linalg.norm(indicator), rtol=0, atol=1e-15)


def test_encode_sequence_is_order_invariant():
    np.testing.assert_array_equal(encode_sequence("a b", 32).values, encode_sequence("b a", 32).values)


def test_combine_arithmetic():
    s, c = vec(1, 2), vec(3, 4, role=VectorRole.CONTEXT)
    np.testing.assert_array_equal(combine(s, c, strategy("WEIGHTED_AVG", alpha=0.5)).values, [2, 3])
    np.testing.assert_array_equal(combine(s, c, strategy("ADD")).values, [4, 6])
    np.testing.assert_array_equal(combine(s, c, strategy("NONE")).values, [1, 2])
    np.testing.assert_array_equal(combine(s, c, strategy("CONCAT_EMBED")).values, [1, 2, 3, 4])
    assert combine(s, c, strategy("ADD")).role is VectorRole.COMBINED


def test_weighted_average_extremes_are_exact():
    rng = np.random.default_rng(0)
    for _ in range(50):
        s = SeqVector(rng.normal(size=16), VectorRole.SEQUENCE)
        c = SeqVector(rng.normal(size=16), VectorRole.CONTEXT)
        assert np.array_equal(combine(s, c, strategy("WEIGHTED_AVG", alpha=1.0)).values, s.values)
        assert np.array_equal(combine(s, c, strategy("WEIGHTED_AVG", alpha=0.0)).values, c.values)


def test_concat_embed_hidden():
    s, c = vec(1.0, 0.0, 0.0, 0.0), vec(0.0, 1.0, 0.0, 0.0, role=VectorRole.CONTEXT)
    hidden = strategy("CONCAT_EMBED_HIDDEN", hidden_dim=2)
    weight = np.array([[0.0, 2.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]])
    bias = np.array([0.0, 0.5])
    v = combine(s, c, hidden, weight, bias)
    assert v.dim == 4 + 2
    np.testing.assert_allclose(v.values, [1, 0, 0, 0, np.tanh(2.0), np.tanh(0.5)])
    with pytest.raises(ValueError):
        combine(s, c, hidden)


def test_combine_errors():
    with pytest.raises(DimensionMismatchError):
        combine(vec(1, 2), vec(1, 2, 3), strategy("ADD"))
    with pytest.raises(ValueError):
        combine(vec(1), vec(1), strategy("CONCAT_TEXT"))


def test_strategy_validation():
    with pytest.raises(ValueError):
        strategy("WEIGHTED_AVG", alpha=1.5)
    with pytest.raises(ValueError):
        strategy("WEIGHTED_AVG")
    with pytest.raises(ValueError):
        strategy("ADD", alpha=0.3)
    with pytest.raises(ValueError):
        strategy("CONCAT_EMBED_HIDDEN", hidden_dim=8).reduced_dim(8)
    assert CombinationStrategy.from_names("weighted_avg").alpha == 0.5
    assert strategy("CONCAT_EMBED_HIDDEN").output_dim(256) == 256 + 64
    assert strategy("CONCAT_EMBED").output_dim(256) == 512


def test_vector_keys():
    span = CharSpan(3, 9)
    assert fragment_key("12", span) == "12:3:9"
    assert title_key("12") == "12:TITLE"
    assert sentence_context_key("12", span) == "12:3:9:CONTEXT"


def test_external_vectors_override(tmp_path):
    path = tmp_path / "vectors.tsv"
    path.write_text("12:3:9\t1\t0\t0\t0\n12:TITLE\t0\t0\t0\t2\n", encoding="utf-8")
    encoder = HashingEncoder(4, str(path))
    pair = ContextPair("12", CharSpan(3, 9), "fragment", "The title", ContextKind.TITLE)
    s, c = encoder.encode_pair(pair)
    np.testing.assert_array_equal(s.values, [1, 0, 0, 0])
    np.testing.assert_array_equal(c.values, [0, 0, 0, 2])
    assert c.role is VectorRole.CONTEXT

    other = ContextPair("13", CharSpan(3, 9), "fragment", "The title", ContextKind.TITLE)
    s_other, _ = encoder.encode_pair(other)
    np.testing.assert_array_equal(s_other.values, encode_sequence("fragment", 4).values)


def test_external_vectors_dimension_checked(tmp_path):
    path = tmp_path / "vectors.tsv"
    path.write_text("1:0:3\t1\t2\n", encoding="utf-8")
    with pytest.raises(DimensionMismatchError) as info:
        HashingEncoder(4, str(path)).load_vectors()
    assert info.value.line == 1


def test_concat_text_encodes_joined_text():
    encoder = HashingEncoder(32)
    pair = ContextPair("1", CharSpan(0, 4), "evil", "they are evil people", ContextKind.SENTENCE)
    v = encoder.represent(pair, strategy("CONCAT_TEXT"))
    np.testing.assert_array_equal(v.values, encode_sequence("they are evil people evil", 32).values)


def test_token_matrix_is_deterministic():
    tokens = tokenize("The dictator will destroy us all")
    first = HashingEncoder(64).token_matrix(tokens)
    second = HashingEncoder(64).token_matrix(tokens)
    assert first.shape == (6, 64)
    assert np.array_equal(first, second)
