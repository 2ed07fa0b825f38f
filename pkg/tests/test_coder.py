import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggsym import CodingModel, FormatError, StructuralError, TokenStream, decode, encode
from aggsym.coder import encode_bits


def model_for(tokens, size=None):
    tokens = np.asarray(tokens, dtype=np.int64)
    return CodingModel(np.bincount(tokens, minlength=size or (tokens.max() + 1 if tokens.size else 1)))


def round_trip(tokens):
    model = model_for(tokens)
    data, nbits = encode_bits(tokens, model)
    out = decode(data, model, len(tokens))
    assert out.tokens.tolist() == list(tokens)
    return data, nbits, model


def test_constant_stream_is_tiny():
    data, nbits, model = round_trip([3] * 1000)
    assert nbits <= 64
    assert model.shannon_bits() == 0.0


def test_hand_coded_two_symbols():
    # a: [0, 1/2), b: [1/2, 1): "0", "1", then the two flush bits "01"
    data, nbits = encode_bits([0, 1], CodingModel([1, 1]))
    assert nbits == 4
    assert data == b"\x50"


def test_empty_stream():
    model = CodingModel([0, 0])
    assert encode([], model) == b""
    assert len(decode(b"", model, 0)) == 0
    with pytest.raises(FormatError):
        decode(b"\x00", model, 0)


def test_symbol_outside_model():
    with pytest.raises(StructuralError):
        encode([0, 2], CodingModel([1, 1, 0]))


def test_truncated_and_padded_payloads_are_rejected():
    rng = np.random.default_rng(1)
    tokens = rng.integers(0, 9, size=2000)
    data, _, model = round_trip(tokens)
    with pytest.raises(FormatError):
        decode(data[:-1], model, len(tokens))
    with pytest.raises(FormatError):
        decode(data + b"\x00", model, len(tokens))
    with pytest.raises(FormatError):
        decode(data, model, len(tokens) - 1)


@given(st.binary(min_size=1, max_size=64))
def test_garbage_payload_never_crashes(junk):
    model = CodingModel([5, 1, 3])
    try:
        out = decode(junk, model, 9)
    except FormatError:
        return
    assert np.bincount(out.tokens, minlength=3).tolist() == [5, 1, 3]


@given(st.lists(st.integers(0, 20), min_size=1, max_size=2000))
def test_round_trip_and_efficiency(tokens):
    data, nbits, model = round_trip(tokens)
    h = model.shannon_bits()
    assert 0 <= 8 * len(data) - h <= 64
    assert -1e-9 <= nbits - h <= 64


@given(st.lists(st.integers(0, 3), min_size=1, max_size=500), st.integers(1, 1000))
def test_skewed_models(tokens, weight):
    tokens = tokens + [4] * weight
    round_trip(tokens)


def test_token_stream_input():
    tokens = [0, 1, 1, 2]
    model = model_for(tokens)
    assert encode(TokenStream(np.array(tokens), 4), model) == encode(tokens, model)
