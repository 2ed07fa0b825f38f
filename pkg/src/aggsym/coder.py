"""Static-model binary arithmetic coder with 64-bit integer registers.

Underflow is handled with pending bits (the bit-serial form of carry
propagation). With a 64-bit range the per-symbol truncation loss is below
``total / 2**62`` bits, so the output stays within a couple of bits of
``N * H`` for any model whose total fits in 32 bits.

The token count travels out of band; there is no end-of-stream symbol. The
decoder re-derives the exact number of bits the encoder emitted and rejects
inputs that are truncated, padded with garbage or otherwise inconsistent.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Sequence

import numpy as np

from .exceptions import FormatError, StructuralError
from .gain import xlog2x
from .symbols import FrequencyTable, TokenStream

PRECISION = 64
_FULL = 1 << PRECISION
_MASK = _FULL - 1
_HALF = _FULL >> 1
_QUARTER = _HALF >> 1
_THREE_QUARTERS = 3 * _QUARTER
MAX_TOTAL = (1 << 32) - 1


class CodingModel:
    """Cumulative frequency intervals over symbol ids."""

    def __init__(self, counts: Sequence[int]):
        counts = np.asarray(counts, dtype=np.int64)
        if (counts < 0).any():
            raise StructuralError("model counts must be non-negative")
        self.counts = counts
        self.cumulative = [0] + np.cumsum(counts).tolist()
        self.total = self.cumulative[-1]
        if self.total > MAX_TOTAL:
            raise StructuralError(f"model total {self.total} exceeds {MAX_TOTAL}")

    @classmethod
    def from_frequencies(cls, freqs: FrequencyTable) -> "CodingModel":
        return cls(freqs.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def interval(self, symbol: int) -> tuple[int, int]:
        if not 0 <= symbol < len(self.counts) or self.counts[symbol] == 0:
            raise StructuralError(f"symbol {symbol} has no probability mass in the model")
        return self.cumulative[symbol], self.cumulative[symbol + 1]

    def shannon_bits(self) -> float:
        """``N * H`` of the model, the optimum any static coder can reach."""
        if self.total == 0:
            return 0.0
        return max(0.0, float(xlog2x(float(self.total)) - xlog2x(self.counts).sum()))


def encode_bits(stream, model: CodingModel) -> tuple[bytes, int]:
    """Encode; returns the zero-padded payload and the exact number of code bits."""
    tokens = stream.tokens if isinstance(stream, TokenStream) else np.asarray(stream)
    tokens = tokens.tolist()
    if not tokens:
        return b"", 0
    if model.total == 0:
        raise StructuralError("cannot encode with an empty model")
    cum = model.cumulative
    counts = model.counts
    total = model.total
    nsym = len(counts)
    bits: list[int] = []
    emit = bits.append
    low, high, pending = 0, _MASK, 0
    for s in tokens:
        if not 0 <= s < nsym or counts[s] == 0:
            raise StructuralError(f"symbol {s} has no probability mass in the model")
        rng = high - low + 1
        high = low + rng * cum[s + 1] // total - 1
        low = low + rng * cum[s] // total
        while True:
            if high < _HALF:
                emit(0)
                if pending:
                    bits.extend([1] * pending)
                    pending = 0
            elif low >= _HALF:
                emit(1)
                if pending:
                    bits.extend([0] * pending)
                    pending = 0
                low -= _HALF
                high -= _HALF
            elif low >= _QUARTER and high < _THREE_QUARTERS:
                pending += 1
                low -= _QUARTER
                high -= _QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
    # two more bits pin a value inside [low, high] whatever zeros follow
    pending += 1
    bit = 0 if low < _QUARTER else 1
    bits.append(bit)
    bits.extend([bit ^ 1] * pending)
    nbits = len(bits)
    return np.packbits(np.array(bits, dtype=np.uint8)).tobytes(), nbits


def encode(stream, model: CodingModel) -> bytes:
    return encode_bits(stream, model)[0]


def decode(data: bytes, model: CodingModel, token_count: int) -> TokenStream:
    """Exact inverse of :func:`encode` for the same model and token count."""
    data = bytes(data)
    if token_count == 0:
        if data:
            raise FormatError("payload present for an empty token stream")
        return TokenStream(np.zeros(0, dtype=np.int64), 0)
    if token_count < 0:
        raise FormatError(f"negative token count {token_count}")
    total = model.total
    if total != token_count:
        raise FormatError(f"model total {total} does not match token count {token_count}")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8)).tolist()
    navail = len(bits)
    # zeros beyond the end; the exact-length check below rejects truncation
    bits.extend([0] * (PRECISION + 2))
    code = int("".join(map(str, bits[:PRECISION])), 2)
    pos = PRECISION
    cum = model.cumulative
    low, high = 0, _MASK
    shifts = 0
    out = [0] * token_count
    for i in range(token_count):
        rng = high - low + 1
        value = ((code - low + 1) * total - 1) // rng
        s = bisect_right(cum, value) - 1
        if not 0 <= s < len(model.counts):
            raise FormatError("corrupt payload: decoded value outside the model")
        out[i] = s
        high = low + rng * cum[s + 1] // total - 1
        low = low + rng * cum[s] // total
        while True:
            if high < _HALF:
                pass
            elif low >= _HALF:
                low -= _HALF
                high -= _HALF
                code -= _HALF
            elif low >= _QUARTER and high < _THREE_QUARTERS:
                low -= _QUARTER
                high -= _QUARTER
                code -= _QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            if pos >= len(bits):
                bits.extend([0] * PRECISION)
            code = (code << 1) | bits[pos]
            pos += 1
            shifts += 1
        if not low <= code <= high:
            raise FormatError("corrupt payload: code value left the coding interval")
    expected_bits = shifts + 2
    if (expected_bits + 7) // 8 != len(data):
        raise FormatError(
            f"payload has {len(data)} bytes but the code needs {expected_bits} bits")
    if any(bits[expected_bits:navail]):
        raise FormatError("nonzero padding bits after the payload")
    tokens = np.array(out, dtype=np.int64)
    if not np.array_equal(np.bincount(tokens, minlength=len(model.counts)), model.counts):
        raise FormatError("corrupt payload: decoded symbol counts disagree with the model")
    return TokenStream(tokens, 0)
