"""The ``AGSY`` container: magic, version, alphabet header, token count, payload.

::

    offset  size   field
    0       4      magic b"AGSY"
    4       1      version (1)
    5       4      header bit length, big-endian
    9       H      header bits, zero-padded to H = ceil(bits / 8) bytes
    9+H     4      token count, big-endian
    13+H    ...    arithmetic-coded payload, zero-padded to a byte
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Optional

from .builder import BuildConfig, BuildResult, build
from .coder import CodingModel, decode, encode_bits
from .exceptions import CapacityError, FormatError
from .header import HeaderLayout, decode_header_with_layout, encode_header
from .symbols import Alphabet
from .tokenizer import tokenize_base

MAGIC = b"AGSY"
VERSION = 1
_PREFIX = struct.Struct(">4sBI")
_COUNT = struct.Struct(">I")
FRAMING_BYTES = _PREFIX.size + _COUNT.size
MAX_INPUT_BYTES = (1 << 32) - 1


@dataclass(frozen=True)
class ContainerStats:
    header_bits: int
    payload_bits: int
    framing_bits: int
    container_bits: int
    token_count: int
    shannon_bits: float


def pack(result: BuildResult) -> tuple[bytes, ContainerStats]:
    """Serialize a finished build."""
    freqs = result.frequencies
    header = encode_header(result.alphabet, freqs, result.freq_bits)
    header_bits = HeaderLayout.for_alphabet(result.alphabet, result.freq_bits).total_bits
    model = CodingModel.from_frequencies(freqs)
    payload, payload_bits = encode_bits(result.stream, model)
    token_count = len(result.stream)
    blob = (_PREFIX.pack(MAGIC, VERSION, header_bits) + header
            + _COUNT.pack(token_count) + payload)
    container_bits = 8 * len(blob)
    stats = ContainerStats(
        header_bits=header_bits,
        payload_bits=payload_bits,
        framing_bits=container_bits - header_bits - payload_bits,
        container_bits=container_bits,
        token_count=token_count,
        shannon_bits=model.shannon_bits(),
    )
    return blob, stats


def compress(data: bytes, config: Optional[BuildConfig] = None) -> bytes:
    return compress_with_stats(data, config)[0]


def compress_with_stats(data: bytes, config: Optional[BuildConfig] = None):
    """Build an alphabet for ``data`` and pack it; returns ``(blob, stats, result)``."""
    data = bytes(data)
    if len(data) > MAX_INPUT_BYTES:
        raise CapacityError(f"input of {len(data)} bytes exceeds the 32-bit token count")
    alphabet = Alphabet.for_document(data)
    result = build(tokenize_base(data, alphabet), alphabet, config)
    blob, stats = pack(result)
    return blob, stats, result


def decompress(blob: bytes) -> bytes:
    blob = bytes(blob)
    if len(blob) < FRAMING_BYTES:
        raise FormatError("container is too short")
    magic, version, header_bits = _PREFIX.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported container version {version}")
    header_end = _PREFIX.size + (header_bits + 7) // 8
    if header_end + _COUNT.size > len(blob):
        raise FormatError("container truncated inside the header")
    alphabet, freqs, layout, consumed = decode_header_with_layout(blob[_PREFIX.size:header_end])
    if consumed != header_bits or layout.total_bits != header_bits:
        raise FormatError(
            f"header declares {header_bits} bits but its fields span {consumed}")
    (token_count,) = _COUNT.unpack_from(blob, header_end)
    if token_count != freqs.total:
        raise FormatError(
            f"token count {token_count} disagrees with header frequencies ({freqs.total})")
    model = CodingModel.from_frequencies(freqs)
    stream = decode(blob[header_end + _COUNT.size:], model, token_count)
    return stream.detokenize(alphabet)
