"""Bit-exact alphabet header.

Layout, MSB first, zero-padded to a byte boundary only at the very end::

    MXBITS - 1            5 bits
    standard freqs        64 x MXBITS
    NUMCHAR               8 bits
    nonstandard entries   NUMCHAR x (8-bit byte + MXBITS freq)
    AGCOUNT               15 bits
    aggregate entries     AGCOUNT x (2 x w_j id + MXBITS freq)

``w_j = ceil(log2(64 + NUMCHAR + j))`` for the j-th aggregate (0-based),
i.e. enough bits to address every symbol defined before it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitio import BitReader, BitWriter
from .exceptions import CapacityError, FormatError, StructuralError
from .symbols import STANDARD_COUNT, Alphabet, FrequencyTable

MXBITS_FIELD = 5
NUMCHAR_FIELD = 8
AGCOUNT_FIELD = 15
BYTE_FIELD = 8

MAX_MXBITS = 1 << MXBITS_FIELD
MAX_NUMCHAR = (1 << NUMCHAR_FIELD) - 1
MAX_AGCOUNT = (1 << AGCOUNT_FIELD) - 1


def id_width(alphabet_size: int) -> int:
    """Bits needed to address one of ``alphabet_size`` existing symbols."""
    return max(0, alphabet_size - 1).bit_length()


def frequency_bits(max_count: int) -> int:
    return max(1, int(max_count).bit_length())


@dataclass(frozen=True)
class HeaderLayout:
    mxbits: int
    numchar: int
    agcount: int

    @property
    def base_size(self) -> int:
        return STANDARD_COUNT + self.numchar

    def aggregate_entry_bits(self, j: int) -> int:
        return self.mxbits + 2 * id_width(self.base_size + j)

    @property
    def base_bits(self) -> int:
        """Everything before the AGCOUNT field."""
        return (MXBITS_FIELD + STANDARD_COUNT * self.mxbits + NUMCHAR_FIELD
                + self.numchar * (BYTE_FIELD + self.mxbits))

    @property
    def aggregate_bits(self) -> int:
        return sum(self.aggregate_entry_bits(j) for j in range(self.agcount))

    @property
    def bits_excluding_agcount(self) -> int:
        return self.base_bits + self.aggregate_bits

    @property
    def total_bits(self) -> int:
        return self.base_bits + AGCOUNT_FIELD + self.aggregate_bits

    @property
    def total_bytes(self) -> int:
        return (self.total_bits + 7) // 8

    @classmethod
    def for_alphabet(cls, alphabet: Alphabet, mxbits: int) -> "HeaderLayout":
        return cls(mxbits, alphabet.nonstandard_count, alphabet.aggregate_count)


def _check_capacity(alphabet: Alphabet, mxbits: int) -> None:
    if not 1 <= mxbits <= MAX_MXBITS:
        raise CapacityError(f"MXBITS must be in [1, {MAX_MXBITS}], got {mxbits}")
    if alphabet.nonstandard_count > MAX_NUMCHAR:
        raise CapacityError(
            f"{alphabet.nonstandard_count} nonstandard characters exceed the "
            f"{NUMCHAR_FIELD}-bit NUMCHAR field")
    if alphabet.aggregate_count > MAX_AGCOUNT:
        raise CapacityError(
            f"{alphabet.aggregate_count} aggregates exceed the "
            f"{AGCOUNT_FIELD}-bit AGCOUNT field")


def encode_header(alphabet: Alphabet, freqs: FrequencyTable,
                  mxbits: Optional[int] = None) -> bytes:
    """Serialize ``alphabet`` and per-symbol frequencies.

    ``mxbits`` defaults to the bit length of the largest frequency; a larger
    value may be forced (the builder prices entries with the document's width).
    """
    freqs.check_alphabet(alphabet)
    counts = np.zeros(len(alphabet), dtype=np.int64)
    counts[:min(len(freqs), len(alphabet))] = freqs.counts[:len(alphabet)]
    needed = frequency_bits(counts.max() if counts.size else 0)
    if mxbits is None:
        mxbits = needed
    if mxbits < needed:
        raise CapacityError(f"largest frequency needs {needed} bits, MXBITS is {mxbits}")
    _check_capacity(alphabet, mxbits)

    w = BitWriter()
    w.write(mxbits - 1, MXBITS_FIELD)
    counts = counts.tolist()
    for i in range(STANDARD_COUNT):
        w.write(counts[i], mxbits)
    w.write(alphabet.nonstandard_count, NUMCHAR_FIELD)
    for k, byte in enumerate(alphabet.nonstandard):
        w.write(byte, BYTE_FIELD)
        w.write(counts[STANDARD_COUNT + k], mxbits)
    w.write(alphabet.aggregate_count, AGCOUNT_FIELD)
    base = alphabet.base_size
    for j, (left, right) in enumerate(alphabet.aggregates):
        width = id_width(base + j)
        w.write(left, width)
        w.write(right, width)
        w.write(counts[base + j], mxbits)
    assert len(w) == HeaderLayout.for_alphabet(alphabet, mxbits).total_bits
    return w.getvalue()


def decode_header_with_layout(data: bytes, strict: bool = True):
    """Parse a header; returns ``(alphabet, freqs, layout, bits_consumed)``."""
    reader = BitReader(data)
    mxbits = reader.read(MXBITS_FIELD) + 1
    counts = [reader.read(mxbits) for _ in range(STANDARD_COUNT)]
    numchar = reader.read(NUMCHAR_FIELD)
    nonstandard = []
    for _ in range(numchar):
        nonstandard.append(reader.read(BYTE_FIELD))
        counts.append(reader.read(mxbits))
    try:
        alphabet = Alphabet(nonstandard)
    except StructuralError as exc:
        raise FormatError(f"bad nonstandard character table: {exc}") from None
    agcount = reader.read(AGCOUNT_FIELD)
    pairs = []
    size = alphabet.base_size
    for j in range(agcount):
        width = id_width(size + j)
        left, right = reader.read(width), reader.read(width)
        if left >= size + j or right >= size + j:
            raise FormatError(
                f"aggregate {size + j} references id {max(left, right)} "
                f"that is not yet defined")
        pairs.append((left, right))
        counts.append(reader.read(mxbits))
    alphabet = Alphabet(nonstandard, pairs)
    consumed = reader.position
    if strict:
        reader.check_padding()
    layout = HeaderLayout(mxbits, numchar, agcount)
    return alphabet, FrequencyTable(np.array(counts, dtype=np.int64)), layout, consumed


def decode_header(data: bytes) -> tuple[Alphabet, FrequencyTable]:
    """Inverse of :func:`encode_header`."""
    alphabet, freqs, _, _ = decode_header_with_layout(data)
    return alphabet, freqs
