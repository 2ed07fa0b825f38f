"""MSB-first bit writer and reader."""

from __future__ import annotations

from .exceptions import FormatError


class BitWriter:
    def __init__(self):
        self._value = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits < 0 or value < 0 or value >> nbits:
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._value = (self._value << nbits) | value
        self._nbits += nbits

    def write_bits(self, bits) -> None:
        for bit in bits:
            self.write(bit, 1)

    def __len__(self) -> int:
        return self._nbits

    def getvalue(self) -> bytes:
        """Written bits, zero-padded to a whole number of bytes."""
        pad = -self._nbits % 8
        return (self._value << pad).to_bytes((self._nbits + pad) // 8, "big")


class BitReader:
    def __init__(self, data: bytes):
        self._data = bytes(data)
        self._value = int.from_bytes(self._data, "big")
        self._total = 8 * len(self._data)
        self.position = 0

    @property
    def remaining(self) -> int:
        return self._total - self.position

    def read(self, nbits: int) -> int:
        if nbits > self.remaining:
            raise FormatError(
                f"truncated input: needed {nbits} bits at bit {self.position}, "
                f"only {self.remaining} left")
        self.position += nbits
        return (self._value >> (self._total - self.position)) & ((1 << nbits) - 1)

    def check_padding(self) -> None:
        """The rest of the input must be zero bits that only complete the last byte."""
        if self.remaining >= 8:
            raise FormatError(f"{self.remaining // 8} trailing bytes after the encoded data")
        if self.remaining and self.read(self.remaining):
            raise FormatError("nonzero padding bits")
