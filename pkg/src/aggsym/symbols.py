"""Symbols, alphabets, frequency tables and token streams.

An alphabet always starts with the 64 standard characters in a frozen order,
followed by the document's nonstandard bytes and then the aggregate symbols.
Aggregates are ordered pairs of previously defined ids, so ids double as a
topological order and expansion always terminates.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .exceptions import AlphabetError, StructuralError

#: Standard characters known to both encoder and decoder, in canonical id order.
STANDARD_CHARS = (
    b"ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    b"abcdefghijklmnopqrstuvwxyz"
    b" \n:;!()-,.?_"
)
STANDARD_COUNT = len(STANDARD_CHARS)
assert STANDARD_COUNT == 64

_STANDARD_SET = frozenset(STANDARD_CHARS)


@dataclass(frozen=True)
class Symbol:
    """One alphabet entry: either a base byte or an ordered pair of earlier ids."""

    id: int
    byte: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_aggregate(self) -> bool:
        return self.byte is None

    @property
    def pair(self) -> tuple[int, int]:
        if not self.is_aggregate:
            raise StructuralError(f"symbol {self.id} is a base symbol")
        return (self.left, self.right)


class Alphabet:
    """Standard characters, nonstandard base bytes and aggregate pairs.

    Instances are immutable; :meth:`with_aggregate` returns a new alphabet.
    """

    standard_count = STANDARD_COUNT

    def __init__(self, nonstandard: Iterable[int] = (),
                 aggregates: Iterable[tuple[int, int]] = ()):
        nonstandard = tuple(int(b) for b in nonstandard)
        seen = set()
        for b in nonstandard:
            if not 0 <= b <= 255:
                raise StructuralError(f"nonstandard byte {b} out of range")
            if b in _STANDARD_SET:
                raise StructuralError(f"byte {b!r} is already a standard character")
            if b in seen:
                raise StructuralError(f"nonstandard byte {b} declared twice")
            seen.add(b)
        self._nonstandard = nonstandard

        base = STANDARD_CHARS + bytes(nonstandard)
        self._byte_to_id = {b: i for i, b in enumerate(base)}
        self._expansions = [bytes([b]) for b in base]
        self._aggregates: list[tuple[int, int]] = []
        for left, right in aggregates:
            self._append(int(left), int(right))

    def _append(self, left: int, right: int) -> None:
        new_id = len(self._expansions)
        for part in (left, right):
            if not 0 <= part < new_id:
                raise StructuralError(
                    f"aggregate {new_id} references id {part}; only ids below "
                    f"{new_id} are defined")
        self._aggregates.append((left, right))
        self._expansions.append(self._expansions[left] + self._expansions[right])

    @classmethod
    def for_document(cls, data: bytes) -> "Alphabet":
        """Base alphabet for ``data``: standard chars plus its other bytes, ascending."""
        extra = sorted(set(data) - _STANDARD_SET)
        return cls(nonstandard=extra)

    def with_aggregate(self, left: int, right: int) -> "Alphabet":
        new = object.__new__(Alphabet)
        new._nonstandard = self._nonstandard
        new._byte_to_id = self._byte_to_id
        new._expansions = list(self._expansions)
        new._aggregates = list(self._aggregates)
        new._append(int(left), int(right))
        return new

    @property
    def nonstandard(self) -> tuple[int, ...]:
        return self._nonstandard

    @property
    def aggregates(self) -> tuple[tuple[int, int], ...]:
        return tuple(self._aggregates)

    @property
    def nonstandard_count(self) -> int:
        return len(self._nonstandard)

    @property
    def aggregate_count(self) -> int:
        return len(self._aggregates)

    @property
    def base_size(self) -> int:
        return self.standard_count + self.nonstandard_count

    def __len__(self) -> int:
        return len(self._expansions)

    def __getitem__(self, symbol_id: int) -> Symbol:
        symbol_id = self._check_id(symbol_id)
        if symbol_id < self.base_size:
            return Symbol(symbol_id, byte=self._expansions[symbol_id][0])
        left, right = self._aggregates[symbol_id - self.base_size]
        return Symbol(symbol_id, left=left, right=right)

    def __iter__(self) -> Iterator[Symbol]:
        for i in range(len(self)):
            yield self[i]

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        return (self._nonstandard == other._nonstandard
                and self._aggregates == other._aggregates)

    def __repr__(self) -> str:
        return (f"Alphabet(standard={self.standard_count}, "
                f"nonstandard={self.nonstandard_count}, "
                f"aggregates={self.aggregate_count})")

    def _check_id(self, symbol_id) -> int:
        if isinstance(symbol_id, Symbol):
            symbol_id = symbol_id.id
        symbol_id = int(symbol_id)
        if not 0 <= symbol_id < len(self._expansions):
            raise StructuralError(
                f"unknown symbol id {symbol_id} (alphabet has {len(self)} symbols)")
        return symbol_id

    def id_of_byte(self, byte: int) -> int:
        try:
            return self._byte_to_id[byte]
        except KeyError:
            raise AlphabetError(f"byte {byte:#04x} is not in the base alphabet",
                                byte=byte) from None

    def expansion(self, symbol_id) -> bytes:
        return self._expansions[self._check_id(symbol_id)]

    def expansion_lengths(self) -> np.ndarray:
        return np.fromiter((len(e) for e in self._expansions), dtype=np.int64,
                           count=len(self._expansions))


def expand(symbol: Union[Symbol, int], alphabet: Alphabet) -> bytes:
    """Byte string spelled by ``symbol`` (recursively for aggregates)."""
    return alphabet.expansion(symbol)


def char_multiplicity(symbol: Union[Symbol, int], alphabet: Alphabet) -> dict[int, int]:
    """How many times each base symbol id occurs in the expansion of ``symbol``."""
    counts = Counter(expand(symbol, alphabet))
    return {alphabet.id_of_byte(b): n for b, n in sorted(counts.items())}


@dataclass(frozen=True)
class FrequencyTable:
    """Occurrence count per symbol id; ``total`` is the message length N."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1:
            raise StructuralError("frequency counts must be one-dimensional")
        if counts.size and not np.issubdtype(counts.dtype, np.integer):
            raise StructuralError("frequency counts must be integers")
        counts = counts.astype(np.int64, copy=True)
        if (counts < 0).any():
            raise StructuralError("frequency counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_tokens(cls, tokens: Sequence[int], size: Optional[int] = None) -> "FrequencyTable":
        tokens = np.asarray(tokens, dtype=np.int64)
        if size is None:
            size = int(tokens.max()) + 1 if tokens.size else 0
        if tokens.size and int(tokens.max()) >= size:
            raise StructuralError(f"token id {int(tokens.max())} outside table of size {size}")
        return cls(np.bincount(tokens, minlength=size))

    @classmethod
    def from_mapping(cls, counts: Mapping[int, int], size: Optional[int] = None) -> "FrequencyTable":
        if size is None:
            size = max(counts, default=-1) + 1
        arr = np.zeros(size, dtype=np.int64)
        for k, v in counts.items():
            arr[k] = v
        return cls(arr)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, symbol_id: int) -> int:
        if 0 <= symbol_id < len(self.counts):
            return int(self.counts[symbol_id])
        return 0

    def probability(self, symbol_id: int) -> float:
        return self[symbol_id] / self.total

    def check_alphabet(self, alphabet: Alphabet) -> None:
        nonzero = np.flatnonzero(self.counts)
        if nonzero.size and nonzero[-1] >= len(alphabet):
            raise StructuralError(
                f"symbol id {int(nonzero[-1])} has a count but is not in the alphabet")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        n = max(len(self.counts), len(other.counts))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[:len(self.counts)] = self.counts
        b[:len(other.counts)] = other.counts
        return bool((a == b).all())


@dataclass(frozen=True)
class TokenStream:
    """A message written as symbol ids; ``source_length_bytes`` is its byte length."""

    tokens: np.ndarray
    source_length_bytes: int

    def __post_init__(self):
        tokens = np.asarray(self.tokens, dtype=np.int64).copy()
        tokens.setflags(write=False)
        object.__setattr__(self, "tokens", tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def frequencies(self, alphabet: Alphabet) -> FrequencyTable:
        return FrequencyTable.from_tokens(self.tokens, len(alphabet))

    def detokenize(self, alphabet: Alphabet) -> bytes:
        expansions = alphabet._expansions
        if self.tokens.size and (self.tokens.min() < 0 or self.tokens.max() >= len(expansions)):
            raise StructuralError("token stream references ids outside the alphabet")
        return b"".join([expansions[t] for t in self.tokens.tolist()])
