"""Byte tokenization, adjacent-pair counting and aggregate application.

Pair occurrences are counted leftmost-greedy and non-overlapping: a run of
``k`` identical tokens holds ``k // 2`` occurrences of the doubled pair.
Pairs of distinct tokens can never overlap themselves, so their count is the
plain adjacency count. Counting and replacement both go through
:func:`pair_positions` / :func:`_runs`, which keeps them consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .exceptions import AlphabetError, StructuralError
from .symbols import Alphabet, Symbol, TokenStream


@dataclass(frozen=True)
class AggregateCandidate:
    """A pair ``(left, right)`` of current symbols proposed as a new aggregate.

    ``r`` and ``multiplicity`` describe the full byte expansion; the gain
    formulas use ``constituents``, the pair-level view against the current
    token stream.
    """

    left: int
    right: int
    count: int
    r: int = 2
    multiplicity: Mapping[int, int] = field(default_factory=dict)

    @property
    def constituents(self) -> dict[int, int]:
        if self.left == self.right:
            return {self.left: 2}
        return {self.left: 1, self.right: 1}

    @classmethod
    def from_alphabet(cls, left: int, right: int, count: int,
                      alphabet: Alphabet) -> "AggregateCandidate":
        from .symbols import char_multiplicity

        mult: dict[int, int] = {}
        for part in (left, right):
            for k, v in char_multiplicity(part, alphabet).items():
                mult[k] = mult.get(k, 0) + v
        r = len(alphabet.expansion(left)) + len(alphabet.expansion(right))
        return cls(int(left), int(right), int(count), r, mult)


def tokenize_base(data: bytes, alphabet: Optional[Alphabet] = None) -> TokenStream:
    """One token per byte under the base part of ``alphabet``."""
    data = bytes(data)
    if alphabet is None:
        alphabet = Alphabet.for_document(data)
    lookup = np.full(256, -1, dtype=np.int64)
    for b in range(256):
        try:
            lookup[b] = alphabet.id_of_byte(b)
        except AlphabetError:
            pass
    raw = np.frombuffer(data, dtype=np.uint8)
    tokens = lookup[raw]
    bad = np.flatnonzero(tokens < 0)
    if bad.size:
        pos = int(bad[0])
        raise AlphabetError(
            f"byte {data[pos]:#04x} at position {pos} is not in the base alphabet",
            position=pos, byte=data[pos])
    return TokenStream(tokens, len(data))


def _runs(tokens: np.ndarray):
    """Run-length encoding: (starts, lengths, values)."""
    n = len(tokens)
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    starts = np.concatenate(([0], np.flatnonzero(tokens[1:] != tokens[:-1]) + 1))
    lengths = np.diff(np.concatenate((starts, [n])))
    return starts, lengths, tokens[starts]


def pair_positions(tokens: np.ndarray, left: int, right: int) -> np.ndarray:
    """Start indices of the leftmost-greedy, non-overlapping ``(left, right)`` pairs."""
    tokens = np.asarray(tokens)
    if len(tokens) < 2:
        return np.zeros(0, dtype=np.int64)
    if left != right:
        return np.flatnonzero((tokens[:-1] == left) & (tokens[1:] == right))
    starts, lengths, values = _runs(tokens)
    keep = (values == left) & (lengths >= 2)
    starts, reps = starts[keep], lengths[keep] // 2
    if not reps.size:
        return np.zeros(0, dtype=np.int64)
    first = np.repeat(np.cumsum(reps) - reps, reps)
    offsets = 2 * (np.arange(reps.sum()) - first)
    return np.repeat(starts, reps) + offsets


def count_pairs(tokens: np.ndarray, size: int):
    """Counts of every adjacent pair that occurs, as arrays sorted by (left, right).

    Returns ``(left, right, count)``.
    """
    tokens = np.asarray(tokens, dtype=np.int64)
    empty = np.zeros(0, dtype=np.int64)
    if len(tokens) < 2:
        return empty, empty, empty
    a, b = tokens[:-1], tokens[1:]
    distinct = a != b
    codes = a[distinct] * size + b[distinct]
    weights = np.ones(len(codes), dtype=np.int64)

    _, lengths, values = _runs(tokens)
    doubled = lengths >= 2
    codes = np.concatenate((codes, values[doubled] * size + values[doubled]))
    weights = np.concatenate((weights, lengths[doubled] // 2))

    uniq, inverse = np.unique(codes, return_inverse=True)
    counts = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(counts, inverse, weights)
    return uniq // size, uniq % size, counts


def enumerate_candidates(stream: Union[TokenStream, np.ndarray],
                         alphabet: Optional[Alphabet] = None) -> list[AggregateCandidate]:
    """All pairs that occur in ``stream`` with their non-overlapping counts.

    Without an alphabet, ``r`` and ``multiplicity`` are filled in pair-level
    (tokens are treated as characters).
    """
    tokens = stream.tokens if isinstance(stream, TokenStream) else np.asarray(stream)
    size = len(alphabet) if alphabet is not None else (int(tokens.max()) + 1 if len(tokens) else 0)
    left, right, counts = count_pairs(tokens, size)
    out = []
    for l, r, c in zip(left.tolist(), right.tolist(), counts.tolist()):
        if alphabet is not None:
            out.append(AggregateCandidate.from_alphabet(l, r, c, alphabet))
        else:
            cand = AggregateCandidate(l, r, c)
            out.append(AggregateCandidate(l, r, c, 2, cand.constituents))
    return out


def apply_aggregate(stream: TokenStream, new_symbol: Symbol) -> TokenStream:
    """Replace every counted ``(left, right)`` pair with ``new_symbol.id``."""
    if not new_symbol.is_aggregate:
        raise StructuralError(f"symbol {new_symbol.id} is not an aggregate")
    tokens = stream.tokens
    pos = pair_positions(tokens, new_symbol.left, new_symbol.right)
    if not pos.size:
        return stream
    out = tokens.copy()
    out[pos] = new_symbol.id
    return TokenStream(np.delete(out, pos + 1), stream.source_length_bytes)


def transform_bytes(data: bytes, alphabet: Alphabet) -> TokenStream:
    """Tokenize ``data`` and replay every aggregate of ``alphabet`` in id order."""
    stream = tokenize_base(data, alphabet)
    for sym_id in range(alphabet.base_size, len(alphabet)):
        stream = apply_aggregate(stream, alphabet[sym_id])
    return stream
