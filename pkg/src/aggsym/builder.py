"""Greedy aggregate-alphabet construction.

Each step scores every adjacent pair of the current token stream, takes the
highest gain (ties: lowest ``(left, right)``), and accepts it only if the gain
pays for the header entry that describes the new symbol.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gain import message_code_length, oracle_gain, pair_gains
from .header import MAX_AGCOUNT, HeaderLayout, frequency_bits, id_width
from .symbols import Alphabet, FrequencyTable, TokenStream
from .tokenizer import AggregateCandidate, apply_aggregate, count_pairs

logger = logging.getLogger(__name__)

TIE_BREAK_POLICY = "max-gain-then-lowest-pair"
TIE_RTOL = 1e-9
# below this many candidates a thread pool costs more than it saves
_MIN_PARALLEL_CANDIDATES = 4096


@dataclass(frozen=True)
class BuildConfig:
    max_aggregates: Optional[int] = None
    min_net_gain_bits: float = 0.0
    stop_at_bpc: Optional[float] = None
    tie_break: str = TIE_BREAK_POLICY
    threads: int = 1
    verify: bool = False

    def __post_init__(self):
        if self.max_aggregates is not None and self.max_aggregates < 0:
            raise ValueError("max_aggregates must be >= 0")
        if self.tie_break != TIE_BREAK_POLICY:
            raise ValueError(f"unknown tie-break policy {self.tie_break!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class BuildStep:
    step_index: int
    chosen: AggregateCandidate
    symbol_id: int
    expansion: bytes
    gain_bits: float
    header_cost_bits: int
    message_bits_after: float
    alphabet_bits_after: int
    bpc_message: float
    bpc_total: float
    oracle_deviation: Optional[float] = None


@dataclass
class BuildResult:
    alphabet: Alphabet
    stream: TokenStream
    steps: list[BuildStep]
    freq_bits: int
    initial_message_bits: float
    initial_alphabet_bits: int
    initial_tokens: int = 0
    initial_distinct: int = 0
    max_oracle_deviation: Optional[float] = None
    stop_reason: str = ""

    @property
    def frequencies(self) -> FrequencyTable:
        return self.stream.frequencies(self.alphabet)

    @property
    def message_bits(self) -> float:
        if not self.steps:
            return self.initial_message_bits
        return self.steps[-1].message_bits_after

    @property
    def alphabet_bits(self) -> int:
        return HeaderLayout.for_alphabet(self.alphabet, self.freq_bits).total_bits


def marginal_header_cost(alphabet: Alphabet, freq_bits: int) -> int:
    """Header bits taken by the next aggregate entry of ``alphabet``."""
    return freq_bits + 2 * id_width(len(alphabet))


def _message_bits(counts: np.ndarray) -> float:
    if counts.sum() == 0:
        return 0.0
    return message_code_length(FrequencyTable(counts))


def _gains_chunk(args):
    counts, n, left, right, fs, lo, hi = args
    return pair_gains(counts, n, left[lo:hi], right[lo:hi], fs[lo:hi])


def select_best(counts: np.ndarray, n: int, left: np.ndarray, right: np.ndarray,
                fs: np.ndarray, threads: int = 1, pool=None) -> tuple[float, int]:
    """Highest-gain candidate; ties go to the lowest ``(left, right)``.

    Candidates must already be sorted by ``(left, right)``. Gains within
    ``TIE_RTOL`` of the maximum count as tied, so mathematically equal gains
    are not separated by rounding noise. Chunked scoring yields the same
    elementwise gains for any thread count.
    """
    m = len(fs)
    if threads <= 1 or pool is None or m < _MIN_PARALLEL_CANDIDATES:
        gains = _gains_chunk((counts, n, left, right, fs, 0, m))
    else:
        bounds = np.linspace(0, m, threads + 1).astype(int)
        jobs = [(counts, n, left, right, fs, lo, hi)
                for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        gains = np.concatenate(list(pool.map(_gains_chunk, jobs)))
    best = float(gains.max())
    idx = int(np.argmax(gains >= best - TIE_RTOL * max(1.0, abs(best))))
    return float(gains[idx]), idx


def build(stream: TokenStream, alphabet: Alphabet,
          config: Optional[BuildConfig] = None) -> BuildResult:
    """Grow ``alphabet`` greedily over ``stream`` until no pair pays for itself."""
    config = config or BuildConfig()
    if alphabet.aggregate_count:
        raise ValueError("build starts from a base alphabet")
    counts = np.bincount(stream.tokens, minlength=len(alphabet)).astype(np.int64)
    freq_bits = frequency_bits(counts.max() if counts.size else 0)
    nbytes = stream.source_length_bytes
    message_bits = _message_bits(counts)
    layout = HeaderLayout.for_alphabet(alphabet, freq_bits)
    alphabet_bits = layout.total_bits
    result = BuildResult(alphabet, stream, [], freq_bits, message_bits, alphabet_bits,
                         initial_tokens=len(stream),
                         initial_distinct=int(np.count_nonzero(counts)))

    limit = MAX_AGCOUNT if config.max_aggregates is None else min(config.max_aggregates, MAX_AGCOUNT)
    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    reason = "no candidate pays for its header entry"
    try:
        while True:
            if alphabet.aggregate_count >= limit:
                reason = "aggregate budget reached"
                break
            if config.stop_at_bpc is not None and nbytes and \
                    (message_bits + alphabet_bits) / nbytes <= config.stop_at_bpc:
                reason = "target bits per character reached"
                break
            tokens = stream.tokens
            left, right, fs = count_pairs(tokens, len(alphabet))
            if not len(fs):
                reason = "no adjacent pairs left"
                break
            gain, idx = select_best(counts, len(tokens), left, right, fs,
                                    config.threads, pool)
            cost = marginal_header_cost(alphabet, freq_bits)
            if not gain > cost + config.min_net_gain_bits:
                break

            l, r, f = int(left[idx]), int(right[idx]), int(fs[idx])
            chosen = AggregateCandidate.from_alphabet(l, r, f, alphabet)
            deviation = None
            if config.verify:
                measured = oracle_gain(stream, alphabet, chosen)
                deviation = abs(measured - gain) / max(1.0, abs(measured))
                result.max_oracle_deviation = max(result.max_oracle_deviation or 0.0, deviation)

            alphabet = alphabet.with_aggregate(l, r)
            new_id = len(alphabet) - 1
            stream = apply_aggregate(stream, alphabet[new_id])
            counts = np.append(counts, f)
            counts[l] -= f
            counts[r] -= f
            message_bits = _message_bits(counts)
            alphabet_bits += cost
            result.steps.append(BuildStep(
                step_index=len(result.steps) + 1,
                chosen=chosen,
                symbol_id=new_id,
                expansion=alphabet.expansion(new_id),
                gain_bits=gain,
                header_cost_bits=cost,
                message_bits_after=message_bits,
                alphabet_bits_after=alphabet_bits,
                bpc_message=message_bits / nbytes,
                bpc_total=(message_bits + alphabet_bits) / nbytes,
                oracle_deviation=deviation,
            ))
            logger.debug("step %d: %r f=%d gain=%.1f cost=%d",
                         len(result.steps), alphabet.expansion(new_id), f, gain, cost)
    finally:
        if pool is not None:
            pool.shutdown()

    result.alphabet = alphabet
    result.stream = stream
    result.stop_reason = reason
    assert alphabet_bits == HeaderLayout.for_alphabet(alphabet, freq_bits).total_bits
    return result


def default_threads() -> int:
    return os.cpu_count() or 1

