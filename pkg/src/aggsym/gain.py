"""Optimal code lengths and the information gain of adding an aggregate symbol.

All quantities are real-valued bits under a static order-0 model built from
exact frequencies. ``0 * log2(0)`` is taken as 0 explicitly.

Two equivalent routes compute the gain of a candidate ``S`` occurring
``f_S`` times, made of constituents with multiplicities ``S(a)``:

* frequency form, in whole-message bits::

      N log N - N' log N' + f_S log f_S
        - sum_a f_a log f_a + sum_a f'_a log f'_a

  with ``N' = N - f_S (r - 1)`` and ``f'_a = f_a - f_S S(a)``;

* probability form, in bits per current symbol, as the entropy of the
  constituents before the change minus their residual entropy after it, plus
  a correction that depends only on ``p_s`` and ``r``.

:func:`oracle_gain` checks both by actually rewriting the message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Protocol

import numpy as np

from .exceptions import DomainError
from .symbols import Alphabet, FrequencyTable, Symbol, TokenStream


class Candidate(Protocol):
    count: int

    @property
    def constituents(self) -> Mapping[int, int]: ...


@dataclass(frozen=True)
class StringCandidate:
    """An arbitrary-length string of table symbols occurring ``count`` times.

    ``multiplicity`` maps each symbol id to the number of times it occurs in
    the string. Used to score strings longer than a pair directly.
    """

    count: int
    multiplicity: Mapping[int, int]

    @property
    def constituents(self) -> Mapping[int, int]:
        return self.multiplicity

    @property
    def r(self) -> int:
        return sum(self.multiplicity.values())


def xlog2x(x):
    """Elementwise ``x * log2(x)`` with the 0 log 0 = 0 convention."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out if out.ndim else float(out)


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def _plog2inv(p: float) -> float:
    return -p * math.log2(p) if p > 0 else 0.0


def message_code_length(freqs: FrequencyTable) -> float:
    """Optimal static code length of the message in bits: ``N log N - sum f log f``."""
    n = freqs.total
    if n <= 0:
        raise DomainError("message code length is undefined for an empty message")
    counts = freqs.counts[freqs.counts > 0].astype(np.float64)
    return max(0.0, _xlog2x(n) - float(np.sum(counts * np.log2(counts))))


def _check_candidate(freqs: FrequencyTable, candidate: Candidate):
    n = freqs.total
    f_s = int(candidate.count)
    mult = {int(k): int(v) for k, v in candidate.constituents.items() if v}
    r = sum(mult.values())
    if n <= 0:
        raise DomainError("gain is undefined for an empty message")
    if f_s < 0:
        raise DomainError(f"negative occurrence count {f_s}")
    if r < 1:
        raise DomainError("candidate has no constituents")
    for sym, m in mult.items():
        if f_s * m > freqs[sym]:
            raise DomainError(
                f"constituent {sym} occurs {freqs[sym]} times but the candidate "
                f"needs {f_s} x {m}")
    if f_s * (r - 1) >= n:
        raise DomainError(f"f_S*(r-1) = {f_s * (r - 1)} is not below N = {n}")
    return n, f_s, r, mult


def gain_frequency_form(freqs: FrequencyTable, candidate: Candidate) -> float:
    """Decrease in optimal message length (bits) from adding ``candidate``."""
    n, f_s, r, mult = _check_candidate(freqs, candidate)
    n_new = n - f_s * (r - 1)
    gain = _xlog2x(n) - _xlog2x(n_new) + _xlog2x(f_s)
    for sym, m in mult.items():
        f = freqs[sym]
        gain += _xlog2x(f - f_s * m) - _xlog2x(f)
    return gain


@dataclass(frozen=True)
class GainBreakdown:
    """Every intermediate of the per-character gain, for auditing.

    ``char_gain == entropy_before - entropy_after + correction``. The same
    value regrouped as two proper entropies is ``grouped_before -
    grouped_after`` with ``grouped_before = H(mu_s, p_a...)`` and
    ``grouped_after = H(p_s, lambda_a...)``.
    """

    n: int
    count: int
    p_s: float
    r: int
    mu_s: float
    p: Mapping[int, float] = field(repr=False)
    lam: Mapping[int, float] = field(repr=False)
    entropy_before: float
    entropy_after: float
    correction: float
    char_gain: float
    total_gain: float
    grouped_before: float = 0.0
    grouped_after: float = 0.0


def char_gain(freqs: FrequencyTable, candidate: Candidate) -> GainBreakdown:
    """Per-symbol gain as a difference of two entropies plus the rescale correction."""
    n, f_s, r, mult = _check_candidate(freqs, candidate)
    p_s = f_s / n
    mu_s = 1.0 - p_s * (r - 1)
    p = {sym: freqs[sym] / n for sym in mult}
    # residual mass computed from integers so that exhausted constituents give exactly 0
    lam = {sym: (freqs[sym] - f_s * m) / n for sym, m in mult.items()}
    if any(v < 0 for v in lam.values()):
        raise DomainError("negative residual probability; occurrence count is inconsistent")
    before = sum(_plog2inv(v) for v in p.values())
    after = sum(_plog2inv(v) for v in lam.values())
    correction = _plog2inv(mu_s) - _plog2inv(p_s)
    per_char = before - after + correction
    return GainBreakdown(n=n, count=f_s, p_s=p_s, r=r, mu_s=mu_s, p=p, lam=lam,
                         entropy_before=before, entropy_after=after,
                         correction=correction, char_gain=per_char,
                         total_gain=n * per_char,
                         grouped_before=_plog2inv(mu_s) + before,
                         grouped_after=_plog2inv(p_s) + after)


def pair_gains(symbol_counts: np.ndarray, n: int, left: np.ndarray,
               right: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Vectorized frequency-form gain for many pair candidates at once."""
    f = np.asarray(symbol_counts, dtype=np.float64)
    fs = np.asarray(counts, dtype=np.float64)
    fl, fr = f[left], f[right]
    same = left == right
    gain = xlog2x(float(n)) - xlog2x(n - fs) + xlog2x(fs)
    gain = gain - xlog2x(fl) + xlog2x(fl - np.where(same, 2 * fs, fs))
    return gain + np.where(same, 0.0, xlog2x(fr - fs) - xlog2x(fr))


def oracle_gain(stream: TokenStream, alphabet: Alphabet, candidate) -> float:
    """Gain measured by rewriting the stream and recomputing both code lengths."""
    from .tokenizer import apply_aggregate

    new_id = len(alphabet)
    symbol = Symbol(new_id, left=int(candidate.left), right=int(candidate.right))
    alphabet._check_id(symbol.left)
    alphabet._check_id(symbol.right)
    if len(stream) == 0:
        return 0.0
    before = message_code_length(FrequencyTable.from_tokens(stream.tokens, new_id + 1))
    rewritten = apply_aggregate(stream, symbol)
    after = message_code_length(FrequencyTable.from_tokens(rewritten.tokens, new_id + 1))
    return before - after
