"""Code-length and gain formulas.

Expected values marked "oracle" were computed once with the plain-list
rewrite-and-recount oracle defined below, which shares no code with the
package, and then frozen.
"""

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from aggsym import (AggregateCandidate, Alphabet, DomainError, FrequencyTable,
                    StringCandidate, char_gain, gain_frequency_form, message_code_length,
                    oracle_gain, tokenize_base)
from aggsym.gain import pair_gains, xlog2x
from aggsym.tokenizer import count_pairs


def ref_length(seq):
    c = Counter(seq)
    n = len(seq)
    return n * math.log2(n) - sum(f * math.log2(f) for f in c.values()) if n else 0.0


def ref_rewrite(seq, pattern):
    out, i, k, count = [], 0, len(pattern), 0
    while i < len(seq):
        if list(seq[i:i + k]) == list(pattern):
            out.append(None)
            i += k
            count += 1
        else:
            out.append(seq[i])
            i += 1
    return out, count


def ref_gain(seq, pattern):
    rewritten, count = ref_rewrite(seq, pattern)
    return ref_length(seq) - ref_length(rewritten), count


def table(seq):
    return FrequencyTable.from_mapping(Counter(seq))


def string_candidate(seq, pattern):
    _, count = ref_rewrite(seq, pattern)
    return StringCandidate(count, Counter(pattern))


# message_code_length

def test_single_symbol_message_has_zero_length():
    assert message_code_length(FrequencyTable.from_mapping({0: 2})) == 0.0


def test_two_equiprobable_symbols():
    assert message_code_length(FrequencyTable.from_mapping({0: 3, 1: 3})) == pytest.approx(6.0, abs=1e-12)


def test_empty_table_is_a_domain_error():
    with pytest.raises(DomainError):
        message_code_length(FrequencyTable(np.zeros(3, dtype=np.int64)))


def test_xlog2x_convention():
    assert xlog2x(0.0) == 0.0
    assert list(xlog2x([0.0, 1.0, 2.0])) == [0.0, 0.0, 2.0]


# frequency form and probability form, worked examples

def test_ababab_gain():
    seq = list(b"ababab")
    cand = string_candidate(seq, b"ab")
    assert cand.count == 3
    assert gain_frequency_form(table(seq), cand) == pytest.approx(6.0, abs=1e-12)
    b = char_gain(table(seq), cand)
    assert b.mu_s == pytest.approx(0.5)
    assert b.entropy_before == pytest.approx(1.0)
    assert b.entropy_after == 0.0
    assert b.correction == pytest.approx(0.0, abs=1e-15)
    assert b.char_gain == pytest.approx(1.0)
    assert b.total_gain == pytest.approx(6.0)


def test_aabb_gain_is_negative():
    seq = list(b"aabb")
    cand = string_candidate(seq, b"ab")
    # oracle: 4 - 3 log2 3
    assert gain_frequency_form(table(seq), cand) == pytest.approx(-0.7548875021634682, rel=1e-12)
    b = char_gain(table(seq), cand)
    assert b.char_gain == pytest.approx(-0.18872187554086706, rel=1e-12)
    assert b.total_gain == pytest.approx(-0.7548875021634682, rel=1e-12)
    # regrouped as H(mu_s, p_a, p_b) - H(p_s, lambda_a, lambda_b)
    assert b.grouped_before == pytest.approx(1.311278124459133, rel=1e-12)
    assert b.grouped_after == pytest.approx(1.5, rel=1e-12)
    # per-field view: both constituent entropies are 1 bit, correction carries the loss
    assert b.entropy_before == pytest.approx(1.0)
    assert b.entropy_after == pytest.approx(1.0)
    assert b.correction == pytest.approx(-0.18872187554086706, rel=1e-12)


def test_zero_occurrences_gain_nothing():
    f = FrequencyTable.from_mapping({0: 5, 1: 7})
    b = char_gain(f, StringCandidate(0, {0: 1, 1: 1}))
    assert b.mu_s == 1.0
    assert b.lam == b.p
    assert b.char_gain == 0.0
    assert gain_frequency_form(f, StringCandidate(0, {0: 1, 1: 1})) == 0.0


@pytest.mark.parametrize("message,pattern,expected,count", [
    (b"ababab", b"ab", 6.0, 3),
    (b"aabb", b"ab", -0.7548875021634682, 1),
    (b"aaa", b"aa", -2.0, 1),
    (b"abcabcabx", b"abc", 7.409909534217062, 2),
    (b"thethe the", b"the", 15.70950594454669, 3),
])
def test_frozen_oracle_values(message, pattern, expected, count):
    seq = list(message)
    cand = string_candidate(seq, pattern)
    assert cand.count == count
    assert gain_frequency_form(table(seq), cand) == pytest.approx(expected, rel=1e-12, abs=1e-12)
    assert char_gain(table(seq), cand).total_gain == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_exhausted_constituent_is_finite():
    seq = list(b"abab")
    b = char_gain(table(seq), string_candidate(seq, b"ab"))
    assert all(v == 0.0 for v in b.lam.values())
    assert math.isfinite(b.char_gain)


def test_precondition_violations_name_the_constituent():
    f = FrequencyTable.from_mapping({0: 1, 1: 5})
    with pytest.raises(DomainError, match="constituent 0"):
        gain_frequency_form(f, StringCandidate(2, {0: 1, 1: 1}))
    with pytest.raises(DomainError):
        char_gain(FrequencyTable.from_mapping({0: 2}), StringCandidate(1, {0: 3}))
    with pytest.raises(DomainError):
        gain_frequency_form(FrequencyTable(np.zeros(2, dtype=np.int64)), StringCandidate(0, {0: 1}))


# oracle_gain through the package

def _base(message):
    alphabet = Alphabet.for_document(message)
    return alphabet, tokenize_base(message, alphabet)


@pytest.mark.parametrize("message,pair,expected", [
    (b"ababab", b"ab", 6.0),
    (b"aabb", b"ab", -0.7548875021634682),
    (b"x", b"ab", 0.0),
])
def test_oracle_gain_examples(message, pair, expected):
    alphabet, stream = _base(message)
    cand = AggregateCandidate(alphabet.id_of_byte(pair[0]), alphabet.id_of_byte(pair[1]), 0)
    assert oracle_gain(stream, alphabet, cand) == pytest.approx(expected, abs=1e-12)


# properties

messages = st.lists(st.integers(0, 5), min_size=2, max_size=300)


@given(messages, st.data())
def test_frequency_and_probability_forms_agree(seq, data):
    left, right, counts = count_pairs(np.array(seq), 6)
    k = data.draw(st.integers(0, len(counts) - 1))
    cand = AggregateCandidate(int(left[k]), int(right[k]), int(counts[k]))
    f = table(seq)
    g = gain_frequency_form(f, cand)
    b = char_gain(f, cand)
    assert abs(g - b.total_gain) <= 1e-9 * max(1.0, abs(g))
    assert b.char_gain == pytest.approx(b.entropy_before - b.entropy_after + b.correction, abs=1e-15)
    assert b.char_gain == pytest.approx(b.grouped_before - b.grouped_after, abs=1e-12)
    assert 0 < b.mu_s <= 1
    assert all(v >= 0 for v in b.lam.values())


@given(messages, st.integers(0, 5), st.integers(0, 5))
def test_pair_gain_matches_independent_rewrite(seq, a, b):
    expected, count = ref_gain(seq, [a, b])
    got = gain_frequency_form(table(seq), AggregateCandidate(a, b, count))
    assert got == pytest.approx(expected, rel=1e-9, abs=1e-9)


@given(messages, st.lists(st.integers(0, 5), min_size=2, max_size=5))
def test_longer_strings_match_independent_rewrite(seq, pattern):
    expected, count = ref_gain(seq, pattern)
    cand = StringCandidate(count, Counter(pattern))
    assert gain_frequency_form(table(seq), cand) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert char_gain(table(seq), cand).total_gain == pytest.approx(expected, rel=1e-9, abs=1e-9)


@given(messages, st.data())
def test_scale_invariance(seq, data):
    left, right, counts = count_pairs(np.array(seq), 6)
    k = data.draw(st.integers(0, len(counts) - 1))
    f1 = table(seq)
    f2 = FrequencyTable(f1.counts * 2)
    c1 = AggregateCandidate(int(left[k]), int(right[k]), int(counts[k]))
    c2 = AggregateCandidate(c1.left, c1.right, 2 * c1.count)
    b1, b2 = char_gain(f1, c1), char_gain(f2, c2)
    assert abs(b1.char_gain - b2.char_gain) <= 1e-12
    assert b2.total_gain == pytest.approx(2 * b1.total_gain, rel=1e-9, abs=1e-9)


@given(messages, st.integers(1, 50))
def test_locality(seq, moved):
    # shift mass between symbols outside {S} and a fresh dummy, N fixed
    counts = Counter(seq)
    s = (0, 1)
    assume(counts[0] and counts[1])
    others = [x for x in counts if x not in s]
    assume(others)
    victim = others[0]
    moved = min(moved, counts[victim])
    cand = StringCandidate(1, {0: 1, 1: 1})
    b1 = char_gain(table(seq), cand)
    counts2 = dict(counts)
    counts2[victim] -= moved
    counts2[99] = moved
    b2 = char_gain(FrequencyTable.from_mapping(counts2), cand)
    assert b1.entropy_before - b1.entropy_after == pytest.approx(b2.entropy_before - b2.entropy_after, abs=1e-12)
    assert b1.correction == pytest.approx(b2.correction, abs=1e-12)


@given(messages)
def test_vectorized_pair_gains_match_scalar(seq):
    arr = np.array(seq)
    left, right, counts = count_pairs(arr, 6)
    f = table(seq)
    vec = pair_gains(np.bincount(arr, minlength=6), len(arr), left, right, counts)
    for l, r, c, g in zip(left, right, counts, vec):
        assert g == pytest.approx(gain_frequency_form(f, AggregateCandidate(int(l), int(r), int(c))),
                                  rel=1e-12, abs=1e-9)
