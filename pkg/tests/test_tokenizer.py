import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggsym import (AlphabetError, Alphabet, Symbol, TokenStream, apply_aggregate,
                    enumerate_candidates, tokenize_base)
from aggsym.tokenizer import count_pairs, pair_positions, transform_bytes

A, B, X = 0, 1, 7


def stream(tokens):
    return TokenStream(np.array(tokens, dtype=np.int64), len(tokens))


def counts_of(tokens):
    return {(c.left, c.right): c.count for c in enumerate_candidates(stream(tokens))}


def test_tokenize_base():
    a = Alphabet.for_document(b"abc")
    s = tokenize_base(b"abc", a)
    assert s.tokens.tolist() == [a.id_of_byte(x) for x in b"abc"]
    assert len(tokenize_base(b"", a)) == 0


def test_tokenize_reports_position_and_byte():
    a = Alphabet.for_document(b"abc")
    with pytest.raises(AlphabetError) as err:
        tokenize_base(b"ab*c", a)
    assert err.value.position == 2
    assert err.value.byte == ord("*")


def test_enumerate_self_overlapping_run():
    assert counts_of([A, A, A]) == {(A, A): 1}
    assert counts_of([A, A, A, A]) == {(A, A): 2}


def test_enumerate_alternating():
    assert counts_of([A, B, A, B]) == {(A, B): 2, (B, A): 1}


def test_enumerate_single_token():
    assert counts_of([X]) == {}
    assert counts_of([]) == {}


def test_enumerate_with_alphabet_fills_expansion_data():
    a = Alphabet.for_document(b"")
    t, h = a.id_of_byte(ord("t")), a.id_of_byte(ord("h"))
    a = a.with_aggregate(t, h)
    th = len(a) - 1
    e = a.id_of_byte(ord("e"))
    (cand,) = enumerate_candidates(stream([th, e]), a)
    assert cand.r == 3
    assert cand.multiplicity == {t: 1, h: 1, e: 1}
    assert cand.constituents == {th: 1, e: 1}


def test_apply_examples():
    s = apply_aggregate(stream([A, B, A, B]), Symbol(9, left=A, right=B))
    assert s.tokens.tolist() == [9, 9]
    s = apply_aggregate(stream([A, A, A]), Symbol(9, left=A, right=A))
    assert s.tokens.tolist() == [9, A]
    s = stream([A, X, B])
    assert apply_aggregate(s, Symbol(9, left=A, right=B)) is s


def test_pair_positions_in_runs():
    tokens = np.array([A, A, A, B, A, A, A, A, A])
    assert pair_positions(tokens, A, A).tolist() == [0, 4, 6]


def test_count_pairs_sorted_lexicographically():
    left, right, _ = count_pairs(np.array([3, 1, 2, 1, 3, 0]), 4)
    pairs = list(zip(left.tolist(), right.tolist()))
    assert pairs == sorted(pairs)


token_lists = st.lists(st.integers(0, 3), max_size=200)


@given(token_lists)
def test_count_apply_consistency(tokens):
    s = stream(tokens)
    for cand in enumerate_candidates(s):
        out = apply_aggregate(s, Symbol(10, left=cand.left, right=cand.right))
        assert len(s) - len(out) == cand.count
        assert len(pair_positions(s.tokens, cand.left, cand.right)) == cand.count


@given(token_lists)
def test_frequency_bookkeeping(tokens):
    s = stream(tokens)
    before = np.bincount(s.tokens, minlength=11)
    for cand in enumerate_candidates(s):
        after = np.bincount(apply_aggregate(s, Symbol(10, left=cand.left, right=cand.right)).tokens,
                            minlength=11)
        expected = before.copy()
        for sym, m in cand.constituents.items():
            expected[sym] -= cand.count * m
        expected[10] += cand.count
        assert after.tolist() == expected.tolist()


@given(st.binary(max_size=300), st.lists(st.tuples(st.integers(0, 400), st.integers(0, 400)), max_size=12))
def test_byte_fidelity_under_aggregate_sequences(data, picks):
    alphabet = Alphabet.for_document(data)
    s = tokenize_base(data, alphabet)
    for i, j in picks:
        n = len(alphabet)
        alphabet = alphabet.with_aggregate(i % n, j % n)
        s = apply_aggregate(s, alphabet[len(alphabet) - 1])
        assert s.detokenize(alphabet) == data
    assert transform_bytes(data, alphabet).tokens.tolist() == s.tokens.tolist()
