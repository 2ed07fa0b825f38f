"""scikit-learn style front end for alphabet construction."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .builder import BuildConfig, build
from .container import pack
from .gain import message_code_length
from .header import HeaderLayout
from .symbols import Alphabet, FrequencyTable, TokenStream
from .tokenizer import tokenize_base, transform_bytes
from .validation import check_document, check_tokens, effective_threads


class AggregateAlphabetEncoder(TransformerMixin, BaseEstimator):
    """Learn an aggregate-symbol alphabet for one document.

    ``fit`` runs the greedy pair search on the document's bytes. ``transform``
    rewrites any document over the same base characters into symbol ids by
    replaying the learned aggregates in order; ``inverse_transform`` expands
    ids back to bytes.

    Parameters
    ----------
    max_symbols : int or None
        Upper bound on the number of aggregates. ``None`` means unbounded.
    stop_bpc : float or None
        Stop once total bits per character (header + message) drops to this.
    min_net_gain : float
        Extra bits a candidate must gain beyond its header cost.
    n_jobs : int or None
        Threads used to score candidates; results do not depend on it.
    verify : bool
        Cross-check each accepted gain against a rewrite-and-recount oracle.
    """

    def __init__(self, max_symbols=None, stop_bpc=None, min_net_gain=0.0,
                 n_jobs=None, verify=False):
        self.max_symbols = max_symbols
        self.stop_bpc = stop_bpc
        self.min_net_gain = min_net_gain
        self.n_jobs = n_jobs
        self.verify = verify

    def _config(self) -> BuildConfig:
        return BuildConfig(
            max_aggregates=self.max_symbols,
            min_net_gain_bits=float(self.min_net_gain),
            stop_at_bpc=self.stop_bpc,
            threads=effective_threads(self.n_jobs),
            verify=bool(self.verify),
        )

    def fit(self, X, y=None):
        data = check_document(X)
        base = Alphabet.for_document(data)
        result = build(tokenize_base(data, base), base, self._config())
        self.build_result_ = result
        self.alphabet_ = result.alphabet
        self.steps_ = result.steps
        self.n_aggregates_ = result.alphabet.aggregate_count
        self.freq_bits_ = result.freq_bits
        return self

    def fit_transform(self, X, y=None, **fit_params):
        return np.array(self.fit(X).build_result_.stream.tokens)

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "alphabet_")
        stream = transform_bytes(check_document(X), self.alphabet_)
        return np.array(stream.tokens)

    def inverse_transform(self, Xt) -> bytes:
        check_is_fitted(self, "alphabet_")
        tokens = check_tokens(Xt, len(self.alphabet_))
        return TokenStream(tokens, 0).detokenize(self.alphabet_)

    def expansions(self) -> list[bytes]:
        """Byte string of every learned aggregate, in the order it was added."""
        check_is_fitted(self, "alphabet_")
        a = self.alphabet_
        return [a.expansion(i) for i in range(a.base_size, len(a))]

    def bits_per_char(self, X) -> tuple[float, float]:
        """(message, total) bits per character of ``X`` under the learned alphabet.

        Header frequency fields are sized for ``X`` itself.
        """
        check_is_fitted(self, "alphabet_")
        data = check_document(X)
        if not data:
            return 0.0, 0.0
        stream = transform_bytes(data, self.alphabet_)
        freqs = FrequencyTable.from_tokens(stream.tokens, len(self.alphabet_))
        message = message_code_length(freqs)
        mxbits = max(1, int(np.bincount(np.frombuffer(data, np.uint8)).max()).bit_length())
        header = HeaderLayout.for_alphabet(self.alphabet_, mxbits).total_bits
        return message / len(data), (message + header) / len(data)

    def score(self, X, y=None) -> float:
        """Negative total bits per character (higher is better)."""
        return -self.bits_per_char(X)[1]

    def to_container(self) -> bytes:
        """The fitted document as an ``AGSY`` container."""
        check_is_fitted(self, "build_result_")
        return pack(self.build_result_)[0]
