"""Input validation helpers for documents and token arrays."""

from __future__ import annotations

import os

import numpy as np

from .exceptions import StructuralError


def check_document(X) -> bytes:
    """Coerce a single document to ``bytes``.

    Accepts bytes-like objects, ``str`` restricted to code points below 256,
    and one-dimensional integer arrays with values in ``[0, 255]``.
    """
    if isinstance(X, (bytes, bytearray, memoryview)):
        return bytes(X)
    if isinstance(X, str):
        try:
            return X.encode("latin-1")
        except UnicodeEncodeError as exc:
            raise ValueError(
                f"character {X[exc.start]!r} at position {exc.start} is not a byte; "
                "only 8-bit characters are supported") from None
    arr = np.asarray(X)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D document, got array of shape {arr.shape}")
    if arr.size == 0:
        return b""
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError(f"document array must hold integers, got {arr.dtype}")
    if arr.min() < 0 or arr.max() > 255:
        raise ValueError("document array values must lie in [0, 255]")
    return arr.astype(np.uint8).tobytes()


def check_tokens(Xt, alphabet_size: int) -> np.ndarray:
    tokens = np.asarray(Xt)
    if tokens.ndim != 1:
        raise ValueError(f"expected a 1-D token array, got shape {tokens.shape}")
    if tokens.size == 0:
        return np.zeros(0, dtype=np.int64)
    if not np.issubdtype(tokens.dtype, np.integer):
        raise TypeError(f"token array must hold integers, got {tokens.dtype}")
    if tokens.min() < 0 or tokens.max() >= alphabet_size:
        raise StructuralError(f"token ids must lie in [0, {alphabet_size})")
    return tokens.astype(np.int64)


def effective_threads(n_jobs) -> int:
    """sklearn-style ``n_jobs``: None -> 1, negative -> cores + 1 + n_jobs."""
    if n_jobs is None:
        return 1
    n_jobs = int(n_jobs)
    if n_jobs == 0:
        raise ValueError("n_jobs == 0 has no meaning")
    if n_jobs < 0:
        return max(1, (os.cpu_count() or 1) + 1 + n_jobs)
    return n_jobs
