"""Hot loops over CSR postings.

Each kernel has a numba ``@njit`` implementation and a pure-numpy one.
Setting ``PATCLIR_DISABLE_NUMBA=1`` (or running without numba installed)
selects the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("PATCLIR_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("disabled by PATCLIR_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    njit = None

NUMBA_ENABLED = njit is not None
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


# --- numpy ------------------------------------------------------------------

def posting_weights_np(tf, offsets, N):
    """(1 + ln f) * ln(N / n) for every posting, term by term."""
    df = np.diff(offsets)
    idf = np.zeros(df.shape[0], dtype=np.float64)
    nz = df > 0
    idf[nz] = np.log(N / df[nz])
    return (1.0 + np.log(tf.astype(np.float64))) * np.repeat(idf, df)


def doc_norms_np(docs, weights, n_docs):
    return np.sqrt(np.bincount(docs, weights=weights * weights, minlength=n_docs))


def accumulate_np(offsets, docs, weights, term_ids, q_weights, n_docs):
    if len(term_ids) == 0:
        return np.zeros(n_docs, dtype=np.float64)
    spans = [slice(offsets[t], offsets[t + 1]) for t in term_ids]
    d = np.concatenate([docs[s] for s in spans])
    w = np.concatenate([weights[s] * qw for s, qw in zip(spans, q_weights)])
    return np.bincount(d, weights=w, minlength=n_docs)


# --- numba ------------------------------------------------------------------

if NUMBA_ENABLED:

    @njit(cache=True)
    def posting_weights_nb(tf, offsets, N):
        out = np.empty(tf.shape[0], dtype=np.float64)
        for t in range(offsets.shape[0] - 1):
            lo = offsets[t]
            hi = offsets[t + 1]
            if hi == lo:
                continue
            idf = np.log(N / (hi - lo))
            for p in range(lo, hi):
                out[p] = (1.0 + np.log(float(tf[p]))) * idf
        return out

    @njit(cache=True)
    def doc_norms_nb(docs, weights, n_docs):
        acc = np.zeros(n_docs, dtype=np.float64)
        for p in range(docs.shape[0]):
            acc[docs[p]] += weights[p] * weights[p]
        return np.sqrt(acc)

    @njit(cache=True)
    def accumulate_nb(offsets, docs, weights, term_ids, q_weights, n_docs):
        acc = np.zeros(n_docs, dtype=np.float64)
        for i in range(term_ids.shape[0]):
            t = term_ids[i]
            qw = q_weights[i]
            for p in range(offsets[t], offsets[t + 1]):
                acc[docs[p]] += weights[p] * qw
        return acc

    posting_weights = posting_weights_nb
    doc_norms = doc_norms_nb
    accumulate = accumulate_nb
else:
    posting_weights = posting_weights_np
    doc_norms = doc_norms_np
    accumulate = accumulate_np
