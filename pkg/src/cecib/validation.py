"""Input validation helpers shared by the public entry points."""

from __future__ import annotations

import numpy as np


def as_matrix(data) -> np.ndarray:
    """Coerce ``data`` to a finite float64 matrix of shape (n, dims).

    Accepts plain arrays, nested sequences, and any object exposing a
    ``values`` attribute (the library's ``Dataset``, pandas frames).
    """
    values = getattr(data, "values", data)
    x = np.asarray(values, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {x.shape}")
    if x.size and not np.isfinite(x).all():
        raise ValueError("feature matrix contains non-finite values")
    return x


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce a single point to a float64 vector, checking its length."""
    v = np.asarray(x, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got {v.shape[0]}")
    if not np.isfinite(v).all():
        raise ValueError("point contains non-finite values")
    return v


def as_label_vector(y, n: int) -> np.ndarray:
    """Coerce per-point category labels to an int vector with -1 = unlabeled.

    ``None`` entries, negative entries, and NaN floats all mean unlabeled.
    """
    out = np.empty(n, dtype=np.int64)
    seq = list(y)
    if len(seq) != n:
        raise ValueError(f"expected {n} labels, got {len(seq)}")
    for i, item in enumerate(seq):
        if item is None:
            out[i] = -1
            continue
        if isinstance(item, (float, np.floating)) and np.isnan(item):
            out[i] = -1
            continue
        val = int(item)
        out[i] = val if val >= 0 else -1
    return out
