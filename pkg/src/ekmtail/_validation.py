"""Input validation helpers shared by the public functions and estimators."""

import numbers

import numpy as np
from sklearn.utils import check_array, check_consistent_length


def check_censored(z, delta=None):
    """Validate a censored sample and return ``(z, delta)`` as numpy arrays.

    ``z`` may be 1-D or a single-column 2-D array. When ``delta`` is None the
    sample is treated as fully uncensored.
    """
    z = check_array(z, ensure_2d=False, dtype=np.float64, input_name="z")
    if z.ndim == 2:
        if z.shape[1] != 1:
            raise ValueError(f"z must be 1-D or have a single column, got shape {z.shape}")
        z = z[:, 0]
    if delta is None:
        delta = np.ones(z.shape[0], dtype=bool)
    else:
        delta = np.asarray(delta)
        if delta.ndim != 1:
            raise ValueError("delta must be 1-D")
        check_consistent_length(z, delta)
        if delta.dtype != bool:
            if not np.all(np.isin(delta, (0, 1))):
                raise ValueError("delta must contain only 0/1 or booleans")
            delta = delta.astype(bool)
    if z.shape[0] < 1:
        raise ValueError("empty sample")
    if np.any(z <= 0):
        raise ValueError("all observations z must be strictly positive")
    return z, delta


def check_positive(value, name):
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def check_int(value, name, low=None, high=None):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if low is not None and value < low:
        raise ValueError(f"{name}={value} is below the minimum {low}")
    if high is not None and value > high:
        raise ValueError(f"{name}={value} exceeds the maximum {high}")
    return value
