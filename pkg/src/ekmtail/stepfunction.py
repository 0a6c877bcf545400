from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function on ``[1, inf)``.

    The function equals ``initial_value`` on ``[1, xs[0])`` and ``ys[j]`` on
    ``[xs[j], xs[j+1])``. ``xs`` must be strictly increasing.
    """

    xs: np.ndarray
    ys: np.ndarray
    initial_value: float = 0.0

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        ys = np.asarray(self.ys, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ValueError("xs and ys must be 1-D arrays of equal length")
        if xs.size and np.any(np.diff(xs) <= 0):
            raise ValueError("jump locations must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "initial_value", float(self.initial_value))

    @property
    def values(self):
        """Values including the initial one: ``values[0]`` on ``[1, xs[0])``."""
        return np.concatenate(([self.initial_value], self.ys))

    @property
    def terminal_value(self):
        return float(self.ys[-1]) if self.ys.size else self.initial_value

    @property
    def jumps(self):
        """Signed jump sizes at ``xs``."""
        return np.diff(self.values)

    def __call__(self, s):
        idx = np.searchsorted(self.xs, s, side="right")
        out = self.values[idx]
        return float(out) if np.ndim(s) == 0 else out

    def left_limit(self, s):
        """``f(s-)``; differs from ``f(s)`` only at jump locations."""
        idx = np.searchsorted(self.xs, s, side="left")
        out = self.values[idx]
        return float(out) if np.ndim(s) == 0 else out

    def __len__(self):
        return self.xs.size
