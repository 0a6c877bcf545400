import numpy as np


def make_rng(seed, *stream):
    """Counter-based generator for ``seed`` and an optional stream index.

    Streams are addressed by ``(seed, *stream)`` so that replication ``i`` of an
    experiment draws the same numbers regardless of scheduling.
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(seq))


def open_uniform(rng, size):
    """Uniforms on the open interval (0, 1) with 53-bit resolution."""
    bits = rng.integers(0, 2**53, size=size, dtype=np.uint64)
    return (bits + 0.5) * 2.0**-53
