"""Regenerates KS_LIMIT_Q95_P075 in test_limit_process.py (about a minute on one core)."""

import numpy as np

from ekmtail.limit_process import default_grid, gof_limit_sample

if __name__ == "__main__":
    ks, cvm = gof_limit_sample(0.75, default_grid(10_000), n_paths=100_000, seed=20240)
    print("ks q95", repr(float(np.quantile(ks, 0.95))))
    print("cvm q95", repr(float(np.quantile(cvm, 0.95))), "cvm mean", cvm.mean())
