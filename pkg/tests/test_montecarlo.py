import json
import math

import numpy as np
import pytest

from ekmtail import DistributionSpec, SelectionConfig, fixture_path, tail_params
from ekmtail.montecarlo import (
    ExperimentSpec,
    _fsum_mean,
    default_k_grid,
    finite_sample_study,
    hill_replications,
    mse_study,
)

PARETO_PAIR = dict(spec_x=DistributionSpec.pareto(0.5), spec_y=DistributionSpec.pareto(1.5))
BURR_PAIR = dict(spec_x=DistributionSpec.burr(0.5), spec_y=DistributionSpec.burr(1.5))
RULES = (SelectionConfig("rot"), SelectionConfig("ks", 1.5), SelectionConfig("cvm", 0.25))


def test_default_k_grid():
    g = default_k_grid(10_000)
    assert g[0] == 50 and g[-1] == 5000
    assert np.all(np.diff(g) > 0) and 25 <= g.size <= 30


def test_spec_from_bundled_configs():
    for name in ("burr_table.json", "burr_table_small.json", "pareto_curves.json"):
        with open(fixture_path(name)) as fh:
            spec = ExperimentSpec.from_dict(json.load(fh))
        assert spec.master_seed == 0
    assert len(spec.sizes) == 2
    with open(fixture_path("burr_table.json")) as fh:
        table = ExperimentSpec.from_dict(json.load(fh))
    assert table.sizes == (1000, 5000, 10000, 50000) and len(table.rules) == 7
    assert table.spec_x == DistributionSpec.burr(0.5)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(**PARETO_PAIR, n=50)
    with pytest.raises(ValueError):
        ExperimentSpec(**PARETO_PAIR, s_list=(0.5,))
    with pytest.raises(TypeError):
        ExperimentSpec(**PARETO_PAIR, reps=2.5)


def test_fsum_mean_is_order_invariant():
    rng = np.random.default_rng(0)
    x = rng.standard_cauchy((1000, 3)) * 1e8
    perm = rng.permutation(1000)
    assert np.array_equal(_fsum_mean(x), _fsum_mean(x[perm]))


def test_finite_sample_curves_layout_and_limits():
    spec = ExperimentSpec(**PARETO_PAIR, n=2000, reps=20, k_grid=(50, 200))
    c = finite_sample_study(spec)
    assert c.ena_mean.shape == (2, 2) and c.ekm_var.shape == (2, 2)
    params = tail_params(0.5, 1.5)
    np.testing.assert_allclose(c.ena_var_limit, [params.p * (2 ** (1 / params.gamma) - 1), params.p * (4 ** (1 / params.gamma) - 1)])
    rows = list(c.rows())
    assert len(rows) == 4 and rows[0]["k"] == 50 and rows[1]["s"] == 4.0


def test_single_replication_has_no_variance():
    spec = ExperimentSpec(**PARETO_PAIR, n=500, reps=1, k_grid=(50,))
    c = finite_sample_study(spec)
    assert np.all(np.isnan(c.ena_var)) and np.all(np.isnan(c.ekm_var))
    assert np.all(np.isfinite(c.ena_mean))


def test_results_independent_of_worker_count():
    spec = ExperimentSpec(**BURR_PAIR, n=(1000, 2000), reps=12, rules=RULES, master_seed=3)
    a = mse_study(spec, n_jobs=1)
    b = mse_study(spec, n_jobs=3)
    assert a.rows == b.rows
    fs = ExperimentSpec(**PARETO_PAIR, n=1000, reps=8, k_grid=(50, 100))
    ca, cb = finite_sample_study(fs, n_jobs=1), finite_sample_study(fs, n_jobs=2)
    assert np.array_equal(ca.ekm_var, cb.ekm_var) and np.array_equal(ca.ena_mean, cb.ena_mean)


def test_mse_table_values_and_lookup():
    spec = ExperimentSpec(**BURR_PAIR, n=1000, reps=10, rules=RULES)
    table = mse_study(spec)
    assert len(table.rows) == 3
    assert table.value(1000, "rot") == table.rows[0].mse100
    assert table.value(1000, "cvm", 0.25) == table.rows[2].mse100
    with pytest.raises(KeyError):
        table.value(1000, "ks", 2.0)
    assert table.rows[0].mean_k == 200 and table.rows[0].fallback_rate == 0
    with pytest.raises(ValueError):
        mse_study(ExperimentSpec(**BURR_PAIR, n=1000, reps=2))


def test_hill_replications_use_the_replication_streams():
    spec = ExperimentSpec(**PARETO_PAIR, n=1000, reps=30, master_seed=5)
    a = hill_replications(spec, 1000, 100)
    b = hill_replications(spec, 1000, 100, n_jobs=2)
    assert np.array_equal(a, b)
    table = mse_study(ExperimentSpec(**PARETO_PAIR, n=1000, reps=30, master_seed=5, rules=(RULES[0],)))
    sq = (hill_replications(spec, 1000, 200) - 0.5) ** 2
    assert table.rows[0].mse100 == pytest.approx(100 * math.fsum(sq) / 30, rel=1e-12)


def test_finite_sample_mean_vanishes_for_small_k():
    spec = ExperimentSpec(**PARETO_PAIR, n=10_000, reps=100, k_grid=(100,), s_list=(2.0,))
    c = finite_sample_study(spec)
    assert abs(c.ekm_mean[0, 0]) < 0.3
    assert abs(c.ekm_var[0, 0] / c.ekm_var_limit[0] - 1) < 0.5


@pytest.mark.slow
def test_gof_rules_beat_rule_of_thumb_at_large_n():
    spec = ExperimentSpec(**BURR_PAIR, n=50_000, reps=500, rules=RULES)
    table = mse_study(spec)
    rot = table.value(50_000, "rot")
    assert table.value(50_000, "ks", 1.5) < rot
    assert table.value(50_000, "cvm", 0.25) < rot
