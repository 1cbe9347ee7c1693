import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import infmax as im
from infmax import rng


def deterministic_path():
    return im.ic_model(im.Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]))


# -- configuration ----------------------------------------------------------

def test_config_validation():
    im.OracleConfig(1, 1, 0)
    im.OracleConfig(3, 2, 1)
    with pytest.raises(ValueError, match="odd"):
        im.OracleConfig(4, 2, 1)
    with pytest.raises(ValueError):
        im.OracleConfig(0, 2, 1)
    with pytest.raises(ValueError):
        im.OracleConfig(1, 0, 1)


def test_pool_layout_owns_consecutive_indices():
    model = im.families.gen_random_ic(8, 14, seed=1)
    config = im.OracleConfig(3, 2, 2, master_seed=9)
    oracle = im.build_oracle(model, config)
    assert len(oracle.simulations) == 6
    for i in range(6):
        expect = im.sample_simulation(model, 9, i)
        assert np.array_equal(oracle.simulations[i].live, expect.live)
    for pool in range(3):
        rows = oracle.pool_simulations(pool)
        assert rows.shape == (2, model.graph.num_edges)
        assert np.array_equal(rows[0], oracle.simulations[2 * pool].live)


# -- query semantics --------------------------------------------------------

def test_query_on_deterministic_model_is_exact():
    oracle = im.build_oracle(deterministic_path(), im.OracleConfig(5, 4, 2, 0))
    assert oracle.query((0,)) == 3.0
    assert im.query(oracle, (0,)) == 3.0
    # one pool of one simulation degenerates to that simulation's value
    tiny = im.build_oracle(deterministic_path(), im.OracleConfig(1, 1, 2, 0))
    sim = im.sample_simulation(deterministic_path(), 0, 0)
    assert tiny.query((1,)) == im.reach_value(deterministic_path().graph, sim, (1,), 2)


def test_query_is_median_of_pool_averages():
    model = im.families.gen_random_ic(9, 16, seed=4)
    oracle = im.build_oracle(model, im.OracleConfig(5, 7, 2, 3))
    pools = oracle.pool_averages((1, 4))
    assert oracle.query((1, 4)) == np.median(pools)
    assert np.median([2.0, 5.0, 3.0]) == 3.0  # middle order statistic


def test_single_pool_query_is_plain_average():
    model = im.families.gen_random_ic(9, 16, seed=4)
    oracle = im.build_oracle(model, im.OracleConfig(1, 50, 2, 3))
    values = im.reach_values_batch(model.graph, oracle.pool_simulations(0), (2,), 2)
    assert oracle.query((2,)) == pytest.approx(values.sum() / 50)


@given(seed=st.integers(0, 1000), pools=st.sampled_from([1, 3, 5]),
       pool_size=st.integers(1, 8))
def test_median_sandwich(seed, pools, pool_size):
    model = im.families.gen_random_ic(8, 14, seed=seed % 20)
    oracle = im.build_oracle(model, im.OracleConfig(pools, pool_size, 2, seed))
    averages = oracle.pool_averages((0,))
    value = oracle.query((0,))
    assert averages.min() <= value <= averages.max()


def test_query_rejects_empty_seeds():
    oracle = im.build_oracle(deterministic_path(), im.OracleConfig(1, 1, 1, 0))
    with pytest.raises(ValueError, match="empty seed set"):
        oracle.query(())


# -- sizing ------------------------------------------------------------------

def test_averaging_size_rule():
    config = im.size_for_guarantee(0.5, 0.1, 3.0, im.AVERAGING)
    assert (config.pools, config.pool_size) == (1, 120)


def test_median_of_averages_size_rule():
    config = im.size_for_guarantee(0.1, 0.01, 4.0, im.MEDIAN_OF_AVERAGES)
    assert config.pool_size == 1600
    assert config.pools == 129
    assert im.required_pools(math.exp(-1.0)) == 29


def test_size_rule_rejects_bad_parameters():
    for eps, delta, c in [(0.0, 0.1, 1.0), (1.0, 0.1, 1.0), (0.5, 0.0, 1.0),
                          (0.5, 1.0, 1.0), (0.5, 0.1, 0.5)]:
        with pytest.raises(ValueError):
            im.size_for_guarantee(eps, delta, c, im.AVERAGING)
    with pytest.raises(ValueError, match="mode"):
        im.size_for_guarantee(0.5, 0.1, 1.0, "bogus")


def test_check_eps_approx_examples():
    assert im.check_eps_approx(95.0, 100.0, 50.0, 0.1)
    assert im.check_eps_approx(2.0, 1.0, 100.0, 0.05)
    assert not im.check_eps_approx(120.0, 100.0, 50.0, 0.1)


# -- statistical behaviour ---------------------------------------------------

def test_averaging_oracle_is_unbiased():
    model = im.families.gen_tree(2)
    report = im.exact_report(model, (0,), 2, compute_opt1=False)
    rebuilds, pool_size = 500, 20
    total = 0.0
    for i in range(rebuilds):
        oracle = im.build_oracle(model, im.OracleConfig(1, pool_size, 2, 50_000 + i))
        total += oracle.query((0,))
    grand_mean = total / rebuilds
    band = 4.0 * math.sqrt(report.variance / (rebuilds * pool_size))
    assert abs(grand_mean - report.influence) <= band


def test_averaging_oracle_unbiased_on_mixture():
    # one pool of 1000 simulations estimates every node of the two-world
    # mixture within four standard errors of its exact influence
    model = im.families.gen_two_world_mixture()
    tau = im.families.TWO_WORLD_TAU
    oracle = im.build_oracle(model, im.OracleConfig(1, 1000, tau, master_seed=2))
    for v in range(model.num_nodes):
        report = im.exact_report(model, (v,), tau, compute_opt1=False)
        band = 4.0 * math.sqrt(max(report.variance, 1e-12) / 1000)
        assert abs(oracle.query((v,)) - report.influence) <= band


def test_moa_is_monotone_exhaustively():
    model = im.families.gen_random_ic(6, 10, seed=6)
    oracle = im.build_oracle(model, im.OracleConfig(5, 6, 2, 8))
    from itertools import combinations
    values = {}
    for size in range(1, 7):
        for subset in combinations(range(6), size):
            values[subset] = oracle.query(subset)
    for subset, value in values.items():
        for u in range(6):
            if u in subset:
                continue
            assert values[tuple(sorted(set(subset) | {u}))] >= value - 1e-12


def test_single_pool_oracle_is_monotone_and_submodular_exhaustively():
    model = im.families.gen_random_ic(6, 10, seed=6)
    oracle = im.build_oracle(model, im.OracleConfig(1, 25, 2, 8))
    from itertools import combinations
    values = {(): 0.0}
    for size in range(1, 7):
        for subset in combinations(range(6), size):
            values[subset] = oracle.query(subset)
    for subset, value in values.items():
        for u in range(6):
            if u in subset:
                continue
            assert values[tuple(sorted(set(subset) | {u}))] >= value - 1e-12
    for s_size in range(0, 3):
        for s_set in combinations(range(6), s_size):
            for t_set in combinations(range(6), s_size + 1):
                if not set(s_set) <= set(t_set):
                    continue
                for u in range(6):
                    if u in t_set:
                        continue
                    gain_s = values[tuple(sorted(set(s_set) | {u}))] - values[s_set]
                    gain_t = values[tuple(sorted(set(t_set) | {u}))] - values[t_set]
                    assert gain_s >= gain_t - 1e-9


# -- reverse-reachability searches -------------------------------------------

def test_rrs_full_simulation_on_deterministic_model():
    model = deterministic_path()
    truth = np.array([3.0, 2.0, 1.0])
    est = im.rrs_estimate(model, im.FULL_SIMULATION, 30_000, 2, master_seed=0)
    q = truth / 3.0
    sigma = 3.0 * np.sqrt(q * (1 - q) / 30_000)
    assert np.all(np.abs(est - truth) <= 4 * sigma + 1e-9)


def test_rrs_two_world_bias():
    model = im.families.gen_two_world_mixture()
    tau = im.families.TWO_WORLD_TAU
    n = model.num_nodes
    truth = np.array([im.exact_report(model, (v,), tau, compute_opt1=False).influence
                      for v in range(n)])
    marg_truth = np.array(
        [im.exact_report(im.marginal_edge_model(model), (v,), tau,
                         compute_opt1=False).influence for v in range(n)])
    full = im.rrs_estimate(model, im.FULL_SIMULATION, 40_000, tau, master_seed=1)
    marg = im.rrs_estimate(model, im.MARGINAL, 40_000, tau, master_seed=1)
    assert int(np.argmax(truth)) == 0
    assert int(np.argmax(marg_truth)) == 5
    assert int(np.argmax(full)) == 0
    assert int(np.argmax(marg)) == 5


def test_rrs_marginal_equals_full_on_pure_ic():
    # with independent edges the marginal sampler is the model itself
    model = im.families.gen_random_ic(8, 14, seed=3)
    searches = 20_000
    full = im.rrs_estimate(model, im.FULL_SIMULATION, searches, 2, master_seed=5)
    marg = im.rrs_estimate(model, im.MARGINAL, searches, 2, master_seed=6)
    truth = np.array([im.exact_report(model, (v,), 2, compute_opt1=False).influence
                      for v in range(8)])
    q = truth / 8.0
    sigma = 8.0 * np.sqrt(q * (1 - q) / searches)
    assert np.all(np.abs(full - marg) <= 4 * np.sqrt(2) * sigma + 1e-9)


def test_rrs_estimate_validation():
    model = deterministic_path()
    with pytest.raises(ValueError, match="mode"):
        im.rrs_estimate(model, "bogus", 10, 1, 0)
    with pytest.raises(ValueError, match="at least one"):
        im.rrs_estimate(model, im.FULL_SIMULATION, 0, 1, 0)


def test_marginal_edge_model_of_mixture():
    model = im.families.gen_two_world_mixture()
    marg = im.marginal_edge_model(model)
    assert marg.kind == im.IC
    assert np.allclose(marg.graph.probs, 0.5)
