import numpy as np
import pytest
from scipy import stats

from dsm_eda.eda import (
    EdaConfig,
    format_record,
    read_record,
    run_eda,
    select_truncation,
    uniform_random_permutation,
)
from dsm_eda.perm import Permutation
from dsm_eda.qap import QapInstance, evaluate

from oracles import all_perms, qap_brute_force


def random_instance(seed, n, name="syn"):
    rng = np.random.default_rng(seed)
    return QapInstance(name, rng.integers(0, 100, (n, n)), rng.integers(0, 100, (n, n)))


def test_config_defaults():
    cfg = EdaConfig().resolve(15)
    assert (cfg.lam, cfg.mu, cfg.budget) == (150, 15, 22_500)
    assert cfg.alpha == pytest.approx(1 / 225)


@pytest.mark.parametrize(
    "kwargs",
    [dict(mu=0), dict(mu=200, lam=100), dict(alpha=0.0), dict(alpha=2.0), dict(budget=10), dict(sampler="xx")],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        EdaConfig(**kwargs).resolve(10)


def test_uniform_random_permutation():
    rng = np.random.default_rng(0)
    assert uniform_random_permutation(1, rng).entries == (1,)
    keys = [Permutation.from_zero_based(p) for p in all_perms(3)]
    tally = dict.fromkeys(keys, 0)
    n_draws = 60_000
    for _ in range(n_draws):
        tally[uniform_random_permutation(3, rng)] += 1
    sigma = np.sqrt(n_draws * (1 / 6) * (5 / 6))
    assert all(abs(c - n_draws / 6) <= 3 * sigma for c in tally.values())
    a = [uniform_random_permutation(9, np.random.default_rng(4)) for _ in range(3)]
    b = [uniform_random_permutation(9, np.random.default_rng(4)) for _ in range(3)]
    assert a == b


def test_select_truncation():
    ps = [Permutation.from_zero_based(p) for p in all_perms(3)]
    pop = list(zip(ps, [5, 3, 9, 1, 3, 7]))
    assert [v for _, v in select_truncation(pop, 6)] == [1, 3, 3, 5, 7, 9]
    # equal values keep population order
    assert [p for p, _ in select_truncation(pop, 3)] == [ps[3], ps[1], ps[4]]
    flat = [(p, 0) for p in ps]
    assert select_truncation(flat, 4) == flat[:4]
    with pytest.raises(ValueError):
        select_truncation(pop, 7)
    with pytest.raises(ValueError):
        select_truncation([], 1)


def test_select_truncation_against_full_sort():
    rng = np.random.default_rng(3)
    ps = [Permutation.from_zero_based(rng.permutation(5)) for _ in range(50)]
    values = rng.integers(0, 20, 50).tolist()
    pop = list(zip(ps, values))
    by_value = sorted(pop, key=lambda e: e[1])
    assert select_truncation(pop, 5) == by_value[:5]


def test_single_generation_budget():
    inst = random_instance(1, 6)
    rec = run_eda(inst, EdaConfig(budget=60, seed=3))
    assert rec.iterations == []
    assert rec.evaluations_used == 60
    rng = np.random.default_rng(3)
    initial = [uniform_random_permutation(6, rng) for _ in range(60)]
    assert rec.best_value == min(evaluate(inst, p) for p in initial)


@pytest.mark.parametrize("sampler", ["ps", "as", "gs"])
def test_run_invariants(sampler):
    inst = random_instance(2, 7)
    budget = 7 * 7 * 20 + 13
    rec = run_eda(inst, EdaConfig(sampler=sampler, budget=budget, seed=5))
    assert rec.evaluations_used == budget
    best = [it.best_so_far for it in rec.iterations]
    assert all(x >= y for x, y in zip(best, best[1:]))
    assert rec.best_value == best[-1] == evaluate(inst, rec.best_permutation)
    assert rec.best_value <= min(it.min_sampled for it in rec.iterations)
    assert [it.t for it in rec.iterations] == list(range(1, len(rec.iterations) + 1))
    # last generation is trimmed to the remaining budget
    assert rec.iterations[-1].evals - rec.iterations[-2].evals == 13


def test_model_is_learned_from_current_best(monkeypatch):
    from dsm_eda import eda

    inst = random_instance(4, 5)
    seen = []
    real_learn = eda.learn_smoothed
    real_select = eda.select_truncation

    def spy_select(pop, mu):
        chosen = real_select(pop, mu)
        seen.append((list(pop), chosen))
        return chosen

    def spy_learn(sample, cfg):
        assert [p for p, _ in seen[-1][1]] == list(sample)
        return real_learn(sample, cfg)

    monkeypatch.setattr(eda, "select_truncation", spy_select)
    monkeypatch.setattr(eda, "learn_smoothed", spy_learn)
    eda.run_eda(inst, EdaConfig(budget=400, seed=1))
    assert len(seen[0][0]) == 50
    assert all(len(pop) == 55 for pop, _ in seen[1:])
    # elitism: the selected set always holds the best value evaluated so far
    best = float("inf")
    for pop, chosen in seen:
        best = min(best, min(v for _, v in pop))
        assert chosen[0][1] == best


def test_never_below_brute_force_optimum():
    for seed in range(6):
        inst = random_instance(seed, 6)
        opt = qap_brute_force(inst.B, inst.H)
        rec = run_eda(inst, EdaConfig(budget=900, seed=seed))
        assert rec.best_value >= opt


def test_reproducible():
    inst = random_instance(7, 8)
    cfg = EdaConfig(sampler="ps", budget=1000, seed=99)
    assert format_record(run_eda(inst, cfg)) == format_record(run_eda(inst, cfg))


def test_record_round_trip(tmp_path):
    inst = random_instance(8, 6)
    rec = run_eda(inst, EdaConfig(sampler="as", budget=500, seed=1))
    path = tmp_path / "r.csv"
    path.write_text(format_record(rec, best_known=1000.0))
    header, rows = read_record(path)
    assert header["best_value"] == rec.best_value
    assert header["sampler"] == "as"
    assert Permutation.parse(header["best_permutation"]) == rec.best_permutation
    assert header["relative_deviation"] == pytest.approx((rec.best_value - 1000) / 1000)
    assert rows == rec.iterations


def test_pure_random_search_has_no_trend():
    inst = random_instance(10, 10)
    slopes = []
    for seed in range(5):
        rec = run_eda(inst, EdaConfig(sampler="ps", alpha=1.0, budget=6000, seed=seed))
        t = [it.t for it in rec.iterations]
        mean = [it.mean_sampled for it in rec.iterations]
        slopes.append(stats.linregress(t, mean))
    for fit in slopes:
        assert fit.pvalue > 1e-3


def test_ps_improves_sampled_quality_on_synthetic_instance():
    inst = random_instance(11, 12)
    runs = [run_eda(inst, EdaConfig(sampler="ps", seed=seed)) for seed in range(5)]
    mean = np.mean([[it.mean_sampled for it in rec.iterations] for rec in runs], axis=0)
    tau = stats.kendalltau(range(len(mean)), mean)
    assert tau.statistic < 0 and tau.pvalue < 0.01
