import numpy as np
import pytest
from scipy import stats as scipy_stats

from nkbench import (
    ALGORITHMS,
    EvoConfig,
    FITNESS_ATOL,
    Genome,
    Population,
    ProbVector,
    bit_flip_mutation,
    evaluate,
    generate_instance,
    rtr_replace,
    run_evolution,
    solve,
    tournament_select,
    two_point_crossover,
    umda_learn,
    umda_sample,
    uniform_crossover,
)


def _pop_from_bits(bits, fitness):
    return Population(np.array(bits, dtype=np.uint8), np.array(fitness, dtype=np.float64))


def test_tournament_prefers_the_fitter():
    pop = _pop_from_bits([[1, 1], [0, 0]], [1.0, 0.0])
    picked = tournament_select(pop, 10_000, np.random.default_rng(0))
    share = sum(g.fitness == 1.0 for g in picked) / 10_000
    assert abs(share - 0.75) < 0.02  # P(best) = 1 - (1/2)^2


def test_tournament_uniform_on_equal_fitness():
    pop = _pop_from_bits([[i % 2] * 2 for i in range(8)], [0.5] * 8)
    idx_counts = np.zeros(8)
    rng = np.random.default_rng(1)
    from nkbench.evolution import _tournament_indices

    draws = _tournament_indices(pop.fitness, 100_000, rng)
    for i in range(8):
        idx_counts[i] = (draws == i).sum()
    assert scipy_stats.chisquare(idx_counts).pvalue > 0.001


def test_tournament_count_zero_is_empty():
    pop = _pop_from_bits([[0], [1]], [0.0, 1.0])
    assert tournament_select(pop, 0, np.random.default_rng(0)) == []


def test_uniform_crossover_identical_parents():
    a = Genome(np.array([1, 0, 1, 1], dtype=np.uint8))
    c1, c2 = uniform_crossover(a, a.copy(), np.random.default_rng(0))
    assert np.array_equal(c1.bits, a.bits) and np.array_equal(c2.bits, a.bits)


def test_uniform_crossover_conserves_positionwise_bits():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a = Genome(rng.integers(0, 2, 12, dtype=np.uint8))
        b = Genome(rng.integers(0, 2, 12, dtype=np.uint8))
        c1, c2 = uniform_crossover(a, b, rng)
        assert np.array_equal(
            c1.bits.astype(int) + c2.bits.astype(int),
            a.bits.astype(int) + b.bits.astype(int),
        )


def test_uniform_crossover_swap_rate():
    rng = np.random.default_rng(3)
    n = 10
    zeros = Genome(np.zeros(n, dtype=np.uint8))
    ones = Genome(np.ones(n, dtype=np.uint8))
    swapped = np.zeros(n)
    trials = 100_000
    for _ in range(trials):
        c1, _ = uniform_crossover(zeros, ones, rng)
        swapped += c1.bits
    rates = swapped / trials
    assert np.all(np.abs(rates - 0.5) < 0.01)


def test_two_point_crossover_conserves_and_blocks():
    rng = np.random.default_rng(4)
    n = 16
    zeros = Genome(np.zeros(n, dtype=np.uint8))
    ones = Genome(np.ones(n, dtype=np.uint8))
    saw_identity = False
    for _ in range(10_000):
        c1, c2 = two_point_crossover(zeros, ones, rng)
        assert np.array_equal(c1.bits.astype(int) + c2.bits.astype(int), np.ones(n, dtype=int))
        # the exchanged segment shows up as one contiguous run of ones
        run = np.flatnonzero(c1.bits)
        if run.size == 0:
            saw_identity = True
        else:
            assert run[-1] - run[0] + 1 == run.size
    assert saw_identity  # c1 == c2 happens and reproduces the parents


def test_mutation_extremes():
    g = Genome(np.array([1, 0, 1, 0], dtype=np.uint8))
    rng = np.random.default_rng(5)
    assert np.array_equal(bit_flip_mutation(g, 0.0, rng).bits, g.bits)
    assert np.array_equal(bit_flip_mutation(g, 1.0, rng).bits, 1 - g.bits)


def test_mutation_mean_flip_count():
    rng = np.random.default_rng(6)
    n = 40
    g = Genome(np.zeros(n, dtype=np.uint8))
    total = 0
    trials = 100_000
    for _ in range(trials):
        total += int(bit_flip_mutation(g, 1.0 / n, rng).bits.sum())
    assert abs(total / trials - 1.0) < 0.02


def test_rtr_requires_strict_improvement():
    pop = _pop_from_bits([[0, 0], [1, 1]], [0.5, 0.7])
    clone = Genome(np.array([1, 1], dtype=np.uint8), 0.7)  # equal fitness duplicate
    rtr_replace(pop, [clone], w=2, rng=np.random.default_rng(0))
    assert pop.fitness.tolist() == [0.5, 0.7]


def test_rtr_window_one_replaces_random_member_iff_fitter():
    rng = np.random.default_rng(7)
    pop = _pop_from_bits([[0, 0], [1, 1], [0, 1], [1, 0]], [0.1, 0.2, 0.3, 0.4])
    before = pop.fitness.copy()
    rtr_replace(pop, [Genome(np.array([1, 1], dtype=np.uint8), 0.05)], w=1, rng=rng)
    assert np.array_equal(pop.fitness, before)  # worse offspring never enters
    rtr_replace(pop, [Genome(np.array([1, 1], dtype=np.uint8), 9.0)], w=1, rng=rng)
    assert (pop.fitness == 9.0).sum() == 1


def test_rtr_preserves_size_and_max_fitness():
    rng = np.random.default_rng(8)
    bits = rng.integers(0, 2, (20, 10), dtype=np.uint8)
    fitness = rng.random(20)
    pop = Population(bits, fitness.copy())
    for _ in range(500):
        off = [Genome(rng.integers(0, 2, 10, dtype=np.uint8), float(rng.random()))]
        best_before = pop.fitness.max()
        rtr_replace(pop, off, w=4, rng=rng)
        assert pop.size == 20
        assert pop.fitness.max() >= best_before


def test_rtr_validates_window():
    pop = _pop_from_bits([[0], [1]], [0.0, 1.0])
    with pytest.raises(ValueError):
        rtr_replace(pop, [], w=3, rng=np.random.default_rng(0))


def test_umda_learn_exact_frequencies():
    rng = np.random.default_rng(9)
    bits = rng.integers(0, 2, (37, 9), dtype=np.uint8)
    pv = umda_learn([Genome(row) for row in bits])
    recount = np.array([sum(int(bits[r, i]) for r in range(37)) for i in range(9)])
    assert np.array_equal(pv.p, recount / 37)


def test_umda_learn_degenerate_cases():
    same = [Genome(np.array([1, 0, 1], dtype=np.uint8))] * 5
    assert umda_learn(same).p.tolist() == [1.0, 0.0, 1.0]
    pair = [Genome(np.array([0, 0], dtype=np.uint8)), Genome(np.array([1, 1], dtype=np.uint8))]
    assert umda_learn(pair).p.tolist() == [0.5, 0.5]
    with pytest.raises(ValueError):
        umda_learn([])


def test_umda_sample_deterministic_patterns():
    rng = np.random.default_rng(10)
    zeros = umda_sample(ProbVector(np.zeros(6)), 50, rng)
    assert all(g.bits.sum() == 0 for g in zeros)
    pattern = np.array([1.0, 0.0, 1.0, 0.0])
    fixed = umda_sample(ProbVector(pattern), 50, rng)
    assert all(np.array_equal(g.bits, pattern.astype(np.uint8)) for g in fixed)


def test_umda_sample_rates_and_independence():
    rng = np.random.default_rng(11)
    n = 20
    genomes = umda_sample(ProbVector(np.full(n, 0.3)), 100_000, rng)
    bits = np.array([g.bits for g in genomes], dtype=np.float64)
    rates = bits.mean(axis=0)
    assert np.all(np.abs(rates - 0.3) < 0.01)
    corr = np.corrcoef(bits, rowvar=False)
    off_diag = corr[~np.eye(n, dtype=bool)]
    assert np.all(np.abs(off_diag) < 0.02)


def test_umda_learn_sample_fixed_point():
    rng = np.random.default_rng(12)
    p = rng.random(15)
    samples = umda_sample(ProbVector(p), 100_000, rng)
    learned = umda_learn(samples)
    assert np.all(np.abs(learned.p - p) < 0.01)


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_run_evolution_solves_separable_in_generation_zero(algorithm):
    inst = generate_instance(16, 0, seed=13)
    target = float(inst.tables.max(axis=1).sum())
    cfg = EvoConfig(algorithm=algorithm, population_size=16, target_value=target)
    out = run_evolution(inst, cfg, seed=1)
    assert out.success and out.generations == 0
    assert out.evaluations == 16


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_run_evolution_deterministic_and_accounted(algorithm):
    inst = generate_instance(20, 3, seed=14)
    res = solve(inst)
    cfg = EvoConfig(algorithm=algorithm, population_size=16, target_value=res.optimum_value)
    a = run_evolution(inst, cfg, seed=7)
    b = run_evolution(inst, cfg, seed=7)
    assert (a.success, a.generations, a.evaluations, a.dhc_flips) == (
        b.success,
        b.generations,
        b.evaluations,
        b.dhc_flips,
    )
    assert np.array_equal(a.best_bits, b.best_bits)
    assert a.evaluations == 16 * (a.generations + 1)
    if a.success:
        assert evaluate(inst, a.best_bits) >= res.optimum_value - FITNESS_ATOL


def test_run_evolution_requires_target():
    inst = generate_instance(10, 2, seed=15)
    cfg = EvoConfig(algorithm="ga-uniform", population_size=8)
    with pytest.raises(ValueError):
        run_evolution(inst, cfg, seed=0)


def test_run_evolution_debug_checks_pass():
    inst = generate_instance(14, 2, seed=16)
    res = solve(inst)
    cfg = EvoConfig(
        algorithm="ga-uniform",
        population_size=8,
        target_value=res.optimum_value + 1.0,  # unreachable: force full generations
        max_generations=3,
        debug_checks=True,
    )
    out = run_evolution(inst, cfg, seed=2)
    assert not out.success and out.generations == 3
    assert out.evaluations == 8 * 4


def test_evoconfig_validation():
    with pytest.raises(ValueError):
        EvoConfig(algorithm="nope", population_size=8).validate()
    with pytest.raises(ValueError):
        EvoConfig(algorithm="umda", population_size=7).validate()
    with pytest.raises(ValueError):
        EvoConfig(algorithm="umda", population_size=8, p_c=1.5).validate()
    cfg = EvoConfig(algorithm="umda", population_size=40).resolved(n=30)
    assert cfg.p_m == pytest.approx(1 / 30)
    assert cfg.rtr_window == 8  # min(n, N/5)
    assert cfg.max_generations == 300


def test_population_members_round_trip():
    pop = _pop_from_bits([[1, 0], [0, 1]], [0.25, 0.75])
    members = pop.members()
    assert [g.fitness for g in members] == [0.25, 0.75]
    members[0].bits[0] = 0  # copies, not views
    assert pop.bits[0, 0] == 1
