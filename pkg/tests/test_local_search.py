import numpy as np
import pytest

from nkbench import FITNESS_ATOL, Genome, dhc, evaluate, generate_instance, stochastic_hill_climb
from nkbench.local_search import dhc_batch, stochastic_climb_batch


def _random_bits(rng, n):
    return rng.integers(0, 2, n, dtype=np.uint8)


def test_dhc_fixed_point_when_already_optimal():
    inst = generate_instance(18, 3, seed=1)
    first = dhc(inst, Genome(_random_bits(np.random.default_rng(0), 18)))
    again = dhc(inst, first.genome)
    assert again.flips == 0
    assert np.array_equal(again.genome.bits, first.genome.bits)


def test_dhc_solves_separable_and_counts_flips():
    inst = generate_instance(12, 0, seed=2)
    best_bits = np.argmax(inst.tables, axis=1).astype(np.uint8)
    start = np.zeros(12, dtype=np.uint8)
    res = dhc(inst, Genome(start))
    assert np.array_equal(res.genome.bits, best_bits)
    assert res.flips == int(best_bits.sum())  # one accepted move per disagreeing bit
    assert res.genome.fitness == pytest.approx(
        float(inst.tables.max(axis=1).sum()), abs=FITNESS_ATOL
    )


def test_dhc_results_admit_no_improving_flip():
    # exhaustive single-flip re-check using the full evaluator
    rng = np.random.default_rng(7)
    cases = 0
    for seed in range(20):
        inst = generate_instance(20, 4, seed=seed)
        for _ in range(50):
            res = dhc(inst, Genome(_random_bits(rng, 20)))
            base = evaluate(inst, res.genome.bits)
            assert res.genome.fitness == pytest.approx(base, abs=FITNESS_ATOL)
            for pos in range(20):
                flipped = res.genome.bits.copy()
                flipped[pos] ^= 1
                assert evaluate(inst, flipped) <= base + 1e-12
            cases += 1
    assert cases == 1000


def test_dhc_never_decreases_fitness():
    rng = np.random.default_rng(8)
    inst = generate_instance(25, 5, seed=3)
    for _ in range(30):
        start = _random_bits(rng, 25)
        res = dhc(inst, Genome(start))
        assert res.genome.fitness >= evaluate(inst, start) - 1e-12


def test_dhc_is_deterministic():
    inst = generate_instance(22, 3, seed=4)
    start = _random_bits(np.random.default_rng(1), 22)
    a = dhc(inst, Genome(start.copy()))
    b = dhc(inst, Genome(start.copy()))
    assert np.array_equal(a.genome.bits, b.genome.bits)
    assert a.flips == b.flips and a.proposals == b.proposals


def test_dhc_batch_matches_single_calls():
    inst = generate_instance(19, 4, seed=5)
    starts = np.random.default_rng(2).integers(0, 2, (40, 19), dtype=np.uint8)
    bits, fitness, flips = dhc_batch(inst, starts.copy())
    for i in range(40):
        single = dhc(inst, Genome(starts[i]))
        assert np.array_equal(bits[i], single.genome.bits)
        assert fitness[i] == single.genome.fitness
        assert flips[i] == single.flips


def test_stochastic_climb_never_worsens():
    rng = np.random.default_rng(3)
    inst = generate_instance(16, 3, seed=6)
    for trial in range(10):
        start = _random_bits(rng, 16)
        res = stochastic_hill_climb(inst, Genome(start), np.random.default_rng(trial))
        assert res.genome.fitness >= evaluate(inst, start) - 1e-12
        assert res.flips >= 0 and res.proposals >= res.flips


def test_stochastic_climb_deterministic_given_seed():
    inst = generate_instance(16, 3, seed=6)
    start = _random_bits(np.random.default_rng(4), 16)
    a = stochastic_hill_climb(inst, Genome(start.copy()), np.random.default_rng(11))
    b = stochastic_hill_climb(inst, Genome(start.copy()), np.random.default_rng(11))
    assert np.array_equal(a.genome.bits, b.genome.bits)
    assert a.flips == b.flips and a.proposals == b.proposals


def test_stochastic_climb_reaches_separable_optimum():
    hits = 0
    for seed in range(100):
        inst = generate_instance(16, 0, seed=seed)
        start = Genome(np.zeros(16, dtype=np.uint8))
        res = stochastic_hill_climb(inst, start, np.random.default_rng(seed))
        if res.genome.fitness == pytest.approx(
            float(inst.tables.max(axis=1).sum()), abs=FITNESS_ATOL
        ):
            hits += 1
    assert hits == 100


def test_stochastic_batch_matches_sequential():
    inst = generate_instance(21, 4, seed=9)
    seeds = [101, 202, 303, 404]
    batch_bits, batch_fit = stochastic_climb_batch(inst, seeds)
    for i, s in enumerate(seeds):
        gen = np.random.Generator(np.random.PCG64(s))
        start = gen.integers(0, 2, size=21, dtype=np.uint8)
        res = stochastic_hill_climb(inst, Genome(start), gen)
        assert np.array_equal(batch_bits[i], res.genome.bits)
        assert batch_fit[i] == pytest.approx(res.genome.fitness, abs=1e-12)
