import itertools
import math

import numpy as np
import pytest

from helpers import ctx, lexicon, obj
from lexsim.experiment import (
    ExperimentConfig,
    SuccessCurve,
    evaluate,
    run_experiment,
    run_repetition,
    run_sweep,
)
from lexsim.learners import PELearner
from lexsim.tutor import TutorLexicon
from lexsim.world import Object, World, generate_world

TINY = dict(
    world_size=8,
    context_size=3,
    lexicon_size=5,
    training_interactions=60,
    test_interactions=20,
    checkpoints=(0, 20, 60),
    repetitions=3,
    seed=5,
)


def corner_world():
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
    objects = tuple(Object(i, corners[i]) for i in range(8))
    return World(objects, corners, 3), corners


def test_config_validation_names_offending_key():
    with pytest.raises(ValueError, match="f must"):
        ExperimentConfig(f=1.5)
    with pytest.raises(ValueError, match="alpha"):
        ExperimentConfig(alpha=-0.2)
    with pytest.raises(ValueError, match="context_size"):
        ExperimentConfig(world_size=4, context_size=4)
    with pytest.raises(ValueError, match="context_size"):
        ExperimentConfig(context_size=1)
    with pytest.raises(ValueError, match="algorithm"):
        ExperimentConfig(algorithm="gbdt")
    with pytest.raises(ValueError, match="strategy"):
        ExperimentConfig(strategy="mime")
    with pytest.raises(ValueError, match="checkpoints"):
        ExperimentConfig(checkpoints=(10, 5))
    with pytest.raises(ValueError, match="checkpoints"):
        ExperimentConfig(checkpoints=(0, 20000), training_interactions=10000)
    with pytest.raises(ValueError, match="checkpoints"):
        ExperimentConfig(checkpoints=())
    with pytest.raises(ValueError, match="repetitions"):
        ExperimentConfig(repetitions=0)
    with pytest.raises(ValueError, match="seed"):
        ExperimentConfig(seed=-1)


def test_config_defaults_match_headline_setup():
    config = ExperimentConfig()
    assert (config.world_size, config.context_size, config.lexicon_size) == (32, 4, 50)
    assert (config.test_interactions, config.repetitions) == (100, 20)
    assert config.k == 30 and config.alpha == 0.05


def test_evaluate_empty_learner_scores_zero():
    rng = np.random.default_rng(0)
    world = generate_world(8, 3, rng)
    lex = lexicon([("w", (0.5, 0.5, 0.5))])
    config = ExperimentConfig(**TINY)
    rate = evaluate(lex, PELearner(), world, config, np.random.default_rng(1))
    assert rate == 0.0


def test_evaluate_rate_granularity():
    config = ExperimentConfig()
    assert config.test_interactions == 100
    rng = np.random.default_rng(2)
    world = generate_world(32, 3, rng)
    lex = lexicon([("w", (0.5, 0.5, 0.5))])
    learner = PELearner()
    seed_obj = obj(100, (0.2, 0.2, 0.2))
    learner.observe(ctx(seed_obj), "w", pointed=seed_obj)
    rate = evaluate(lex, learner, world, config, np.random.default_rng(3))
    assert math.isclose(rate * 100, round(rate * 100))


def test_evaluate_perfect_learner_on_separable_world():
    # objects and prototypes both sit on the cube corners: production always
    # picks the topic's own corner word (margin >= 1 beats any other corner,
    # whose score cannot exceed sqrt(3) - 1), and interpretation recovers the
    # corner at distance 0, so every interaction must succeed
    world, corners = corner_world()
    lex = TutorLexicon(tuple(f"c{i}" for i in range(8)), corners.copy())
    learner = PELearner()
    for i, word in enumerate(lex.words):
        carrier = obj(50 + i, corners[i])
        learner.observe(ctx(carrier), word, pointed=carrier)
    config = ExperimentConfig(
        world_size=8, context_size=4, lexicon_size=8, strategy="descriptive",
        test_interactions=200, checkpoints=(0,), training_interactions=1,
    )
    rate = evaluate(lex, learner, world, config, np.random.default_rng(4))
    assert rate == 1.0


def test_run_repetition_checkpoint_zero_is_untrained():
    config = ExperimentConfig(**{**TINY, "checkpoints": (0,), "training_interactions": 1})
    rates = run_repetition(config, rep=0)
    assert rates == [0.0]


def test_run_repetition_is_deterministic_per_seed_and_rep():
    config = ExperimentConfig(**TINY)
    assert run_repetition(config, 1) == run_repetition(config, 1)
    assert run_repetition(config, 1) != run_repetition(config, 2)


def test_success_curve_single_repetition_has_zero_std():
    config = ExperimentConfig(**{**TINY, "repetitions": 1})
    curve = run_experiment(config)
    assert (curve.std == 0.0).all()


def test_success_curve_mean_of_constant_rows():
    curve = SuccessCurve((0, 10), np.array([[0.25, 0.5]] * 6))
    assert np.allclose(curve.mean, [0.25, 0.5])
    assert np.allclose(curve.std, 0.0)


def test_success_curve_statistics_match_recomputation():
    config = ExperimentConfig(**TINY)
    curve = run_experiment(config)
    rates = curve.rates
    mean = rates.sum(axis=0) / rates.shape[0]
    centered = rates - mean
    std = np.sqrt((centered**2).sum(axis=0) / (rates.shape[0] - 1))
    assert np.abs(curve.mean - mean).max() <= 1e-12
    assert np.abs(curve.std - std).max() <= 1e-12
    assert (curve.rates >= 0).all() and (curve.rates <= 1).all()
    assert (curve.mean >= curve.rates.min(axis=0)).all()
    assert (curve.mean <= curve.rates.max(axis=0)).all()


def test_run_experiment_parallel_results_match_serial():
    config = ExperimentConfig(**TINY)
    serial = run_experiment(config, jobs=1)
    parallel = run_experiment(config, jobs=2)
    assert np.array_equal(serial.rates, parallel.rates)


def test_run_sweep_covers_cartesian_grid():
    config = ExperimentConfig(**{**TINY, "repetitions": 2, "checkpoints": (0, 20)})
    f_values = [0.0, 0.25, 0.5, 0.75, 1.0]
    algorithms = ["knn", "pe", "ap", "cwp"]
    results = run_sweep(config, f_values, algorithms, ["discriminative"])
    assert len(results) == 20
    assert set(results) == {
        (a, f, "discriminative") for a in algorithms for f in f_values
    }


def test_run_sweep_singleton_grid():
    config = ExperimentConfig(**{**TINY, "repetitions": 2})
    results = run_sweep(config, [0.5], ["pe"], ["descriptive"])
    assert list(results) == [("pe", 0.5, "descriptive")]


def test_run_sweep_results_do_not_depend_on_grid_order():
    config = ExperimentConfig(**{**TINY, "repetitions": 2, "checkpoints": (0, 20)})
    forward = run_sweep(config, [0.0, 1.0], ["pe", "knn"], ["discriminative"])
    backward = run_sweep(config, [1.0, 0.0], ["knn", "pe"], ["discriminative"])
    assert set(forward) == set(backward)
    for key, curve in forward.items():
        assert np.array_equal(curve.rates, backward[key].rates)


def test_run_sweep_rejects_empty_lists():
    config = ExperimentConfig(**TINY)
    with pytest.raises(ValueError):
        run_sweep(config, [], ["pe"], ["discriminative"])


def test_environments_are_paired_across_conditions():
    # same repetition index means the same world and tutor regardless of the
    # learner condition, keeping between-condition comparisons paired
    from lexsim.seeding import rng_for
    from lexsim.world import generate_world as gw

    w1 = gw(8, 3, rng_for(5, 2, "world"))
    w2 = gw(8, 3, rng_for(5, 2, "world"))
    assert np.array_equal(w1.features, w2.features)
