import itertools

import numpy as np
import pytest

from lexsim.world import Context, generate_world, sample_context


def test_generate_world_is_deterministic_and_bounded():
    w1 = generate_world(32, 3, np.random.default_rng(123))
    w2 = generate_world(32, 3, np.random.default_rng(123))
    assert len(w1) == 32
    assert w1.features.shape == (32, 3)
    assert np.array_equal(w1.features, w2.features)
    assert ((w1.features >= 0.0) & (w1.features <= 1.0)).all()
    assert [o.id for o in w1.objects] == list(range(32))


def test_generate_world_single_object():
    w = generate_world(1, 3, np.random.default_rng(0))
    assert len(w.objects) == 1
    assert w.objects[0].id == 0


def test_generate_world_rejects_empty_dimensions():
    with pytest.raises(ValueError):
        generate_world(0, 3, np.random.default_rng(0))
    with pytest.raises(ValueError):
        generate_world(4, 0, np.random.default_rng(0))


def test_generate_world_coordinate_means_match_uniform():
    # law of large numbers: per-coordinate sample mean of U[0,1] is near 0.5
    w = generate_world(10000, 3, np.random.default_rng(99))
    means = w.features.mean(axis=0)
    assert ((means >= 0.48) & (means <= 0.52)).all()


def test_sample_context_draws_distinct_members():
    w = generate_world(32, 3, np.random.default_rng(5))
    rng = np.random.default_rng(6)
    for _ in range(200):
        c = sample_context(w, 4, rng)
        ids = [o.id for o in c.objects]
        assert len(set(ids)) == 4
        assert all(0 <= i <= 31 for i in ids)
        assert np.array_equal(c.features, w.features[c.ids])


def test_sample_context_no_duplicates_over_many_draws():
    w = generate_world(8, 3, np.random.default_rng(1))
    rng = np.random.default_rng(2)
    for _ in range(10_000):
        c = sample_context(w, 3, rng)
        assert len(set(c.ids.tolist())) == 3


def test_sample_context_is_deterministic():
    w = generate_world(16, 3, np.random.default_rng(3))
    a = [sample_context(w, 4, np.random.default_rng(77)).ids.tolist() for _ in range(1)]
    b = [sample_context(w, 4, np.random.default_rng(77)).ids.tolist() for _ in range(1)]
    assert a == b


def test_sample_context_pair_frequencies_are_uniform():
    # 3 objects, pairs of 2: each of the C(3,2)=3 unordered pairs has
    # probability 1/3 under uniform sampling without replacement
    w = generate_world(3, 3, np.random.default_rng(4))
    rng = np.random.default_rng(8)
    pairs = {frozenset(p): 0 for p in itertools.combinations(range(3), 2)}
    draws = 10_000
    for _ in range(draws):
        c = sample_context(w, 2, rng)
        pairs[frozenset(c.ids.tolist())] += 1
    for count in pairs.values():
        assert abs(count / draws - 1 / 3) < 0.05


def test_sample_context_rejects_bad_sizes():
    w = generate_world(32, 3, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_context(w, 32, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_context(w, 40, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample_context(w, 1, np.random.default_rng(0))


def test_context_rejects_duplicate_ids():
    w = generate_world(4, 3, np.random.default_rng(0))
    o = w.objects[0]
    with pytest.raises(ValueError):
        Context.of([o, o])
