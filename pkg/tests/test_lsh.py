import math

import numpy as np
import pytest

from ddapprox.lsh import (build_family, hash_code, hierarchical_bucketize,
                          lsh_match, lsh_match_detail, realify)

import oracles


def test_realify_layout():
    assert np.array_equal(realify(np.array([1 + 0j, 0])), [1, 0, 0, 0])
    assert np.array_equal(realify(np.array([1j])), [0, 1])
    assert np.array_equal(realify(np.array([2 - 3j, -1j])), [2, -3, 0, -1])


def test_realify_preserves_norm_and_real_inner_product(rng):
    for _ in range(20):
        v = oracles.random_unit_vector(rng, 8)
        w = oracles.random_unit_vector(rng, 8)
        assert np.linalg.norm(realify(v)) == pytest.approx(1.0, abs=1e-12)
        want = np.dot(v, w.conj()).real
        assert np.dot(realify(v), realify(w)) == pytest.approx(want, abs=1e-12)


def test_family_batches_are_orthonormal():
    family = build_family(4, 3, seed=11)
    assert len(family.batches) == 3
    for batch in family.batches:
        assert batch.shape == (2, 4)
        gram = batch @ batch.T
        assert np.max(np.abs(gram - np.eye(2))) < 1e-9


def test_family_is_deterministic_per_seed():
    a = build_family(6, 4, seed=5)
    b = build_family(6, 4, seed=5)
    c = build_family(6, 4, seed=6)
    for x, y in zip(a.batches, b.batches):
        assert np.array_equal(x, y)
    assert not np.array_equal(a.batches[0], c.batches[0])


def test_family_extension_keeps_prefix():
    a = build_family(4, 2, seed=1)
    head = [b.copy() for b in a.batches]
    a.ensure(5)
    assert len(a.batches) == 5
    for x, y in zip(head, a.batches):
        assert np.array_equal(x, y)


def test_family_validates_arguments():
    with pytest.raises(ValueError):
        build_family(1, 2, seed=0)
    with pytest.raises(ValueError):
        build_family(4, 0, seed=0)


def test_hash_code_of_negated_vector_is_complement(rng):
    family = build_family(8, 4, seed=3)
    for _ in range(10):
        v = rng.standard_normal(8)
        code = hash_code(family, v)
        flipped = hash_code(family, -v)
        assert len(code) == 8
        assert flipped == "".join("1" if b == "0" else "0" for b in code)


@pytest.mark.parametrize("theta", [math.pi / 4, math.pi / 3, math.pi / 2])
def test_collision_rate_matches_angle(theta):
    # Pr[sign agreement on one hyperplane] = 1 - theta/pi
    rng = np.random.default_rng(404)
    family = build_family(8, 8, seed=17)
    agree = 0
    bits = 0
    for _ in range(10_000):
        u = rng.standard_normal(8)
        u /= np.linalg.norm(u)
        w = rng.standard_normal(8)
        w -= np.dot(w, u) * u
        w /= np.linalg.norm(w)
        v = math.cos(theta) * u + math.sin(theta) * w
        a = hash_code(family, u)
        b = hash_code(family, v)
        agree += sum(x == y for x, y in zip(a, b))
        bits += len(a)
    assert abs(agree / bits - (1 - theta / math.pi)) <= 0.02


def test_bucketize_single_vector(rng):
    leaves = hierarchical_bucketize({4: rng.standard_normal(4)}, seed=0)
    assert len(leaves) == 1
    assert leaves[0].members == [4]


def test_bucketize_keeps_duplicates_together(rng):
    v = rng.standard_normal(4)
    vectors = {i: v.copy() for i in range(200)}
    leaves = hierarchical_bucketize(vectors, seed=0)
    assert len(leaves) == 1
    assert sorted(leaves[0].members) == list(range(200))


def test_bucketize_partitions_and_caps(rng):
    total = 10_000
    vectors = {i: rng.standard_normal(4) for i in range(total)}
    leaves = hierarchical_bucketize(vectors, seed=2)
    cap = math.ceil(math.sqrt(total))
    seen: list[int] = []
    for leaf in leaves:
        assert len(leaf.members) <= cap
        seen.extend(leaf.members)
    assert sorted(seen) == list(range(total))
    assert [leaf.code for leaf in leaves] == sorted(leaf.code for leaf in leaves)


def test_match_finds_identical_twin(rng):
    v = rng.standard_normal(6)
    mapping = lsh_match({0: v.copy()}, {1: v.copy(), 2: rng.standard_normal(6)}, seed=0)
    assert mapping == {0: 1}


def test_match_empty_sides(rng):
    v = rng.standard_normal(4)
    assert lsh_match({}, {1: v}, seed=0) == {}
    assert lsh_match({0: v}, {}, seed=0) == {}


def test_match_skips_candidate_free_bucket(rng):
    # opposite vectors land in complementary buckets, so no pairing
    v = rng.standard_normal(6)
    assert lsh_match({0: v}, {1: -v}, seed=0) == {}


def test_match_tie_takes_smallest_candidate_id(rng):
    v = rng.standard_normal(6)
    mapping = lsh_match({5: v.copy()}, {9: v.copy(), 3: v.copy()}, seed=0)
    assert mapping == {5: 3}


def test_match_counts_comparisons(rng):
    v = rng.standard_normal(6)
    mapping, comparisons = lsh_match_detail(
        {0: v.copy()}, {1: v.copy(), 2: v.copy()}, seed=0)
    assert mapping == {0: 1}
    assert comparisons == 2


def test_match_rejects_shared_ids(rng):
    v = rng.standard_normal(4)
    with pytest.raises(ValueError):
        lsh_match({1: v}, {1: v.copy()}, seed=0)


def test_match_rejects_mixed_dimensions(rng):
    with pytest.raises(ValueError):
        lsh_match({0: rng.standard_normal(4)}, {1: rng.standard_normal(6)}, seed=0)
