import random

from cl16.harness import (
    cluster_pool,
    count_cirquents,
    differential_sweep,
    enumerate_cirquents,
    letter_pool,
    random_cirquent,
)
from cl16.syntax import ClusterId, clusters_of, letters_of, size


def test_pools():
    assert letter_pool(3) == ["p", "q", "r"]
    assert cluster_pool(3) == [ClusterId("d", 1), ClusterId("c", 1), ClusterId("d", 2)]


def test_enumeration_counts():
    for n in range(4):
        got = sum(1 for _ in enumerate_cirquents(n, letter_pool(2), cluster_pool(2)))
        assert got == count_cirquents(n, 2, 2)
    assert [count_cirquents(n, 2, 2) for n in range(4)] == [6, 150, 7062, 421782]


def test_enumeration_is_distinct_and_bounded():
    seen = list(enumerate_cirquents(2, letter_pool(1), cluster_pool(2)))
    assert len(seen) == len(set(seen))
    assert all(size(c) <= 2 for c in seen)


def test_random_respects_pools():
    rng = random.Random(1)
    for _ in range(200):
        c = random_cirquent(rng, 7, letter_pool(3), cluster_pool(3))
        assert size(c) <= 7
        assert letters_of(c) <= {"p", "q", "r"}
        assert clusters_of(c) <= set(cluster_pool(3))


def test_sweep_small():
    report = differential_sweep(enumerate_cirquents(2, letter_pool(2), cluster_pool(2)))
    assert report.ok and report.total == count_cirquents(2, 2, 2)
    assert report.checked_proofs == report.valid > 0
    assert "agreement: 100%" in report.summary()
