import pytest

from sheafbetti.engine.exactalg import HalfLaurent, delta
from sheafbetti.engine.partitions import (
    Partition, box_identity_holds, box_sum, content_sum, e_tilde, partitions_of,
)


def test_partition_counts():
    assert [len(partitions_of(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert partitions_of(3) == (Partition((3,)), Partition((2, 1)), Partition((1, 1, 1)))


def test_partition_is_normalized():
    assert Partition((1, 3, 2)) == (3, 2, 1)
    assert Partition((3, 1)).size == 4
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_conjugate():
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
    assert Partition().conjugate() == Partition()
    for rho in partitions_of(6):
        assert rho.conjugate().conjugate() == rho


def test_content_sum_matches_box_contents():
    for n in range(1, 8):
        for rho in partitions_of(n):
            assert content_sum(rho) == sum(rho.contents())
            assert content_sum(rho.conjugate()) == -content_sum(rho)


def test_e_tilde_of_a_single_box():
    assert e_tilde(Partition((1,)), 2) == delta(2)


def test_box_sum_of_a_single_box():
    assert box_sum(Partition((1,)), 3) == HalfLaurent({6: 1, 0: -2, -6: 1})


@pytest.mark.parametrize('m', range(1, 7))
def test_box_identity(m):
    for n in range(1, 9):
        for rho in partitions_of(n):
            assert box_identity_holds(rho, m)


def test_e_tilde_needs_a_nonzero_multiplier():
    with pytest.raises(ValueError):
        e_tilde(Partition((2,)), 0)


def _pentagonal_counts(nmax):
    counts = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        k = 1
        while True:
            first, second = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if first > n:
                break
            sign = 1 if k % 2 else -1
            counts[n] += sign * counts[n - first]
            if second <= n:
                counts[n] += sign * counts[n - second]
            k += 1
    return counts


def test_partition_counts_match_pentagonal_recurrence():
    assert len(partitions_of(10)) == 42
    assert [len(partitions_of(n)) for n in range(13)] == _pentagonal_counts(12)


def test_e_tilde_vanishes_at_one():
    for n in range(1, 7):
        for rho in partitions_of(n):
            for m in (1, 2, 3):
                assert e_tilde(rho, m).at_one() == 0


def test_e_tilde_of_a_hook():
    assert e_tilde(Partition((2,)), 1) == HalfLaurent({3: 1, -1: -1})
    assert e_tilde(Partition((2, 1)), 1) == HalfLaurent({3: 1, -3: -1})
    assert e_tilde(Partition(), 2) == 0
