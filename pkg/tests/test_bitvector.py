import random

import pytest

from stdt.bitvector import BitvectorRS, SparseBitvector
from stdt.errors import OutOfRange


def _naive_rank(bits, i):
    return sum(bits[:i])


@pytest.fixture(params=[BitvectorRS, SparseBitvector.from_bits], ids=["plain", "sparse"])
def make(request):
    return request.param


def test_all_zeros(make):
    v = make([0] * 100)
    assert all(v.rank1(i) == 0 for i in range(101))
    with pytest.raises(OutOfRange):
        v.select1(1)


def test_hand_count(make):
    v = make([1, 0, 0, 1, 0])
    assert v.rank1(3) == 1
    assert v.select1(2) == 4
    assert [v.access(i) for i in range(1, 6)] == [1, 0, 0, 1, 0]


@pytest.mark.parametrize("n,p", [(1, 0.5), (63, 0.5), (64, 0.3), (65, 0.9), (1000, 0.01), (5000, 0.5)])
def test_random_against_naive(make, n, p):
    rng = random.Random(n)
    bits = [1 if rng.random() < p else 0 for _ in range(n)]
    v = make(bits)
    prefix = [0]
    for b in bits:
        prefix.append(prefix[-1] + b)
    assert [v.rank1(i) for i in range(n + 1)] == prefix
    ones = [i for i, b in enumerate(bits, 1) if b]
    assert [v.select1(j) for j in range(1, len(ones) + 1)] == ones
    for j in range(1, len(ones) + 1):
        assert v.rank1(v.select1(j)) == j


def test_out_of_range(make):
    v = make([1, 1, 0])
    with pytest.raises(OutOfRange):
        v.rank1(4)
    with pytest.raises(OutOfRange):
        v.select1(3)


def test_sparse_is_small():
    n = 100000
    pos = list(range(1, n + 1, 1000))
    sparse = SparseBitvector(n, pos)
    assert sparse.positions() == pos
    assert sparse.space_bits() < BitvectorRS.from_positions(n, pos).space_bits() / 10
