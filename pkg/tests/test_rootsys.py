import pytest

from shuffle_pbwd.ring import ULaurent, qint
from shuffle_pbwd.rootsys import KostantPartition, RootSystem, c_beta, kappa, kostant_partitions, pbwd_indices


def words(rs):
    return [b.word for b in rs.positive_roots()]


def test_g2_roots_in_convex_order():
    assert words(RootSystem("G")) == [(1,), (1, 2), (1, 2, 1, 2, 2), (1, 2, 2), (1, 2, 2, 2), (2,)]


def test_b_roots():
    assert words(RootSystem("B", 2)) == [(1,), (1, 2), (1, 2, 2), (2,)]
    assert len(words(RootSystem("B", 3))) == 9
    assert words(RootSystem("A", 3)) == [(1,), (1, 2), (1, 2, 3), (2,), (2, 3), (3,)]


def test_cartan_data():
    g = RootSystem("G")
    assert (g.a(1, 2), g.a(2, 1), g.di(1), g.di(2)) == (-1, -3, 3, 1)
    b = RootSystem("B", 3)
    assert (b.a(3, 2), b.a(2, 3), b.di(1), b.di(3)) == (-2, -1, 2, 1)
    for rs in (g, b, RootSystem("A", 2)):
        for i in rs.I:
            for j in rs.I:
                assert rs.pairing(i, j) == rs.pairing(j, i)


def test_kappa_and_constants_g2():
    g = RootSystem("G")
    assert [kappa(g, b) for b in g.positive_roots()] == [0, 1, 6, 2, 3, 0]
    assert c_beta(g, (1, 2)) == ULaurent({3: 1, -3: -1})
    assert c_beta(g, (1,)) == ULaurent.one()


@pytest.mark.parametrize(
    "kind,n,k,count",
    [("G", 2, (1, 1), 2), ("G", 2, (1, 2), 3), ("G", 2, (2, 3), 7), ("B", 2, (2, 2), 4), ("A", 2, (1, 1), 2)],
)
def test_kostant_partition_counts(kind, n, k, count):
    rs = RootSystem(kind, n)
    kps = kostant_partitions(rs, k)
    assert len(kps) == count
    assert all(d.grading() == k for d in kps)


def test_pbwd_index_counts():
    g = RootSystem("G")
    assert len(pbwd_indices(g, (1, 1), (0, 1))) == 6
    assert len(pbwd_indices(g, (1, 1), (0, 2))) == 12
    assert len(pbwd_indices(RootSystem("A", 1), (2,), (0, 2))) == 6


def test_partition_parse_and_order():
    b = RootSystem("B", 2)
    d = KostantPartition.parse(b, '{"[1,2]": 1, "[2]": 1}')
    assert d.grading() == (1, 2)
    kps = kostant_partitions(b, (1, 2))
    keys = [p.order_key() for p in kps]
    assert keys == sorted(keys)
