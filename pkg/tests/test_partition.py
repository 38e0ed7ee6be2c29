import pytest
from hypothesis import given, strategies as st

from digraphs.errors import DomainError, ParseError
from digraphs.partition import Partition, parse_partition, set_partitions
from test_utils import partitions_labels


def test_parse_and_print():
    p = parse_partition("{{0,1},{2}}")
    assert p.blocks == ((0, 1), (2,))
    assert p.num_blocks == 2
    assert str(p) == "{{0,1},{2}}"
    assert parse_partition("{ {2}, {1, 0} }") == p


def test_parse_with_explicit_size():
    p = parse_partition("{{0,1}}", 2)
    assert p == Partition.full(2)
    with pytest.raises(DomainError):
        parse_partition("{{0,1}}", 3)


def test_rejects_malformed_partitions():
    with pytest.raises(ParseError):
        parse_partition("0,1")
    with pytest.raises(ParseError):
        parse_partition("{{0,a}}")
    with pytest.raises(ParseError):
        parse_partition("{{0,1}{2}}")
    with pytest.raises(ParseError):
        parse_partition("{{0,1},junk{2}}")
    with pytest.raises(ParseError):
        parse_partition("{{0,1},}")
    with pytest.raises(DomainError):
        parse_partition("{{0,1},{1,2}}")
    with pytest.raises(DomainError):
        Partition((1, 0))


def test_labels_are_canonicalised():
    assert Partition.from_labels(["b", "a", "b"]) == Partition((0, 1, 0))
    assert Partition.from_blocks([[2], [0, 1]], 3) == Partition((0, 0, 1))


def test_refinement_order():
    discrete, full = Partition.discrete(3), Partition.full(3)
    middle = parse_partition("{{0,1},{2}}")
    assert discrete.refines(middle) and middle.refines(full)
    assert not full.refines(middle)
    assert not middle.refines(parse_partition("{{0},{1,2}}"))
    with pytest.raises(DomainError):
        discrete.refines(Partition.full(4))


def test_join_and_lift():
    a = parse_partition("{{0,1},{2},{3}}")
    b = parse_partition("{{0},{1,2},{3}}")
    assert a.join(b) == parse_partition("{{0,1,2},{3}}")
    # blocks of a are 0={0,1}, 1={2}, 2={3}
    assert a.lift(parse_partition("{{0},{1,2}}")) == parse_partition("{{0,1},{2,3}}")
    with pytest.raises(DomainError):
        a.lift(Partition.full(2))


def test_from_pairs_uses_transitive_closure():
    p = Partition.from_pairs(5, [(0, 3), (3, 4)])
    assert p == parse_partition("{{0,3,4},{1},{2}}")


def test_set_partitions_order():
    parts = list(set_partitions(4))
    assert len(parts) == 15
    assert parts[0] == Partition.full(4)
    assert parts[-1] == Partition.discrete(4)
    assert len(set(parts)) == 15
    assert list(set_partitions(0)) == [Partition(())]


@given(partitions_labels())
def test_from_labels_keeps_the_relation(labels):
    p = Partition.from_labels(labels)
    for i in range(len(labels)):
        for j in range(len(labels)):
            assert p.same_block(i, j) == (labels[i] == labels[j])


@given(partitions_labels(), st.data())
def test_join_is_least_upper_bound(labels, data):
    other = data.draw(st.lists(st.integers(0, 2), min_size=len(labels), max_size=len(labels)))
    p, q = Partition.from_labels(labels), Partition.from_labels(other)
    joined = p.join(q)
    assert p.refines(joined) and q.refines(joined)
    for upper in set_partitions(len(labels)) if len(labels) <= 5 else ():
        if p.refines(upper) and q.refines(upper):
            assert joined.refines(upper)
