import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from digraphs.algebra import (
    FiniteAlgebra,
    TermTable,
    apply,
    edge_closure,
    evaluate_pointwise,
    format_algebra,
    format_term,
    free_algebra,
    freely_generated_digraph,
    generated_digraph,
    is_compatible,
    is_congruence,
    parse_algebra,
    parse_term,
    power_algebra,
    subalgebra,
    subuniverse_closure,
    term_tables,
    weak_component_labels,
)
from digraphs.connectivity import equivalence
from digraphs.digraph import Digraph, is_isomorphic
from digraphs.errors import BudgetExceededError, DomainError, ParseError
from digraphs.gallery import algebra_from_text, bundled_algebra, cycle, gallery
from digraphs.partition import Partition, parse_partition
from test_utils import read_fixture, reflexive_digraphs


def test_parse_fixture_matches_bundle():
    sl2 = parse_algebra(read_fixture("sl2.alg"))
    assert sl2 == bundled_algebra("sl2")
    assert sl2.op("meet")(1, 1) == 1
    assert sl2.op("meet")(0, 1) == 0
    assert parse_algebra(format_algebra(sl2)) == sl2
    assert algebra_from_text(read_fixture("z2aff.alg")).op("mal")(1, 1, 0) == 0


def test_long_tables_may_continue_on_later_lines():
    split = parse_algebra("algebra m\nsize 3\nop meet 2\ntable 0 0 0\n0 1 1\n0 1 2\nend\n")
    assert split.ops == bundled_algebra("chain3meet").ops


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_algebra("algebra a\nsize 2\nop f 2\ntable 0 1 1\nend\n")
    assert e.value.line == 4
    with pytest.raises(ParseError):
        parse_algebra("algebra a\nsize 2\nop c 0\ntable 1\nend\n")
    with pytest.raises(ParseError):
        parse_algebra("algebra a\nsize 2\nop f 1\ntable 0 2\nend\n")
    with pytest.raises(ParseError):
        parse_algebra("algebra a\nsize 2\nend\n")
    with pytest.raises(ParseError):
        parse_algebra("algebra a\nsize 2\nop f 1\ntable 0 1\n")


def test_term_tables_are_checked():
    assert TermTable.projection(2, 3, 1).table == (0, 0, 1, 1, 0, 0, 1, 1)
    with pytest.raises(DomainError):
        TermTable(2, 2, (0, 1, 1))
    with pytest.raises(DomainError):
        TermTable(2, 1, (0, 2))
    with pytest.raises(DomainError):
        TermTable.projection(2, 2, 0)(0, 1, 1)
    with pytest.raises(DomainError):
        FiniteAlgebra("empty", 2, ())


def test_term_text_round_trip():
    t = bundled_algebra("z2aff").op("mal").table
    assert parse_term(format_term(t)) == t
    with pytest.raises(ParseError):
        parse_term("term 2 2\ntable 0 1\n")


def test_diagonal_and_idempotence():
    meet = bundled_algebra("chain3meet").op("meet").table
    assert meet.is_idempotent()
    assert meet.diagonal() == TermTable.projection(3, 1, 0)
    constant = TermTable(2, 2, (1, 1, 1, 1))
    assert not constant.is_idempotent()
    assert constant.diagonal().table == (1, 1)


def test_pointwise_evaluation():
    meet = bundled_algebra("sl2").op("meet").table
    out = evaluate_pointwise(meet.array, 2, [np.array([0, 1, 1]), np.array([1, 1, 0])])
    assert out.tolist() == [0, 1, 0]


def test_subuniverses():
    assert subuniverse_closure(bundled_algebra("sl2"), [1]) == {1}
    assert subuniverse_closure(bundled_algebra("chain3meet"), [2, 1]) == {1, 2}
    assert subuniverse_closure(bundled_algebra("z2aff"), [0, 1]) == {0, 1}
    with pytest.raises(DomainError):
        subuniverse_closure(bundled_algebra("sl2"), [])
    with pytest.raises(DomainError):
        subuniverse_closure(bundled_algebra("sl2"), [2])


def test_compatibility():
    meet = bundled_algebra("chain3meet")
    assert is_compatible(gallery("D"), meet)
    assert not is_compatible(cycle(3), meet)
    with pytest.raises(DomainError):
        is_compatible(gallery("K"), meet)


def test_congruences():
    meet = bundled_algebra("chain3meet")
    assert is_congruence(meet, parse_partition("{{0},{1,2}}"))
    assert not is_congruence(meet, parse_partition("{{0,2},{1}}"))
    assert is_congruence(meet, Partition.full(3))
    assert is_congruence(meet, Partition.discrete(3))
    with pytest.raises(DomainError):
        is_congruence(meet, Partition.full(2))


def test_power_and_subalgebra():
    z4 = power_algebra(bundled_algebra("z2aff"), 2)
    assert z4.size == 4
    # elements are (0,0),(0,1),(1,0),(1,1); x+y+z coordinatewise
    assert z4.op("mal")(1, 2, 3) == 0
    sl4 = power_algebra(bundled_algebra("sl2"), 2)
    sub, elements = subalgebra(sl4, [1, 2])
    assert elements == [0, 1, 2]
    assert sub.size == 3
    assert sub.op("meet")(1, 2) == 0


def test_generated_digraph():
    seed = Digraph.from_edges(2, [(0, 1)], name="arrow", reflexive=True)
    g = generated_digraph(bundled_algebra("sl2"), seed, [0, 1])
    assert g.edges == {(0, 0), (0, 1), (1, 1)}
    assert is_compatible(g, bundled_algebra("sl2"))
    with pytest.raises(DomainError) as e:
        generated_digraph(bundled_algebra("sl2"), Digraph.from_edges(1, [], reflexive=True), [1])
    assert "proper subuniverse [1]" in str(e.value)
    with pytest.raises(DomainError):
        generated_digraph(bundled_algebra("sl2"), seed, [0])


def test_edge_closure_is_compatible():
    meet = bundled_algebra("chain3meet")
    edges = edge_closure(meet, [(0, 2), (2, 1)])
    assert (0, 1) in edges
    g = Digraph.from_edges(3, edges)
    assert is_compatible(g, meet)


def test_free_algebras():
    sl2, z2 = bundled_algebra("sl2"), bundled_algebra("z2aff")
    f2 = free_algebra(sl2, 2)
    assert f2.algebra.size == 3
    assert f2.generators == (0, 1)
    assert f2.element_tables[2].table == (0, 0, 0, 1)
    assert free_algebra(sl2, 3).algebra.size == 7
    f3 = free_algebra(z2, 3)
    assert f3.algebra.size == 4
    assert f3.generators == (0, 1, 2)
    assert free_algebra(bundled_algebra("set2"), 3).algebra.size == 3
    with pytest.raises(DomainError):
        free_algebra(sl2, 0)
    with pytest.raises(BudgetExceededError):
        free_algebra(sl2, 3, budget=5)


def test_term_operations():
    assert len(term_tables(bundled_algebra("z2aff"), 6, True)) == 32
    assert len(term_tables(bundled_algebra("sl2"), 2)) == 3
    assert len(term_tables(bundled_algebra("sl2"), 3, True)) == 7


def test_freely_generated_digraph_of_the_three_cycle():
    fd = freely_generated_digraph(bundled_algebra("sl2"), cycle(3))
    assert fd.digraph.n == 7
    assert fd.generators == (0, 1, 2)
    assert is_isomorphic(fd.digraph, gallery("fig3"))
    assert len(fd.edge_order) == len(fd.digraph.edges) == 28
    assert fd.derivations[: len(fd.seed_edges)] == (None,) * len(fd.seed_edges)


def test_free_digraph_seed_edges_must_be_edges():
    with pytest.raises(DomainError):
        freely_generated_digraph(bundled_algebra("sl2"), cycle(3), seed_edges=[(1, 0)])


def test_component_labels():
    fd = freely_generated_digraph(bundled_algebra("z2aff"), gallery("D"))
    assert fd.digraph.n == 4
    labels = weak_component_labels(fd.free, fd.digraph)
    assert list(labels.values()) == [TermTable.projection(2, 1, 0)]
    assert equivalence(fd.digraph, "extreme").num_blocks == 1


@settings(max_examples=25, deadline=None)
@given(reflexive_digraphs(max_vertices=3))
def test_generated_edges_are_closed(seed):
    meet = bundled_algebra("chain3meet")
    if seed.n < 3:
        return
    g = generated_digraph(meet, seed, [0, 1, 2])
    assert is_compatible(g, meet)
    assert {(u, v) for u, v in seed.edges} <= g.edges


def test_apply_reads_tables_first_argument_major():
    meet = bundled_algebra("chain3meet").op("meet").table
    assert apply(meet, [2, 1]) == 1
    assert apply(meet, [2, 2]) == 2
    with pytest.raises(DomainError):
        apply(meet, [3, 0])
    with pytest.raises(DomainError):
        apply(meet, [0])


def test_operations_are_callable():
    meet = bundled_algebra("chain3meet").op("meet")
    assert meet(2, 1) == meet.table(2, 1) == 1
    with pytest.raises(DomainError):
        meet(0)


CLOSURE_ALGEBRAS = {
    "sl2": bundled_algebra("sl2"),
    "z2aff": bundled_algebra("z2aff"),
    "chain3meet": bundled_algebra("chain3meet"),
    "sl2^2": power_algebra(bundled_algebra("sl2"), 2),
    "z2aff^3": power_algebra(bundled_algebra("z2aff"), 3),
}


@st.composite
def algebra_with_seeds(draw):
    a = CLOSURE_ALGEBRAS[draw(st.sampled_from(sorted(CLOSURE_ALGEBRAS)))]
    elements = st.integers(0, a.size - 1)
    small = draw(st.sets(elements, min_size=1, max_size=a.size))
    extra = draw(st.sets(elements, max_size=a.size))
    return a, small, small | extra


@settings(max_examples=50, deadline=None)
@given(algebra_with_seeds())
def test_subuniverse_closure_is_a_closure_operator(case):
    a, small, large = case
    closed = subuniverse_closure(a, small)
    assert small <= closed
    assert subuniverse_closure(a, closed) == closed
    assert closed <= subuniverse_closure(a, large)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["sl2", "z2aff", "chain3meet", "set2", "trivial"]), st.integers(1, 3))
def test_free_algebra_elements_are_the_term_operations(name, k):
    a = bundled_algebra(name)
    fr = free_algebra(a, k)
    assert len(fr.element_tables) == fr.algebra.size
    assert set(fr.element_tables) == set(term_tables(a, k))
    for i, g in enumerate(fr.generators):
        assert fr.element_tables[g] == TermTable.projection(a.size, k, i)


def _seed_images(fd):
    return {(fd.generators[u], fd.generators[v]) for u, v in fd.seed_edges}


def test_free_three_cycle_digraph_is_the_least_compatible_one():
    fd = freely_generated_digraph(bundled_algebra("sl2"), cycle(3))
    f, edges = fd.free.algebra, fd.digraph.edges
    assert edge_closure(f, _seed_images(fd)) == edges
    for edge in edges - _seed_images(fd):
        assert edge in edge_closure(f, edges - {edge})


@settings(max_examples=25, deadline=None)
@given(reflexive_digraphs(max_vertices=3), st.sampled_from(["sl2", "z2aff", "chain3meet"]))
def test_freely_generated_edges_are_generated_by_the_seed(seed, name):
    fd = freely_generated_digraph(bundled_algebra(name), seed)
    f, edges = fd.free.algebra, fd.digraph.edges
    assert is_compatible(fd.digraph, f)
    assert _seed_images(fd) <= edges
    assert edge_closure(f, _seed_images(fd)) == edges
    for edge in edges - _seed_images(fd):
        assert edge in edge_closure(f, edges - {edge})


def test_component_labels_split_by_constant_shift():
    z2 = bundled_algebra("z2aff")
    shifted = FiniteAlgebra.from_tables(
        "z2neg", 2, [("mal", 3, z2.op("mal").table.table), ("neg", 1, (1, 0))]
    )
    fd = freely_generated_digraph(shifted, gallery("D"))
    assert fd.digraph.n == 8
    weak = equivalence(fd.digraph, "weak")
    assert weak.num_blocks == 2
    assert all(len(block) == 4 for block in weak.blocks)

    labels = weak_component_labels(fd.free, fd.digraph)
    identity, negation = TermTable.projection(2, 1, 0), TermTable(2, 1, (1, 0))
    assert set(labels.values()) == {identity, negation}
    assert labels[weak.block_index[fd.generators[0]]] == identity
    assert {weak.block_index[g] for g in fd.generators} == {weak.block_index[fd.generators[0]]}
