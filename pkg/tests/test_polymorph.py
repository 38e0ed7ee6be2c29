import pytest
from hypothesis import given, settings

from digraphs.algebra import TermTable, is_compatible, term_tables
from digraphs.checks import parity_table
from digraphs.digraph import is_homomorphism, power
from digraphs.errors import BudgetExceededError, DomainError
from digraphs.gallery import bundled_algebra, cycle, gallery
from digraphs.polymorph import (
    MajorFamily,
    PolymorphismQuery,
    collect_polymorphisms,
    filter_check,
    find_polymorphisms,
    is_projection,
    major_subsets,
    meet_restriction_check,
    olsak_check,
    olsak_search,
    polymorphism_algebra,
)
from test_utils import reflexive_digraphs


def test_idempotent_polymorphisms_of_k_are_projections():
    k = gallery("K")
    for arity in (1, 2):
        result = collect_polymorphisms(PolymorphismQuery(k, arity, idempotent=True))
        assert not result.truncated
        assert sorted(map(is_projection, result.tables)) == list(range(1, arity + 1))


def test_meet_is_a_binary_polymorphism_of_d():
    meet = bundled_algebra("chain3meet").op("meet").table
    tables = collect_polymorphisms(PolymorphismQuery(gallery("D"), 2, idempotent=True)).tables
    assert meet in tables
    assert all(t.is_idempotent() for t in tables)
    assert all(is_homomorphism(power(gallery("D"), 2), gallery("D"), t.table) for t in tables)


def test_limit_and_seed():
    d = gallery("D")
    limited = list(find_polymorphisms(PolymorphismQuery(d, 2, True, limit=1)))
    assert len(limited) == 1
    # the meet of the chain 0<1<2 beats both projections in lexicographic order
    assert limited[0].table <= bundled_algebra("chain3meet").op("meet").table.table
    shuffled = collect_polymorphisms(PolymorphismQuery(d, 2, True, limit=3, seed=7))
    assert len(shuffled.tables) == 3
    again = collect_polymorphisms(PolymorphismQuery(d, 2, True, limit=3, seed=7))
    assert again.tables == shuffled.tables


def test_budget_truncates_enumeration():
    result = collect_polymorphisms(PolymorphismQuery(gallery("D"), 2, budget=100))
    assert result.truncated
    assert result.expansions > 100
    with pytest.raises(BudgetExceededError):
        polymorphism_algebra(gallery("D"), 2, idempotent=False, budget=100)


def test_query_validation():
    with pytest.raises(DomainError):
        PolymorphismQuery(gallery("D"), 0)
    with pytest.raises(DomainError):
        PolymorphismQuery(gallery("D"), 2, limit=0)
    with pytest.raises(DomainError):
        PolymorphismQuery(gallery("D"), 2, budget=0)


def test_polymorphism_algebra_of_k():
    algebra = polymorphism_algebra(gallery("K"), 2)
    assert algebra.size == 4
    assert [op.name for op in algebra.ops] == ["p0", "p1"]
    assert is_compatible(gallery("K"), algebra)


def test_projection_detection():
    assert is_projection(TermTable.projection(3, 4, 2)) == 3
    assert is_projection(bundled_algebra("chain3meet").op("meet").table) is None


def test_major_subsets_of_a_projection():
    family = major_subsets(TermTable.projection(3, 3, 1))
    assert family.as_lists() == [[1, 2], [1, 2, 3], [2], [2, 3]]
    assert filter_check(family)
    assert family.least == {2}
    assert meet_restriction_check(TermTable.projection(3, 3, 1), family)


def test_major_subsets_of_meet():
    meet = bundled_algebra("chain3meet").op("meet").table
    family = major_subsets(meet)
    assert family.as_lists() == [[1, 2]]
    assert family.least == {1, 2}
    assert meet_restriction_check(meet, family)


def test_major_subsets_preconditions():
    with pytest.raises(DomainError):
        major_subsets(TermTable.projection(2, 2, 0))
    with pytest.raises(DomainError):
        major_subsets(TermTable(3, 1, (0, 0, 0)))
    with pytest.raises(BudgetExceededError):
        major_subsets(TermTable.projection(3, 13, 0))


def test_filter_check():
    assert not filter_check(MajorFamily(2, frozenset()))
    # {1} and {2} are both major but their intersection is not
    family = MajorFamily(2, frozenset({frozenset({1}), frozenset({2}), frozenset({1, 2})}))
    assert not filter_check(family)
    with pytest.raises(DomainError):
        meet_restriction_check(TermTable.projection(3, 2, 0), family)


def test_olsak_check():
    assert olsak_check(parity_table((0, 1, 2)))
    assert not any(olsak_check(TermTable.projection(2, 6, i)) for i in range(6))
    with pytest.raises(DomainError):
        olsak_check(TermTable.projection(2, 5, 0))
    with pytest.raises(DomainError):
        olsak_check(parity_table((0, 1, 2)), size=3)


def test_olsak_search():
    found = olsak_search(bundled_algebra("sl2"))
    assert found is not None and olsak_check(found)
    assert olsak_search(bundled_algebra("z2aff")) is not None
    assert olsak_search(bundled_algebra("set2")) is None


def test_cycle_polymorphisms_include_projections():
    tables = collect_polymorphisms(PolymorphismQuery(cycle(3), 2, idempotent=True)).tables
    assert {1, 2} <= set(map(is_projection, tables))


@settings(max_examples=20, deadline=None)
@given(reflexive_digraphs(max_vertices=3))
def test_found_tables_are_idempotent_polymorphisms(g):
    tables = list(find_polymorphisms(PolymorphismQuery(g, 2, idempotent=True, limit=5)))
    assert tables
    assert tables[0].table <= TermTable.projection(g.n, 2, 0).table
    square = power(g, 2)
    for t in tables:
        assert t.is_idempotent()
        assert is_homomorphism(square, g, t.table)


def test_term_operations_of_d_polymorphisms_are_polymorphisms():
    d = gallery("D")
    algebra = polymorphism_algebra(d, 2, idempotent=True, limit=4)
    polymorphisms = set(find_polymorphisms(PolymorphismQuery(d, 2)))
    terms = term_tables(algebra, 2)
    assert set(terms) <= polymorphisms
    assert all(t.is_idempotent() for t in terms)


@settings(max_examples=15, deadline=None)
@given(reflexive_digraphs(max_vertices=3))
def test_term_operations_stay_inside_the_polymorphism_clone(g):
    algebra = polymorphism_algebra(g, 2, idempotent=True, limit=3)
    polymorphisms = set(find_polymorphisms(PolymorphismQuery(g, 2)))
    assert set(term_tables(algebra, 2)) <= polymorphisms
