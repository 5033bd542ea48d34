"""
Unit tests for root-sublattice embeddings and the blow-down criterion.

Covers src/lattice/embedding.py: simple-system validation, class
enumeration, the two reduction criteria and the uniqueness exceptions.
"""

import pytest

from src.lattice.core import QuadraticSpace
from src.lattice.dynkin import DynkinType
from src.lattice.embedding import (
    LISTED_NONUNIQUE,
    SimpleSystem,
    SimpleSystemError,
    class_counts,
    embedding_classes,
    embeds,
    enumerate_embeddings,
    is_listed_nonunique,
    reduction_criterion,
    reduction_criterion_by_factorization,
    uniqueness_exceptions,
    validate_simple_system,
)
from src.services.catalog_service import RdpConfiguration

from tests.fixtures import load_bundled_json


def _table_lattice_types():
    """(lattice type, degree) for every configuration in the bundled tables."""
    pairs = set()
    for per_degree in load_bundled_json("expected_tables")["tables"].values():
        for degree, labels in per_degree.items():
            for label in labels:
                pairs.add((str(RdpConfiguration.parse(label).lattice_type), int(degree)))
    return sorted(pairs, key=lambda pair: (-pair[1], pair[0]))


def test_validate_simple_system_accepts_a2():
    """Two roots pairing to 1 form an A2."""
    space = QuadraticSpace(3)
    system = SimpleSystem(space, (space.vector((0, 1, -1, 0)), space.vector((0, 0, 1, -1))), DynkinType.parse("A2"))
    validate_simple_system(system)


def test_validate_simple_system_rejects_wrong_pattern():
    """Orthogonal roots do not realise A2."""
    space = QuadraticSpace(3)
    system = SimpleSystem(space, (space.vector((0, 1, -1, 0)), space.vector((1, -1, -1, -1))), DynkinType.parse("A2"))
    with pytest.raises(SimpleSystemError, match="do not match"):
        validate_simple_system(system)


def test_validate_simple_system_rejects_wrong_count():
    """A2 needs two roots."""
    space = QuadraticSpace(3)
    system = SimpleSystem(space, (space.vector((0, 1, -1, 0)),), DynkinType.parse("A2"))
    with pytest.raises(SimpleSystemError, match="needs 2 roots"):
        validate_simple_system(system)


def test_rank_too_large_does_not_embed():
    """A type of rank above n never embeds."""
    assert enumerate_embeddings(DynkinType.parse("A5"), QuadraticSpace(4)) == []
    assert not embeds(DynkinType.parse("A5"), QuadraticSpace(4))


def test_e6_embeds_once_in_degree_three():
    """E6 fills E6 and admits no blow-down."""
    classes = embedding_classes(DynkinType.parse("E6"), QuadraticSpace.for_degree(3))
    assert len(classes) == 1
    assert not classes[0].reducible
    assert classes[0].criteria_agree


def test_a1_has_two_classes_in_degree_six():
    """One A1 sits in the A2 factor, the other is the A1 factor of E3."""
    classes = embedding_classes(DynkinType.parse("A1"), QuadraticSpace.for_degree(6))
    assert len(classes) == 2
    assert sorted(c.reducible for c in classes) == [False, True]
    assert all(c.criteria_agree for c in classes)


def test_reduction_criteria_on_explicit_systems():
    """e1 - e2 misses e3; e0 - e1 - e2 - e3 meets every exceptional class."""
    space = QuadraticSpace(3)
    a1 = DynkinType.parse("A1")
    inside_a2 = SimpleSystem(space, (space.vector((0, 1, -1, 0)),), a1)
    the_a1 = SimpleSystem(space, (space.vector((1, -1, -1, -1)),), a1)
    assert reduction_criterion(inside_a2)
    assert reduction_criterion_by_factorization(inside_a2)
    assert not reduction_criterion(the_a1)
    assert not reduction_criterion_by_factorization(the_a1)


def test_uniqueness_exceptions_degree_four():
    """
    Two types have two classes in D5, each split by a D-type factor.

    Two orthogonal roots either span a D2 factor (orthogonal roots A3, no
    orthogonal exceptional class) or not (orthogonal roots 2A1, reducible).
    A3 likewise sits in D5 either as D3 or not. The published list names A3
    only; no table configuration has lattice type 2A1.
    """
    result = uniqueness_exceptions(QuadraticSpace.for_degree(4))
    assert [str(t) for t in result] == ["2A1", "A3"]


def test_uniqueness_exceptions_small_degrees():
    """Degree 6 has only A1; degree 5 has none."""
    assert [str(t) for t in uniqueness_exceptions(QuadraticSpace.for_degree(6))] == ["A1"]
    assert uniqueness_exceptions(QuadraticSpace.for_degree(5)) == []


def test_criteria_agree_for_every_class_in_degree_four():
    """The orthogonality and factorisation criteria coincide on D5."""
    space = QuadraticSpace.for_degree(4)
    counts = class_counts(space)
    assert counts["D5"] == 1
    for label in counts:
        for c in embedding_classes(DynkinType.parse(label), space):
            assert c.criteria_agree, label


@pytest.mark.parametrize("label, degree", _table_lattice_types())
def test_criteria_agree_for_every_table_type(label, degree):
    """Both blow-down criteria give the same verdict on every class of every table entry."""
    classes = embedding_classes(DynkinType.parse(label), QuadraticSpace.for_degree(degree))

    assert classes
    for c in classes:
        assert c.reducible == c.reducible_by_factorization


@pytest.mark.parametrize("label", ["A1", "2A1", "A2", "A1+A2"])
def test_degree_seven_classes_use_both_exceptional_orbits(label):
    """In degree 7 e0 - e1 - e2 is its own Weyl orbit; A1 is orthogonal to it."""
    dynkin = DynkinType.parse(label)
    classes = embedding_classes(dynkin, QuadraticSpace.for_degree(7))

    if dynkin.rank > 1:
        assert classes == []
    else:
        (only,) = classes
        assert only.reducible
        assert only.reducible_by_factorization


def test_factorization_through_the_degree_eight_quadric():
    """e1 - e2 factors only through the complement of e0 - e1 - e2."""
    space = QuadraticSpace(2)
    system = SimpleSystem(space, (space.vector((0, 1, -1)),), DynkinType.parse("A1"))

    assert reduction_criterion(system)
    assert reduction_criterion_by_factorization(system)


def test_uniqueness_exceptions_degree_two_contain_the_published_types():
    """Every published degree 2 exception has at least two classes in E7."""
    listed = [DynkinType.parse(label) for label in LISTED_NONUNIQUE[2]]

    result = uniqueness_exceptions(QuadraticSpace.for_degree(2), candidates=listed)

    assert sorted(str(t) for t in result) == sorted(LISTED_NONUNIQUE[2])


@pytest.mark.parametrize("label", LISTED_NONUNIQUE[1])
def test_published_degree_one_exceptions_have_several_classes(label):
    """The invariant tuple separates at least two classes in E8."""
    assert len(embedding_classes(DynkinType.parse(label), QuadraticSpace.for_degree(1))) >= 2


def test_listed_nonunique_types():
    """The literature list is keyed by degree."""
    assert is_listed_nonunique(DynkinType.parse("A3"), 4)
    assert is_listed_nonunique(DynkinType.parse("A7"), 1)
    assert not is_listed_nonunique(DynkinType.parse("A7"), 2)
    assert set(LISTED_NONUNIQUE) == {1, 2, 4}


@pytest.mark.slow
def test_a7_has_two_classes_in_degree_one():
    """A7 sits in E8 both inside E7 and not."""
    classes = embedding_classes(DynkinType.parse("A7"), QuadraticSpace.for_degree(1))
    assert len(classes) == 2
    assert sorted(c.reducible for c in classes) == [False, True]
