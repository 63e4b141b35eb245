import pytest
from hypothesis import given
from hypothesis import strategies as st

from distcsp.errors import InputError
from distcsp.model import (
    EMPTY,
    FULL,
    Constraint,
    Instance,
    OffsetSet,
    RelationDef,
    Template,
    project_constraint,
    tuple_in_relation,
)

finite_sets = st.builds(OffsetSet.of, st.lists(st.integers(-40, 40), max_size=8))
offset_sets = st.one_of(finite_sets, st.just(OffsetSet.full()))


def offsets(s: OffsetSet) -> tuple[int, ...]:
    assert s.offsets is not None
    return s.offsets


class TestOffsetSetSum:
    def test_zero_is_identity(self):
        assert OffsetSet.of([1, 3]) + OffsetSet.of([0]) == OffsetSet.of([1, 3])

    def test_sumset_of_self(self):
        assert offsets(OffsetSet.of([1, 3]) + OffsetSet.of([1, 3])) == (2, 4, 6)

    def test_full_absorbs_nonempty(self):
        assert (OffsetSet.full() + OffsetSet.of([5])).is_full

    def test_empty_annihilates_even_full(self):
        assert (OffsetSet.of([]) + OffsetSet.full()).is_empty
        assert (OffsetSet.full() + OffsetSet.of([])).is_empty

    @given(offset_sets, offset_sets)
    def test_commutative(self, a, b):
        assert a + b == b + a

    @given(offset_sets, offset_sets, offset_sets)
    def test_associative(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(finite_sets, finite_sets)
    def test_finite_sum_is_elementwise(self, a, b):
        expected = {x + y for x in offsets(a) for y in offsets(b)}
        assert set(offsets(a + b)) == expected


class TestOffsetSetIntersection:
    def test_disjoint(self):
        assert (OffsetSet.of([1, 3]) & OffsetSet.of([2, 4, 6])).is_empty

    def test_full_is_identity(self):
        assert OffsetSet.full() & OffsetSet.of([-1, 2]) == OffsetSet.of([-1, 2])

    def test_overlap(self):
        assert offsets(OffsetSet.of([1, 2, 3]) & OffsetSet.of([2, 3, 4])) == (2, 3)

    @given(offset_sets, offset_sets)
    def test_commutative(self, a, b):
        assert (a & b) == (b & a)

    @given(offset_sets)
    def test_idempotent(self, a):
        assert (a & a) == a


class TestOffsetSetNegation:
    def test_finite(self):
        assert offsets(-OffsetSet.of([1, 3])) == (-3, -1)

    def test_empty(self):
        assert (-OffsetSet.of([])).is_empty

    def test_full(self):
        assert (-OffsetSet.full()).is_full

    @given(offset_sets)
    def test_involution(self, a):
        assert -(-a) == a

    @given(offset_sets, offset_sets)
    def test_distributes_over_sum(self, a, b):
        assert -(a + b) == (-a) + (-b)


class TestOffsetSetRepresentation:
    def test_stored_sorted_without_duplicates(self):
        assert offsets(OffsetSet.of([3, 1, 3, -2])) == (-2, 1, 3)

    def test_full_is_not_an_enumeration(self):
        s = OffsetSet.full()
        assert s.offsets is None and s.is_full and not s.is_empty

    def test_membership(self):
        s = OffsetSet.of([1, 3])
        assert 3 in s and 2 not in s
        assert 12345 in OffsetSet.full()

    def test_str_forms(self):
        assert str(OffsetSet.of([3, 1])) == "{1,3}"
        assert str(OffsetSet.full()) == "FULL"
        assert str(OffsetSet.of([])) == "{}"

    def test_bool_offsets_rejected(self):
        with pytest.raises(InputError):
            OffsetSet.of([True])


class TestRelationDef:
    def test_tuples_sorted_and_deduplicated(self):
        rel = RelationDef("r", 2, ((3,), (1,), (3,)))
        assert rel.offset_tuples == ((1,), (3,))

    def test_empty_tuple_collection_normalizes_to_marker(self):
        rel = RelationDef("r", 3, ())
        assert rel.is_empty and rel.body == EMPTY

    def test_markers(self):
        assert RelationDef("r", 2, FULL).is_full
        assert RelationDef("r", 1, EMPTY).is_empty
        with pytest.raises(InputError):
            RelationDef("r", 2, "everything")

    def test_unary_tuples_rejected(self):
        with pytest.raises(InputError):
            RelationDef("r", 1, ((),))

    def test_component_count_enforced(self):
        with pytest.raises(InputError):
            RelationDef("r", 3, ((1,),))

    def test_arity_must_be_positive(self):
        with pytest.raises(InputError):
            RelationDef("r", 0, FULL)

    def test_max_offset(self):
        assert RelationDef("r", 3, ((1, -5), (2, 0))).max_offset() == 5
        assert RelationDef("r", 2, FULL).max_offset() == 0

    def test_offset_tuples_unavailable_on_markers(self):
        with pytest.raises(InputError):
            RelationDef("r", 2, FULL).offset_tuples


class TestProjectConstraint:
    def test_single_tuple(self):
        rel = RelationDef("r", 3, ((1, 2),))
        assert offsets(project_constraint(rel, 1, 3)) == (2,)

    def test_reversed_coordinates_invert(self):
        rel = RelationDef("r", 3, ((1, 2),))
        assert offsets(project_constraint(rel, 3, 1)) == (-2,)

    def test_multiple_tuples(self):
        rel = RelationDef("r", 3, ((1, 2), (2, 1)))
        assert offsets(project_constraint(rel, 2, 3)) == (-1, 1)

    def test_coordinates_validated(self):
        rel = RelationDef("r", 3, ((1, 2),))
        with pytest.raises(InputError):
            project_constraint(rel, 1, 4)
        with pytest.raises(InputError):
            project_constraint(rel, 2, 2)

    def test_marker_bodies_rejected(self):
        with pytest.raises(InputError):
            project_constraint(RelationDef("r", 2, FULL), 1, 2)


class TestTupleInRelation:
    def test_translated_tuple_is_member(self):
        rel = RelationDef("r", 3, ((1, 2),))
        assert tuple_in_relation(rel, (10, 11, 12))

    def test_permuted_tuple_is_not(self):
        rel = RelationDef("r", 3, ((1, 2),))
        assert not tuple_in_relation(rel, (10, 12, 11))

    def test_markers(self):
        assert tuple_in_relation(RelationDef("r", 2, FULL), (7, -9))
        assert not tuple_in_relation(RelationDef("r", 2, EMPTY), (7, -9))

    def test_arity_mismatch_rejected(self):
        with pytest.raises(InputError):
            tuple_in_relation(RelationDef("r", 2, ((1,),)), (0, 1, 2))


class TestTemplate:
    def test_lookup(self):
        rel = RelationDef("edge", 2, ((1,), (-1,)))
        t = Template("t", (rel,))
        assert t.relation("edge") is rel

    def test_unknown_name(self):
        t = Template("t", (RelationDef("edge", 2, ((1,),)),))
        with pytest.raises(InputError, match="no relation named"):
            t.relation("missing")

    def test_duplicate_names_rejected(self):
        rel = RelationDef("edge", 2, ((1,),))
        with pytest.raises(InputError, match="duplicate"):
            Template("t", (rel, rel))


class TestInstance:
    def test_argument_range_checked(self):
        with pytest.raises(InputError, match="variable 3"):
            Instance(3, (Constraint("r", (0, 3)),))

    def test_needs_a_variable(self):
        with pytest.raises(InputError):
            Instance(0, ())

    def test_constraint_needs_arguments(self):
        with pytest.raises(InputError):
            Constraint("r", ())

    def test_validate_against_checks_arity(self):
        t = Template("t", (RelationDef("r", 2, ((1,),)),))
        inst = Instance(3, (Constraint("r", (0, 1, 2)),))
        with pytest.raises(InputError, match="arity 2"):
            inst.validate_against(t)

    def test_validate_against_checks_names(self):
        t = Template("t", (RelationDef("r", 2, ((1,),)),))
        inst = Instance(2, (Constraint("s", (0, 1)),))
        with pytest.raises(InputError, match="no relation named"):
            inst.validate_against(t)
