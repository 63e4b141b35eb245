"""Core domain model: offset sets, relations, templates, instances.

Every relation handled here is invariant under translation of the integers.
A binary relation is therefore determined by its set of admissible
differences y - x, called offsets.  A k-ary relation of finite degree is
stored as a finite set of offset tuples (v_1, ..., v_{k-1}) taken relative
to the first coordinate: each tuple encodes the orbit
{(a, a + v_1, ..., a + v_{k-1}) : a integer}.  Two markers cover the
degenerate cases: FULL (all k-tuples) and EMPTY (no tuples).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InputError

FULL = "full"
EMPTY = "empty"


def _check_int(value: object, what: str) -> int:
    # bool is an int subclass but never a valid offset
    if not isinstance(value, int) or isinstance(value, bool):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class OffsetSet:
    """A finite set of integer offsets, or the marker for all of Z.

    Encodes the binary relation {(x, x + k) : k in S}; ``offsets=None``
    encodes the full relation Z x Z, an empty tuple the unsatisfiable one.
    Supports ``+`` (elementwise sumset, i.e. relation composition),
    ``&`` (intersection) and unary ``-`` (relation inversion).
    """

    offsets: tuple[int, ...] | None

    def __post_init__(self) -> None:
        if self.offsets is not None:
            values = tuple(sorted({_check_int(v, "offset") for v in self.offsets}))
            object.__setattr__(self, "offsets", values)

    @classmethod
    def full(cls) -> "OffsetSet":
        return cls(None)

    @classmethod
    def of(cls, values: Iterable[int]) -> "OffsetSet":
        return cls(tuple(values))

    @property
    def is_full(self) -> bool:
        return self.offsets is None

    @property
    def is_empty(self) -> bool:
        return self.offsets == ()

    def __add__(self, other: "OffsetSet") -> "OffsetSet":
        # empty annihilates, even against FULL; FULL absorbs anything nonempty
        if self.is_empty or other.is_empty:
            return OffsetSet(())
        if self.is_full or other.is_full:
            return OffsetSet(None)
        assert self.offsets is not None and other.offsets is not None
        return OffsetSet(tuple({a + b for a in self.offsets for b in other.offsets}))

    def __and__(self, other: "OffsetSet") -> "OffsetSet":
        if self.is_full:
            return other
        if other.is_full:
            return self
        assert self.offsets is not None and other.offsets is not None
        return OffsetSet(tuple(set(self.offsets) & set(other.offsets)))

    def __neg__(self) -> "OffsetSet":
        if self.is_full:
            return self
        assert self.offsets is not None
        return OffsetSet(tuple(-v for v in self.offsets))

    def __contains__(self, value: int) -> bool:
        if self.is_full:
            return True
        assert self.offsets is not None
        return value in self.offsets

    def __str__(self) -> str:
        if self.is_full:
            return "FULL"
        assert self.offsets is not None
        return "{%s}" % ",".join(str(v) for v in self.offsets)


@dataclass(frozen=True)
class RelationDef:
    """A named k-ary relation given by offset tuples or a FULL/EMPTY marker.

    Offset tuples have k-1 components and are relative to the first
    coordinate.  They are stored sorted and deduplicated; an empty tuple
    collection normalizes to the EMPTY marker.  Unary relations invariant
    under translation are all of Z or nothing, so arity-1 bodies must be a
    marker.
    """

    name: str
    arity: int
    body: str | tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InputError("relation name must be a non-empty string")
        _check_int(self.arity, "arity")
        if self.arity < 1:
            raise InputError(f"relation {self.name}: arity must be >= 1")
        if isinstance(self.body, str):
            if self.body not in (FULL, EMPTY):
                raise InputError(
                    f"relation {self.name}: body marker must be '{FULL}' or '{EMPTY}'"
                )
            return
        tuples = set()
        for v in self.body:
            v = tuple(_check_int(c, f"relation {self.name}: offset") for c in v)
            if len(v) != self.arity - 1:
                raise InputError(
                    f"relation {self.name}: offset tuple {v} must have "
                    f"{self.arity - 1} components"
                )
            tuples.add(v)
        if not tuples:
            object.__setattr__(self, "body", EMPTY)
        elif self.arity == 1:
            raise InputError(
                f"relation {self.name}: arity-1 bodies must be '{FULL}' or '{EMPTY}'"
            )
        else:
            object.__setattr__(self, "body", tuple(sorted(tuples)))

    @property
    def is_full(self) -> bool:
        return self.body == FULL

    @property
    def is_empty(self) -> bool:
        return self.body == EMPTY

    @property
    def has_tuples(self) -> bool:
        return isinstance(self.body, tuple)

    @property
    def offset_tuples(self) -> tuple[tuple[int, ...], ...]:
        if not self.has_tuples:
            raise InputError(f"relation {self.name} has no offset tuples ({self.body})")
        assert isinstance(self.body, tuple)
        return self.body

    @cached_property
    def _tuple_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.offset_tuples)

    def max_offset(self) -> int:
        """Largest absolute offset component appearing in the body (0 for markers)."""
        if not self.has_tuples:
            return 0
        return max((abs(c) for v in self.offset_tuples for c in v), default=0)


def project_constraint(rel: RelationDef, i: int, j: int) -> OffsetSet:
    """Offsets of coordinate j minus coordinate i over all orbits of ``rel``.

    Coordinates are 1-based; the implicit first component of every orbit
    representative is 0.
    """
    if not rel.has_tuples:
        raise InputError(f"cannot project relation {rel.name} with body {rel.body}")
    if not (1 <= i <= rel.arity and 1 <= j <= rel.arity):
        raise InputError(f"projection coordinates ({i},{j}) out of range for arity {rel.arity}")
    if i == j:
        raise InputError("projection coordinates must be distinct")
    out = set()
    for v in rel.offset_tuples:
        w = (0, *v)
        out.add(w[j - 1] - w[i - 1])
    return OffsetSet(tuple(out))


def tuple_in_relation(rel: RelationDef, values: tuple[int, ...]) -> bool:
    """Whether a concrete integer tuple belongs to the relation."""
    if len(values) != rel.arity:
        raise InputError(
            f"relation {rel.name} has arity {rel.arity}, got tuple of length {len(values)}"
        )
    if rel.is_full:
        return True
    if rel.is_empty:
        return False
    base = values[0]
    return tuple(c - base for c in values[1:]) in rel._tuple_set


@dataclass(frozen=True)
class Template:
    """A named, finite collection of relations sharing one integer domain."""

    name: str
    relations: tuple[RelationDef, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InputError("template name must be a non-empty string")
        object.__setattr__(self, "relations", tuple(self.relations))
        names = [r.name for r in self.relations]
        if len(names) != len(set(names)):
            raise InputError(f"template {self.name}: duplicate relation names")

    @cached_property
    def _by_name(self) -> dict[str, RelationDef]:
        return {r.name: r for r in self.relations}

    def relation(self, name: str) -> RelationDef:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"template {self.name} has no relation named {name!r}") from None


@dataclass(frozen=True)
class Constraint:
    """One atomic constraint: a relation name applied to variable indices."""

    relation: str
    args: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.relation, str) or not self.relation:
            raise InputError("constraint relation name must be a non-empty string")
        object.__setattr__(
            self, "args", tuple(_check_int(a, "constraint argument") for a in self.args)
        )
        if not self.args:
            raise InputError("constraint needs at least one argument")


@dataclass(frozen=True)
class Instance:
    """A conjunction of constraints over variables 0 .. num_vars - 1."""

    num_vars: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        _check_int(self.num_vars, "num_vars")
        if self.num_vars < 1:
            raise InputError("an instance needs at least one variable")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            for a in c.args:
                if not 0 <= a < self.num_vars:
                    raise InputError(
                        f"constraint {c.relation}{c.args} uses variable {a}, "
                        f"but only {self.num_vars} variables are declared"
                    )

    def validate_against(self, template: Template) -> None:
        """Check that every constraint names a template relation of matching arity."""
        for c in self.constraints:
            rel = template.relation(c.relation)
            if len(c.args) != rel.arity:
                raise InputError(
                    f"constraint {c.relation}{c.args}: relation has arity {rel.arity}, "
                    f"got {len(c.args)} arguments"
                )
