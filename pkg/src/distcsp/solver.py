"""Pairwise difference propagation and witness extraction.

The solver keeps one offset set per ordered pair of variables in a connected
component of the instance.  Each set starts as the intersection of the
projections of every constraint covering the pair (FULL when none does) and
is then tightened through every intermediate variable,

    P(k,l)  <-  P(k,l)  intersect  (P(k,m) + P(m,l)),

until nothing shrinks.  Every tightening is implied by the instance, so an
empty pair set is a proof of unsatisfiability; at the fixpoint every finite
pair set lies within hop-distance * D of zero.  A witness is then read off
greedily in breadth-first variable order; when the template is closed under
a modular median the fixpoint is globally consistent and the greedy walk
cannot get stuck.  Without that guarantee a stuck extraction yields an
'unknown' verdict and the caller may fall back to exhaustive search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

from .analysis import max_distance_or_zero
from .errors import CapExceededError, InputError, InternalInvariantError
from .model import (
    Constraint,
    Instance,
    OffsetSet,
    RelationDef,
    Template,
    project_constraint,
    tuple_in_relation,
)

TraceFn = Callable[[str], None]

MODES = ("auto", "consistency", "brute")


@dataclass
class SolveStats:
    """Counters from one solve; sweeps counts scheduler steps (full passes in
    sweep mode, pair visits in worklist mode)."""

    proper_replacements: int = 0
    sweeps: int = 0
    full_to_finite: int = 0
    components: int = 0

    def absorb(self, other: "SolveStats") -> None:
        self.proper_replacements += other.proper_replacements
        self.sweeps += other.sweeps
        self.full_to_finite += other.full_to_finite


@dataclass(frozen=True)
class Verdict:
    """Outcome of a solve: sat with verified witness, unsat, or unknown."""

    status: str
    witness: tuple[int, ...] | None = None
    reason: str | None = None
    stats: SolveStats | None = None

    @classmethod
    def sat(cls, witness: tuple[int, ...], stats: SolveStats | None = None) -> "Verdict":
        return cls("sat", witness=witness, stats=stats)

    @classmethod
    def unsat(cls, stats: SolveStats | None = None) -> "Verdict":
        return cls("unsat", stats=stats)

    @classmethod
    def unknown(cls, reason: str, stats: SolveStats | None = None) -> "Verdict":
        return cls("unknown", reason=reason, stats=stats)


@dataclass(frozen=True)
class Preprocessed:
    """Instance with repeated-variable constraints rewritten, plus the template
    extended with the rewritten relations; unsat marks a constraint that
    emptied out."""

    instance: Instance
    template: Template
    unsat: bool


def preprocess(inst: Instance, t: Template) -> Preprocessed:
    """Normalize an instance: split off repeated variables, drop vacuous atoms.

    A constraint using the same variable several times is rewritten over its
    distinct variables by keeping exactly the orbits whose components agree
    at the repeated positions.  Unary leftovers are all of Z (dropped) or
    empty (unsatisfiable).  Duplicate constraints are dropped.
    """
    inst.validate_against(t)
    derived: dict[str, RelationDef] = {}
    kept: list[Constraint] = []
    seen: set[Constraint] = set()

    def keep(c: Constraint) -> None:
        if c not in seen:
            seen.add(c)
            kept.append(c)

    for c in inst.constraints:
        rel = t.relation(c.relation)
        if rel.is_empty:
            return Preprocessed(inst, t, True)
        if len(set(c.args)) == len(c.args):
            if rel.arity == 1:
                continue  # unary FULL says nothing
            keep(c)
            continue
        # positions of first occurrences, in order
        order: list[int] = []
        slot: dict[int, int] = {}
        for a in c.args:
            if a not in slot:
                slot[a] = len(order)
                order.append(a)
        pattern = "".join(str(slot[a]) for a in c.args)
        arity = len(order)
        if rel.is_full:
            if arity == 1:
                continue
            name = f"{rel.name}~{pattern}"
            derived.setdefault(name, RelationDef(name, arity, "full"))
            keep(Constraint(name, tuple(order)))
            continue
        first_pos = [c.args.index(v) for v in order]
        filtered = set()
        for v in rel.offset_tuples:
            w = (0, *v)
            if all(w[i] == w[first_pos[slot[c.args[i]]]] for i in range(len(c.args))):
                filtered.add(tuple(w[p] - w[first_pos[0]] for p in first_pos[1:]))
        if not filtered:
            return Preprocessed(inst, t, True)
        if arity == 1:
            continue  # some orbit survives at every base point
        name = f"{rel.name}~{pattern}"
        derived.setdefault(name, RelationDef(name, arity, tuple(filtered)))
        keep(Constraint(name, tuple(order)))

    template = t
    if derived:
        template = Template(t.name, t.relations + tuple(derived.values()))
    return Preprocessed(Instance(inst.num_vars, tuple(kept)), template, False)


def canonical_components(inst: Instance) -> list[list[int]]:
    """Connected components of the variable co-occurrence graph, sorted."""
    adjacency: list[set[int]] = [set() for _ in range(inst.num_vars)]
    for c in inst.constraints:
        distinct = sorted(set(c.args))
        for i, a in enumerate(distinct):
            for b in distinct[i + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
    seen = [False] * inst.num_vars
    components = []
    for start in range(inst.num_vars):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in sorted(adjacency[v]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        components.append(sorted(comp))
    return components


def induced_instance(inst: Instance, component: list[int]) -> Instance:
    """The instance restricted to one component, variables renumbered 0..m-1."""
    local = {g: i for i, g in enumerate(component)}
    constraints = []
    for c in inst.constraints:
        if c.args[0] in local:
            assert all(a in local for a in c.args)
            constraints.append(Constraint(c.relation, tuple(local[a] for a in c.args)))
    return Instance(len(component), tuple(constraints))


class PairMatrix:
    """Offset sets for every ordered pair of component variables.

    The mirror invariant S(P(l,k)) = -S(P(k,l)) is maintained on every
    update; both directions of a pair change atomically.
    """

    def __init__(self, size: int, variable_ids: list[int], max_distance: int):
        self.size = size
        self.variable_ids = list(variable_ids)
        self.max_distance = max_distance
        self.cells: dict[tuple[int, int], OffsetSet] = {
            (k, l): OffsetSet.full()
            for k in range(size)
            for l in range(size)
            if k != l
        }
        self.adjacency: list[set[int]] = [set() for _ in range(size)]
        self.stats = SolveStats()
        self.empty_pair: tuple[int, int] | None = None
        self.initial_finite = 0

    def get(self, k: int, l: int) -> OffsetSet:
        return self.cells[(k, l)]

    def set_pair(self, k: int, l: int, value: OffsetSet) -> None:
        self.cells[(k, l)] = value
        self.cells[(l, k)] = -value


def initialize_pairs(inst: Instance, t: Template, variable_ids: list[int] | None = None) -> PairMatrix:
    """Pair matrix for one preprocessed component.

    Adjacent pairs start at the intersection of the projections of all
    covering constraints (intersecting every conjunct instead of picking one
    is sound and only tightens); non-adjacent pairs start FULL.
    """
    size = inst.num_vars
    matrix = PairMatrix(size, variable_ids or list(range(size)), max_distance_or_zero(t))
    for c in inst.constraints:
        rel = t.relation(c.relation)
        if len(set(c.args)) != len(c.args):
            raise InputError(
                f"constraint {c.relation}{c.args} has repeated variables; preprocess first"
            )
        for pi in range(len(c.args)):
            for pj in range(pi + 1, len(c.args)):
                k, l = c.args[pi], c.args[pj]
                matrix.adjacency[k].add(l)
                matrix.adjacency[l].add(k)
                if rel.has_tuples:
                    tightened = matrix.get(k, l) & project_constraint(rel, pi + 1, pj + 1)
                    matrix.set_pair(k, l, tightened)
    matrix.initial_finite = sum(
        len(s.offsets) for s in matrix.cells.values() if s.offsets is not None
    )
    for (k, l), s in sorted(matrix.cells.items()):
        if s.is_empty:
            matrix.empty_pair = (k, l)
            break
    return matrix


def _hop_distances(matrix: PairMatrix) -> list[list[int | None]]:
    tables: list[list[int | None]] = []
    for start in range(matrix.size):
        dist: list[int | None] = [None] * matrix.size
        dist[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in matrix.adjacency[v]:
                if dist[w] is None:
                    dist[w] = dist[v] + 1  # type: ignore[operator]
                    queue.append(w)
        tables.append(dist)
    return tables


def _check_bounds(matrix: PairMatrix) -> None:
    # a fixpoint property: mid-propagation a pair first tightened through a
    # detour may transiently hold a wider set
    hops = _hop_distances(matrix)
    for (k, l), cell in matrix.cells.items():
        if cell.offsets is None or not cell.offsets:
            continue
        steps = hops[k][l]
        if steps is None:
            continue
        bound = steps * matrix.max_distance
        if cell.offsets[0] < -bound or cell.offsets[-1] > bound:
            raise InternalInvariantError(
                f"pair ({k},{l}) at hop distance {steps} holds {cell} "
                f"outside [-{bound},{bound}]"
            )


def _check_budget(matrix: PairMatrix) -> None:
    budget = matrix.initial_finite + matrix.stats.full_to_finite * (
        2 * matrix.size * matrix.max_distance + 1
    )
    if matrix.stats.proper_replacements > budget:
        raise InternalInvariantError(
            f"{matrix.stats.proper_replacements} proper replacements exceed budget {budget}"
        )


def propagate(
    matrix: PairMatrix,
    schedule: str = "worklist",
    trace: TraceFn | None = None,
    debug: bool = False,
) -> PairMatrix:
    """Tighten the pair matrix to its fixpoint in place.

    Both schedules reach the same (greatest) fixpoint; the worklist revisits
    pairs touching a shrunk cell, the sweep schedule makes full passes over
    all ordered triples.  Propagation stops as soon as some pair empties.
    When debug is set, the replacement budget is enforced and, on reaching a
    fixpoint, every finite cell is checked against the hop-distance bound.
    """
    if matrix.empty_pair is not None:
        return matrix
    ids = matrix.variable_ids

    def tighten(k: int, l: int, m: int) -> bool:
        old = matrix.get(k, l)
        new = old & (matrix.get(k, m) + matrix.get(m, l))
        if new == old:
            return False
        matrix.set_pair(k, l, new)
        matrix.stats.proper_replacements += 1
        if old.is_full:
            matrix.stats.full_to_finite += 1
        if trace is not None:
            trace(f"pair=({ids[k]},{ids[l]}) via {ids[m]} old={old} new={new}")
        if new.is_empty:
            matrix.empty_pair = (k, l)
        return True

    n = matrix.size
    if schedule == "worklist":
        pending = deque(sorted(matrix.cells))
        queued = set(pending)
        while pending:
            k, l = pending.popleft()
            queued.discard((k, l))
            matrix.stats.sweeps += 1
            for m in range(n):
                if m == k or m == l:
                    continue
                if tighten(k, l, m):
                    if matrix.empty_pair is not None:
                        if debug:
                            _check_budget(matrix)
                        return matrix
                    for a in range(n):
                        for pair in ((k, a), (a, k), (l, a), (a, l)):
                            if pair[0] != pair[1] and pair not in queued:
                                queued.add(pair)
                                pending.append(pair)
    elif schedule == "sweep":
        changed = True
        while changed:
            changed = False
            matrix.stats.sweeps += 1
            for (k, l) in sorted(matrix.cells):
                for m in range(n):
                    if m == k or m == l:
                        continue
                    if tighten(k, l, m):
                        changed = True
                        if matrix.empty_pair is not None:
                            if debug:
                                _check_budget(matrix)
                            return matrix
    else:
        raise InputError(f"unknown propagation schedule {schedule!r}")
    if debug:
        _check_budget(matrix)
        _check_bounds(matrix)
    return matrix


def _bfs_order(matrix: PairMatrix) -> list[int]:
    order = []
    seen = [False] * matrix.size
    queue = deque([0])
    seen[0] = True
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in sorted(matrix.adjacency[v]):
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    for v in range(matrix.size):  # unconstrained stragglers, defensively
        if not seen[v]:
            order.append(v)
    return order


def extract_solution(matrix: PairMatrix, inst: Instance, t: Template) -> tuple[int, ...] | None:
    """Greedy witness from a propagated matrix, breadth-first from variable 0.

    Each next variable takes the least value compatible with all pair sets
    to already-assigned variables that also satisfies every original
    constraint that becomes fully assigned.  Returns None when some step has
    no candidate, which cannot happen for templates closed under a modular
    median.
    """
    if matrix.empty_pair is not None:
        raise InternalInvariantError("extraction attempted on an empty pair matrix")
    by_var: list[list[Constraint]] = [[] for _ in range(inst.num_vars)]
    for c in inst.constraints:
        for a in set(c.args):
            by_var[a].append(c)
    values: dict[int, int] = {}
    for step, j in enumerate(_bfs_order(matrix)):
        if step == 0:
            values[j] = 0
            continue
        candidates: set[int] | None = None
        for i in values:
            cell = matrix.get(i, j)
            if cell.offsets is None:
                continue
            shifted = {values[i] + s for s in cell.offsets}
            candidates = shifted if candidates is None else candidates & shifted
        ready = [
            c for c in by_var[j] if all(a in values or a == j for a in c.args)
        ]

        def acceptable(value: int) -> bool:
            for c in ready:
                rel = t.relation(c.relation)
                concrete = tuple(value if a == j else values[a] for a in c.args)
                if not tuple_in_relation(rel, concrete):
                    return False
            return True

        if candidates is None:
            # only FULL pairs constrain j; any value works for those
            if not acceptable(0):
                return None
            values[j] = 0
            continue
        choice = next((v for v in sorted(candidates) if acceptable(v)), None)
        if choice is None:
            return None
        values[j] = choice
    return tuple(values[i] for i in range(inst.num_vars))


def _brute_verdict(inst: Instance, t: Template, node_cap: int | None, stats: SolveStats) -> Verdict:
    from .brute import DEFAULT_NODE_CAP, brute_solve, verify_assignment

    witness = brute_solve(inst, t, node_cap=node_cap or DEFAULT_NODE_CAP)
    if witness is None:
        return Verdict.unsat(stats)
    ok, failing = verify_assignment(inst, t, witness)
    if not ok:
        raise InternalInvariantError(f"exhaustive witness fails constraint {failing}")
    return Verdict.sat(witness, stats)


def solve(
    inst: Instance,
    t: Template,
    mode: str = "auto",
    trace: TraceFn | None = None,
    debug: bool = False,
    node_cap: int | None = None,
    median_max: int | None = None,
) -> Verdict:
    """Decide an instance against a template.

    Modes: "consistency" runs propagation plus greedy extraction and may
    answer unknown; "brute" delegates to the exhaustive search; "auto" runs
    consistency first and falls back to the exhaustive search when the
    outcome is unknown and the instance fits under the search cap.  Sat
    verdicts always carry a witness that has been re-verified; unsat
    verdicts from propagation are sound unconditionally.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    inst.validate_against(t)
    stats = SolveStats()
    if mode == "brute":
        try:
            return _brute_verdict(inst, t, node_cap, stats)
        except CapExceededError as e:
            return Verdict.unknown(str(e), stats)

    prep = preprocess(inst, t)
    if prep.unsat:
        return Verdict.unsat(stats)
    components = canonical_components(prep.instance)
    stats.components = len(components)
    propagated = []
    for component in components:
        sub = induced_instance(prep.instance, component)
        matrix = initialize_pairs(sub, prep.template, component)
        propagate(matrix, trace=trace, debug=debug)
        stats.absorb(matrix.stats)
        if matrix.empty_pair is not None:
            return Verdict.unsat(stats)
        propagated.append((component, sub, matrix))

    from .brute import verify_assignment
    from .polymorphism import find_modular_median

    values = [0] * inst.num_vars
    for component, sub, matrix in propagated:
        witness = extract_solution(matrix, sub, prep.template)
        if witness is None:
            if find_modular_median(prep.template, median_max) is not None:
                raise InternalInvariantError(
                    "extraction failed although the template is closed under a modular median"
                )
            reason = "witness extraction failed; no modular median verified for the template"
            if mode == "auto":
                try:
                    return _brute_verdict(inst, t, node_cap, stats)
                except CapExceededError as e:
                    return Verdict.unknown(f"{reason}; {e}", stats)
            return Verdict.unknown(reason, stats)
        for local, g in enumerate(component):
            values[g] = witness[local]
    final = tuple(values)
    ok, failing = verify_assignment(inst, t, final)
    if not ok:
        raise InternalInvariantError(f"extracted witness fails constraint {failing}")
    return Verdict.sat(final, stats)
