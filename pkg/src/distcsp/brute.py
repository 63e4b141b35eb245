"""Exhaustive decision procedure, independent of the propagation solver.

Satisfiable components always have a witness whose values stay within
(m-1) * D of the root, where m is the component size and D the largest
realized distance: along a spanning tree of the co-occurrence graph,
adjacent variables constrained by an orbit differ by at most D, and
variables adjacent only through FULL constraints can be set equal.  Scanning
that window completely is therefore a full decision procedure, not a
heuristic.
"""

from __future__ import annotations

from collections import deque

from .errors import CapExceededError, InputError
from .model import Instance, OffsetSet, Template, project_constraint, tuple_in_relation

DEFAULT_NODE_CAP = 100_000_000


def verify_assignment(
    inst: Instance, t: Template, values: tuple[int, ...]
) -> tuple[bool, int | None]:
    """Check every constraint; returns (ok, index of first failing constraint)."""
    inst.validate_against(t)
    if len(values) != inst.num_vars:
        raise InputError(
            f"assignment has {len(values)} values for {inst.num_vars} variables"
        )
    for idx, c in enumerate(inst.constraints):
        rel = t.relation(c.relation)
        if not tuple_in_relation(rel, tuple(values[a] for a in c.args)):
            return False, idx
    return True, None


def _max_distance(t: Template) -> int:
    gaps = [
        abs(w[j] - w[i])
        for rel in t.relations
        if rel.has_tuples
        for v in rel.offset_tuples
        for w in [(0, *v)]
        for i in range(len(w))
        for j in range(i + 1, len(w))
    ]
    return max(gaps, default=0)


def _components(inst: Instance) -> list[list[int]]:
    adjacency: list[set[int]] = [set() for _ in range(inst.num_vars)]
    for c in inst.constraints:
        distinct = sorted(set(c.args))
        for i, a in enumerate(distinct):
            for b in distinct[i + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
    components, seen = [], [False] * inst.num_vars
    for start in range(inst.num_vars):
        if seen[start]:
            continue
        comp, queue = [], deque([start])
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


def search_space_estimate(inst: Instance, t: Template) -> int:
    """Upper bound on assignments the backtracking search can visit.

    Every non-root variable reached through a constraint with offset tuples
    branches over at most 2D + 1 values; variables adjacent only through
    FULL constraints fall back to the whole window.
    """
    inst.validate_against(t)
    biggest = _max_distance(t)
    estimate = 1
    for comp in _components(inst):
        order, finite_edges = _component_plan(inst, t, comp)[:2]
        window = 2 * (len(comp) - 1) * biggest + 1
        placed = {order[0]}
        for j in order[1:]:
            if any((i, j) in finite_edges for i in placed):
                estimate *= 2 * biggest + 1
            else:
                estimate *= window
            placed.add(j)
    return estimate


def _component_plan(inst: Instance, t: Template, comp: list[int]):
    """BFS variable order, finite pair edges, and pair sets for one component."""
    local = {g: i for i, g in enumerate(comp)}
    adjacency: list[set[int]] = [set() for _ in range(len(comp))]
    pair_sets: dict[tuple[int, int], set[int]] = {}
    constraints = []
    for c in inst.constraints:
        if c.args[0] not in local:
            continue
        args = tuple(local[a] for a in c.args)
        constraints.append((c, args))
        rel = t.relation(c.relation)
        distinct = sorted(set(args))
        for x, a in enumerate(distinct):
            for b in distinct[x + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
        if not rel.has_tuples:
            continue
        for pi in range(len(args)):
            for pj in range(pi + 1, len(args)):
                a, b = args[pi], args[pj]
                if a == b:
                    continue
                allowed = set(project_constraint(rel, pi + 1, pj + 1).offsets or ())
                for key, offs in (((a, b), allowed), ((b, a), {-s for s in allowed})):
                    if key in pair_sets:
                        pair_sets[key] &= offs
                    else:
                        pair_sets[key] = set(offs)
    order, seen = [], [False] * len(comp)
    queue = deque([0])
    seen[0] = True
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in sorted(adjacency[v]):
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    for v in range(len(comp)):
        if not seen[v]:
            order.append(v)
    finite_edges = set(pair_sets)
    return order, finite_edges, pair_sets, constraints


def brute_solve(
    inst: Instance, t: Template, node_cap: int = DEFAULT_NODE_CAP
) -> tuple[int, ...] | None:
    """Depth-first search for the least witness under the search order, or None.

    Components are searched independently, each with its lowest variable
    pinned to 0 and the others scanned ascending over the complete window.
    Binary projections of the covering constraints prune candidates early;
    they are implied constraints, so pruning never loses a witness.  Raises
    CapExceededError instead of starting a search estimated over node_cap.
    """
    inst.validate_against(t)
    for c in inst.constraints:
        if t.relation(c.relation).is_empty:
            return None
    estimate = search_space_estimate(inst, t)
    if estimate > node_cap:
        raise CapExceededError(
            f"search space estimate {estimate} exceeds the cap {node_cap}"
        )
    biggest = _max_distance(t)
    values = [0] * inst.num_vars
    for comp in _components(inst):
        order, _, pair_sets, constraints = _component_plan(inst, t, comp)
        half = (len(comp) - 1) * biggest
        # check each constraint once, at the assignment of its latest variable
        position = {v: i for i, v in enumerate(order)}
        due: list[list] = [[] for _ in order]
        for c, args in constraints:
            due[max(position[a] for a in args)].append((t.relation(c.relation), args))
        local_values: dict[int, int] = {}

        def passes(step: int) -> bool:
            for rel, args in due[step]:
                if not tuple_in_relation(rel, tuple(local_values[a] for a in args)):
                    return False
            return True

        def extend(step: int) -> bool:
            if step == len(order):
                return True
            j = order[step]
            if step == 0:
                domain: list[int] = [0]
            else:
                allowed: set[int] | None = None
                for i in local_values:
                    offs = pair_sets.get((i, j))
                    if offs is None:
                        continue
                    shifted = {local_values[i] + s for s in offs}
                    allowed = shifted if allowed is None else allowed & shifted
                if allowed is None:
                    domain = list(range(-half, half + 1))
                else:
                    domain = sorted(v for v in allowed if -half <= v <= half)
            for value in domain:
                local_values[j] = value
                if passes(step) and extend(step + 1):
                    return True
                del local_values[j]
            return False

        if not extend(0):
            return None
        for local, g in enumerate(comp):
            values[g] = local_values[local]
    return tuple(values)
