"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately re-derive results from first principles
(plain BFS, itertools enumeration, a from-scratch median) instead of calling
the package's algorithms, so tests can cross-examine the implementation.
"""

from __future__ import annotations

import itertools
from collections import deque

from distcsp.model import Constraint, Instance, RelationDef, Template


def binary_relation(name: str, offsets) -> RelationDef:
    return RelationDef(name, 2, tuple((o,) for o in offsets))


def symmetric(*magnitudes: int) -> tuple[int, ...]:
    out = []
    for m in magnitudes:
        out += [m, -m]
    return tuple(out)


DIST13 = Template("dist13", (binary_relation("dist13", symmetric(1, 3)),))
DIST12 = Template("dist12", (binary_relation("dist12", symmetric(1, 2)),))
DIFF13 = Template("diff13", (binary_relation("diff13", (1, 3)),))
SHIFT1 = Template("shift1", (binary_relation("shift1", (1,)),))
EQUALITY = Template("equality", (binary_relation("eq", (0,)),))
DIST136_3 = Template(
    "dist136_3",
    (
        binary_relation("dist136", symmetric(1, 3, 6)),
        binary_relation("dist3", symmetric(3)),
    ),
)
TERNARY_CHAIN = Template("chain3", (RelationDef("chain3", 3, ((1, 2),)),))
TWODEC_TRUE = Template("twodec_true", (RelationDef("r", 3, ((0, 0), (1, 1), (0, 1))),))
TWODEC_FALSE = Template("twodec_false", (RelationDef("r", 3, ((0, 1), (1, 0), (1, 1))),))

FIXTURE_TEMPLATES = (
    DIST13,
    DIST12,
    DIFF13,
    SHIFT1,
    EQUALITY,
    DIST136_3,
    TERNARY_CHAIN,
    TWODEC_TRUE,
    TWODEC_FALSE,
)


def graph_instance(rel_name: str, n: int, edges) -> Instance:
    return Instance(n, tuple(Constraint(rel_name, (a, b)) for a, b in edges))


def complete_edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def petersen_edges() -> list[tuple[int, int]]:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return outer + spokes + inner


def oracle_walk_length(distances, q: int, max_depth: int = 10_000) -> int:
    """Shortest number of +-d steps from 0 to q, by unwindowed BFS."""
    if q == 0:
        return 0
    frontier = {0}
    visited = {0}
    for depth in range(1, max_depth + 1):
        frontier = {
            pos + step
            for pos in frontier
            for d in distances
            for step in (d, -d)
        } - visited
        if q in frontier:
            return depth
        visited |= frontier
        if not frontier:
            break
    raise AssertionError(f"no walk from 0 to {q} with steps {distances}")


def oracle_median(d: int, x: int, y: int, z: int) -> int:
    """Independent restatement of the congruence-aware median."""
    groups: dict[int, list[int]] = {}
    for value in (x, y, z):
        groups.setdefault(value % d, []).append(value)
    if len(groups) == 1:
        return sorted((x, y, z))[1]
    if len(groups) == 3:
        return x
    pair = next(vals for vals in groups.values() if len(vals) == 2)
    for value in (x, y, z):
        if value in pair:
            return value
    raise AssertionError("unreachable")


def oracle_in_relation(rel: RelationDef, values) -> bool:
    if rel.body == "full":
        return True
    if rel.body == "empty":
        return False
    return tuple(v - values[0] for v in values[1:]) in set(rel.body)


def oracle_falsify_closure(d, rel, trials, shift_bound, rng):
    """Random search for a triple of relation tuples whose median escapes.

    Returns a witness triple or None.  Uses oracle_median throughout, so it
    shares no code with the package's closure checker.
    """
    vectors = [(0, *v) for v in rel.body]
    for _ in range(trials):
        rows = []
        for _ in range(3):
            base = rng.randint(-shift_bound, shift_bound)
            vec = vectors[rng.randrange(len(vectors))]
            rows.append(tuple(base + c for c in vec))
        image = tuple(
            oracle_median(d, rows[0][j], rows[1][j], rows[2][j])
            for j in range(rel.arity)
        )
        if not oracle_in_relation(rel, image):
            return tuple(rows)
    return None


def oracle_two_decomposable(rel: RelationDef, window: int):
    """Enumerate candidate tuples whose pairwise gaps all occur in the relation."""
    k = rel.arity
    vectors = [(0, *v) for v in rel.body]
    gaps = {
        (i, j): {w[j] - w[i] for w in vectors}
        for i in range(k)
        for j in range(k)
        if i != j
    }
    for rest in itertools.product(range(-window, window + 1), repeat=k - 1):
        cand = (0, *rest)
        if all(
            cand[j] - cand[i] in gaps[(i, j)]
            for i in range(k)
            for j in range(k)
            if i != j
        ) and not oracle_in_relation(rel, cand):
            return False, cand
    return True, None


def oracle_satisfiable(inst: Instance, t: Template, window: int | None = None):
    """Exhaustive satisfiability via itertools; first variable pinned to 0.

    Only sound for connected instances, where any witness can be translated
    so the first variable is 0 and all values stay within (n-1)*D.
    """
    gaps = [
        abs(w[j] - w[i])
        for rel in t.relations
        if rel.has_tuples
        for v in rel.offset_tuples
        for w in [(0, *v)]
        for i in range(len(w))
        for j in range(i + 1, len(w))
    ]
    biggest = max(gaps, default=0)
    if window is None:
        window = (inst.num_vars - 1) * biggest
    rels = {rel.name: rel for rel in t.relations}
    span = range(-window, window + 1)
    for rest in itertools.product(span, repeat=inst.num_vars - 1):
        values = (0, *rest)
        if all(
            oracle_in_relation(rels[c.relation], [values[a] for a in c.args])
            for c in inst.constraints
        ):
            return values
    return None


def spanning_tree_edges(n: int, rng) -> list[tuple[int, int]]:
    """A random spanning tree on n vertices: each vertex joins an earlier one."""
    return [(rng.randrange(i), i) for i in range(1, n)]


def random_connected_instance(t: Template, n: int, rng, extra: int = 2) -> Instance:
    """Random connected instance: spanning tree plus a few extra constraints."""
    names = [rel.name for rel in t.relations]
    constraints = []
    for a, b in spanning_tree_edges(n, rng):
        rel = t.relation(rng.choice(names))
        if rel.arity == 2:
            args = (a, b) if rng.random() < 0.5 else (b, a)
        else:
            others = [v for v in range(n) if v not in (a, b)]
            c = rng.choice(others) if others else a
            args = tuple(rng.sample([a, b, c], 3)) if others else (a, b, a)
        constraints.append(Constraint(rel.name, args))
    for _ in range(extra):
        rel = t.relation(rng.choice(names))
        args = tuple(rng.choices(range(n), k=rel.arity))
        constraints.append(Constraint(rel.name, args))
    return Instance(n, tuple(constraints))


def random_offset_run(rng, d: int, bound: int = 4) -> tuple[int, ...]:
    """A contiguous run of one residue class mod d inside [-bound, bound]."""
    residue = rng.randrange(d)
    values = [v for v in range(-bound, bound + 1) if v % d == residue]
    lo = rng.randrange(len(values))
    hi = rng.randrange(lo, len(values))
    return tuple(values[lo : hi + 1])


def random_median_template(rng, name: str) -> Template:
    """A random template built from median-closed pieces (runs and boxes)."""
    relations = []
    for idx in range(rng.choice((1, 1, 2))):
        d = rng.choice((1, 1, 2, 2, 3))
        if rng.random() < 0.7:
            offsets = random_offset_run(rng, d)
            relations.append(binary_relation(f"r{idx}", offsets))
        else:
            a = random_offset_run(rng, d)[:3]
            b = random_offset_run(rng, d)[:3]
            tuples = tuple((x, y) for x in a for y in b)
            relations.append(RelationDef(f"r{idx}", 3, tuples))
    return Template(name, tuple(relations))


def random_any_template(rng, name: str) -> Template:
    """A random template with no closure guarantees at all."""
    relations = []
    for idx in range(rng.choice((1, 1, 2))):
        arity = rng.choice((2, 2, 2, 3))
        count = rng.randint(1, 4)
        tuples = {
            tuple(rng.randint(-4, 4) for _ in range(arity - 1)) for _ in range(count)
        }
        relations.append(RelationDef(f"r{idx}", arity, tuple(tuples)))
    return Template(name, tuple(relations))


def components_of(inst: Instance) -> list[list[int]]:
    adjacency: list[set[int]] = [set() for _ in range(inst.num_vars)]
    for c in inst.constraints:
        distinct = sorted(set(c.args))
        for i, a in enumerate(distinct):
            for b in distinct[i + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
    seen = [False] * inst.num_vars
    out = []
    for start in range(inst.num_vars):
        if seen[start]:
            continue
        comp, queue = [], deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        out.append(sorted(comp))
    return out
