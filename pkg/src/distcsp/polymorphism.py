"""Median-with-congruence operations and closure checks.

For a modulus d, the ternary operation m_d picks the median when all three
arguments are congruent mod d, the earlier of the two congruent arguments
when exactly two are, and the first argument otherwise.  Every m_d is a
majority operation and commutes with translations.  A template all of whose
relations are closed under some m_d admits witness extraction straight from
the pairwise propagation fixpoint, so detecting such a modulus is the key
tractability test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .analysis import max_distance_or_zero
from .errors import InputError
from .model import RelationDef, Template, project_constraint, tuple_in_relation

IntTuple = tuple[int, ...]


def modular_median(d: int, x: int, y: int, z: int) -> int:
    """The congruence-aware median of x, y, z for modulus d."""
    if d < 1:
        raise InputError(f"modulus must be positive, got {d}")
    rx, ry, rz = x % d, y % d, z % d
    if rx == ry == rz:
        return sorted((x, y, z))[1]
    if rx == ry or rx == rz:
        return x
    if ry == rz:
        return y
    return x


@dataclass(frozen=True)
class PreservationResult:
    """Outcome of a closure check; witnesses are concrete integer tuples."""

    preserved: bool
    witness: tuple[IntTuple, IntTuple, IntTuple] | None = None
    image: IntTuple | None = None
    trivial: bool = False


@dataclass(frozen=True)
class PolymorphismFinding:
    """A verified modulus together with how hard it was checked."""

    modulus: int
    verified_window: int
    randomized_trials: int = 0


def preservation_window(d: int, rel: RelationDef) -> int:
    """Base-point shift bound for the exhaustive closure check."""
    return 6 * (rel.max_offset() + d) + 1


def _median_grid(x, y, z):
    hi = np.maximum(np.maximum(x, y), z)
    lo = np.minimum(np.minimum(x, y), z)
    return x + y + z - hi - lo


def _modular_median_grid(d: int, x, y, z):
    # same case split as modular_median, vectorized; np.select takes the
    # first condition that holds
    rx, ry, rz = x % d, y % d, z % d
    return np.select(
        [(rx == ry) & (ry == rz), rx == ry, rx == rz, ry == rz],
        [_median_grid(x, y, z), x, x, y],
        default=x,
    )


def preserves_relation(d: int, rel: RelationDef, window: int | None = None) -> PreservationResult:
    """Exhaustively check that m_d maps orbit triples of ``rel`` back into it.

    Since m_d commutes with translation, the first tuple's base point is
    pinned to 0 and the other two range over [-window, window]; the default
    window grows with both the relation's offsets and the modulus, wide
    enough that any violation shows up at some in-window configuration.
    FULL and EMPTY bodies are closed under anything and report trivially.
    """
    if d < 1:
        raise InputError(f"modulus must be positive, got {d}")
    if not rel.has_tuples:
        return PreservationResult(True, trivial=True)
    tuples = rel.offset_tuples
    k = rel.arity
    delta = rel.max_offset()
    bound = preservation_window(d, rel) if window is None else window
    vectors = [(0, *v) for v in tuples]
    shifts = np.arange(-bound, bound + 1, dtype=np.int64)
    a2 = shifts[:, None]
    a3 = shifts[None, :]
    # encode image offset tuples as single integers for membership tests
    span = 2 * (bound + delta)
    radix = 2 * span + 1
    member = np.array(
        sorted(sum((c + span) * radix**i for i, c in enumerate(v)) for v in tuples),
        dtype=np.int64,
    )
    for v1 in vectors:
        for v2 in vectors:
            for v3 in vectors:
                comps = [
                    _modular_median_grid(d, v1[j], a2 + v2[j], a3 + v3[j])
                    for j in range(k)
                ]
                code = np.zeros_like(comps[0])
                for i, comp in enumerate(comps[1:]):
                    code = code + (comp - comps[0] + span) * radix**i
                bad = ~np.isin(code, member)
                if bad.any():
                    r, c = np.argwhere(bad)[0]
                    s2, s3 = int(shifts[r]), int(shifts[c])
                    t1 = tuple(v1)
                    t2 = tuple(s2 + c_ for c_ in v2)
                    t3 = tuple(s3 + c_ for c_ in v3)
                    image = tuple(
                        modular_median(d, t1[j], t2[j], t3[j]) for j in range(k)
                    )
                    return PreservationResult(False, (t1, t2, t3), image)
    return PreservationResult(True)


def random_preservation_trials(
    d: int,
    rel: RelationDef,
    trials: int = 100_000,
    shift_bound: int = 1_000_000,
    seed: int = 0,
) -> tuple[IntTuple, IntTuple, IntTuple] | None:
    """Randomized search for a closure violation; returns the first witness found.

    Samples orbit triples with unconstrained base points, far outside the
    exhaustive check's window.  Used to cross-examine windowed verdicts.
    """
    if not rel.has_tuples:
        return None
    rng = random.Random(seed)
    vectors = [(0, *v) for v in rel.offset_tuples]
    for _ in range(trials):
        picked = [rng.choice(vectors) for _ in range(3)]
        bases = [rng.randint(-shift_bound, shift_bound) for _ in range(3)]
        t1, t2, t3 = (
            tuple(b + c for c in v) for b, v in zip(bases, picked)
        )
        image = tuple(modular_median(d, t1[j], t2[j], t3[j]) for j in range(rel.arity))
        if not tuple_in_relation(rel, image):
            return (t1, t2, t3)
    return None


def find_modular_median(t: Template, d_max: int | None = None) -> int | None:
    """Smallest modulus d <= d_max that every relation of ``t`` is closed under.

    The default bound is twice the largest realized distance (1 when the
    template has no graph edges, where the plain median always works).
    """
    if d_max is None:
        biggest = max_distance_or_zero(t)
        d_max = 2 * biggest if biggest else 1
    if d_max < 1:
        raise InputError(f"modulus bound must be positive, got {d_max}")
    for d in range(1, d_max + 1):
        if all(preserves_relation(d, rel).preserved for rel in t.relations):
            return d
    return None


def verification_window(t: Template, d: int) -> int:
    """Largest shift window the exhaustive check uses across ``t``'s relations."""
    return max(
        (preservation_window(d, rel) for rel in t.relations if rel.has_tuples),
        default=0,
    )


def check_two_decomposable(
    rel: RelationDef, window: int | None = None
) -> tuple[bool, IntTuple | None]:
    """Whether ``rel`` contains every tuple all of whose pairwise projections extend.

    A candidate tuple t (first component pinned to 0, the rest ranging over
    [-window, window]) passes the pairwise test when for each coordinate pair
    (i, j) some orbit of the relation realizes the gap t_j - t_i.  Relations
    closed under a majority operation contain all such candidates, so a
    counterexample here refutes every modular median at once.  Arity < 3 and
    marker bodies are vacuously decomposable.
    """
    if rel.arity < 3 or not rel.has_tuples:
        return True, None
    k = rel.arity
    delta = rel.max_offset()
    bound = k * delta + 1 if window is None else window
    projections = {
        (i, j): set(project_constraint(rel, i, j).offsets or ())
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
    }

    def candidates(prefix: tuple[int, ...]):
        if len(prefix) == k:
            yield prefix
            return
        for value in range(-bound, bound + 1):
            yield from candidates(prefix + (value,))

    for cand in candidates((0,)):
        fits = all(
            cand[j - 1] - cand[i - 1] in projections[(i, j)]
            for (i, j) in projections
        )
        if fits and not tuple_in_relation(rel, cand):
            return False, cand
    return True, None
