"""Brute-force ground truth for low paths between positive integer vectors.

States are explored up to permutation (sorted tuples), since swaps are
always available and never leave the low region.  The region is finite:
a low state is dominated, after sorting, by one of the two endpoints.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import InputError, StateSpaceCap
from .exactnum import TRIVIAL_BASIS, SymReal, vector
from .pathengine.moves import Move, MovePath, Walk

DEFAULT_NODE_CAP = 10_000_000


class NotFound:
    """No low admissible path exists between the two vectors."""

    def __bool__(self):
        return False

    def __repr__(self):
        return "NotFound"


NOT_FOUND = NotFound()


@dataclass(frozen=True)
class IntInstance:
    d: tuple
    e: tuple

    def __post_init__(self):
        d, e = tuple(self.d), tuple(self.e)
        if not d or len(d) != len(e):
            raise InputError("endpoints must be nonempty and of equal length")
        for x in d + e:
            if not isinstance(x, int) or isinstance(x, bool) or x <= 0:
                raise InputError(f"oracle needs positive integers, got {x!r}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)


def _dominated(s, top) -> bool:
    for x, y in zip(s, top):
        if x > y:
            return False
    return True


def _neighbours(s):
    """(move on sorted positions, sorted successor), in lexicographic move order."""
    k = len(s)
    seen = set()
    for kind in ("M", "P"):
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                v = list(s)
                if kind == "P":
                    v[i] += v[j]
                else:
                    v[i] -= v[j]
                    if v[i] <= 0:
                        continue
                t = tuple(sorted(v))
                if t in seen:
                    continue
                seen.add(t)
                yield (kind, i, j), t


def canonical_search(sd: tuple, se: tuple, node_cap: int = DEFAULT_NODE_CAP):
    """Shortest sequence of (sorted state, move) hops from sd to se, or None."""
    return _search(tuple(sorted(sd)), tuple(sorted(se)), node_cap)


@lru_cache(maxsize=65536)
def _search(sd, se, node_cap):
    if sd == se:
        return ()
    parent = {sd: None}
    queue = deque([sd])
    while queue:
        s = queue.popleft()
        for mv, t in _neighbours(s):
            if t in parent:
                continue
            if not (_dominated(t, sd) or _dominated(t, se)):
                continue
            parent[t] = (s, mv)
            if t == se:
                hops = []
                while parent[t] is not None:
                    s0, m0 = parent[t]
                    hops.append((s0, m0))
                    t = s0
                return tuple(reversed(hops))
            if len(parent) > node_cap:
                raise StateSpaceCap(f"more than {node_cap} low states explored")
            queue.append(t)
    return None


def _position(cur, value, avoid=None):
    for p, x in enumerate(cur):
        if x == value and p != avoid:
            return p
    raise AssertionError("value not present in the current state")


def _realize(d: tuple, e: tuple, hops) -> MovePath:
    basis = TRIVIAL_BASIS
    walk = Walk(vector(basis, d))
    cur = list(d)
    for s, (kind, i, j) in hops:
        pi = _position(cur, s[i])
        pj = _position(cur, s[j], avoid=pi)
        if kind == "P":
            walk.P(pi + 1, pj + 1)
            cur[pi] += cur[pj]
        else:
            walk.M(pi + 1, pj + 1)
            cur[pi] -= cur[pj]
    # finish with transpositions
    for p in range(len(e)):
        if cur[p] != e[p]:
            q = next(t for t in range(p + 1, len(e)) if cur[t] == e[p])
            walk.I(p + 1, q + 1)
            cur[p], cur[q] = cur[q], cur[p]
    return walk.path()


def bfs_low_path(inst: IntInstance | tuple, e: Sequence[int] | None = None,
                 node_cap: int = DEFAULT_NODE_CAP):
    """Low admissible path with the fewest P/M moves, or NOT_FOUND.

    Accepts an IntInstance or the two vectors.  Transpositions are free
    between canonical states and are appended only where needed.
    """
    if not isinstance(inst, IntInstance):
        inst = IntInstance(tuple(inst), tuple(e))
    hops = canonical_search(inst.d, inst.e, node_cap)
    if hops is None:
        return NOT_FOUND
    return _realize(inst.d, inst.e, hops)


def low_exists(d: Sequence[int], e: Sequence[int], node_cap: int = DEFAULT_NODE_CAP) -> bool:
    inst = IntInstance(tuple(d), tuple(e))
    sd, se = sorted(inst.d), sorted(inst.e)
    # reversing a low path gives a low path, so one orientation suffices
    if se < sd:
        sd, se = se, sd
    return canonical_search(tuple(sd), tuple(se), node_cap) is not None


def clear_cache():
    _search.cache_clear()


def as_ints(v: Sequence[SymReal]) -> tuple:
    """Integer values of SymReals over the trivial basis."""
    out = []
    for x in v:
        if len(x.basis) != 1 or not x.is_rational():
            raise InputError("oracle needs integer data over the trivial basis")
        c = x.coeffs[0]
        if getattr(c, "denominator", 1) != 1:
            raise InputError(f"oracle needs integers, got {c}")
        out.append(int(c))
    return tuple(out)
