"""Moves on positive vectors, admissible paths and the lowness predicate."""
from __future__ import annotations

from dataclasses import dataclass
from operator import le
from typing import Iterable, Sequence

from ..errors import InputError, NonPositiveResult
from ..exactnum import SymReal

KINDS = ("P", "M", "I")
_REVERSE = {"P": "M", "M": "P", "I": "I"}


@dataclass(frozen=True)
class Move:
    """P: v_i += v_j, M: v_i -= v_j, I: swap v_i and v_j (1-based)."""

    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown move kind {self.kind!r}")
        if not (isinstance(self.i, int) and isinstance(self.j, int)):
            raise InputError("move indices must be integers")
        if self.i == self.j or self.i < 1 or self.j < 1:
            raise InputError(f"bad move indices ({self.i}, {self.j})")

    def inverse(self) -> "Move":
        return Move(_REVERSE[self.kind], self.i, self.j)

    def __str__(self):
        return f"{self.kind}_{self.i}{self.j}" if max(self.i, self.j) < 10 else f"{self.kind}_{self.i},{self.j}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j}


def apply_move(v: Sequence[SymReal], m: Move) -> tuple:
    k = len(v)
    if m.i > k or m.j > k:
        raise InputError(f"move {m} out of range for dimension {k}")
    i, j = m.i - 1, m.j - 1
    out = list(v)
    if m.kind == "P":
        out[i] = v[i] + v[j]
    elif m.kind == "M":
        r = v[i] - v[j]
        if r.sign() <= 0:
            raise NonPositiveResult(f"{m} on {format_vector(v)} gives {r}")
        out[i] = r
    else:
        out[i], out[j] = v[j], v[i]
    return tuple(out)


def format_vector(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


class MovePath:
    """Start vector, moves, and every intermediate state (all certified positive)."""

    __slots__ = ("start", "moves", "states")

    def __init__(self, start: Sequence[SymReal], moves: Iterable[Move] = ()):
        start = tuple(start)
        if not start:
            raise InputError("empty start vector")
        for x in start:
            if x.sign() <= 0:
                raise NonPositiveResult(f"start component {x} is not positive")
        self.start = start
        self.moves = tuple(moves)
        states = [start]
        for m in self.moves:
            states.append(apply_move(states[-1], m))
        self.states = tuple(states)

    @classmethod
    def _trusted(cls, start, moves, states):
        obj = object.__new__(cls)
        obj.start = tuple(start)
        obj.moves = tuple(moves)
        obj.states = tuple(states)
        return obj

    @property
    def end(self) -> tuple:
        return self.states[-1]

    @property
    def k(self) -> int:
        return len(self.start)

    def __len__(self):
        return len(self.moves)

    def __repr__(self):
        body = " ".join(str(m) for m in self.moves) or "(empty)"
        return f"MovePath[{format_vector(self.start)} -> {format_vector(self.end)}: {body}]"

    def reversed(self) -> "MovePath":
        return MovePath._trusted(self.end, [m.inverse() for m in reversed(self.moves)], self.states[::-1])

    def then(self, other: "MovePath") -> "MovePath":
        if other.start != self.end:
            raise InputError("paths do not join")
        return MovePath._trusted(self.start, self.moves + other.moves, self.states + other.states[1:])

    def without_loops(self) -> "MovePath":
        """Drop every closed sub-walk, so each state occurs once.

        The result visits a subset of the original states, so lowness and
        positivity carry over.
        """
        seen = {}
        moves, states = [], []
        for idx, s in enumerate(self.states):
            key = tuple(x.coeffs for x in s)
            if key in seen:
                cut = seen[key]
                for old in states[cut + 1:]:
                    del seen[tuple(x.coeffs for x in old)]
                del states[cut + 1:]
                del moves[cut:]
            else:
                if idx:
                    moves.append(self.moves[idx - 1])
                seen[key] = len(states)
                states.append(s)
        return MovePath._trusted(self.start, moves, states)

    def relabeled(self, positions: Sequence[int], full_start: Sequence[SymReal]) -> "MovePath":
        """Embed a path on a sub-vector into a longer vector.

        positions[l] is the 1-based slot in the long vector of local index
        l+1; other slots of full_start are left untouched.
        """
        moves = [Move(m.kind, positions[m.i - 1], positions[m.j - 1]) for m in self.moves]
        states = []
        for s in self.states:
            full = list(full_start)
            for l, p in enumerate(positions):
                full[p - 1] = s[l]
            states.append(tuple(full))
        return MovePath._trusted(states[0], moves, states)


def concat(*paths: MovePath) -> MovePath:
    out = paths[0]
    for p in paths[1:]:
        out = out.then(p)
    return out


class Walk:
    """Incremental path builder; every step is validated as it is taken."""

    def __init__(self, start: Sequence[SymReal], positions: Sequence[int] | None = None):
        self.start = tuple(start)
        self.cur = tuple(start)
        self.moves: list[Move] = []
        self.states: list[tuple] = [self.cur]
        # maps local 1-based indices to global slots
        self.positions = positions

    def _g(self, i):
        return self.positions[i - 1] if self.positions else i

    def step(self, kind: str, i: int, j: int, times: int = 1):
        m = Move(kind, self._g(i), self._g(j))
        for _ in range(times):
            self.cur = apply_move(self.cur, m)
            self.moves.append(m)
            self.states.append(self.cur)

    def P(self, i, j):
        self.step("P", i, j)

    def M(self, i, j, times: int = 1):
        self.step("M", i, j, times)

    def I(self, i, j):
        self.step("I", i, j)

    def local(self, i):
        return self.cur[self._g(i) - 1]

    def extend(self, path: MovePath):
        if path.start != self.cur:
            raise InputError("appended path does not start at the current state")
        self.moves.extend(path.moves)
        self.states.extend(path.states[1:])
        self.cur = path.end

    def path(self) -> MovePath:
        return MovePath._trusted(self.start, self.moves, self.states)


def sorted_vector(v: Sequence[SymReal]) -> list:
    return sorted(v)


def leq_sorted(sv: Sequence[SymReal], sw: Sequence[SymReal]) -> bool:
    for x, y in zip(sv, sw):
        if x > y:
            return False
    return True


def leq_perm(v: Sequence[SymReal], w: Sequence[SymReal]) -> bool:
    """True iff some permutation of w dominates v componentwise."""
    if len(v) != len(w):
        raise InputError("vectors of different lengths")
    return leq_sorted(sorted(v), sorted(w))


def is_low_admissible(p: MovePath, d: Sequence[SymReal], e: Sequence[SymReal]) -> bool:
    d, e = tuple(d), tuple(e)
    if p.start != d or p.end != e:
        return False
    if len(d[0].basis) == 1:
        # plain rationals: compare the values directly
        sd = sorted(x.coeffs[0] for x in d)
        se = sorted(x.coeffs[0] for x in e)
        for s in p.states:
            ss = sorted([x.coeffs[0] for x in s])
            if not (all(map(le, ss, sd)) or all(map(le, ss, se))):
                return False
        return True
    sd, se = sorted(d), sorted(e)
    for s in p.states:
        ss = sorted(s)
        if not (leq_sorted(ss, sd) or leq_sorted(ss, se)):
            return False
    return True


def first_high_state(p: MovePath, d, e):
    """Index of the first state that is not below either endpoint, or None."""
    sd, se = sorted(d), sorted(e)
    for idx, s in enumerate(p.states):
        ss = sorted(s)
        if not (leq_sorted(ss, sd) or leq_sorted(ss, se)):
            return idx
    return None
