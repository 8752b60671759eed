"""Isotopy certificates lifted from low paths, and an independent checker.

A certificate walks from T(a) to T(a') through tori whose factor vectors
are listed explicitly.  Each step is either a unitary permutation of the
factors (ball |a|) or one elementary addition/subtraction between two
non-minimal factors (ball = norm of the endpoint with the larger entry).
The checker recomputes everything from the listed vectors and trusts
nothing that is declared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from ..errors import CheckFailure, NotEquivalent
from ..exactnum import SymReal
from ..invariants import TorusSpec, equiv
from .construct import low_path
from .moves import KINDS, Move, MovePath, format_vector, leq_perm

PERMUTATION = "UnitaryPermutation"
STEP2 = "Step2Apply"
FORWARD = "forward"
BACKWARD = "backward"


class FailureKind:
    """Failure classes reported by the checker."""

    MALFORMED = "Malformed"
    WRONG_MOVE = "WrongMove"
    NON_POSITIVE = "NonPositive"
    BROKEN_CHAIN = "BrokenChain"
    BALL_MISMATCH = "BallMismatch"
    WRONG_ENDPOINT = "WrongEndpoint"
    NOT_LOW = "NotLow"
    BOUND_EXCEEDED = "BoundExceeded"

    ALL = (MALFORMED, WRONG_MOVE, NON_POSITIVE, BROKEN_CHAIN, BALL_MISMATCH,
           WRONG_ENDPOINT, NOT_LOW, BOUND_EXCEEDED)


def total(v: Sequence[SymReal]) -> SymReal:
    return sum(v[1:], v[0])


def norm(v: Sequence[SymReal]) -> SymReal:
    return total(v) + min(v)


class CertStep(NamedTuple):
    kind: str
    frm: tuple
    to: tuple
    ball: SymReal
    perm: Optional[tuple] = None  # 1-based, to[p] = frm[perm[p]]
    i: Optional[int] = None
    j: Optional[int] = None
    direction: Optional[str] = None

    def describe(self) -> str:
        if self.kind == PERMUTATION:
            return f"{PERMUTATION}{list(self.perm)}"
        return f"{STEP2}({self.i},{self.j},{self.direction})"


@dataclass(frozen=True)
class IsotopyCertificate:
    start: tuple
    target: tuple
    steps: tuple = field(default=())
    overall_ball: Optional[SymReal] = None

    @property
    def bound(self) -> SymReal:
        return max(norm(self.start), norm(self.target))


def _perm_step(frm, perm, tot=None) -> CertStep:
    to = tuple(frm[p - 1] for p in perm)
    return CertStep(PERMUTATION, tuple(frm), to, total(frm) if tot is None else tot, perm=tuple(perm))


def _sorting_perm(a) -> tuple:
    """Stable order putting the minimal factors first (1-based)."""
    ua = min(a)
    lows = [p for p, x in enumerate(a) if x == ua]
    rest = [p for p, x in enumerate(a) if x != ua]
    return tuple(p + 1 for p in lows + rest)


def _invert(perm) -> tuple:
    inv = [0] * len(perm)
    for p, q in enumerate(perm):
        inv[q - 1] = p + 1
    return tuple(inv)


def _merge_permutations(steps) -> list:
    out = []
    for s in steps:
        if s.kind == PERMUTATION and out and out[-1].kind == PERMUTATION:
            prev = out.pop()
            s = _perm_step(prev.frm, tuple(prev.perm[q - 1] for q in s.perm))
        if s.kind == PERMUTATION and s.frm == s.to:
            continue
        out.append(s)
    return out


def lift_path(path: MovePath, ua: SymReal, m: int) -> list:
    """Turn a path on stripped vectors into certificate steps on full vectors.

    Every full vector has minimum ua (the stripped entries are positive),
    so its norm is its total plus ua.  A P or M move changes the norm by
    exactly the j-th stripped entry, which keeps the bookkeeping cheap.
    """
    frm = (ua,) * m + tuple(ua + x for x in path.start)
    nrm = total(frm) + ua
    steps = []
    for s, mv in enumerate(path.moves):
        i, j = mv.i + m, mv.j + m
        if mv.kind == "I":
            perm = list(range(1, len(frm) + 1))
            perm[i - 1], perm[j - 1] = j, i
            step = _perm_step(frm, tuple(perm), nrm - ua)
        else:
            dj = path.states[s][mv.j - 1]
            if mv.kind == "P":
                new, nrm_to = frm[i - 1] + dj, nrm + dj
                ball = nrm_to
            else:
                new, nrm_to = frm[i - 1] - dj, nrm - dj
                ball = nrm
            to = frm[: i - 1] + (new,) + frm[i:]
            step = CertStep(STEP2, frm, to, ball, i=i, j=j,
                            direction=FORWARD if mv.kind == "P" else BACKWARD)
            nrm = nrm_to
        steps.append(step)
        frm = step.to
    return steps


def certificate(t: TorusSpec, t2: TorusSpec, token=None, path: MovePath | None = None) -> IsotopyCertificate:
    """Certificate that T(a) and T(a') are isotopic in B(max(‖a‖, ‖a'‖)).

    path, if given, must be a low path between the stripped vectors (the
    non-minimal factors minus ua, in their original order); otherwise one
    is constructed.
    """
    if not equiv(t, t2):
        raise NotEquivalent("the tori differ in ua, m or Γ")
    a, a2 = t.a, t2.a
    ua = min(a)
    pa, pa2 = _sorting_perm(a), _sorting_perm(a2)
    sa = tuple(a[p - 1] for p in pa)
    sa2 = tuple(a2[p - 1] for p in pa2)
    m = sum(1 for x in a if x == ua)
    d = tuple(x - ua for x in sa[m:])
    e = tuple(x - ua for x in sa2[m:])
    steps = [_perm_step(a, pa)]
    if d:
        if path is None:
            path = low_path(d, e, token=token)
        elif path.start != d or path.end != e:
            raise ValueError("supplied path does not join the stripped vectors")
        steps += lift_path(path, ua, m)
    steps.append(_perm_step(sa2, _invert(pa2)))
    steps = _merge_permutations(steps)
    overall = max((s.ball for s in steps), default=total(a))
    cert = IsotopyCertificate(tuple(a), tuple(a2), tuple(steps), overall)
    # lowness of the path is what makes this hold
    assert overall <= cert.bound, "certificate ball exceeds max(‖a‖, ‖a'‖)"
    return cert


# ---------------------------------------------------------------- checker


def _fail(kind, message, step=None):
    raise CheckFailure(kind, message, step)


def _positive(v, what, step):
    for x in v:
        if x.sign() <= 0:
            _fail(FailureKind.NON_POSITIVE, f"{what} {format_vector(v)} has a non-positive entry", step)


def _check_step(s: CertStep, idx: int):
    n = len(s.frm)
    if len(s.to) != n:
        _fail(FailureKind.WRONG_MOVE, "step changes the number of factors", idx)
    if s.kind == PERMUTATION:
        if s.perm is None or sorted(s.perm) != list(range(1, n + 1)):
            _fail(FailureKind.WRONG_MOVE, f"{s.perm} is not a permutation of 1..{n}", idx)
        if any(s.to[p] != s.frm[q - 1] for p, q in enumerate(s.perm)):
            _fail(FailureKind.WRONG_MOVE, "target is not the permuted source", idx)
        return total(s.frm)
    if s.kind != STEP2:
        _fail(FailureKind.WRONG_MOVE, f"unknown step kind {s.kind!r}", idx)
    i, j = s.i, s.j
    if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= n and 1 <= j <= n and i != j):
        _fail(FailureKind.WRONG_MOVE, f"bad indices ({i}, {j})", idx)
    a = min(s.frm)
    if min(s.to) != a:
        _fail(FailureKind.WRONG_MOVE, "source and target have different minima", idx)
    if any(s.frm[p] != s.to[p] for p in range(n) if p != i - 1):
        _fail(FailureKind.WRONG_MOVE, f"factors other than {i} changed", idx)
    fi, fj, ti = s.frm[i - 1], s.frm[j - 1], s.to[i - 1]
    if not (fi > a and fj > a and ti > a):
        _fail(FailureKind.WRONG_MOVE, "both indices must point at non-minimal factors", idx)
    if s.direction == FORWARD:
        if ti != fi + fj - a:
            _fail(FailureKind.WRONG_MOVE, f"factor {i} is not the sum move", idx)
        return norm(s.to)
    if s.direction == BACKWARD:
        if ti != fi - fj + a:
            _fail(FailureKind.WRONG_MOVE, f"factor {i} is not the difference move", idx)
        return norm(s.frm)
    _fail(FailureKind.WRONG_MOVE, f"unknown direction {s.direction!r}", idx)


def check_certificate(cert: IsotopyCertificate) -> SymReal:
    """Re-validate every step; returns the recomputed overall ball."""
    start, target = tuple(cert.start), tuple(cert.target)
    if len(start) != len(target) or not start:
        _fail(FailureKind.MALFORMED, "start and target must be nonempty and of equal length")
    _positive(start, "start", None)
    _positive(target, "target", None)
    prev = start
    balls = []
    for idx, s in enumerate(cert.steps):
        _positive(s.frm, "source", idx)
        _positive(s.to, "target", idx)
        if tuple(s.frm) != prev:
            _fail(FailureKind.BROKEN_CHAIN, "source differs from the previous target", idx)
        ball = _check_step(s, idx)
        if s.ball != ball:
            _fail(FailureKind.BALL_MISMATCH, f"declared ball {s.ball}, recomputed {ball}", idx)
        balls.append(ball)
        prev = tuple(s.to)
    if prev != target:
        _fail(FailureKind.WRONG_ENDPOINT, f"ends at {format_vector(prev)}, not {format_vector(target)}")
    overall = max(balls) if balls else total(start)
    if cert.overall_ball != overall:
        _fail(FailureKind.BALL_MISMATCH, f"declared overall ball {cert.overall_ball}, recomputed {overall}")
    bound = max(norm(start), norm(target))
    if overall > bound:
        _fail(FailureKind.BOUND_EXCEEDED, f"overall ball {overall} exceeds {bound}")
    return overall


def check_path(start: Sequence[SymReal], moves: Sequence, end: Sequence[SymReal] | None = None,
               require_low: bool = True) -> tuple:
    """Replay moves from start; verify positivity, endpoint and lowness.

    moves may be Move objects or (kind, i, j) triples.  Returns the states.
    """
    start = tuple(start)
    if not start:
        _fail(FailureKind.MALFORMED, "empty start vector")
    _positive(start, "start", None)
    k = len(start)
    states = [start]
    cur = start
    for idx, mv in enumerate(moves):
        kind, i, j = (mv.kind, mv.i, mv.j) if isinstance(mv, Move) else mv
        if kind not in KINDS:
            _fail(FailureKind.WRONG_MOVE, f"unknown move kind {kind!r}", idx)
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= k and 1 <= j <= k and i != j):
            _fail(FailureKind.WRONG_MOVE, f"bad indices ({i}, {j})", idx)
        nxt = list(cur)
        if kind == "P":
            nxt[i - 1] = cur[i - 1] + cur[j - 1]
        elif kind == "M":
            nxt[i - 1] = cur[i - 1] - cur[j - 1]
        else:
            nxt[i - 1], nxt[j - 1] = cur[j - 1], cur[i - 1]
        cur = tuple(nxt)
        _positive(cur, "state", idx)
        states.append(cur)
    if end is not None:
        end = tuple(end)
        if cur != end:
            _fail(FailureKind.WRONG_ENDPOINT, f"ends at {format_vector(cur)}, not {format_vector(end)}")
    if require_low:
        last = end if end is not None else cur
        for idx, s in enumerate(states):
            if not (leq_perm(s, start) or leq_perm(s, last)):
                _fail(FailureKind.NOT_LOW, f"state {format_vector(s)} is above both endpoints", idx)
    return tuple(states)
