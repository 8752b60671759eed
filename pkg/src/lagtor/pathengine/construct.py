"""Constructive low admissible paths between vectors generating the same group.

Every public function returns a MovePath whose lowness has been verified
against its own endpoints before it is handed back.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .. import cancel as _cancel
from ..errors import (
    GroupMismatch,
    HypothesisViolation,
    InputError,
    InternalLownessFailure,
    IterationLimit,
    NonPositiveResult,
    RefineNeeded,
)
from ..exactnum import (
    SymReal,
    ZModule,
    complement,
    complement_split,
    gl2z_word,
    glz_elementary_word,
    glz_solve,
    is_primitive,
    reduce_into,
    saturate,
    zmod_from_generators,
)
from ..exactnum import intmat
from ..exactnum.zmodule import coordinate_matrix
from .moves import Move, MovePath, Walk, apply_move, concat, is_low_admissible, leq_sorted

DEFAULT_ITERATION_CAP = 10_000


def _group(v) -> ZModule:
    return zmod_from_generators(v, v[0].basis)


def _check_pair(d, e) -> ZModule:
    d, e = tuple(d), tuple(e)
    if not d or len(d) != len(e):
        raise InputError("endpoints must be nonempty vectors of equal length")
    basis = d[0].basis
    for x in d + e:
        if x.basis != basis:
            raise InputError("endpoints live over different bases")
        if x.sign() <= 0:
            raise NonPositiveResult(f"component {x} is not positive")
    L = _group(d)
    if _group(e) != L:
        raise GroupMismatch(f"<d> = {L} differs from <e> = {_group(e)}")
    return L


def _verified(path: MovePath, d, e, what: str) -> MovePath:
    if not is_low_admissible(path, d, e):
        raise InternalLownessFailure(f"{what} produced a path that is not low")
    return path


def _abs(x: SymReal) -> SymReal:
    return x if x.sign() > 0 else -x


def _positive_generator(L: ZModule) -> SymReal:
    g = L.generators()[0]
    return g if g.sign() > 0 else -g


# rank one ---------------------------------------------------------------

def _int_descent(n: list) -> list:
    """(i, j, q) steps of M_ij^q taking positive ints to an all-equal vector."""
    n = list(n)
    idx = range(len(n))
    steps = []
    while True:
        hi = max(idx, key=lambda t: (n[t], -t))
        lo = min(idx, key=lambda t: (n[t], t))
        if n[hi] == n[lo]:
            return steps
        q = (n[hi] - 1) // n[lo]
        n[hi] -= q * n[lo]
        steps.append((hi + 1, lo + 1, q))


def _descend_rank1(v, L: ZModule, walk: Walk):
    g = _positive_generator(L)
    flip = 1 if L.generators()[0] == g else -1
    n = [L.coordinates(x)[0] * flip for x in v]
    for i, j, q in _int_descent(n):
        walk.M(i, j, q)


@lru_cache(maxsize=4096)
def _rank1_descent(v: tuple) -> tuple:
    """(descent, its reversal) from v to (g, ..., g); v generates a rank-one group."""
    walk = Walk(v)
    _descend_rank1(v, _group(v), walk)
    p = walk.path()
    return p, p.reversed()


def path_rank1(d: Sequence[SymReal], e: Sequence[SymReal]) -> MovePath:
    """Descend both ends by M-moves to (g, ..., g), then climb back to e."""
    L = _check_pair(d, e)
    if L.rank != 1:
        raise HypothesisViolation(f"group has rank {L.rank}, expected 1")
    # descents depend only on the endpoint, so they are shared between calls
    down, _ = _rank1_descent(tuple(d))
    _, up = _rank1_descent(tuple(e))
    return _verified(down.then(up), d, e, "path_rank1")


# rank two, two components ----------------------------------------------

_P12, _M12, _I12 = Move("P", 1, 2), Move("M", 1, 2), Move("I", 1, 2)
_P21, _M21 = Move("P", 2, 1), Move("M", 2, 1)


def _lift_gl2_word(d, word) -> list:
    """Admissible moves realizing the word on |signed vector|."""
    x = list(d)
    moves = []
    for letter in reversed(word):
        if letter == "Q1":
            x[0] = -x[0]
            continue
        if letter == "I":
            x = [x[1], x[0]]
            moves.append(_I12)
            continue
        b, c = _abs(x[0]), _abs(x[1])
        new = x[0] + x[1] if letter == "P" else x[0] - x[1]
        nb = _abs(new)
        if nb == b + c:
            moves.append(_P12)
        elif nb == b - c:
            moves.append(_M12)
        elif nb == c - b:
            moves.extend([_M21, _I12, _P21])
        else:
            raise AssertionError("lifted letter matches none of the three gadgets")
        x[0] = new
    return moves


def _special(moves) -> list:
    out = []
    for m in moves:
        if m.i == 2:
            out.extend([_I12, Move(m.kind, 1, 2), _I12])
        else:
            out.append(m)
    return out


def _free_reduce(moves) -> list:
    """Cancel adjacent I·I, P·M and M·P on the same indices until none remain."""
    out = []
    for m in moves:
        if out:
            top = out[-1]
            if top.i == m.i and top.j == m.j and (
                (top.kind == "I" and m.kind == "I") or {top.kind, m.kind} == {"P", "M"}
            ):
                out.pop()
                continue
        out.append(m)
    return out


def _p_before_m(moves) -> bool:
    seen_p = False
    for m in moves:
        if m.kind == "P":
            seen_p = True
        elif m.kind == "M" and seen_p:
            return True
    return False


def path_rank2_k2(d, e, search_depth: int = 12, token=None) -> MovePath:
    """Low path for k = 2 when <d> has rank 2.

    glz_solve, word in P/Pinv/I/Q1, per-letter lifting, conversion to
    P_12/M_12/I_12 moves and free reduction.  A freely reduced admissible
    path in these three moves never has a P before an M, hence is low.
    """
    L = _check_pair(d, e)
    d, e = tuple(d), tuple(e)
    if len(d) != 2:
        raise HypothesisViolation("path_rank2_k2 needs two components")
    if L.rank != 2:
        raise HypothesisViolation(f"group has rank {L.rank}, expected 2")
    word = gl2z_word(glz_solve(d, e))
    moves = _free_reduce(_special(_lift_gl2_word(d, word)))
    path = MovePath(d, moves)
    if path.end != e:
        raise AssertionError("lifted word does not end at e")
    if not _p_before_m(moves) and is_low_admissible(path, d, e):
        return path
    found = bounded_low_search(d, e, search_depth, token=token)
    if found is None:
        raise InternalLownessFailure("constructed path not low and bounded search failed")
    return found


def bounded_low_search(d, e, max_depth: int = 12, node_cap: int = 200_000, token=None):
    """Breadth-first search over exact states, pruned by the lowness predicate.

    Moves whose positivity or lowness cannot be certified are skipped.
    """
    d, e = tuple(d), tuple(e)
    k = len(d)
    sd, se = sorted(d), sorted(e)
    key = lambda v: tuple(x.coeffs for x in v)
    parent = {key(d): None}
    frontier = deque([(d, 0)])
    moves = [Move(kind, i, j) for kind in ("I", "M", "P") for i in range(1, k + 1)
             for j in range(1, k + 1) if i != j and not (kind == "I" and i > j)]
    while frontier:
        _cancel.check(token)
        v, depth = frontier.popleft()
        if v == e:
            out = []
            cur = key(v)
            while parent[cur] is not None:
                prev, m = parent[cur]
                out.append(m)
                cur = prev
            return MovePath(d, reversed(out))
        if depth >= max_depth:
            continue
        for m in moves:
            try:
                w = apply_move(v, m)
                sw = sorted(w)
                if not (leq_sorted(sw, sd) or leq_sorted(sw, se)):
                    continue
            except (NonPositiveResult, RefineNeeded):
                continue
            kw = key(w)
            if kw in parent:
                continue
            parent[kw] = (key(v), m)
            if len(parent) > node_cap:
                return None
            frontier.append((w, depth + 1))
    return None


# small primitive elements ------------------------------------------------

def _small_primitive(sub: ZModule, amb: ZModule, bound: SymReal,
                     max_iter: int = DEFAULT_ITERATION_CAP, token=None) -> SymReal:
    """Positive element of sub, primitive in amb, strictly below bound.

    Works on a rank-2 piece of sub adapted to amb (Smith form), running
    subtractive Euclid on its basis and testing small combinations.
    """
    if sub.rank < 2:
        raise HypothesisViolation("need a subgroup of rank at least 2")
    c = coordinate_matrix(sub, amb)
    D, _, _, vinv = intmat.smith_with_transform(c)
    diag = [D[t][t] for t in range(min(len(D), len(D[0])))]
    f = [amb.element(vinv[t]) for t in range(len(vinv))]
    ones = [t for t, x in enumerate(diag) if x == 1]
    if len(ones) >= 2:
        p, q = f[ones[0]], f[ones[1]]
        span = 1
    else:
        p, q = f[0] * diag[0], f[1] * diag[1]
        span = min(max(diag[:2]) + 1, 12)
    p, q = _abs(p), _abs(q)
    combos = sorted(
        ((s, t) for s in range(span + 1) for t in range(span + 1)
         if (s or t) and _gcd(s, t) == 1),
        key=lambda st: (st[0] + st[1], st),
    )
    for _ in range(max_iter):
        _cancel.check(token)
        for s, t in combos:
            cand = p * s + q * t
            try:
                small = cand < bound
            except RefineNeeded:
                continue
            if small and is_primitive(cand, amb):
                return cand
        if p > q:
            p = reduce_into(p, q, closed_top=False)[1]
        else:
            q = reduce_into(q, p, closed_top=False)[1]
        if p.is_zero() or q.is_zero():
            raise HypothesisViolation("basis elements are commensurable")
    raise IterationLimit(f"no small primitive element after {max_iter} rounds")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# last component minimal and primitive -----------------------------------

def make_minimal_primitive(u: Sequence[SymReal], max_iter: int = DEFAULT_ITERATION_CAP,
                           token=None) -> tuple[MovePath, tuple]:
    """Low path from u to u+ <= u whose last entry is minimal and primitive in <u>."""
    u = tuple(u)
    k = len(u)
    if k < 2:
        raise HypothesisViolation("need at least two components")
    L = _check_pair(u, u)
    walk = Walk(u)
    others = u[:-1]
    j = min(range(k - 1), key=lambda t: others[t])
    if u[-1] > others[j]:
        q, _ = reduce_into(u[-1], others[j], closed_top=True)
        walk.M(k, j + 1, q)
    up = walk.cur
    if is_primitive(up[-1], L):
        return _verified(walk.path(), u, up, "make_minimal_primitive"), up
    if L.rank == 1:
        # everything descends to the generator
        _descend_rank1(up, L, walk)
        end = walk.cur
        return _verified(walk.path(), u, end, "make_minimal_primitive"), end
    u_minus = up[:-1]
    Lm = _group(u_minus)
    if Lm.rank != L.rank:
        raise AssertionError("non-primitive last entry but ranks differ")
    y = _small_primitive(Lm, L, up[-1] * Fraction(1, 2), max_iter, token)
    rest = []
    for z in complement_split(y, Lm).generators():
        _, r = reduce_into(z, y, closed_top=True)
        rest.append(r + y)
    v_minus = tuple(rest) + (y,) * (k - 1 - len(rest))
    sub = low_path(u_minus, v_minus, token=token)
    walk.extend(sub.relabeled(list(range(1, k)), up))
    walk.I(k - 1, k)
    end = walk.cur
    return _verified(walk.path(), u, end, "make_minimal_primitive"), end


# shared primitive entry -------------------------------------------------

def _q_gadget(walk: Walk, j: int, k: int):
    # (.., c, .., D) -> (.., D-c, .., D) with height <= D
    walk.M(k, j)
    walk.I(j, k)
    walk.P(k, j)


def _reduce_below(walk: Walk, k: int, D: SymReal):
    for j in range(1, k):
        x = walk.local(j)
        if x > D:
            q, _ = reduce_into(x, D, closed_top=True)
            walk.M(j, k, q)


def path_shared_primitive(d, e, i: int, token=None) -> MovePath:
    """Low path when d_i = e_i is minimal in d and primitive in <d>."""
    L = _check_pair(d, e)
    d, e = tuple(d), tuple(e)
    k = len(d)
    if not 1 <= i <= k:
        raise InputError(f"index {i} out of range")
    D = d[i - 1]
    if e[i - 1] != D:
        raise HypothesisViolation("d_i and e_i differ")
    if any(x < D for x in d):
        raise HypothesisViolation("d_i is not minimal in d")
    if not is_primitive(D, L):
        raise HypothesisViolation("d_i is not primitive in <d>")
    if d == e:
        return MovePath(d)
    order = [p for p in range(1, k + 1) if p != i] + [i]
    wd, we = Walk(d, order), Walk(e, order)
    _reduce_below(wd, k, D)
    _reduce_below(we, k, D)
    target = [we.local(j) for j in range(1, k)]
    if [wd.local(j) for j in range(1, k)] != target:
        lam = complement_split(D, L)
        # coordinates in the basis (D, lambda_1, ...) of L
        w = [list(L.coordinates(D))] + [list(L.coordinates(g)) for g in lam.generators()]
        winv = intmat.unimodular_inverse(w)

        def strip(x):
            n = intmat.matvec(intmat.transpose(winv), L.coordinates(x))[0]
            return x - D * n

        dp = [strip(wd.local(j)) for j in range(1, k)]
        ep = [strip(x) for x in target]
        word = glz_elementary_word(glz_solve(dp, ep))
        for letter in reversed(word):
            _cancel.check(token)
            kind = letter[0]
            if kind == "I":
                wd.I(letter[1], letter[2])
            elif kind == "Q":
                if wd.local(letter[1]) != D:
                    _q_gadget(wd, letter[1], k)
            else:
                a, b = letter[1], letter[2]
                ua, ub = wd.local(a), wd.local(b)
                if ua + ub <= D:
                    wd.P(a, b)
                elif ub != D:
                    _q_gadget(wd, b, k)
                    wd.M(a, b)
                    _q_gadget(wd, b, k)
        if [wd.local(j) for j in range(1, k)] != target:
            raise AssertionError("reduced word did not reach the target")
    path = wd.path().then(we.path().reversed()).without_loops()
    return _verified(path, d, e, "path_shared_primitive")


# general dispatch -------------------------------------------------------

def _bridge(dp, ep, L: ZModule, token=None) -> MovePath:
    """Connect two vectors whose (different) last entries are minimal and primitive."""
    k = len(dp)
    dk, ek = dp[-1], ep[-1]
    delta = saturate(zmod_from_generators([dk, ek], L.basis), L)
    lam = complement(delta, L)

    def partner(x):
        c = complement_split(x, delta).generators()[0]
        return reduce_into(c, x, closed_top=True)[1]

    dk1, ek1 = partner(dk), partner(ek)
    mu = min(dk1, ek1)
    ys = sorted(reduce_into(g, mu, closed_top=True)[1] for g in lam.generators())
    if not ys:
        ys = [_small_primitive(L, L, mu, token=token)]
    fill = (ys[0],) * (k - 2 - len(ys))
    d2 = fill + tuple(ys) + (dk1, dk)
    e2 = fill + tuple(ys) + (ek1, ek)
    if _group(d2) != L or _group(e2) != L:
        raise AssertionError("bridge vectors do not generate the group")
    p0 = path_shared_primitive(dp, d2, k, token)
    p = path_shared_primitive(d2, e2, 1, token)
    p1 = path_shared_primitive(ep, e2, k, token)
    return concat(p0, p, p1.reversed())


def low_path(d: Sequence[SymReal], e: Sequence[SymReal], strategy: str = "auto",
             token=None) -> MovePath:
    """Verified low admissible path from d to e, given <d> = <e>.

    strategy "general" skips the rank-one and two-component shortcuts
    (useful to exercise the full recursion on integer data).
    """
    L = _check_pair(d, e)
    d, e = tuple(d), tuple(e)
    k = len(d)
    _cancel.check(token)
    if d == e:
        return MovePath(d)
    if sorted(d, key=lambda x: x.coeffs) == sorted(e, key=lambda x: x.coeffs):
        return _verified(_permutation_path(d, e), d, e, "low_path")
    if k == 1:
        raise GroupMismatch("one-component vectors generate the same group only if equal")
    if strategy == "auto":
        if L.rank == 1:
            return path_rank1(d, e)
        if k == 2:
            return path_rank2_k2(d, e, token=token)
    elif strategy != "general":
        raise InputError(f"unknown strategy {strategy!r}")
    if k == 2 and L.rank == 2:
        return path_rank2_k2(d, e, token=token)
    pd, dp = make_minimal_primitive(d, token=token)
    pe, ep = make_minimal_primitive(e, token=token)
    if dp[-1] == ep[-1]:
        mid = path_shared_primitive(dp, ep, k, token)
    else:
        mid = _bridge(dp, ep, L, token)
    path = concat(pd, mid, pe.reversed()).without_loops()
    return _verified(path, d, e, "low_path")


def _permutation_path(d, e) -> MovePath:
    """Transpositions sorting d into e (selection by exact equality)."""
    walk = Walk(d)
    k = len(d)
    for pos in range(k):
        if walk.cur[pos] == e[pos]:
            continue
        src = next(t for t in range(pos + 1, k) if walk.cur[t] == e[pos])
        walk.I(pos + 1, src + 1)
    return walk.path()
