"""GL(k, Z): solving A·u = v and decomposing into generator words.

Words are lists of letters whose left-to-right matrix product equals the
decomposed matrix.  Acting on a column vector, the rightmost letter is
applied first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import BasisMismatch, GroupMismatch, NotUnimodular
from . import intmat
from .symbolic import SymReal
from .zmodule import zmod_from_generators


@dataclass(frozen=True)
class UnimodularMatrix:
    entries: tuple
    determinant: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if any(len(r) != len(rows) for r in rows):
            raise NotUnimodular("matrix is not square")
        d = intmat.det([list(r) for r in rows])
        if d not in (1, -1) or d != self.determinant:
            raise NotUnimodular(f"determinant {d} (stored {self.determinant})")

    @classmethod
    def of(cls, rows) -> "UnimodularMatrix":
        rows = [list(r) for r in rows]
        return cls(tuple(tuple(r) for r in rows), intmat.det(rows))

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_lists(self):
        return [list(r) for r in self.entries]

    def apply(self, u: Sequence[SymReal]) -> tuple[SymReal, ...]:
        out = []
        for row in self.entries:
            acc = u[0].basis.zero()
            for a, x in zip(row, u):
                if a:
                    acc = acc + x * a
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix.of(intmat.matmul(self.as_lists(), other.as_lists()))


def glz_solve(u: Sequence[SymReal], v: Sequence[SymReal]) -> UnimodularMatrix:
    """A in GL(l, Z) with A·u = v, given <u> = <v>."""
    if len(u) != len(v):
        raise GroupMismatch("vectors of different lengths")
    if not u:
        return UnimodularMatrix((), 1)
    basis = u[0].basis
    for x in list(u) + list(v):
        if x.basis != basis:
            raise BasisMismatch("vectors live over different bases")
    lu = zmod_from_generators(u, basis)
    lv = zmod_from_generators(v, basis)
    if lu != lv:
        raise GroupMismatch(f"<u> = {lu} differs from <v> = {lv}")
    cu = [list(lu.coordinates(x)) for x in u]
    cv = [list(lu.coordinates(x)) for x in v]
    l = len(u)
    if lu.rank == 0:
        a = intmat.identity(l)
    else:
        # R_u·cu = [I; 0] and R_v·cv = [I; 0] since both span Z^r
        _, ru, _ = intmat.hnf_with_transform(cu)
        _, _, rv_inv = intmat.hnf_with_transform(cv)
        a = intmat.matmul(rv_inv, ru)
    m = UnimodularMatrix.of(a)
    if m.apply(u) != tuple(v):
        raise AssertionError("glz_solve produced a matrix that does not map u to v")
    return m


# 2x2 generators
P2 = ((1, 1), (0, 1))
PINV2 = ((1, -1), (0, 1))
I2 = ((0, 1), (1, 0))
Q2 = ((-1, 0), (0, 1))
LETTERS2 = {"P": P2, "Pinv": PINV2, "I": I2, "Q1": Q2}
INVERSE2 = {"P": "Pinv", "Pinv": "P", "I": "I", "Q1": "Q1"}


def word_product2(word) -> list:
    m = intmat.identity(2)
    for w in word:
        m = intmat.matmul(m, [list(r) for r in LETTERS2[w]])
    return m


def gl2z_word(a: UnimodularMatrix) -> list[str]:
    """Word over P, Pinv, I, Q1 whose product is a.

    Euclidean reduction of the first column by left multiplication with
    P^{±1} and I, then sign fixes with Q1 and a final P-power.
    """
    if a.size != 2:
        raise NotUnimodular("gl2z_word needs a 2x2 matrix")
    m = a.as_lists()
    ops = []  # left multipliers, in order applied

    def left(name):
        nonlocal m
        m = intmat.matmul([list(r) for r in LETTERS2[name]], m)
        ops.append(name)

    # make the first column (g, 0) with g = ±1
    while m[1][0] != 0:
        if abs(m[0][0]) < abs(m[1][0]) or m[0][0] == 0:
            left("I")
            continue
        q = m[0][0] // m[1][0]
        # row0 -= q*row1  is  P^{-q}
        name = "Pinv" if q > 0 else "P"
        for _ in range(abs(q)):
            left(name)
    if m[0][0] < 0:
        left("Q1")
    # now m = [[1, b], [0, ±1]]
    if m[1][1] < 0:
        # Q1 I Q1 I = diag(-1,-1); I Q1 I negates the second row
        left("I")
        left("Q1")
        left("I")
    b = m[0][1]
    name = "Pinv" if b > 0 else "P"
    for _ in range(abs(b)):
        left(name)
    if m != intmat.identity(2):
        raise AssertionError("2x2 reduction did not reach the identity")
    # ops_n ... ops_1 · A = I  =>  A = ops_1^{-1} ... ops_n^{-1}
    word = [INVERSE2[o] for o in ops]
    if word_product2(word) != a.as_lists():
        raise AssertionError("gl2z_word round trip failed")
    return word


# k x k elementary letters: ("Q", j), ("I", i, j), ("P", i, j); indices 1-based
def letter_matrix(letter, k: int) -> list:
    m = intmat.identity(k)
    kind = letter[0]
    if kind == "Q":
        j = letter[1] - 1
        m[j][j] = -1
    elif kind == "I":
        i, j = letter[1] - 1, letter[2] - 1
        m[i][i] = m[j][j] = 0
        m[i][j] = m[j][i] = 1
    elif kind == "P":
        i, j = letter[1] - 1, letter[2] - 1
        m[i][j] = 1
    else:
        raise ValueError(f"unknown letter {letter!r}")
    return m


def word_product(word, k: int) -> list:
    m = intmat.identity(k)
    for w in word:
        m = intmat.matmul(m, letter_matrix(w, k))
    return m


def _cancel_involutions(word):
    # Q_j and I_ij square to the identity; drop adjacent equal pairs
    out = []
    for w in word:
        if out and out[-1] == w and w[0] in ("Q", "I"):
            out.pop()
        else:
            out.append(w)
    return out


def glz_elementary_word(a: UnimodularMatrix) -> list[tuple]:
    """Word over Q_j, I_ij, P_ij whose product is a.

    Recorded integer row reduction of a to the identity; each row
    operation is inverted and the inverses are read off in order.
    """
    k = a.size
    m = a.as_lists()
    word = []  # inverses of the row operations, in order performed

    def swap(i, j):
        m[i], m[j] = m[j], m[i]
        word.append(("I", i + 1, j + 1))

    def negate(i):
        m[i] = [-x for x in m[i]]
        word.append(("Q", i + 1))

    def addmul(i, j, q):
        # row_i += q*row_j, inverse adds -q*row_j
        if q == 0:
            return
        m[i] = [x + q * y for x, y in zip(m[i], m[j])]
        if q < 0:
            word.extend([("P", i + 1, j + 1)] * (-q))
        else:
            word.append(("Q", j + 1))
            word.extend([("P", i + 1, j + 1)] * q)
            word.append(("Q", j + 1))

    for c in range(k):
        while True:
            best = None
            for r in range(c, k):
                if m[r][c] != 0 and (best is None or abs(m[r][c]) < abs(m[best][c])):
                    best = r
            if best is None:
                raise NotUnimodular("singular matrix")
            if best != c:
                swap(c, best)
            done = True
            for r in range(c + 1, k):
                if m[r][c]:
                    addmul(r, c, -(m[r][c] // m[c][c]))
                    done = done and m[r][c] == 0
            if done:
                break
        if m[c][c] < 0:
            negate(c)
        if m[c][c] != 1:
            raise NotUnimodular("pivot is not a unit")
    for c in range(k - 1, -1, -1):
        for r in range(c):
            addmul(r, c, -m[r][c])
    if m != intmat.identity(k):
        raise AssertionError("row reduction did not reach the identity")
    word = _cancel_involutions(word)
    if word_product(word, k) != a.as_lists():
        raise AssertionError("glz_elementary_word round trip failed")
    return word
