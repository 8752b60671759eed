"""Finitely generated subgroups of the symbolic reals in canonical HNF."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import BasisMismatch, InputError, NotMember, NotPrimitive
from . import intmat
from .symbolic import SymBasis, SymReal


def _common_denominator(rows) -> int:
    den = 1
    for r in rows:
        for q in r:
            d = q.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
    return den


def _rat(num: int, den: int):
    if num % den == 0:
        return num // den
    return Fraction(num, den)


class ZModule:
    """Subgroup of the symbol span, stored as canonical HNF rows.

    Two modules over the same basis are equal exactly when their rows are
    identical.
    """

    __slots__ = ("basis", "hnf", "_pivots", "_hash")

    def __init__(self, basis: SymBasis, hnf_rows):
        self.basis = basis
        self.hnf = tuple(tuple(r) for r in hnf_rows)
        self._pivots = None
        self._hash = None

    @property
    def rank(self) -> int:
        return len(self.hnf)

    @property
    def pivots(self):
        if self._pivots is None:
            piv = []
            for r in self.hnf:
                piv.append(next(i for i, q in enumerate(r) if q != 0))
            self._pivots = tuple(piv)
        return self._pivots

    def generators(self) -> tuple[SymReal, ...]:
        return tuple(SymReal._raw(self.basis, r) for r in self.hnf)

    def __eq__(self, other):
        if not isinstance(other, ZModule):
            return NotImplemented
        return self.basis == other.basis and self.hnf == other.hnf

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.basis, self.hnf))
        return self._hash

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators())
        return f"ZModule<{gens}>"

    def _check(self, x):
        b = x.basis if isinstance(x, (SymReal, ZModule)) else x
        if b is not self.basis and b != self.basis:
            raise BasisMismatch("module and element live over different bases")

    def coordinates(self, x: SymReal):
        """Integer coordinates of x in the HNF basis, or None if x is not a member."""
        self._check(x)
        rest = list(x.coeffs)
        out = []
        for row, p in zip(self.hnf, self.pivots):
            # entries left of this pivot must already be cleared
            num, den = rest[p], row[p]
            if type(num) is int and type(den) is int:
                c, r = divmod(num, den)
                if r:
                    return None
            else:
                c = Fraction(num) / den
                if c.denominator != 1:
                    return None
                c = c.numerator
            out.append(c)
            if c:
                for i in range(p, len(rest)):
                    rest[i] -= c * row[i]
        if any(rest):
            return None
        return tuple(out)

    def __contains__(self, x: SymReal) -> bool:
        return self.coordinates(x) is not None

    def element(self, coords: Sequence[int]) -> SymReal:
        n = len(self.basis)
        acc = [0] * n
        for c, row in zip(coords, self.hnf):
            if c:
                for i in range(n):
                    acc[i] += c * row[i]
        return SymReal._raw(self.basis, tuple(acc))

    def contains_module(self, other: "ZModule") -> bool:
        self._check(other)
        return all(self.coordinates(g) is not None for g in other.generators())

    def to_json(self) -> dict:
        return {"hnf": [[str(q) for q in r] for r in self.hnf], "rank": self.rank}


def zmod_from_generators(gens: Iterable[SymReal], basis: SymBasis | None = None) -> ZModule:
    gens = list(gens)
    if basis is None:
        if not gens:
            raise InputError("need a basis for an empty generator list")
        basis = gens[0].basis
    for g in gens:
        if g.basis is not basis and g.basis != basis:
            raise BasisMismatch("generators live over different bases")
    rows = [g.coeffs for g in gens if any(g.coeffs)]
    if not rows:
        return ZModule(basis, ())
    n = len(basis)
    if n == 1:
        den = _common_denominator(rows)
        g = 0
        for r in rows:
            g = math.gcd(g, int(r[0] * den))
        return ZModule(basis, ((_rat(g, den),),))
    den = _common_denominator(rows)
    scaled = [[int(q * den) for q in r] for r in rows]
    h = intmat.hnf(scaled, n)
    return ZModule(basis, [[_rat(v, den) for v in r] for r in h])


def zmod_equal(a: ZModule, b: ZModule) -> bool:
    if a.basis != b.basis:
        raise BasisMismatch("modules live over different bases")
    return a.hnf == b.hnf


def zmod_member(x: SymReal, a: ZModule) -> bool:
    return a.coordinates(x) is not None


def zmod_rank(a: ZModule) -> int:
    return a.rank


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def is_primitive(x: SymReal, a: ZModule) -> bool:
    if x.is_zero():
        raise InputError("zero is never primitive")
    c = a.coordinates(x)
    if c is None:
        raise NotMember(f"{x} is not in {a}")
    return content(c) == 1


def coordinate_matrix(sub: ZModule, amb: ZModule):
    rows = []
    for g in sub.generators():
        c = amb.coordinates(g)
        if c is None:
            raise NotMember(f"{g} is not in the ambient module")
        rows.append(list(c))
    return rows


def _completion(coord_rows, r):
    """Unimodular W whose first s rows span the saturation of the given rows."""
    # column HNF: U @ C^T = H, so C = H^T (U^-1)^T
    ct = intmat.transpose(coord_rows) if coord_rows else [[] for _ in range(r)]
    if not coord_rows:
        return intmat.identity(r)
    _, _, ui = intmat.hnf_with_transform(ct)
    return intmat.transpose(ui)


def _module_from_coords(amb: ZModule, coord_rows) -> ZModule:
    return zmod_from_generators([amb.element(c) for c in coord_rows], amb.basis)


def saturate(s: ZModule, amb: ZModule) -> ZModule:
    """All x in amb with some nonzero multiple in s."""
    if s.basis != amb.basis:
        raise BasisMismatch("modules live over different bases")
    c = coordinate_matrix(s, amb)
    if not c:
        return ZModule(amb.basis, ())
    w = _completion(c, amb.rank)
    return _module_from_coords(amb, w[: s.rank])


def complement(s: ZModule, amb: ZModule) -> ZModule:
    """A complement of saturate(s, amb) inside amb."""
    if s.basis != amb.basis:
        raise BasisMismatch("modules live over different bases")
    c = coordinate_matrix(s, amb)
    w = _completion(c, amb.rank)
    return _module_from_coords(amb, w[s.rank:])


def complement_split(x: SymReal, a: ZModule) -> ZModule:
    """Λ with a = <x> ⊕ Λ; x must be primitive in a."""
    if not is_primitive(x, a):
        raise NotPrimitive(f"{x} is not primitive in {a}")
    lam = complement(zmod_from_generators([x], a.basis), a)
    # verified, not trusted
    assert lam.rank == a.rank - 1
    assert zmod_from_generators(list(lam.generators()) + [x], a.basis) == a
    return lam
