"""Real numbers as exact rational combinations of a declared symbol basis.

Each symbol carries a rational enclosure.  Equality is decided on the
coefficients alone; order is certified by interval arithmetic and fails
loudly with RefineNeeded when the enclosure cannot separate from zero.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import BasisMismatch, InputError, RefineNeeded


def as_fraction(x):
    """Exact rational from int, Fraction or a string like "3/2" or "1.41".

    Integral values come back as plain ints, which keeps the common
    integer case fast; both types compare and hash consistently.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {x!r}") from exc
        return q.numerator if q.denominator == 1 else q
    raise TypeError(f"expected int, Fraction or rational string, got {type(x).__name__}")


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class SymBasis:
    """Ordered symbols with enclosures; symbol 0 is the constant 1."""

    __slots__ = ("names", "lo", "hi", "_index", "_hash", "_floats")

    def __init__(self, symbols: Iterable = ()):
        names = ["1"]
        lo = [1]
        hi = [1]
        for entry in symbols:
            name, a, b = entry
            a, b = as_fraction(a), as_fraction(b)
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise InputError(f"bad symbol name {name!r}")
            if name in names:
                raise InputError(f"duplicate symbol {name!r}")
            if a > b:
                raise InputError(f"empty enclosure for {name}: [{a}, {b}]")
            names.append(name)
            lo.append(a)
            hi.append(b)
        self.names = tuple(names)
        self.lo = tuple(lo)
        self.hi = tuple(hi)
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((self.names, self.lo, self.hi))
        # float midpoints and radii for the quick sign filter
        self._floats = tuple((float((a + b) / 2), float((b - a) / 2)) for a, b in zip(lo, hi))

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SymBasis):
            return NotImplemented
        return self.names == other.names and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = [f"{n}∈[{a},{b}]" for n, a, b in zip(self.names[1:], self.lo[1:], self.hi[1:])]
        return "SymBasis(" + ", ".join(parts) + ")"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown symbol {name!r}") from None

    def extended(self, name: str, lo, hi) -> "SymBasis":
        extra = [(n, a, b) for n, a, b in zip(self.names[1:], self.lo[1:], self.hi[1:])]
        return SymBasis(extra + [(name, lo, hi)])

    def symbol(self, name: str) -> "SymReal":
        i = self.index(name)
        c = [0] * len(self.names)
        c[i] = 1
        return SymReal._raw(self, tuple(c))

    def const(self, q) -> "SymReal":
        c = [0] * len(self.names)
        c[0] = as_fraction(q)
        return SymReal._raw(self, tuple(c))

    def zero(self) -> "SymReal":
        return SymReal._raw(self, (0,) * len(self.names))

    def real(self, coeffs) -> "SymReal":
        return SymReal(self, coeffs)


TRIVIAL_BASIS = SymBasis()


def sqrt_enclosure(n: int, digits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational interval of width 10**-digits around sqrt(n)."""
    if n < 0:
        raise InputError("negative radicand")
    scale = 10 ** digits
    r = math.isqrt(n * scale * scale)
    lo = Fraction(r, scale)
    hi = lo if r * r == n * scale * scale else Fraction(r + 1, scale)
    return lo, hi


_ZERO = Fraction(0)


def _tidy(c):
    # Fraction sums may become integral; store those as ints
    if type(c) is int or c.denominator != 1:
        return c
    return c.numerator


class SymReal:
    """An exact element of the Q-span of a SymBasis."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: SymBasis, coeffs: Sequence):
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) != len(basis):
            raise InputError(f"expected {len(basis)} coefficients, got {len(coeffs)}")
        self.basis = basis
        self.coeffs = coeffs

    @classmethod
    def _raw(cls, basis, coeffs):
        obj = object.__new__(cls)
        obj.basis = basis
        obj.coeffs = coeffs
        return obj

    def _check(self, other: "SymReal"):
        if other.basis is not self.basis and other.basis != self.basis:
            raise BasisMismatch("operands live over different symbol bases")

    def _coerce(self, other):
        if isinstance(other, SymReal):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.basis.const(other)
        return None

    def __add__(self, other):
        if type(other) is SymReal and other.basis is self.basis:
            o = other
        else:
            o = self._coerce(other)
            if o is None:
                return NotImplemented
        if len(self.coeffs) == 1:
            return SymReal._raw(self.basis, (_tidy(self.coeffs[0] + o.coeffs[0]),))
        return SymReal._raw(self.basis, tuple(_tidy(a + b) for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is SymReal and other.basis is self.basis:
            o = other
        else:
            o = self._coerce(other)
            if o is None:
                return NotImplemented
        if len(self.coeffs) == 1:
            return SymReal._raw(self.basis, (_tidy(self.coeffs[0] - o.coeffs[0]),))
        return SymReal._raw(self.basis, tuple(_tidy(a - b) for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return SymReal._raw(self.basis, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        if isinstance(k, (int, Fraction)) and not isinstance(k, bool):
            return SymReal._raw(self.basis, tuple(_tidy(a * k) for a in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def enclosure(self) -> tuple[Fraction, Fraction]:
        lo = hi = _ZERO
        b = self.basis
        for c, l, h in zip(self.coeffs, b.lo, b.hi):
            if c > 0:
                lo += c * l
                hi += c * h
            elif c < 0:
                lo += c * h
                hi += c * l
        return lo, hi

    def sign(self) -> int:
        """Certified sign; raises RefineNeeded when undecidable."""
        c = self.coeffs
        if len(c) == 1:
            v = c[0]
            return (v > 0) - (v < 0)
        if not any(c):
            return 0
        quick = self._float_sign()
        if quick:
            return quick
        lo, hi = self.enclosure()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        raise RefineNeeded(self)

    def _float_sign(self) -> int:
        """Sign from a float evaluation when it is far from ambiguous, else 0.

        The margin covers the interval radius plus a relative 1e-9 of the
        magnitude, many orders above accumulated rounding error, so a
        nonzero answer agrees with the exact enclosure.
        """
        mid = rad = mag = 0.0
        try:
            for c, (m, w) in zip(self.coeffs, self.basis._floats):
                f = float(c)
                mid += f * m
                rad += abs(f) * w
                mag += abs(f) * (abs(m) + w)
        except OverflowError:
            return 0
        slack = rad + 1e-9 * mag
        if mid - slack > 0:
            return 1
        if mid + slack < 0:
            return -1
        return 0

    def approx(self) -> float:
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    def __eq__(self, other):
        if type(other) is SymReal:
            return self.coeffs == other.coeffs and (self.basis is other.basis or self.basis == other.basis)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare SymReal with {type(other).__name__}")
        if len(self.coeffs) == 1:
            a, b = self.coeffs[0], o.coeffs[0]
            return (a > b) - (a < b)
        return (self - o).sign()

    def __lt__(self, other):
        if type(other) is SymReal and len(self.coeffs) == 1 and other.basis is self.basis:
            return self.coeffs[0] < other.coeffs[0]
        return self._cmp(other) < 0

    def __le__(self, other):
        if type(other) is SymReal and len(self.coeffs) == 1 and other.basis is self.basis:
            return self.coeffs[0] <= other.coeffs[0]
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if type(other) is SymReal and len(self.coeffs) == 1 and other.basis is self.basis:
            return self.coeffs[0] > other.coeffs[0]
        return self._cmp(other) > 0

    def __ge__(self, other):
        if type(other) is SymReal and len(self.coeffs) == 1 and other.basis is self.basis:
            return self.coeffs[0] >= other.coeffs[0]
        return self._cmp(other) >= 0

    def __repr__(self):
        return f"SymReal({self})"

    def __str__(self):
        terms = []
        for c, name in zip(self.coeffs, self.basis.names):
            if c == 0:
                continue
            mag = abs(c)
            if name == "1":
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag}*{name}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out


def sym_arith(op: str, x: SymReal, y) -> SymReal:
    """Dispatch form of the arithmetic operators: add, sub, int_scale."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "int_scale":
        # accept either order: (k, x) or (x, k)
        if isinstance(x, int) and isinstance(y, SymReal):
            x, y = y, x
        if not isinstance(y, int) or isinstance(y, bool):
            raise TypeError("int_scale needs an integer factor")
        return x * y
    raise ValueError(f"unknown op {op!r}")


def sym_cmp(x: SymReal, y: SymReal) -> Ordering:
    x._check(y)
    return Ordering(x._cmp(y))


def floor_div(x: SymReal, y: SymReal) -> int:
    """Largest integer q with q*y <= x, for y > 0."""
    if y.sign() <= 0:
        raise ValueError("divisor must be positive")
    if len(x.coeffs) == 1:
        return math.floor(Fraction(x.coeffs[0]) / y.coeffs[0])
    xl, xh = x.enclosure()
    yl, yh = y.enclosure()
    if yl <= 0:
        raise RefineNeeded(y, "divisor enclosure touches zero")
    qs = [xl / yl, xl / yh, xh / yl, xh / yh]
    q_lo, q_hi = math.floor(min(qs)), math.floor(max(qs))
    if q_hi - q_lo > 64:
        raise RefineNeeded(x, "quotient enclosure too wide")
    # scan down from the top candidate; each test is a certified comparison
    for q in range(q_hi, q_lo - 1, -1):
        if (x - y * q).sign() >= 0:
            return q
    return q_lo - 1


def reduce_into(x: SymReal, m: SymReal, closed_top: bool = True) -> tuple[int, SymReal]:
    """Return (q, r) with r = x - q*m and r in (0, m] (closed_top) or [0, m)."""
    q = floor_div(x, m)
    r = x - m * q
    if closed_top and r.is_zero():
        q -= 1
        r = r + m
    return q, r


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_symreal(text: str, basis: SymBasis) -> SymReal:
    """Parse a linear expression such as ``3/2 - 2*beta + gamma/3``.

    Products of two symbols are rejected: the basis only spans linear
    combinations.
    """
    tokens = []
    for num, name, other in _TOKEN_RE.findall(text):
        if num:
            tokens.append(("num", Fraction(num)))
        elif name:
            tokens.append(("sym", name))
        elif other.strip():
            tokens.append(("op", other))
    if not tokens:
        raise InputError("empty expression")
    coeffs = [0] * len(basis)
    pos = 0
    sign = 1
    expect_term = True
    while pos < len(tokens):
        kind, val = tokens[pos]
        if kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            pos += 1
            expect_term = True
            continue
        if not expect_term:
            raise InputError(f"unexpected token {val!r} in {text!r}")
        factor = Fraction(sign)
        sym = None
        while True:
            kind, val = tokens[pos]
            if kind == "num":
                factor *= val
            elif kind == "sym":
                if sym is not None:
                    raise InputError(f"product of symbols in {text!r}")
                sym = basis.index(val)
            else:
                raise InputError(f"unexpected token {val!r} in {text!r}")
            pos += 1
            if pos < len(tokens) and tokens[pos] == ("op", "*"):
                pos += 1
                continue
            if pos < len(tokens) and tokens[pos] == ("op", "/"):
                pos += 1
                if pos >= len(tokens) or tokens[pos][0] != "num" or tokens[pos][1] == 0:
                    raise InputError(f"can only divide by a nonzero number in {text!r}")
                factor /= tokens[pos][1]
                pos += 1
                if pos < len(tokens) and tokens[pos] == ("op", "*"):
                    pos += 1
                    continue
            break
        coeffs[0 if sym is None else sym] += factor
        sign = 1
        expect_term = False
    if expect_term:
        raise InputError(f"dangling operator in {text!r}")
    return SymReal._raw(basis, tuple(as_fraction(c) for c in coeffs))


def vector(basis: SymBasis, values) -> tuple[SymReal, ...]:
    """Build a tuple of SymReals from numbers, strings or SymReals."""
    out = []
    for v in values:
        if isinstance(v, SymReal):
            v._check(basis.zero())
            out.append(v)
        elif isinstance(v, str) and not re.fullmatch(r"\s*-?\d+(?:/\d+)?\s*", v):
            out.append(parse_symreal(v, basis))
        else:
            out.append(basis.const(v))
    return tuple(out)
