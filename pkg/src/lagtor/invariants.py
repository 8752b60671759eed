"""Invariants of product tori T(a) and the decisions built on them."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .errors import (
    CapacityTooSmall,
    DimensionMismatch,
    InputError,
    InvalidTorus,
)
from .exactnum import (
    TRIVIAL_BASIS,
    SymBasis,
    SymReal,
    ZModule,
    vector,
    zmod_from_generators,
)


@dataclass(frozen=True)
class TorusSpec:
    """Area vector a with an optional chart capacity b."""

    a: tuple
    capacity: Optional[SymReal] = None

    def __post_init__(self):
        a = tuple(self.a)
        object.__setattr__(self, "a", a)
        if not a:
            raise InvalidTorus("a torus needs at least one factor")
        basis = a[0].basis
        for x in a:
            if x.basis != basis:
                raise InvalidTorus("components live over different bases")
            if x.sign() <= 0:
                raise InvalidTorus(f"component {x} is not positive")
        if self.capacity is not None:
            if self.capacity.basis != basis:
                raise InvalidTorus("capacity lives over a different basis")
            if sum(a, basis.zero()) > self.capacity:
                raise InvalidTorus("torus does not fit in the chart ball: |a| > b")

    @classmethod
    def of(cls, values, capacity=None, basis: SymBasis = TRIVIAL_BASIS) -> "TorusSpec":
        a = vector(basis, values)
        b = None if capacity is None else vector(basis, [capacity])[0]
        return cls(a, b)

    @property
    def basis(self) -> SymBasis:
        return self.a[0].basis

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class InvariantSet:
    ua: SymReal
    m: int
    total: SymReal
    norm: SymReal
    gamma: ZModule
    stripped: tuple = field(default=())


def torus_invariants(t: TorusSpec) -> InvariantSet:
    return _invariants(t.a)


@lru_cache(maxsize=8192)
def _invariants(a: tuple) -> InvariantSet:
    basis = a[0].basis
    ua = min(a)
    m = sum(1 for x in a if x == ua)
    total = sum(a, basis.zero())
    stripped = tuple(sorted(x - ua for x in a if x != ua))
    gamma = zmod_from_generators(stripped, basis)
    return InvariantSet(ua, m, total, total + ua, gamma, stripped)


def _pair(t: TorusSpec, t2: TorusSpec):
    if t.basis != t2.basis:
        raise InputError("tori live over different bases")
    if t.n != t2.n:
        raise DimensionMismatch(f"dimensions differ: {t.n} vs {t2.n}")


def equiv(t: TorusSpec, t2: TorusSpec) -> bool:
    """Same minimum, same multiplicity of the minimum, same group Γ."""
    _pair(t, t2)
    i, j = torus_invariants(t), torus_invariants(t2)
    return i.ua == j.ua and i.m == j.m and i.gamma == j.gamma


def displacement_energy(t: TorusSpec, perturbation: Sequence[SymReal] | None = None) -> SymReal:
    """Displacement energy of T(a) (or of T(a+s)) inside a chart of capacity b.

    The value min_i a_i is only guaranteed when ‖a‖ <= b; otherwise
    CapacityTooSmall is raised.
    """
    if t.capacity is None:
        raise InputError("displacement energy needs a chart capacity")
    a = t.a
    if perturbation is not None:
        if len(perturbation) != t.n:
            raise DimensionMismatch("perturbation has the wrong length")
        a = tuple(x + s for x, s in zip(a, perturbation))
        for x in a:
            if x.sign() <= 0:
                raise InvalidTorus("perturbed torus has a non-positive factor")
    ua = min(a)
    norm = sum(a, t.basis.zero()) + ua
    if norm > t.capacity:
        raise CapacityTooSmall(f"‖a‖ = {norm} exceeds b = {t.capacity}")
    return ua


def clifford_lift(t: TorusSpec, b: SymReal) -> TorusSpec:
    """Append b - |a| to represent the Clifford torus in CP^n(b)."""
    total = sum(t.a, t.basis.zero())
    if not total < b:
        raise InvalidTorus(f"|a| = {total} is not below b = {b}")
    return TorusSpec(t.a + (b - total,))


class BallVerdict(enum.Enum):
    OBSTRUCTED = "Obstructed"
    CERTIFIABLY_ISOTOPIC = "CertifiablyIsotopic"
    UNKNOWN = "Unknown"


def _is_permutation(a, a2) -> bool:
    return sorted(a, key=lambda x: x.coeffs) == sorted(a2, key=lambda x: x.coeffs)


def obstruct_ball(t: TorusSpec, t2: TorusSpec, b: SymReal) -> BallVerdict:
    _pair(t, t2)
    i, j = torus_invariants(t), torus_invariants(t2)
    bound = max(i.norm, j.norm)
    if b < bound:
        if i.total != j.total:
            return BallVerdict.OBSTRUCTED
        # permuted factors only need the ball of capacity |a|
        if _is_permutation(t.a, t2.a) and b >= i.total:
            return BallVerdict.CERTIFIABLY_ISOTOPIC
        return BallVerdict.UNKNOWN
    if i.ua == j.ua and i.m == j.m and i.gamma == j.gamma:
        return BallVerdict.CERTIFIABLY_ISOTOPIC
    return BallVerdict.UNKNOWN


class Setting(enum.Enum):
    LIOUVILLE_TAME = "LiouvilleTame"
    ASPHERICAL_TAME_WITH_CAPACITY = "AsphericalTameWithCapacity"


def classify(t: TorusSpec, t2: TorusSpec, setting: Setting) -> dict:
    """Verdict for a pair of tori in the given manifold setting."""
    _pair(t, t2)
    i, j = torus_invariants(t), torus_invariants(t2)
    same = {
        "ua": i.ua == j.ua,
        "m": i.m == j.m,
        "gamma": i.gamma == j.gamma,
    }
    if setting is Setting.LIOUVILLE_TAME:
        verdict = "equivalent" if all(same.values()) else "not-equivalent"
    elif setting is Setting.ASPHERICAL_TAME_WITH_CAPACITY:
        for spec, inv in ((t, i), (t2, j)):
            if spec.capacity is None:
                raise InputError("this setting needs chart capacities on both tori")
            if inv.norm > spec.capacity:
                raise CapacityTooSmall(f"‖a‖ = {inv.norm} exceeds b = {spec.capacity}")
        verdict = "invariants-agree" if all(same.values()) else "distinct"
    else:
        raise InputError(f"unknown setting {setting!r}")
    return {"verdict": verdict, "agree": same, "invariants": (i, j)}
