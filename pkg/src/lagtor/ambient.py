"""π₂ data of the ambient manifold and the shifted-torus membership test.

A manifold is described by the values of σ and c₁ on a generating set of
π₂(M).  From these we build σ_a(S) = σ(S) − c₁(S)·a, the groups G_a and
G_a(S₀), the "special" predicate, and the shift-equivalence verdict for
tori T(a, …, a, a+d₁, …) versus T(a, …, a, a+e₁, …) with small a.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

from .errors import HypothesisViolation, InputError
from .exactnum import (
    TRIVIAL_BASIS,
    SymBasis,
    SymReal,
    ZModule,
    vector,
    zmod_from_generators,
)


@dataclass(frozen=True)
class Generator:
    sigma: SymReal
    c1: int

    def __post_init__(self):
        if not isinstance(self.c1, int) or isinstance(self.c1, bool):
            raise InputError(f"c1 must be an integer, got {self.c1!r}")


@dataclass(frozen=True)
class ManifoldDescriptor:
    """σ and c₁ on generators of π₂(M); s0 picks the class S₀.

    s0 may be a generator index or an integer vector of coefficients over
    the generators (S₀ = Σ s0[i]·S_i).
    """

    generators: tuple = ()
    s0: Optional[object] = None
    basis: SymBasis = TRIVIAL_BASIS
    name: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.sigma.basis != self.basis:
                raise InputError("generator σ lives over a different basis")
        if self.s0 is not None:
            object.__setattr__(self, "s0", self._s0_coeffs(self.s0))

    def _s0_coeffs(self, s0) -> tuple:
        n = len(self.generators)
        if isinstance(s0, int) and not isinstance(s0, bool):
            if not 0 <= s0 < n:
                raise InputError(f"s0 index {s0} out of range for {n} generators")
            return tuple(1 if i == s0 else 0 for i in range(n))
        s0 = tuple(s0)
        if len(s0) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in s0):
            raise InputError("s0 must be an index or an integer vector over the generators")
        return s0

    def s0_class(self) -> Generator:
        """σ and c₁ of S₀."""
        if self.s0 is None:
            raise HypothesisViolation("no class S₀ was chosen")
        sigma = self.basis.zero()
        c1 = 0
        for n, g in zip(self.s0, self.generators):
            sigma = sigma + g.sigma * n
            c1 += n * g.c1
        return Generator(sigma, c1)


def sigma_a(g: Generator, a: SymReal) -> SymReal:
    """σ(S) − c₁(S)·a."""
    return g.sigma - a * g.c1


def _relevant(m: ManifoldDescriptor, restrict_to_s0: bool) -> list:
    return [m.s0_class()] if restrict_to_s0 else list(m.generators)


def group_Ga(m: ManifoldDescriptor, a: SymReal, restrict_to_s0: bool = False) -> ZModule:
    if a.sign() <= 0:
        raise InputError("a must be positive")
    gens = _relevant(m, restrict_to_s0)
    return zmod_from_generators([sigma_a(g, a) for g in gens], m.basis)


def _integer_direction(coords: Sequence[int]) -> tuple:
    """Primitive integer vector along coords with first nonzero entry positive."""
    import math

    g = 0
    for x in coords:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(coords)
    v = [x // g for x in coords]
    lead = next(x for x in v if x)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def sigma_module(m: ManifoldDescriptor) -> ZModule:
    return zmod_from_generators([g.sigma for g in m.generators], m.basis)


def is_special(m: ManifoldDescriptor) -> bool:
    """σ(π₂(M)) has rank one and c₁ is not a real multiple of σ.

    With rank one, σ(S_i) = n_i·g for integers n_i, so c₁ = λσ for a real
    λ exactly when the integer vectors c₁ and n are parallel.
    """
    L = sigma_module(m)
    if L.rank != 1:
        return False
    n = [L.coordinates(g.sigma)[0] for g in m.generators]
    c = [g.c1 for g in m.generators]
    if not any(c):
        return False  # c₁ = 0·σ
    return _integer_direction(n) != _integer_direction(c)


class ShiftVerdict(enum.Enum):
    EQUIVALENT_FOR_SMALL_A = "EquivalentForSmallA"
    NOT_IMPLIED = "NotImplied"


@dataclass(frozen=True)
class ShiftResult:
    verdict: ShiftVerdict
    special: bool
    group: ZModule
    indeterminate: Optional[str] = None
    diagnostics: tuple = field(default=())


def _fresh_name(basis: SymBasis, stem: str = "a") -> str:
    name = stem
    while name in basis.names:
        name += "_"
    return name


def shift_equiv(m: ManifoldDescriptor, c: SymReal, d: Sequence[SymReal], e: Sequence[SymReal]) -> ShiftResult:
    """Does d_j − e_j lie in G_a (or G_a(S₀) when M is special) for all small a?

    a is treated as an indeterminate: when a relevant c₁ value is nonzero
    the basis is extended by a fresh symbol for a.  Membership for every a
    in an interval forces an identity in that symbol, so membership in the
    extended basis is exactly what the statement needs.
    """
    d, e = tuple(d), tuple(e)
    if not d or len(d) != len(e):
        raise InputError("d and e must be nonempty and of equal length")
    if c.sign() <= 0:
        raise InputError("c must be positive")
    for x in d + e:
        if x.basis != m.basis or c.basis != m.basis:
            raise InputError("inputs live over a different basis than the manifold")
        if x < c:
            raise HypothesisViolation(f"entry {x} is below c = {c}")
    special = is_special(m)
    gens = _relevant(m, special)
    diffs = [x - y for x, y in zip(d, e)]
    indeterminate = None
    if any(g.c1 for g in gens):
        indeterminate = _fresh_name(m.basis)
        basis = m.basis.extended(indeterminate, 0, 1)
        lift = lambda x: SymReal._raw(basis, tuple(x.coeffs) + (0,))
        a = basis.symbol(indeterminate)
        group = zmod_from_generators([lift(g.sigma) - a * g.c1 for g in gens], basis)
        diffs = [lift(x) for x in diffs]
    else:
        group = zmod_from_generators([g.sigma for g in gens], m.basis)
    notes = []
    for j, x in enumerate(diffs, start=1):
        if x not in group:
            what = "G_a(S0)" if special else "G_a"
            if indeterminate:
                notes.append(f"d_{j} - e_{j} = {x} is not in {what} for generic a; "
                             f"membership could hold only for isolated values of a")
            else:
                notes.append(f"d_{j} - e_{j} = {x} is not in {what}")
    verdict = ShiftVerdict.NOT_IMPLIED if notes else ShiftVerdict.EQUIVALENT_FOR_SMALL_A
    return ShiftResult(verdict, special, group, indeterminate, tuple(notes))


# ------------------------------------------------------------ descriptors


def descriptor_from_json(doc, basis: SymBasis = TRIVIAL_BASIS, params: Sequence[SymReal] = ()) -> ManifoldDescriptor:
    """Build a descriptor; σ entries are coefficient vectors or, in presets,
    expressions in the preset parameters v1, v2, …"""
    from .jsonio import MANIFOLD_SCHEMA, basis_from_json, symreal_from_json, validate

    if "parameters" in doc:
        return _preset_from_template(doc, basis, params)
    validate(doc, MANIFOLD_SCHEMA)
    if "basis" in doc:
        basis = basis_from_json(doc["basis"])
    gens = []
    for n, g in enumerate(doc["generators"]):
        gens.append(Generator(symreal_from_json(g["sigma"], basis, f"/generators/{n}/sigma"), g["c1"]))
    return ManifoldDescriptor(tuple(gens), doc.get("s0"), basis, doc.get("name", ""))


def _preset_from_template(doc, basis, params) -> ManifoldDescriptor:
    names = doc["parameters"]
    if len(params) != len(names):
        raise InputError(f"preset {doc['name']} needs parameters {', '.join(names)}")
    env = dict(zip(names, params))
    gens = []
    for g in doc["generators"]:
        sigma = basis.zero()
        for pname, coeff in g["sigma"].items():
            sigma = sigma + env[pname] * int(coeff)
        gens.append(Generator(sigma, g["c1"]))
    return ManifoldDescriptor(tuple(gens), doc.get("s0"), basis, doc["name"])


def descriptor_to_json(m: ManifoldDescriptor) -> dict:
    from .jsonio import basis_to_json, symreal_to_json, FORMAT

    return {
        "format": FORMAT,
        "name": m.name,
        "basis": basis_to_json(m.basis),
        "generators": [{"sigma": symreal_to_json(g.sigma), "c1": g.c1} for g in m.generators],
        "s0": None if m.s0 is None else list(m.s0),
    }


def preset_names() -> list:
    root = resources.files("lagtor.presets")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(text: str, basis: SymBasis = TRIVIAL_BASIS) -> ManifoldDescriptor:
    """Preset by name, with parameters after a colon, e.g. "s2xs2:3,4"."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in preset_names():
        raise InputError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    doc = json.loads(resources.files("lagtor.presets").joinpath(name + ".json").read_text())
    params = vector(basis, [p.strip() for p in rest.split(",")]) if rest.strip() else ()
    return descriptor_from_json(doc, basis, params)


def s2xs2(v1, v2, basis: SymBasis = TRIVIAL_BASIS) -> ManifoldDescriptor:
    """S²(v1)×S²(v2): σ = (v1, v2), c₁ = (2, 2), S₀ = (1, −1)."""
    p1, p2 = vector(basis, [v1, v2])
    return ManifoldDescriptor((Generator(p1, 2), Generator(p2, 2)), (1, -1), basis, "s2xs2")


def aspherical(basis: SymBasis = TRIVIAL_BASIS) -> ManifoldDescriptor:
    return ManifoldDescriptor((), None, basis, "aspherical")
