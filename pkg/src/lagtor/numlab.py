"""Floating-point checks of the explicit symplectic maps and area bounds.

Conventions: a point of C^n is stored as real coordinates
(x_1, y_1, ..., x_n, y_n); action-angle coordinates (ρ_j, θ_j) satisfy
z_j = e^{2πiθ_j} sqrt(ρ_j/π) with θ_j taken mod 1, so ω = Σ dρ_j∧dθ_j and
T(a) is the circle ρ = a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainViolation, InputError

JACOBIAN_STEP = 1e-6


# ------------------------------------------------------------ coordinates


def to_complex(rho, theta):
    rho = np.asarray(rho, dtype=float)
    return np.exp(2j * np.pi * np.asarray(theta, dtype=float)) * np.sqrt(rho / np.pi)


def from_complex(z):
    z = np.asarray(z, dtype=complex)
    return np.pi * np.abs(z) ** 2, np.mod(np.angle(z) / (2 * np.pi), 1.0)


def _real_array(p) -> np.ndarray:
    p = np.asarray(p)
    # extended precision is kept when the caller asks for it
    return p if p.dtype == np.longdouble else p.astype(float)


def real_to_complex(p) -> np.ndarray:
    p = _real_array(p)
    return p[..., 0::2] + 1j * p[..., 1::2]


def complex_to_real(z) -> np.ndarray:
    z = np.asarray(z)
    if z.dtype != np.clongdouble:
        z = z.astype(complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=z.real.dtype)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def omega(n: int) -> np.ndarray:
    """Matrix of Σ dx_j∧dy_j in the (x_1, y_1, ..., x_n, y_n) ordering."""
    w = np.zeros((2 * n, 2 * n))
    for j in range(n):
        w[2 * j, 2 * j + 1] = 1.0
        w[2 * j + 1, 2 * j] = -1.0
    return w


# ------------------------------------------------------------ the maps


def _check_action_angle(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 4 or not np.all(np.isfinite(p)):
        raise InputError("expected finite points (ρ1, θ1, ρ2, θ2)")
    if np.any(p[..., 0] < 0) or np.any(p[..., 2] < 0):
        raise InputError("action coordinates must be nonnegative")
    return p


def map_psi(p) -> np.ndarray:
    """(ρ1, θ1, ρ2, θ2) ↦ (ρ1, θ1+θ2, ρ2−ρ1, θ2) on ρ2 > ρ1."""
    return map_psi_ms(1, 0.0, p)


def map_psi_inverse(q) -> np.ndarray:
    """(ρ1, θ1, ρ2, θ2) ↦ (ρ1, θ1−θ2, ρ2+ρ1, θ2); defined where ρ2 > 0."""
    q = _check_action_angle(q)
    if np.any(q[..., 2] <= 0):
        raise DomainViolation("inverse needs ρ2 > 0")
    out = q.copy()
    out[..., 1] = np.mod(q[..., 1] - q[..., 3], 1.0)
    out[..., 2] = q[..., 2] + q[..., 0]
    return out


def map_psi_ms(m: int, s: float, p) -> np.ndarray:
    """(ρ1, θ1, ρ2, θ2) ↦ (ρ1, θ1 + mθ2, ρ2 + s − mρ1, θ2) on ρ2 + s > mρ1."""
    p = _check_action_angle(p)
    if np.any(p[..., 2] + s <= m * p[..., 0]):
        raise DomainViolation(f"point outside the domain ρ2 + s > {m}·ρ1")
    out = p.copy()
    out[..., 1] = np.mod(p[..., 1] + m * p[..., 3], 1.0)
    out[..., 2] = p[..., 2] + s - m * p[..., 0]
    return out


def psi_ms_cartesian(m: int, s: float, x) -> np.ndarray:
    """The same map in real coordinates (x1, y1, x2, y2) of C²:
    z1 ↦ z1 (z2/|z2|)^m, z2 ↦ (z2/|z2|) sqrt(|z2|² + s/π − m|z1|²)."""
    z = real_to_complex(x)
    z1, z2 = z[..., 0], z[..., 1]
    r2 = np.abs(z2)
    arg = r2 ** 2 + s / np.pi - m * np.abs(z1) ** 2
    if np.any(r2 == 0) or np.any(arg <= 0):
        raise DomainViolation(f"point outside the domain of Ψ_(m={m}, s={s})")
    u = z2 / r2
    w = np.stack([z1 * u ** m, u * np.sqrt(arg)], axis=-1)
    return complex_to_real(w)


def psi_cartesian(x) -> np.ndarray:
    """Ψ(z1, z2) = (z1 z2/|z2|, z2 sqrt(|z2|² − |z1|²)/|z2|) on |z1| < |z2|."""
    z = real_to_complex(x)
    if np.any(np.abs(z[..., 0]) >= np.abs(z[..., 1])):
        raise DomainViolation("Ψ needs |z1| < |z2|")
    return psi_ms_cartesian(1, 0.0, x)


def psi_inverse_cartesian(x) -> np.ndarray:
    """(w1, w2) ↦ (w1 conj(w2)/|w2|, w2 sqrt(|w2|² + |w1|²)/|w2|) on w2 ≠ 0."""
    w = real_to_complex(x)
    w1, w2 = w[..., 0], w[..., 1]
    r2 = np.abs(w2)
    if np.any(r2 == 0):
        raise DomainViolation("inverse of Ψ needs w2 ≠ 0")
    u = w2 / r2
    z = np.stack([w1 * np.conj(u), u * np.sqrt(r2 ** 2 + np.abs(w1) ** 2)], axis=-1)
    return complex_to_real(z)


def jacobian(f: Callable, x, h: float = JACOBIAN_STEP) -> np.ndarray:
    """Central-difference Jacobian of f: R^k → R^k at x.

    Evaluated in extended precision so that rounding in f(x ± h) stays far
    below the truncation error of the stencil.
    """
    x = np.asarray(x, dtype=np.longdouble)
    h = np.longdouble(h)
    k = x.size
    cols = []
    for i in range(k):
        e = np.zeros(k)
        e[i] = h
        cols.append((f(x + e) - f(x - e)) / (2 * h))
    return np.stack(cols, axis=-1)


def symplectic_defect(f: Callable, x, h: float = JACOBIAN_STEP) -> float:
    """max |JᵀΩJ − Ω| for the finite-difference Jacobian at x."""
    J = jacobian(f, x, h)
    w = omega(J.shape[0] // 2).astype(np.longdouble)
    return float(np.max(np.abs(J.T @ w @ J - w)))


def random_domain_points(m: int, s: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Cartesian points of C² well inside the domain of Ψ_{m,s}."""
    rho1 = rng.uniform(0.2, 2.0, count)
    margin = rng.uniform(0.5, 2.0, count)
    rho2 = np.maximum(m * rho1 - s, 0.0) + margin
    th = rng.uniform(0.0, 1.0, (count, 2))
    z = np.stack([to_complex(rho1, th[:, 0]), to_complex(rho2, th[:, 1])], axis=-1)
    return complex_to_real(z)


# ------------------------------------------------------------ step-one ball


def rotation(t: float, z):
    """Unitary flow of H = (π/2)(x1 y3 − x3 y1) at time t on C³;
    at t = 1 it sends (z1, z2, z3) to (z3, z2, −z1)."""
    c, s = math.cos(math.pi * t / 2), math.sin(math.pi * t / 2)
    z = np.asarray(z, dtype=complex)
    out = z.copy()
    out[..., 0] = c * z[..., 0] + s * z[..., 2]
    out[..., 2] = -s * z[..., 0] + c * z[..., 2]
    return out


def step1_points(a: float, c: float, d: float, t: float, samples: int,
                 rng: np.random.Generator | None = None) -> np.ndarray:
    """Points of Ψ₊⁻¹(Φ_t(Ψ₊(T(a, a+c, a+d)))) in C³."""
    if min(a, c, d) <= 0:
        raise InputError("a, c, d must be positive")
    if not 0.0 <= t <= 1.0:
        raise InputError("t must lie in [0, 1]")
    if samples < 1:
        raise InputError("need at least one sample")
    rng = rng or np.random.default_rng(0)
    th = rng.uniform(0.0, 1.0, (samples, 3))
    z = np.stack([to_complex(a, th[:, 0]), to_complex(a + c, th[:, 1]), to_complex(a + d, th[:, 2])], axis=-1)
    w12 = real_to_complex(psi_cartesian(complex_to_real(z[:, :2])))
    w = np.concatenate([w12, z[:, 2:]], axis=-1)
    w = rotation(t, w)
    if np.any(np.abs(np.pi * np.abs(w[:, 1]) ** 2 - c) > 1e-9 * max(1.0, c)):
        raise DomainViolation("the flow moved the second factor off the circle of area c")
    back = real_to_complex(psi_inverse_cartesian(complex_to_real(w[:, :2])))
    return np.concatenate([back, w[:, 2:]], axis=-1)


def check_step1_ball(a: float, c: float, d: float, t: float, samples: int = 1000,
                     rng: np.random.Generator | None = None) -> float:
    """Largest π·Σ|z|² seen along the isotopy at time t (bound: 4a+c+2d)."""
    pts = step1_points(a, c, d, t, samples, rng)
    return float(np.max(np.pi * np.sum(np.abs(pts) ** 2, axis=-1)))


# ------------------------------------------------------------ areas


def _trapezoid_periodic(values: np.ndarray) -> float:
    return float(np.mean(values))


def area_line_annulus(r_minus: float, r_plus: float, direction: Sequence[complex] = (1.0, 0.0),
                      tol: float = 1e-9, max_level: int = 16) -> float:
    """Area of {λv : λ ∈ C} ∩ {r₋ ≤ |z| ≤ r₊} for a unit vector v ∈ C^n.

    The surface is parametrized by λ = r e^{iφ}; the area element is the
    square root of the Gram determinant of the two partial derivatives.
    Composite trapezoid in r and φ, doubling until two levels agree.
    """
    if not (0.0 <= r_minus < r_plus) or not math.isfinite(r_plus):
        raise InputError("need 0 <= r_minus < r_plus")
    v = np.asarray(direction, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise InputError("direction must be nonzero")
    v = v / nv

    def estimate(n: int) -> float:
        r = np.linspace(r_minus, r_plus, n + 1)
        phi = np.arange(n) * (2 * np.pi / n)
        R, P = np.meshgrid(r, phi, indexing="ij")
        e = np.exp(1j * P)[..., None]
        dr = complex_to_real(e * v)
        dphi = complex_to_real(1j * R[..., None] * e * v)
        g11 = np.sum(dr * dr, axis=-1)
        g22 = np.sum(dphi * dphi, axis=-1)
        g12 = np.sum(dr * dphi, axis=-1)
        dens = np.sqrt(np.maximum(g11 * g22 - g12 ** 2, 0.0))
        inner = 2 * np.pi * np.mean(dens, axis=1)  # periodic in φ
        return float(np.trapezoid(inner, r))

    prev = estimate(8)
    n = 16
    for _ in range(max_level):
        cur = estimate(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev, n = cur, 2 * n
    return prev


@dataclass(frozen=True)
class LoopSample:
    """Samples of a closed curve γ: S¹ = R/Z → C^n at θ_k = k/N."""

    points: np.ndarray  # shape (N, n), complex
    derivatives: np.ndarray  # shape (N, n), complex, dγ/dθ

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        der = np.asarray(self.derivatives, dtype=complex)
        if pts.ndim == 1:
            pts, der = pts[:, None], der[:, None]
        if pts.shape != der.shape:
            raise InputError("points and derivatives must have the same shape")
        if pts.shape[0] < 64:
            raise InputError("need at least 64 samples")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(der))):
            raise InputError("samples must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "derivatives", der)

    @classmethod
    def from_functions(cls, gamma: Callable, dgamma: Callable, n: int = 4096) -> "LoopSample":
        g0, g1 = np.asarray(gamma(0.0)), np.asarray(gamma(1.0))
        if np.max(np.abs(g0 - g1)) > 1e-12:
            raise InputError("curve is not closed: γ(0) ≠ γ(1)")
        theta = np.arange(n) / n
        return cls(np.asarray(gamma(theta)), np.asarray(dgamma(theta)))


def isoperimetric_check(loop: LoopSample) -> tuple:
    """(ℓ², 2π∫γ*α_n, slack) with α_n = Σ x_j dy_j − y_j dx_j."""
    z, dz = loop.points, loop.derivatives
    speed = np.sqrt(np.sum(np.abs(dz) ** 2, axis=-1))
    length = _trapezoid_periodic(speed)
    if length <= 0:
        raise InputError("degenerate loop of zero length")
    # x dy − y dx = Im(conj(z) dz)
    integral = _trapezoid_periodic(np.sum(np.imag(np.conj(z) * dz), axis=-1))
    lhs = length ** 2
    rhs = 2 * np.pi * integral
    return lhs, rhs, lhs - rhs


def circle_loop(r: float, n: int = 4096) -> LoopSample:
    return LoopSample.from_functions(
        lambda t: r * np.exp(2j * np.pi * np.asarray(t)),
        lambda t: 2j * np.pi * r * np.exp(2j * np.pi * np.asarray(t)),
        n,
    )


def random_trig_loop(rng: np.random.Generator, dim: int = 2, degree: int = 5, n: int = 4096) -> LoopSample:
    """γ_j(θ) = Σ_{|k|≤degree} c_{jk} e^{2πikθ} with Gaussian coefficients."""
    ks = np.arange(-degree, degree + 1)
    coef = rng.normal(size=(dim, ks.size)) + 1j * rng.normal(size=(dim, ks.size))

    def gamma(t):
        e = np.exp(2j * np.pi * np.multiply.outer(np.asarray(t), ks))
        return e @ coef.T

    def dgamma(t):
        e = np.exp(2j * np.pi * np.multiply.outer(np.asarray(t), ks))
        return (e * (2j * np.pi * ks)) @ coef.T

    return LoopSample.from_functions(gamma, dgamma, n)


def e_curve_action(t: float, ell: int, d: float, n: int = 4096) -> float:
    """∫ E*λ over S¹ for E(θ) = (sqrt((1−t)d/π) e^{2πiθ}, sqrt(td/(ℓπ)) e^{2πiℓθ}),
    λ = x1 dy1 + x2 dy2."""
    if not (0.0 <= t <= 1.0) or ell < 1 or d <= 0:
        raise InputError("need t in [0, 1], ell >= 1, d > 0")
    theta = np.arange(n) / n
    r1, r2 = math.sqrt((1 - t) * d / math.pi), math.sqrt(t * d / (ell * math.pi))
    z1 = r1 * np.exp(2j * np.pi * theta)
    z2 = r2 * np.exp(2j * np.pi * ell * theta)
    dz1 = 2j * np.pi * z1
    dz2 = 2j * np.pi * ell * z2
    integrand = z1.real * dz1.imag + z2.real * dz2.imag
    return _trapezoid_periodic(integrand)


# ------------------------------------------------------------ report


def _record(check, params, observed, bound, ok) -> dict:
    return {"check": check, "params": params, "observed": observed, "bound": bound, "pass": bool(ok)}


def run_checks(seed: int = 0, points: int = 1000, loops: int = 200) -> list:
    """Every numeric contract, one record per check."""
    rng = np.random.default_rng(seed)
    out = []
    for m, s in ((1, 0.0), (0, 0.0), (2, 0.5), (-1, 1.0), (3, -0.25)):
        pts = random_domain_points(m, s, points, rng)
        worst = max(symplectic_defect(lambda x: psi_ms_cartesian(m, s, x), x) for x in pts)
        out.append(_record("psi_ms_symplectic", {"m": m, "s": s, "points": points}, worst, 1e-9, worst <= 1e-9))
    pts = random_domain_points(1, 0.0, points, rng)
    back = np.max(np.abs(psi_inverse_cartesian(psi_cartesian(pts)) - pts))
    out.append(_record("psi_roundtrip", {"points": points}, float(back), 1e-12, back <= 1e-12))
    worst = -math.inf
    excess = -math.inf
    for a in (0.5, 1.0, 2.0):
        for c in (0.5, 1.0, 2.0):
            for d in (0.5, 1.0, 2.0):
                for k in range(11):
                    val = check_step1_ball(a, c, d, k / 10, 200, rng)
                    excess = max(excess, val - (4 * a + c + 2 * d))
                    worst = max(worst, val)
    out.append(_record("step1_ball", {"grid": "{0.5,1,2}^3 x t in {0,...,1}"}, excess, 1e-9, excess <= 1e-9))
    area = area_line_annulus(1.0, 2.0)
    rel = abs(area - 3 * math.pi) / (3 * math.pi)
    out.append(_record("line_annulus_area", {"r_minus": 1.0, "r_plus": 2.0}, area, 3 * math.pi, rel <= 1e-6))
    worst_slack = math.inf
    for _ in range(loops):
        lhs, rhs, slack = isoperimetric_check(random_trig_loop(rng))
        worst_slack = min(worst_slack, slack / max(1.0, lhs))
    out.append(_record("isoperimetric_random", {"loops": loops}, worst_slack, -1e-6, worst_slack >= -1e-6))
    lhs, rhs, slack = isoperimetric_check(circle_loop(1.3))
    out.append(_record("isoperimetric_circle", {"r": 1.3}, slack, 1e-6, abs(slack) <= 1e-6 * max(1.0, lhs)))
    dev = max(abs(e_curve_action(t, ell, 2.0) - 2.0) for t in np.linspace(0, 1, 11) for ell in (1, 2, 5))
    out.append(_record("e_curve_action", {"d": 2.0}, dev, 1e-9, dev <= 1e-9))
    return out
