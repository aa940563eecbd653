"""Momentum profiles of U(m+1)-invariant Kahler metrics on the total space of O(-k) -> CP^m.

A profile is ``phi(tau) = sum c * u**a`` with ``u = 1 + k*tau``. With
``P = u**m * phi`` the scalar curvature is

    sigma = 2 m (m+1) / u - u**(-m) * P''(tau)

and ``P''`` is exact on the Laurent terms: each term ``c u**(a+m)`` gives
``c (a+m)(a+m-1) k**2 u**(a+m-2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .errors import DomainError


@dataclass(frozen=True)
class LaurentProfile:
    m: int
    k: int
    terms: tuple[tuple[object, int], ...]  # (coefficient, exponent); Fraction when exact

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1 or int(self.k) != self.k or self.k < 1:
            raise DomainError(f"need integers m >= 1 and k >= 1, got m={self.m!r}, k={self.k!r}")
        exps = [int(e) for _, e in self.terms]
        if len(set(exps)) != len(exps):
            raise DomainError(f"exponents must be distinct: {exps}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "terms", tuple((c, int(e)) for c, e in self.terms))

    @property
    def coefficients(self):
        return [c for c, _ in self.terms]

    @property
    def exponents(self):
        return [e for _, e in self.terms]

    def _eval(self, terms, tau):
        coefs = [float(c) for c, _ in terms]
        exps = [e for _, e in terms]
        out = _kernels.laurent_eval(coefs, exps, float(self.k), np.asarray(tau, dtype=float))
        return out if np.ndim(tau) else float(out)

    def phi(self, tau):
        return self._eval(self.terms, tau)

    def phi_terms_prime(self):
        return tuple((c * e * self.k, e - 1) for c, e in self.terms if e != 0)

    def dphi(self, tau):
        return self._eval(self.phi_terms_prime(), tau)

    def P_terms(self):
        return tuple((c, e + self.m) for c, e in self.terms)

    def P(self, tau):
        return self._eval(self.P_terms(), tau)

    def dP(self, tau):
        return self._eval(tuple((c * (e + self.m) * self.k, e + self.m - 1) for c, e in self.terms), tau)

    def sigma_terms(self):
        """Laurent terms of ``u**(-m) P''``."""
        m, k = self.m, self.k
        return tuple((c * (e + m) * (e + m - 1) * k * k, e - 2) for c, e in self.terms if (e + m) * (e + m - 1))

    def at_zero(self):
        """``(phi(0), phi'(0))`` in the arithmetic of the coefficients (exact for Fractions)."""
        phi0 = sum((c for c, _ in self.terms), Fraction(0))
        dphi0 = sum((c * e * self.k for c, e in self.terms), Fraction(0))
        return phi0, dphi0


def phi_scalar_flat(m: int, k: int) -> LaurentProfile:
    """``(2/k^2) [u + (k-m-1) u^(1-m) + (m-k) u^(-m)]``, zero terms dropped."""
    c = Fraction(2, k * k)
    raw = [(c, 1), (c * (k - m - 1), 1 - m), (c * (m - k), -m)]
    # m = 1 puts the middle term at u^0, still distinct from u^1 and u^-1
    return LaurentProfile(m, k, tuple((a, e) for a, e in raw if a != 0))


def phi_flat(m: int, k: int) -> LaurentProfile:
    """Profile of the flat metric on C^(m+1)/Z_k: ``(2/k^2) u``."""
    return LaurentProfile(m, k, ((Fraction(2, k * k), 1),))


def scalar_curvature_exact(p: LaurentProfile, tau):
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise DomainError("tau must be >= 0")
    u = 1.0 + p.k * tau_arr
    lead = 2.0 * p.m * (p.m + 1) / u
    terms = p.sigma_terms()
    second = p._eval(terms, tau_arr) if terms else np.zeros_like(u)
    out = lead - second
    return out if np.ndim(tau) else float(out)


_STENCILS = {
    5: ((-1.0, 16.0, -30.0, 16.0, -1.0), 12.0),
    3: ((0.0, 1.0, -2.0, 1.0, 0.0), 1.0),
}


def scalar_curvature_numeric(phi, m: int, k: int, tau: float, h: float, points: int = 5) -> float:
    """Scalar curvature with ``P''`` from central finite differences of ``u**m * phi``.

    ``points=5`` is the five-point fourth-order stencil, ``points=3`` the
    classic second-order one. The stencil must stay inside ``tau >= 0``.
    """
    if h <= 0:
        raise DomainError("step h must be positive")
    if points not in _STENCILS:
        raise DomainError("points must be 3 or 5")
    weights, denom = _STENCILS[points]
    reach = 2 if points == 5 else 1
    if tau - reach * h < 0:
        raise DomainError(f"stencil leaves tau >= 0 (tau={tau}, h={h})")

    def P(t):
        return (1.0 + k * t) ** m * phi(t)

    acc = 0.0
    for w, off in zip(weights, (-2, -1, 0, 1, 2)):
        if w:
            acc += w * P(tau + off * h)
    second = acc / (denom * h * h)
    u = 1.0 + k * tau
    return 2.0 * m * (m + 1) / u - second / u**m


@dataclass(frozen=True)
class PositivityReport:
    min_P: float
    min_P_prime: float

    @property
    def passed(self) -> bool:
        return self.min_P > 0 and self.min_P_prime > 0


def positivity_check(p: LaurentProfile, tau_max: float, n_grid: int) -> PositivityReport:
    """Grid minima of ``P`` on ``(0, tau_max]`` and ``P'`` on ``[0, tau_max]``."""
    if tau_max <= 0 or n_grid < 2:
        raise DomainError("need tau_max > 0 and n_grid >= 2")
    grid = np.linspace(0.0, tau_max, int(n_grid))
    return PositivityReport(float(np.min(p.P(grid[1:]))), float(np.min(p.dP(grid))))


def t_of_tau(p: LaurentProfile, tau_from: float, tau_to: float) -> float:
    """``t(tau_to) - t(tau_from) = integral of dtau / phi``, by adaptive quadrature."""
    if tau_from <= 0 or tau_to <= 0:
        raise DomainError("integration limits must be positive")
    lo, hi = sorted((tau_from, tau_to))
    probe = p.phi(np.linspace(lo, hi, 257))
    if np.any(probe <= 0):
        raise DomainError(f"phi vanishes or changes sign on [{lo}, {hi}]")
    val, _ = integrate.quad(lambda t: 1.0 / p.phi(t), tau_from, tau_to, epsabs=0.0, epsrel=1e-10, limit=200)
    return float(val)


@dataclass(frozen=True)
class DecayFit:
    fitted_exponent: float
    expected_exponent: float
    residual: float
    tau0: tuple[float, ...] = ()
    difference: tuple[float, ...] = ()


def _remainder_integral(m, k, u_lo, u_hi):
    """``integral of (1/phi - 1/phi_flat) dtau`` between ``u_lo`` and ``u_hi``, cancellation-free.

    Written as ``-(k^2/2u) * eps/(1+eps)`` with ``phi = (2/k^2) u (1+eps)``
    and integrated in ``log u``.
    """

    def integrand(s):
        u = math.exp(s)
        eps = (k - m - 1) * u**-m + (m - k) * u ** (-m - 1)
        r = -(k * k / (2.0 * u)) * eps / (1.0 + eps)
        return r * u / k

    val, _ = integrate.quad(integrand, math.log(u_lo), math.log(u_hi), epsabs=0.0, epsrel=1e-12, limit=400)
    return val


def ale_decay_fit(m: int, k: int, t_grid) -> DecayFit:
    """Fit the decay exponent of ``tau(t) - tau0(t)`` against ``tau0``.

    ``tau0(t)`` is the flat profile's momentum, ``1 + k tau0 = 2 exp(2t/k)``.
    ``tau(t)`` solves ``dt = dtau/phi`` for the scalar-flat profile with the
    constant chosen so both agree at the largest grid ``t``. Then
    ``log u = log u0 + (2/k) R(u)`` where ``R`` integrates the difference of
    the two reciprocals, which is solved per grid point. The log-log slope is
    fitted on the lower half of the grid.
    """
    if int(m) != m or m < 2:
        raise DomainError("decay fit needs m >= 2 (the exponent 1 - m vanishes for m = 1)")
    if k < 1:
        raise DomainError("k must be >= 1")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) < 4 or np.any(np.diff(t) <= 0) or np.any(t <= 0):
        raise DomainError("t_grid must be increasing, positive, with at least 4 points")
    u0 = 2.0 * np.exp(2.0 * t / k)
    u_match = u0[-1]

    diffs = []
    for u0_i in u0:
        if u0_i == u_match:
            diffs.append(0.0)
            continue

        def F(log_u, u0_i=u0_i):
            return log_u - math.log(u0_i) - (2.0 / k) * _remainder_integral(m, k, math.exp(log_u), u_match)

        lo, hi = math.log(u0_i) - 1.0, math.log(u0_i) + 1.0
        log_u = optimize.brentq(F, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        R = _remainder_integral(m, k, math.exp(log_u), u_match)
        # u - u0 = u * (1 - exp(-2R/k)) without cancellation
        diffs.append(-math.exp(log_u) * math.expm1(-2.0 * R / k) / k)

    tau0 = (u0 - 1.0) / k
    half = len(t) // 2
    x = np.log(tau0[:half])
    d = np.abs(np.asarray(diffs[:half]))
    if np.any(d == 0) or not np.all(np.isfinite(d)):
        raise DomainError("|tau - tau0| underflowed; choose a smaller t range")
    y = np.log(d)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return DecayFit(float(slope), float(1 - m), resid, tuple(tau0.tolist()), tuple(float(v) for v in diffs))
