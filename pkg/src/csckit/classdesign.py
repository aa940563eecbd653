"""Kahler-class bookkeeping for twisted products of a constant-curvature orbifold and CP1.

Conventions: ``kappa`` is Gaussian curvature, so Gauss-Bonnet gives
``area_base = 2 pi chi / kappa1`` and the fibre sphere has area
``4 pi / kappa2``. The product class has ``[w]^2 = 2 area_base area_fiber``
and ``c1.[w]`` is the total scalar curvature divided by ``4 pi``. All results
are taken in the orbifold limit of the gluing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .numkit import as_rational
from .orbifold import sign_name


@dataclass(frozen=True)
class TwistedProductClass:
    chi_orb: Fraction
    kappa1: float
    kappa2: float

    def __post_init__(self):
        chi = as_rational(self.chi_orb)
        object.__setattr__(self, "chi_orb", chi)
        if not self.kappa2 > 0:
            raise DomainError(f"fibre curvature must be positive, got {self.kappa2}")
        if sign_name(self.kappa1) != sign_name(chi):
            raise DomainError(
                f"base curvature {self.kappa1} must have the sign of chi_orb = {chi} (Gauss-Bonnet)"
            )

    @property
    def s(self) -> float:
        return 2.0 * (self.kappa1 + self.kappa2)


@dataclass(frozen=True)
class ClassInvariants:
    area_base: float
    area_fiber: float
    s: float
    fiber_ratio: float
    c1_ratio: float


def invariants(c: TwistedProductClass) -> ClassInvariants:
    if c.chi_orb == 0:
        raise DomainError("flat base: the base area is not fixed by its curvature")
    area_base = 2.0 * math.pi * float(c.chi_orb) / c.kappa1
    area_fiber = 4.0 * math.pi / c.kappa2
    vol_norm = math.sqrt(2.0 * area_base * area_fiber)
    s = c.s
    return ClassInvariants(
        area_base=area_base,
        area_fiber=area_fiber,
        s=s,
        fiber_ratio=area_fiber / vol_norm,
        c1_ratio=s * area_base * area_fiber / (4.0 * math.pi * vol_norm),
    )


def einstein_ratio(k: int) -> float:
    """``c1.F / sqrt(c1^2) = 2 / sqrt(8 - k)`` for the k-fold blow-up of CP1 x CP1, ``k <= 7``."""
    if int(k) != k or not 0 <= k <= 7:
        raise DomainError(f"einstein_ratio needs an integer 0 <= k <= 7, got {k!r}")
    return 2.0 / math.sqrt(8 - k)


def design_fiber_ratio(chi_orb, c: float, eps: float) -> TwistedProductClass:
    """Class over a spherical base with ``|fiber_ratio - c| <= eps`` and positive scalar curvature.

    ``fiber_ratio = sqrt(kappa1 / (kappa2 chi))``, so with ``kappa2 = 1`` the
    solution is ``kappa1 = c^2 chi``.
    """
    chi = as_rational(chi_orb)
    if chi <= 0 or not c > 0 or not eps > 0:
        raise DomainError("need chi_orb > 0, c > 0, eps > 0")
    cls = TwistedProductClass(chi, c * c * float(chi), 1.0)
    got = invariants(cls).fiber_ratio
    if abs(got - c) > eps:
        raise ConvergenceError(f"closed-form design missed: {got} vs {c}")
    return cls


def _c1_ratio_at(chi, x):
    # kappa1 = -x, kappa2 = 1
    return invariants(TwistedProductClass(chi, -x, 1.0)).c1_ratio


def design_c1_ratio(chi_orb, c: float, eps: float, max_steps: int = 200) -> TwistedProductClass:
    """Class over a hyperbolic base with ``|c1_ratio - c| <= eps``.

    Bisection on ``log(-kappa1/kappa2)`` with ``kappa2 = 1``; ``c1_ratio`` is
    strictly decreasing in ``-kappa1`` and sweeps all of R. The first midpoint
    is ``kappa1 = -kappa2``, the scalar-flat class.
    """
    chi = as_rational(chi_orb)
    if chi >= 0 or not eps > 0 or not math.isfinite(c):
        raise DomainError("need chi_orb < 0, eps > 0 and finite c")
    lo, hi = -1.0, 1.0
    steps = 0
    while _c1_ratio_at(chi, math.exp(lo)) < c or _c1_ratio_at(chi, math.exp(hi)) > c:
        lo, hi = 2 * lo, 2 * hi
        steps += 1
        if steps > max_steps or hi > 700:
            raise ConvergenceError(f"could not bracket c1_ratio = {c}")
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        val = _c1_ratio_at(chi, math.exp(mid))
        if abs(val - c) <= eps:
            return TwistedProductClass(chi, -math.exp(mid), 1.0)
        if val > c:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection for c1_ratio = {c} did not converge in {max_steps} steps")


def product_scalar_sign(kappas) -> str:
    """Sign of the scalar curvature of a product of constant-curvature surfaces."""
    kappas = list(kappas)
    if not kappas:
        raise DomainError("need at least one curvature")
    return sign_name(sum(kappas))
