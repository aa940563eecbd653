"""Parabolic structures on the trivial ruled surface CP1 x CP1 -> CP1.

A holomorphic section is the graph of a rational map ``f: CP1 -> CP1``; a
degree-``d`` graph has self-intersection ``2d``. Points of either factor are
``Fraction`` affine coordinates, with ``None`` standing for infinity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import sympy

from .errors import DomainError, InfeasibleSectionError
from .numkit import as_rational, hj_complement
from .orbifold import OrbifoldSurface

INF = None

# random combinations tried when hunting for a non-degenerate interpolant
_TRIALS = 12
_SPAN = 10**6


def _coord(x):
    return None if x is None else as_rational(x)


def _homog(x):
    return (Fraction(1), Fraction(0)) if x is None else (x, Fraction(1))


@dataclass(frozen=True)
class ParabolicPoint:
    base: Fraction | None
    fiber: Fraction | None
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", _coord(self.base))
        object.__setattr__(self, "fiber", _coord(self.fiber))
        w = as_rational(self.weight)
        if not 0 < w < 1:
            raise DomainError(f"parabolic weight must lie in (0, 1), got {w}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class ParabolicRuledSurface:
    points: tuple[ParabolicPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        bases = [p.base for p in pts]
        if len(set(bases)) != len(bases):
            raise DomainError("parabolic points must lie over distinct base points")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_triples(cls, triples):
        """Build from ``(base, fiber, weight)`` triples."""
        return cls(tuple(ParabolicPoint(b, f, w) for b, f, w in triples))

    @property
    def weights(self) -> list[Fraction]:
        return [p.weight for p in self.points]

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))


@dataclass(frozen=True)
class SectionSpec:
    degree: int
    contains: frozenset

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"section degree must be a non-negative integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "contains", frozenset(int(i) for i in self.contains))


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    witness: SectionSpec | None
    witness_slope: Fraction | None
    degree_bound: int

    def __bool__(self):
        return self.stable


def _incidence_row(point: ParabolicPoint, d: int) -> list[Fraction]:
    # A(s)*t1 - B(s)*t0 = 0 with A = sum a_i s0^i s1^(d-i), likewise B
    s0, s1 = _homog(point.base)
    t0, t1 = _homog(point.fiber)
    mono = [s0**i * s1 ** (d - i) for i in range(d + 1)]
    return [m * t1 for m in mono] + [-m * t0 for m in mono]


def _nullspace(rows, ncols):
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    mat = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    basis = []
    for vec in mat.nullspace():
        basis.append([Fraction(int(v.p), int(v.q)) for v in vec])
    return basis


def _nondegenerate(vec, d) -> bool:
    """True when the forms (A, B) have no common zero on CP1, so f = A/B has degree exactly d."""
    a, b = vec[: d + 1], vec[d + 1 :]
    if a[d] == 0 and b[d] == 0:
        return False
    x = sympy.Symbol("x")
    pa = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a)], x, domain="QQ")
    pb = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(b)], x, domain="QQ")
    return pa.gcd(pb).degree() == 0


def _dot(row, vec):
    return sum((r * v for r, v in zip(row, vec)), Fraction(0))


def section_through(m: ParabolicRuledSurface, subset, degree: int, exact: bool = False):
    """Coefficients ``(A, B)`` of a degree-``degree`` section through the indexed points, or ``None``.

    With ``exact=True`` the section must also avoid every other parabolic point.
    A generic member of the interpolation space is non-degenerate (and avoids
    the excluded points) whenever any member is, so a handful of seeded random
    combinations decides existence.
    """
    subset = sorted(set(subset))
    if any(i < 0 or i >= len(m.points) for i in subset):
        raise DomainError(f"point index out of range in {subset}")
    d = int(degree)
    rows = [_incidence_row(m.points[i], d) for i in subset]
    basis = _nullspace(rows, 2 * (d + 1))
    if not basis:
        return None
    others = [_incidence_row(p, d) for i, p in enumerate(m.points) if i not in subset] if exact else []
    rng = random.Random(0x5EC7 + 31 * d + len(subset))
    candidates = list(basis)
    for _ in range(_TRIALS if len(basis) > 1 or others else 0):
        coeffs = [rng.randint(-_SPAN, _SPAN) for _ in basis]
        candidates.append([sum(c * v[j] for c, v in zip(coeffs, basis)) for j in range(len(basis[0]))])
    for vec in candidates:
        if not any(vec):
            continue
        if not _nondegenerate(vec, d):
            continue
        if any(_dot(r, vec) == 0 for r in others):
            continue
        return vec[: d + 1], vec[d + 1 :]
    return None


def min_degree_through(m: ParabolicRuledSurface, subset, exact: bool = False, max_degree=None):
    """Least ``d`` such that some degree-``d`` graph passes through the indexed points.

    Returns ``None`` when only degenerate solutions exist up to ``max_degree``
    (default: the number of points involved, always enough for distinct bases).
    """
    subset = sorted(set(subset))
    bound = max_degree if max_degree is not None else (len(m.points) if exact else len(subset))
    for d in range(bound + 1):
        if section_through(m, subset, d, exact=exact) is not None:
            return d
    return None


def is_feasible(m: ParabolicRuledSurface, s: SectionSpec) -> bool:
    """Whether a degree-``s.degree`` section meets exactly the points in ``s.contains``."""
    return section_through(m, s.contains, s.degree, exact=True) is not None


def _slope_value(m, degree, contains) -> Fraction:
    on = sum((p.weight for i, p in enumerate(m.points) if i in contains), Fraction(0))
    off = m.total_weight - on
    return 2 * degree + off - on


def slope(m: ParabolicRuledSurface, s: SectionSpec) -> Fraction:
    """``S^2 + sum of weights off S - sum of weights on S`` with ``S^2 = 2 * degree``."""
    if not is_feasible(m, s):
        raise InfeasibleSectionError(
            f"no degree-{s.degree} section through exactly the points {sorted(s.contains)}"
        )
    return _slope_value(m, s.degree, s.contains)


def _lex_subsets(n):
    subs = [c for r in range(n + 1) for c in combinations(range(n), r)]
    return sorted(subs)


def is_stable(m: ParabolicRuledSurface) -> StabilityResult:
    """Parabolic stability of ``m``.

    Sections of degree ``d`` with ``2d >= total weight`` cannot destabilize
    except in the boundary case, so degrees up to ``ceil(total/2)`` suffice.
    Witness: least degree, then lexicographically least index subset.
    """
    bound = math.ceil(m.total_weight / 2)
    subsets = _lex_subsets(len(m.points))
    for d in range(bound + 1):
        for sub in subsets:
            mu = _slope_value(m, d, set(sub))
            if mu > 0:
                continue
            spec = SectionSpec(d, frozenset(sub))
            if is_feasible(m, spec):
                return StabilityResult(False, spec, mu, bound)
    return StabilityResult(True, None, None, bound)


def to_orbifold(m: ParabolicRuledSurface) -> OrbifoldSurface:
    """Genus-0 orbifold with a cone point of order ``q`` for each weight ``p/q``."""
    return OrbifoldSurface(0, tuple(w.denominator for w in m.weights))


def blowup_count(m: ParabolicRuledSurface) -> int:
    """Number of blow-ups in the iterated blow-up: ``sum(l_j + m_j)`` over the weights."""
    total = 0
    for w in m.weights:
        chain, comp = hj_complement(w)
        total += len(chain) + len(comp)
    return total
