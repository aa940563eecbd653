"""Orbifold Riemann surfaces: Euler characteristic, goodness, vector fields, presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError

NEGATIVE, ZERO, POSITIVE = "negative", "zero", "positive"

# spherical triangle groups, keyed by sorted order triple
_POLYHEDRAL = {
    (2, 3, 3): "tetrahedral",
    (2, 3, 4): "octahedral",
    (2, 3, 5): "icosahedral",
}


def sign_name(x) -> str:
    if x < 0:
        return NEGATIVE
    if x > 0:
        return POSITIVE
    return ZERO


@dataclass(frozen=True)
class OrbifoldSurface:
    """Closed surface of genus ``genus`` with cone points of the given orders."""

    genus: int
    orders: tuple[int, ...] = ()

    def __post_init__(self):
        if int(self.genus) != self.genus or self.genus < 0:
            raise DomainError(f"genus must be a non-negative integer, got {self.genus!r}")
        if any(isinstance(q, bool) or int(q) != q for q in self.orders):
            raise DomainError(f"orbifold orders must be integers, got {tuple(self.orders)}")
        orders = tuple(int(q) for q in self.orders)
        if any(q < 2 for q in orders):
            raise DomainError(f"orbifold orders must be >= 2, got {orders}")
        object.__setattr__(self, "genus", int(self.genus))
        object.__setattr__(self, "orders", orders)

    @property
    def multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.orders))


@dataclass(frozen=True)
class GoodnessVerdict:
    good: bool
    chi_orb: Fraction
    curvature_sign: str
    positive_case_structure: str | None
    has_nontrivial_vector_fields: bool | None


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and relators; a word is a tuple of ``(generator, exponent)`` pairs."""

    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[str, int], ...], ...] = field(default=())

    def relator_strings(self) -> list[str]:
        return [word_to_string(w) for w in self.relators]


def word_to_string(word) -> str:
    parts = []
    for g, e in word:
        parts.append(g if e == 1 else f"{g}^{e}")
    return "*".join(parts)


def euler_orb(s: OrbifoldSurface) -> Fraction:
    """``(2 - 2g) - sum(1 - 1/q)``, exactly."""
    return Fraction(2 - 2 * s.genus) - sum((1 - Fraction(1, q) for q in s.orders), Fraction(0))


def _positive_structure(s: OrbifoldSurface) -> str | None:
    """Structure tag of a positive-curvature good orbifold, ``None`` when bad."""
    if s.genus != 0:
        return None
    ms = s.multiset
    if not ms:
        return "smooth-sphere"
    if len(ms) == 2:
        return "cyclic" if ms[0] == ms[1] else None
    if len(ms) == 3:
        if ms[0] == 2 and ms[1] == 2:
            return "dihedral"
        return _POLYHEDRAL.get(ms)
    return None


def classify(s: OrbifoldSurface) -> GoodnessVerdict:
    """Goodness verdict.

    Non-positive Euler characteristic is always good. In the positive case the
    orbifold is a global quotient of the sphere by a finite rotation group, so
    it is good exactly for the smooth sphere, two equal cone points, or one of
    the triangle multisets (2,2,q), (2,3,3), (2,3,4), (2,3,5). Two cone points
    of distinct orders are therefore bad, like the teardrop.
    """
    chi = euler_orb(s)
    if chi <= 0:
        fields = _nontrivial_fields(s, chi)
        return GoodnessVerdict(True, chi, sign_name(chi), None, fields)
    tag = _positive_structure(s)
    if tag is None:
        return GoodnessVerdict(False, chi, POSITIVE, None, None)
    return GoodnessVerdict(True, chi, POSITIVE, tag, tag in ("cyclic", "smooth-sphere"))


def _nontrivial_fields(s, chi) -> bool:
    if chi < 0:
        return False
    if chi == 0:
        # a field must vanish at every cone point; the plain torus keeps its translations
        return not s.orders
    return _positive_structure(s) in ("cyclic", "smooth-sphere")


def has_nontrivial_holomorphic_fields(s: OrbifoldSurface) -> bool:
    verdict = classify(s)
    if not verdict.good:
        raise DomainError(f"orbifold {s} is not good")
    return verdict.has_nontrivial_vector_fields


def generator_names(genus: int, npoints: int) -> tuple[list[str], list[str], list[str]]:
    """Names of the a-, b- and loop generators.

    Subscripts are dropped when there is exactly one handle (``a, b``) or,
    on a surface of positive genus, exactly one cone point (``l``).
    """
    if genus == 1:
        a, b = ["a"], ["b"]
    else:
        a = [f"a{i}" for i in range(1, genus + 1)]
        b = [f"b{i}" for i in range(1, genus + 1)]
    if npoints == 1 and genus >= 1:
        loops = ["l"]
    else:
        loops = [f"l{j}" for j in range(1, npoints + 1)]
    return a, b, loops


def presentation(s: OrbifoldSurface) -> GroupPresentation:
    """Surface relator ``[a1,b1]...[ag,bg] l1...lk`` plus ``lj^qj`` for each cone point."""
    a, b, loops = generator_names(s.genus, len(s.orders))
    surface = []
    for ai, bi in zip(a, b):
        surface += [(ai, 1), (bi, 1), (ai, -1), (bi, -1)]
    surface += [(l, 1) for l in loops]
    # kept even when empty (the sphere): one surface relator per presentation
    relators = [tuple(surface)]
    relators += [((l, q),) for l, q in zip(loops, s.orders)]
    gens = []
    for ai, bi in zip(a, b):
        gens += [ai, bi]
    gens += loops
    return GroupPresentation(tuple(gens), tuple(relators))
