"""Representations of orbifold fundamental groups into SU(2)/Z2 = SO(3).

Unit quaternions are compared up to sign. Relator residuals are the distance
from the evaluated word to the nearer of +1 and -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CheckFailure, DomainError, UnknownGeneratorError
from .orbifold import GroupPresentation, OrbifoldSurface, presentation

NORM_TOL = 1e-12
RELATOR_TOL = 1e-9


class QuatModSign:
    """Unit quaternion ``w + x i + y j + z k`` identified with its negative."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x=0.0, y=0.0, z=0.0, check=True):
        self.w, self.x, self.y, self.z = float(w), float(x), float(y), float(z)
        if check and abs(self.norm() - 1.0) > NORM_TOL:
            raise DomainError(f"quaternion {self.as_tuple()} is not a unit")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def dist(self, other: QuatModSign) -> float:
        a, b = np.array(self.as_tuple()), np.array(other.as_tuple())
        return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))

    def __eq__(self, other):
        if not isinstance(other, QuatModSign):
            return NotImplemented
        return self.dist(other) <= 1e-9

    __hash__ = None

    def __mul__(self, other):
        return mul(self, other)

    def inverse(self) -> QuatModSign:
        return QuatModSign(self.w, -self.x, -self.y, -self.z, check=False)

    def __pow__(self, n: int) -> QuatModSign:
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = mul(out, base)
        return out

    def __repr__(self):
        return f"QuatModSign({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _renorm(w, x, y, z) -> QuatModSign:
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return QuatModSign(w / n, x / n, y / n, z / n, check=False)


def mul(a: QuatModSign, b: QuatModSign) -> QuatModSign:
    """Hamilton product, renormalized."""
    return _renorm(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


ONE = QuatModSign(1.0)
I = QuatModSign(0.0, 1.0)
J = QuatModSign(0.0, 0.0, 1.0)
K = QuatModSign(0.0, 0.0, 0.0, 1.0)


def exp_imag(axis, half_angle: float) -> QuatModSign:
    """``cos(h) + sin(h) (a1 i + a2 j + a3 k)``: rotation by ``2h`` about ``axis``."""
    a = np.asarray(axis, dtype=float)
    if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
        raise DomainError(f"axis must be a unit 3-vector, got {axis!r}")
    s = math.sin(half_angle)
    return QuatModSign(math.cos(half_angle), s * a[0], s * a[1], s * a[2], check=False)


@dataclass(frozen=True)
class RotationData:
    axis: tuple[float, float, float]
    angle: float

    def apply(self, v) -> np.ndarray:
        """Rodrigues rotation of ``v``."""
        k = np.asarray(self.axis)
        v = np.asarray(v, dtype=float)
        c, s = math.cos(self.angle), math.sin(self.angle)
        return v * c + np.cross(k, v) * s + k * np.dot(k, v) * (1 - c)


def rotation_of(q: QuatModSign) -> RotationData:
    """Axis-angle of the SO(3) image, with the sign of ``q`` chosen so the angle is in [0, pi].

    The sign freedom flips the axis too, so an angle of exactly pi leaves the
    axis defined only up to sign; the returned axis has its first nonzero
    component positive in that case.
    """
    w, v = q.w, np.array([q.x, q.y, q.z])
    if w < 0:
        w, v = -w, -v
    s = float(np.linalg.norm(v))
    if s < 1e-15:
        return RotationData((0.0, 0.0, 1.0), 0.0)
    angle = 2.0 * math.atan2(s, w)
    axis = v / s
    if abs(angle - math.pi) < 1e-12:
        for c in axis:
            if abs(c) > 1e-12:
                if c < 0:
                    axis = -axis
                break
    return RotationData(tuple(float(c) + 0.0 for c in axis), angle)


@dataclass
class Representation:
    presentation: GroupPresentation
    assignment: dict[str, QuatModSign]

    def __post_init__(self):
        missing = [g for g in self.presentation.generators if g not in self.assignment]
        if missing:
            raise UnknownGeneratorError(f"no image assigned to generators {missing}")


@dataclass(frozen=True)
class RelationReport:
    passed: bool
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def evaluate_word(word, assignment) -> QuatModSign:
    out = ONE
    for g, e in word:
        if g not in assignment:
            raise UnknownGeneratorError(f"relator uses unassigned generator {g!r}")
        out = mul(out, assignment[g] ** e)
    return out


def check_representation(r: Representation, tol: float = RELATOR_TOL) -> RelationReport:
    residuals = tuple(evaluate_word(w, r.assignment).dist(ONE) for w in r.presentation.relators)
    return RelationReport(all(x <= tol for x in residuals), residuals)


def is_irreducible(r: Representation) -> bool:
    """No point of CP1 fixed by the whole image, i.e. the non-identity images share no axis."""
    report = check_representation(r)
    if not report.passed:
        raise CheckFailure(f"relators fail with residuals {report.residuals}")
    axes = []
    for g in r.presentation.generators:
        rot = rotation_of(r.assignment[g])
        if rot.angle > 1e-9:
            axes.append(np.asarray(rot.axis))
    if not axes:
        return False
    ref = axes[0]
    return any(np.linalg.norm(np.cross(ref, a)) > 1e-9 for a in axes[1:])


def enumerate_image(r: Representation, cap: int = 1000) -> int:
    """Order of the image group in SO(3); raises ``DomainError`` past ``cap`` elements."""
    report = check_representation(r)
    if not report.passed:
        raise CheckFailure(f"relators fail with residuals {report.residuals}")
    gens = [r.assignment[g].as_tuple() for g in r.presentation.generators]
    elements = _kernels.quat_closure(gens, int(cap), 1e-9)
    if elements is None:
        raise DomainError(f"image has more than {cap} elements (infinite or too large)")
    return len(elements)


# presets ---------------------------------------------------------------------

PRESETS = (
    "four_punctured_sphere",
    "punctured_torus",
    "dihedral",
    "tetrahedral",
    "octahedral",
    "icosahedral",
)

_GOLDEN = (1 + math.sqrt(5)) / 2


def _triangle(q1, q2, q3, l1, l2) -> Representation:
    # third loop forced by l1 l2 l3 = 1
    pres = presentation(OrbifoldSurface(0, (q1, q2, q3)))
    l3 = mul(l1, l2).inverse()
    return Representation(pres, {"l1": l1, "l2": l2, "l3": l3})


def preset(kind: str, phi: float = 0.0, q: int | None = None) -> Representation:
    """Named representations.

    ``four_punctured_sphere`` takes the angle ``phi``; ``dihedral`` needs the
    order ``q >= 2`` of its third cone point. Polyhedral presets send ``l1`` to
    a half-turn, ``l2`` to the third-turn ``(1 + i + j + k)/2`` and force
    ``l3 = (l1 l2)^-1``.
    """
    if kind == "four_punctured_sphere":
        n = (math.cos(phi), math.sin(phi), 0.0)
        pres = presentation(OrbifoldSurface(0, (2, 2, 2, 3)))
        return Representation(
            pres,
            {
                "l1": I,
                "l2": J,
                "l3": mul(K, exp_imag(n, math.pi / 3)),
                "l4": exp_imag(n, -math.pi / 3),
            },
        )
    if kind == "punctured_torus":
        pres = presentation(OrbifoldSurface(1, (2,)))
        return Representation(pres, {"a": mul(exp_imag((0, 0, 1), math.pi / 4), I), "b": J, "l": K})
    if kind == "dihedral":
        if q is None or int(q) != q or q < 2:
            raise DomainError(f"dihedral preset needs an integer q >= 2, got {q!r}")
        q = int(q)
        l1 = I
        l3 = exp_imag((0, 0, 1), math.pi / q)
        # l2 = (l3 l1)^-1 so that l1 l2 l3 = 1
        l2 = mul(l3, l1).inverse()
        pres = presentation(OrbifoldSurface(0, (2, 2, q)))
        return Representation(pres, {"l1": l1, "l2": l2, "l3": l3})
    third = QuatModSign(0.5, 0.5, 0.5, 0.5)
    if kind == "tetrahedral":
        return _triangle(2, 3, 3, I, third)
    if kind == "octahedral":
        s = 1 / math.sqrt(2)
        return _triangle(2, 3, 4, QuatModSign(0.0, s, s, 0.0), third)
    if kind == "icosahedral":
        half_turn = _renorm(0.0, 0.5, 0.5 / _GOLDEN, 0.5 * _GOLDEN)
        return _triangle(2, 3, 5, half_turn, third)
    raise DomainError(f"unknown preset {kind!r}; expected one of {PRESETS}")
