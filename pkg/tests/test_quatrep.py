import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from csckit import quatrep
from csckit.errors import CheckFailure, DomainError, UnknownGeneratorError
from csckit.orbifold import OrbifoldSurface, presentation
from csckit.quatrep import I, J, K, ONE, QuatModSign, Representation, exp_imag, mul, rotation_of

finite = st.floats(-1.0, 1.0, allow_nan=False)


def su2(q):
    """Oracle: the unit quaternion as a 2x2 complex SU(2) matrix."""
    w, x, y, z = q.as_tuple()
    return np.array([[w + 1j * x, y + 1j * z], [-y + 1j * z, w - 1j * x]])


def so3(q):
    """Oracle: rotation matrix of the quaternion."""
    w, x, y, z = q.as_tuple()
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def so3_closure(mats, cap=200):
    seen = {}
    frontier = [np.eye(3)]
    key = lambda m: tuple(np.round(m, 7).ravel() + 0.0)
    seen[key(frontier[0])] = frontier[0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in mats:
                b = a @ g
                if key(b) not in seen:
                    seen[key(b)] = b
                    nxt.append(b)
        frontier = nxt
        assert len(seen) <= cap
    return len(seen)


@st.composite
def unit_quats(draw):
    v = np.array([draw(finite) for _ in range(4)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([1.0, 0.0, 0.0, 0.0])
    v = v / np.linalg.norm(v)
    return QuatModSign(*v)


@st.composite
def unit_axes(draw):
    v = np.array([draw(finite) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    v = v / np.linalg.norm(v)
    return tuple(float(c) for c in v)


def test_basic_products():
    assert mul(I, J) == K
    assert mul(I, I) == ONE
    s = 1 / math.sqrt(2)
    assert mul(exp_imag((0, 0, 1), math.pi / 4), I) == QuatModSign(0, s, s, 0)


def test_exp_imag_examples():
    assert exp_imag((1, 0, 0), math.pi / 2) == I
    assert exp_imag((1, 0, 0), math.pi / 3) == QuatModSign(0.5, math.sqrt(3) / 2, 0, 0)
    assert exp_imag((0, 0, 1), math.pi) == ONE
    with pytest.raises(DomainError):
        exp_imag((1, 1, 0), 0.3)


@given(unit_quats(), unit_quats())
def test_mul_matches_su2_oracle(a, b):
    prod = su2(mul(a, b))
    ref = su2(a) @ su2(b)
    assert min(np.abs(prod - ref).max(), np.abs(prod + ref).max()) < 1e-12


@given(unit_quats(), unit_quats(), unit_quats())
def test_associative(a, b, c):
    assert mul(mul(a, b), c).dist(mul(a, mul(b, c))) <= 1e-12


@given(unit_quats())
def test_inverse(a):
    assert mul(a, a.inverse()).dist(ONE) <= 1e-12


@given(unit_axes(), st.floats(-6, 6), st.floats(-6, 6))
def test_same_axis_homomorphism(axis, h1, h2):
    assert mul(exp_imag(axis, h1), exp_imag(axis, h2)).dist(exp_imag(axis, h1 + h2)) <= 1e-12


@given(unit_quats(), unit_axes())
def test_rotation_matches_conjugation(q, v):
    rot = rotation_of(q)
    assert 0.0 <= rot.angle <= math.pi
    conj = mul(mul(q, QuatModSign(0.0, *v, check=False)), q.inverse()).as_tuple()
    assert np.allclose(rot.apply(v), conj[1:], atol=1e-9)
    assert np.allclose(rot.apply(v), so3(q) @ np.array(v), atol=1e-9)


def test_rotation_examples():
    r = rotation_of(I)
    assert r.axis == (1.0, 0.0, 0.0) and r.angle == pytest.approx(math.pi)
    r = rotation_of(exp_imag((1, 0, 0), -math.pi / 3))
    # a 2pi/3 turn; the sign of the axis is fixed by the angle lying in [0, pi]
    assert r.angle == pytest.approx(2 * math.pi / 3)
    assert np.allclose(r.axis, (-1.0, 0.0, 0.0))
    r = rotation_of(ONE)
    assert r.axis == (0.0, 0.0, 1.0) and r.angle == 0.0


def test_four_punctured_sphere_family():
    for n in range(64):
        r = quatrep.preset("four_punctured_sphere", phi=2 * math.pi * n / 64)
        rep = quatrep.check_representation(r)
        assert rep.passed and rep.max_residual <= 1e-9
        assert quatrep.is_irreducible(r)
        angles = [rotation_of(r.assignment[g]).angle for g in ("l1", "l2", "l3", "l4")]
        assert angles[:3] == pytest.approx([math.pi] * 3)
        assert angles[3] == pytest.approx(2 * math.pi / 3)


def test_four_punctured_sphere_assignment_at_zero():
    r = quatrep.preset("four_punctured_sphere", phi=0.0)
    assert r.assignment["l1"] == I and r.assignment["l2"] == J
    assert r.assignment["l4"] == QuatModSign(0.5, -math.sqrt(3) / 2, 0, 0)


def test_broken_assignment_fails_product_relator():
    r = quatrep.preset("four_punctured_sphere", phi=0.0)
    broken = Representation(r.presentation, {**r.assignment, "l4": ONE})
    rep = quatrep.check_representation(broken)
    assert not rep.passed
    # oracle: ijk * exp(pi i/3) = -exp(pi i/3), whose distance to +-1 is |1 - e^{i pi/3}|
    assert rep.residuals[0] == pytest.approx(abs(1 - complex(math.cos(math.pi / 3), math.sin(math.pi / 3))))
    assert rep.residuals[1:] == pytest.approx([0.0] * 4, abs=1e-12)
    with pytest.raises(CheckFailure):
        quatrep.is_irreducible(broken)


def test_torus():
    r = quatrep.preset("punctured_torus")
    assert quatrep.check_representation(r).passed
    assert quatrep.is_irreducible(r)


def test_common_axis_is_reducible():
    g = exp_imag((0, 0, 1), math.pi / 5)
    pres = presentation(OrbifoldSurface(0, (5, 5)))
    r = Representation(pres, {"l1": g, "l2": g.inverse()})
    assert quatrep.check_representation(r).passed
    assert not quatrep.is_irreducible(r)


@pytest.mark.parametrize(
    "kind, q, order",
    [("dihedral", 2, 4), ("dihedral", 3, 6), ("dihedral", 4, 8), ("dihedral", 7, 14),
     ("tetrahedral", None, 12), ("octahedral", None, 24), ("icosahedral", None, 60)],
)
def test_polyhedral_orders(kind, q, order):
    r = quatrep.preset(kind, q=q)
    assert quatrep.check_representation(r).passed
    assert quatrep.enumerate_image(r) == order
    assert so3_closure([so3(r.assignment[g]) for g in r.presentation.generators]) == order


def test_dihedral_three_relators():
    r = quatrep.preset("dihedral", q=3)
    assert r.presentation.relator_strings() == ["l1*l2*l3", "l1^2", "l2^2", "l3^3"]
    l2 = r.assignment["l2"]
    # oracle: l2 = i^-1 exp(-pi k/3)
    assert l2 == mul(I.inverse(), exp_imag((0, 0, 1), -math.pi / 3))


def test_enumerate_cap():
    g = exp_imag((0, 0, 1), 1.0)  # irrational turn, infinite image
    r = Representation(presentation(OrbifoldSurface(1)), {"a": g, "b": ONE})
    with pytest.raises(DomainError):
        quatrep.enumerate_image(r, cap=50)


def test_missing_generator():
    with pytest.raises(UnknownGeneratorError):
        Representation(presentation(OrbifoldSurface(0, (2, 2))), {"l1": I})
    with pytest.raises(DomainError):
        quatrep.preset("nope")
    with pytest.raises(DomainError):
        QuatModSign(1.0, 1.0, 0.0, 0.0)
