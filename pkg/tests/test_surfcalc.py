import random
from fractions import Fraction
from math import gcd

import pytest
import sympy

from csckit import numkit, surfcalc
from csckit.errors import DomainError, SNCViolation
from csckit.surfcalc import CurveConfig, blow_down, blow_up_at_intersection, blow_up_on_curve


def weights(max_den):
    for q in range(2, max_den + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield Fraction(p, q)


def intersection_matrix(c):
    ids = sorted(c.curves)
    pos = {cid: i for i, cid in enumerate(ids)}
    m = sympy.zeros(len(ids))
    for cid in ids:
        m[pos[cid], pos[cid]] = c.self_int(cid)
    for pair in c.incidences:
        a, b = tuple(pair)
        m[pos[a], pos[b]] = m[pos[b], pos[a]] = 1
    return m


def chain_det(self_ints):
    # continuant recurrence for a tridiagonal matrix with unit off-diagonal
    prev, cur = 1, 1
    for i, a in enumerate(self_ints):
        prev, cur = cur, a * cur - (prev if i else 0)
    return cur


def random_config(rng):
    n = rng.randint(1, 8)
    curves = {i: rng.randint(-4, 2) for i in range(n)}
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
    return CurveConfig(curves, pairs)


def test_documented_blowups():
    c = blow_up_on_curve(CurveConfig.chain([0]), 0)
    assert c.as_chain() == [-1, -1]
    c = blow_up_at_intersection(c, (0, 1))
    assert c.as_chain() == [-2, -1, -2]
    assert blow_up_at_intersection(CurveConfig.chain([-2, -1]), (0, 1)).as_chain() == [-3, -1, -2]
    assert blow_up_on_curve(CurveConfig.chain([-1]), 0).as_chain() == [-2, -1]
    c = blow_up_on_curve(CurveConfig.chain([-2, -1]), 0)
    assert sorted(cv.self_int for cv in c.curves.values()) == [-3, -1, -1]


def test_documented_blowdowns():
    assert blow_down(CurveConfig.chain([-2, -1, -2]), 1).as_chain() == [-1, -1]
    assert blow_down(CurveConfig.chain([-1, -1]), 0).as_chain() == [0]
    triangle = CurveConfig({0: -1, 1: -2, 2: -2}, [(0, 1), (0, 2), (1, 2)])
    with pytest.raises(SNCViolation):
        blow_down(triangle, 0)
    with pytest.raises(DomainError):
        blow_down(CurveConfig.chain([-2]), 0)
    with pytest.raises(DomainError):
        blow_up_at_intersection(CurveConfig.chain([-1, -1, -1]), (0, 2))


def test_inverse_property_randomized():
    rng = random.Random(2024)
    done = 0
    while done < 1000:
        c = random_config(rng)
        if c.incidences and rng.random() < 0.5:
            pair = sorted(rng.choice(sorted(sorted(p) for p in c.incidences)))
            up = blow_up_at_intersection(c, pair)
            drop = 3
        else:
            up = blow_up_on_curve(c, rng.choice(sorted(c.curves)))
            drop = 2
        new = max(up.curves)
        assert c.self_int_sum() - up.self_int_sum() == drop
        assert surfcalc.b2(up) == surfcalc.b2(c) + 1
        down = blow_down(up, new)
        assert down == c
        assert surfcalc.b2(down) == surfcalc.b2(c)
        done += 1


@pytest.mark.parametrize(
    "w, chain",
    [(Fraction(1, 2), [-2, -1, -2]), (Fraction(1, 3), [-3, -1, -2, -2]), (Fraction(3, 5), [-2, -3, -1, -2, -3])],
)
def test_fiber_chain_examples(w, chain):
    c = surfcalc.fiber_chain(w)
    assert c.as_chain() == chain
    assert surfcalc.b2(c) == len(chain)


def test_fiber_chains_up_to_50():
    for w in weights(50):
        c = surfcalc.fiber_chain(w)
        chain = c.as_chain()
        l, m = map(len, numkit.hj_complement(w))
        assert chain.count(-1) == 1 and all(s <= -2 for s in chain if s != -1)
        assert len(chain) == l + m + 1
        # the total transform of the fibre is a null vector of the intersection form
        assert chain_det(chain) == 0
        model, seq = surfcalc.minimal_model(c)
        assert model.as_chain() == [0]
        assert len(seq) == l + m


def test_chain_det_agrees_with_matrix():
    for w in list(weights(8)):
        c = surfcalc.fiber_chain(w)
        assert intersection_matrix(c).det() == chain_det(c.as_chain()) == 0
    assert chain_det([-2, -2]) == intersection_matrix(CurveConfig.chain([-2, -2])).det() == 3


def test_realization_unique_up_to_12():
    for w in weights(12):
        real = surfcalc.realize_iterated_blowup(w)
        assert real.unique and real.count == 1
        cfg = CurveConfig.chain([0])
        for step in real.steps:
            if step.kind == "on_curve":
                cfg = blow_up_on_curve(cfg, step.targets[0], step.new_curve_id)
            else:
                cfg = blow_up_at_intersection(cfg, step.targets, step.new_curve_id)
        assert cfg.as_chain() == surfcalc.fiber_chain(w).as_chain()
        assert len(real.steps) == surfcalc.b2(cfg) - 1


def test_realization_step_counts():
    assert [s.kind for s in surfcalc.realize_iterated_blowup(Fraction(1, 2)).steps] == ["on_curve", "at_intersection"]
    assert len(surfcalc.realize_iterated_blowup(Fraction(1, 3)).steps) == 3


def test_realization_q50_runs():
    assert surfcalc.realize_iterated_blowup(Fraction(1, 50)).unique
    assert surfcalc.realize_iterated_blowup(Fraction(17, 50)).unique


def test_minimal_model_trivial():
    c = CurveConfig.chain([-2, -3])
    model, seq = surfcalc.minimal_model(c)
    assert model == c and seq == []


def test_labels_not_semantic():
    a = CurveConfig({0: surfcalc.Curve(-1, "x")})
    b = CurveConfig({0: surfcalc.Curve(-1, "y")})
    assert a == b
