"""Intersection calculus on simple-normal-crossing configurations of rational curves.

Configurations are immutable; every operation returns a new one. Incidence
multiplicities are at most one, and operations that would break that raise
rather than model tangencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError, SNCViolation
from .numkit import as_rational, hj_complement


@dataclass(frozen=True)
class Curve:
    self_int: int
    label: str = field(default="", compare=False)


def _pair(a, b) -> frozenset:
    if a == b:
        raise SNCViolation(f"self-incidence of curve {a}")
    return frozenset((a, b))


class CurveConfig:
    """Weighted incidence graph: curve id -> self-intersection, plus unordered incident pairs."""

    __slots__ = ("curves", "incidences")

    def __init__(self, curves, incidences=()):
        self.curves = {int(i): (c if isinstance(c, Curve) else Curve(int(c))) for i, c in dict(curves).items()}
        pairs = set()
        for p in incidences:
            a, b = tuple(p)
            if a not in self.curves or b not in self.curves:
                raise DomainError(f"incidence {sorted(p)} names an unknown curve")
            pairs.add(_pair(a, b))
        self.incidences = frozenset(pairs)

    @classmethod
    def chain(cls, self_ints, labels=None):
        """Linear chain with ids ``0..n-1`` from left to right."""
        labels = labels or [""] * len(self_ints)
        curves = {i: Curve(int(s), lab) for i, (s, lab) in enumerate(zip(self_ints, labels))}
        return cls(curves, [(i, i + 1) for i in range(len(self_ints) - 1)])

    def __eq__(self, other):
        if not isinstance(other, CurveConfig):
            return NotImplemented
        return self.curves == other.curves and self.incidences == other.incidences

    __hash__ = None

    def __repr__(self):
        cs = {i: c.self_int for i, c in sorted(self.curves.items())}
        return f"CurveConfig({cs}, {sorted(sorted(p) for p in self.incidences)})"

    def neighbors(self, cid) -> list[int]:
        return sorted(next(iter(p - {cid})) for p in self.incidences if cid in p)

    def self_int(self, cid) -> int:
        return self.curves[cid].self_int

    def self_int_sum(self) -> int:
        return sum(c.self_int for c in self.curves.values())

    def next_id(self) -> int:
        return max(self.curves, default=-1) + 1

    def as_chain(self) -> list[int] | None:
        """Self-intersections read along the chain from its lower-id end, or ``None`` if not a path."""
        n = len(self.curves)
        if n == 0:
            return []
        if len(self.incidences) != n - 1:
            return None
        degree = {i: len(self.neighbors(i)) for i in self.curves}
        if any(d > 2 for d in degree.values()):
            return None
        ends = sorted(i for i, d in degree.items() if d <= 1)
        order, prev, cur = [], None, ends[0]
        while cur is not None:
            order.append(cur)
            nxt = [j for j in self.neighbors(cur) if j != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        if len(order) != n:
            return None
        return [self.self_int(i) for i in order]

    def _replace(self, curves, incidences) -> CurveConfig:
        out = CurveConfig.__new__(CurveConfig)
        out.curves = curves
        out.incidences = frozenset(incidences)
        return out


class BlowupStep(NamedTuple):
    kind: str  # "on_curve" or "at_intersection"
    targets: tuple[int, ...]
    new_curve_id: int


def blow_up_on_curve(c: CurveConfig, cid, new_id=None, label="E") -> CurveConfig:
    """Blow up a general point of curve ``cid``: new (-1)-curve meeting it once."""
    if cid not in c.curves:
        raise DomainError(f"no curve with id {cid}")
    new_id = c.next_id() if new_id is None else new_id
    if new_id in c.curves:
        raise DomainError(f"curve id {new_id} already in use")
    curves = dict(c.curves)
    curves[cid] = Curve(curves[cid].self_int - 1, curves[cid].label)
    curves[new_id] = Curve(-1, label)
    return c._replace(curves, c.incidences | {_pair(cid, new_id)})


def blow_up_at_intersection(c: CurveConfig, pair, new_id=None, label="E") -> CurveConfig:
    """Blow up the meeting point of two incident curves."""
    a, b = tuple(pair)
    p = _pair(a, b)
    if p not in c.incidences:
        raise DomainError(f"curves {a} and {b} do not meet")
    new_id = c.next_id() if new_id is None else new_id
    if new_id in c.curves:
        raise DomainError(f"curve id {new_id} already in use")
    curves = dict(c.curves)
    for x in (a, b):
        curves[x] = Curve(curves[x].self_int - 1, curves[x].label)
    curves[new_id] = Curve(-1, label)
    inc = (c.incidences - {p}) | {_pair(a, new_id), _pair(b, new_id)}
    return c._replace(curves, inc)


def contractible(c: CurveConfig, cid) -> bool:
    """Whether :func:`blow_down` would succeed on ``cid``."""
    if c.curves[cid].self_int != -1:
        return False
    nbrs = c.neighbors(cid)
    return all(_pair(x, y) not in c.incidences for i, x in enumerate(nbrs) for y in nbrs[i + 1 :])


def blow_down(c: CurveConfig, cid) -> CurveConfig:
    """Contract a (-1)-curve; its former neighbours gain +1 and become pairwise incident."""
    if cid not in c.curves:
        raise DomainError(f"no curve with id {cid}")
    if c.curves[cid].self_int != -1:
        raise DomainError(f"curve {cid} has self-intersection {c.curves[cid].self_int}, not -1")
    nbrs = c.neighbors(cid)
    inc = {p for p in c.incidences if cid not in p}
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1 :]:
            p = _pair(x, y)
            if p in inc:
                raise SNCViolation(f"contracting {cid} would make curves {x} and {y} meet twice")
            inc.add(p)
    curves = {i: cv for i, cv in c.curves.items() if i != cid}
    for x in nbrs:
        curves[x] = Curve(curves[x].self_int + 1, curves[x].label)
    return c._replace(curves, inc)


def b2(c: CurveConfig) -> int:
    return len(c.curves)


def fiber_chain(weight) -> CurveConfig:
    """Chain ``[-e1..-el, -1, -e'm..-e'1]`` over a parabolic point of the given weight.

    Curve 0 (the ``-e1`` end) is the proper transform of the original fibre.
    """
    chain, comp = hj_complement(as_rational(weight))
    self_ints = [-e for e in chain] + [-1] + [-e for e in reversed(comp)]
    labels = ["F"] + [""] * (len(self_ints) - 1)
    return CurveConfig.chain(self_ints, labels)


class Realization(NamedTuple):
    steps: list[BlowupStep]
    unique: bool
    count: int


def realize_iterated_blowup(weight) -> Realization:
    """Blow-up sequence from a single 0-curve (the fibre, id 0) to :func:`fiber_chain`.

    After the two forced first steps the only freedom is which of the two
    points on the current (-1)-curve to blow up next. All branches are
    explored; curves away from the (-1)-curve are frozen, which prunes any
    branch whose frozen part disagrees with the target. ``count`` is the
    number of sequences reaching the target and ``unique`` is ``count == 1``.
    """
    target = fiber_chain(weight).as_chain()
    n_target = len(target)

    start = CurveConfig({0: Curve(0, "F")})
    c1 = blow_up_on_curve(start, 0, 1)
    c2 = blow_up_at_intersection(c1, (0, 1), 2)
    prefix = [BlowupStep("on_curve", (0,), 1), BlowupStep("at_intersection", (0, 1), 2)]

    # linear chain as list of (id, self_int); the (-1)-curve sits at index `pos`
    def consistent(chain, pos):
        for i, (_, s) in enumerate(chain):
            if i < pos - 1 or i > pos + 1:
                r = i if i < pos else n_target - (len(chain) - i)
                if target[r] != s:
                    return False
            elif i != pos:
                r = i if i < pos else n_target - (len(chain) - i)
                if s < target[r]:
                    return False
        return True

    solutions = []

    def search(chain, pos, steps, next_id):
        if len(chain) == n_target:
            if [s for _, s in chain] == target:
                solutions.append(list(steps))
            return
        if not consistent(chain, pos):
            return
        for side in (-1, 1):
            j = pos + side
            if j < 0 or j >= len(chain):
                continue
            new = list(chain)
            nid, ns = new[j]
            new[j] = (nid, ns - 1)
            mid, ms = new[pos]
            new[pos] = (mid, ms - 1)
            insert_at = max(pos, j)
            new.insert(insert_at, (next_id, -1))
            step = BlowupStep("at_intersection", tuple(sorted((mid, nid))), next_id)
            search(new, insert_at, steps + [step], next_id + 1)

    if n_target == 3:
        solutions.append([])
    else:
        search([(0, -2), (2, -1), (1, -2)], 1, [], 3)

    if not solutions:
        raise DomainError(f"no blow-up sequence realizes weight {weight}")
    steps = prefix + solutions[0]
    # replay to make sure the recorded steps build the target configuration
    cfg = c2
    for st in solutions[0]:
        cfg = blow_up_at_intersection(cfg, st.targets, st.new_curve_id)
    if cfg.as_chain() != target:
        raise AssertionError("replayed blow-up sequence does not reproduce the fibre chain")
    return Realization(steps, len(solutions) == 1, len(solutions))


def minimal_model(c: CurveConfig) -> tuple[CurveConfig, list[int]]:
    """Contract admissible (-1)-curves, least id first, until none is left."""
    sequence = []
    while True:
        for cid in sorted(c.curves):
            if contractible(c, cid):
                c = blow_down(c, cid)
                sequence.append(cid)
                break
        else:
            return c, sequence
