"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same signature and semantics in
``_ckernels.pyx``. The two are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import product

import numpy as np

# spatial-hash resolution for quaternion deduplication
_SCALE = 1e6
_EDGE = 0.49


def hj_chain_counts(max_den):
    """Count every chain with coefficients >= 2 and value denominator <= ``max_den``.

    Returns ``{(p, q): number_of_chains}``. Chains are grown by prepending a
    coefficient, which strictly increases the denominator, so the search is
    exhaustive and finite.
    """
    counts = {}
    stack = [(1, e) for e in range(2, max_den + 1)]
    while stack:
        a, b = stack.pop()
        counts[(a, b)] = counts.get((a, b), 0) + 1
        e = 2
        while e * b - a <= max_den:
            stack.append((b, e * b - a))
            e += 1
    return counts


def hj_chain_counts_box(max_len, max_coeff):
    """Count the values of all chains of length <= ``max_len`` with coefficients in [2, max_coeff]."""
    counts = {}
    stack = [(1, e, 1) for e in range(2, max_coeff + 1)]
    while stack:
        a, b, depth = stack.pop()
        counts[(a, b)] = counts.get((a, b), 0) + 1
        if depth == max_len:
            continue
        for e in range(2, max_coeff + 1):
            stack.append((b, e * b - a, depth + 1))
    return counts


def _qmul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def _canonical(q):
    n = math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    q = (q[0] / n, q[1] / n, q[2] / n, q[3] / n)
    for c in q:
        if abs(c) > 1e-6:
            return q if c > 0 else (-q[0], -q[1], -q[2], -q[3])
    return q


def _cells(q):
    axes = []
    for c in q:
        x = c * _SCALE
        r = round(x)
        d = x - r
        if d > _EDGE:
            axes.append((r, r + 1))
        elif d < -_EDGE:
            axes.append((r, r - 1))
        else:
            axes.append((r,))
    return product(*axes)


def _find(table, q, tol):
    for s in (1.0, -1.0):
        sq = (s * q[0], s * q[1], s * q[2], s * q[3])
        for key in _cells(sq):
            for other in table.get(key, ()):
                if max(abs(u - v) for u, v in zip(sq, other)) <= tol:
                    return True
    return False


def quat_closure(gens, cap, tol=1e-9):
    """Closure of unit quaternions ``gens`` under multiplication, modulo sign.

    Returns the list of sign-canonical elements in BFS order, or ``None`` when
    more than ``cap`` elements are produced.
    """
    gens = [tuple(float(c) for c in g) for g in gens]
    one = (1.0, 0.0, 0.0, 0.0)
    table = {}
    elements = [one]
    table.setdefault(next(iter(_cells(one))), []).append(one)
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _canonical(_qmul(x, g))
            if _find(table, y, tol):
                continue
            if len(elements) >= cap:
                return None
            elements.append(y)
            r = tuple(round(c * _SCALE) for c in y)
            table.setdefault(r, []).append(y)
            queue.append(y)
    return elements


def laurent_eval(coefs, exps, k, taus):
    """Evaluate ``sum_i coefs[i] * (1 + k*tau)**exps[i]`` on an array of ``taus``."""
    taus = np.asarray(taus, dtype=float)
    u = 1.0 + k * taus
    out = np.zeros_like(u)
    for c, e in zip(coefs, exps):
        out += float(c) * u ** int(e)
    return out
