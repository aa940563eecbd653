"""Exact rationals and Hirzebruch-Jung continued fractions.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator, arbitrary precision). A chain ``[e1, ..., el]`` with every
``ei >= 2`` stands for ``1/(e1 - 1/(e2 - ... - 1/el))``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

from . import _kernels
from .errors import DomainError

Rational = Fraction
HJChain = list  # list[int]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions, ``(p, q)`` pairs and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError(f"not a rational: {x!r}")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise DomainError(f"not a rational: {x!r}") from exc
    if isinstance(x, (tuple, list)) and len(x) == 2:
        p, q = x
        if q == 0:
            raise DomainError("zero denominator")
        return Fraction(int(p), int(q))
    raise DomainError(f"not a rational: {x!r}")


def _check_unit_interval(x: Fraction) -> None:
    if not 0 < x < 1:
        raise DomainError(f"expected 0 < x < 1, got {x}")


def hj_expand(x) -> list[int]:
    """Hirzebruch-Jung expansion of ``0 < x < 1``.

    Uses ``e = ceil(q/p)`` and continues with ``(e*p - q)/p`` until the
    remainder vanishes; numerators strictly decrease so this terminates.

    >>> hj_expand(Fraction(3, 5))
    [2, 3]
    """
    x = as_rational(x)
    _check_unit_interval(x)
    p, q = x.numerator, x.denominator
    chain = []
    while p:
        e = -(-q // p)
        chain.append(e)
        p, q = e * p - q, p
    return chain


def hj_evaluate(chain) -> Fraction:
    """Exact value of a chain, folded right to left."""
    chain = list(chain)
    if not chain:
        return Fraction(0)
    if any(int(e) != e or e < 2 for e in chain):
        raise DomainError(f"chain coefficients must be integers >= 2: {chain}")
    value = Fraction(0)
    for e in reversed(chain):
        value = 1 / (e - value)
    return value


def hj_complement(x) -> tuple[list[int], list[int]]:
    """Expansions of ``p/q`` and of ``(q - p)/q``."""
    x = as_rational(x)
    _check_unit_interval(x)
    return hj_expand(x), hj_expand(1 - x)


def hj_chain_census(max_den: int) -> dict[tuple[int, int], int]:
    """How many chains evaluate to each ``p/q`` with ``q <= max_den``.

    Exhaustive: every chain whose value has denominator at most ``max_den``
    is visited (prepending a coefficient strictly raises the denominator).
    Independent of :func:`hj_expand`; used to certify uniqueness.
    """
    if max_den < 2:
        raise DomainError("max_den must be >= 2")
    return _kernels.hj_chain_counts(int(max_den))


def hj_chain_census_box(max_len: int, max_coeff: int) -> dict[tuple[int, int], int]:
    """Values of every chain of length <= ``max_len`` with coefficients in ``[2, max_coeff]``."""
    if max_len < 1 or max_coeff < 2:
        raise DomainError("need max_len >= 1 and max_coeff >= 2")
    return _kernels.hj_chain_counts_box(int(max_len), int(max_coeff))
