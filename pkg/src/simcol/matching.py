"""Greedy mass matching for one disagreement color.

When two colorings differ at a single vertex v*, the component flips that
behave differently in the two chains come in two families per color c: on
the X side the big component through v* plus one branch per c-colored
neighbor, and symmetrically on the Y side.  A coupling must pair up this
probability mass so that each side's marginal stays intact.

The pairing implemented here, in order, with every amount capped by the
mass still unspent on both participants:

1. the big X component rides with the designated largest Y branch,
2. the big Y component rides with the designated largest X branch,
3. the two branches at each neighbor ride together,
4. leftover branch mass is cross-paired in increasing neighbor order,
5. anything left moves alone.

Masses are exact rationals in p-units (the per-component flip mass times
m*k).  Branches of distinct neighbors may be one and the same component
(the ids then repeat); the shared ledger makes the pairing well defined
in that case too.  `clamped` counts big components whose designated
partner could not absorb them fully, which cannot happen when the flip
probabilities are nonincreasing in the component size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class MatchedPair:
    """One coupled table row: component ids (None = that side idles)."""

    x: object | None
    y: object | None
    mass: Fraction


def _ordered_distinct(ids) -> list:
    out = []
    for i in ids:
        if i not in out:
            out.append(i)
    return out


def pick_anchor(sizes, weights) -> int:
    """Index of the branch that absorbs the opposing big component.

    Largest branch first; among equal sizes the one at the heavier
    neighbor.  The weight tie rule matters: anchoring the big component
    at the heavier of two equal-size branches is what keeps the leftover
    single flips light, and the certified per-branch maxima assume it.
    """
    return max(range(len(sizes)), key=lambda i: (sizes[i], weights[i], -i))


def match_color_moves(big_x, big_y, x_ids, y_ids, mass: dict, m_a: int, m_b: int):
    """Pair the differing component flips for one color.

    big_x/big_y: ids of the through-v* components; x_ids/y_ids: branch ids
    per neighbor index; mass: initial p-unit mass per id; m_a: neighbor
    index whose Y branch absorbs big_x; m_b: mirror for big_y.
    Returns (pairs, clamped).
    """
    if len(x_ids) != len(y_ids) or not x_ids:
        raise ValueError("need one branch id per neighbor on both sides")
    rem = {i: Fraction(mass[i]) for i in {big_x, big_y, *x_ids, *y_ids}}
    pairs: list[MatchedPair] = []

    def emit(x, y, amount: Fraction) -> None:
        if amount <= 0:
            return
        pairs.append(MatchedPair(x=x, y=y, mass=amount))
        if x is not None:
            rem[x] -= amount
        if y is not None:
            rem[y] -= amount

    clamped = 0
    take = min(rem[big_x], rem[y_ids[m_a]])
    if take < rem[big_x]:
        clamped += 1
    emit(big_x, y_ids[m_a], take)

    take = min(rem[x_ids[m_b]], rem[big_y])
    if take < rem[big_y]:
        clamped += 1
    emit(x_ids[m_b], big_y, take)

    for xi, yi in zip(x_ids, y_ids):
        emit(xi, yi, min(rem[xi], rem[yi]))

    xs = [i for i in _ordered_distinct(x_ids) if rem[i] > 0]
    ys = [i for i in _ordered_distinct(y_ids) if rem[i] > 0]
    a = b = 0
    while a < len(xs) and b < len(ys):
        emit(xs[a], ys[b], min(rem[xs[a]], rem[ys[b]]))
        if rem[xs[a]] == 0:
            a += 1
        if rem[ys[b]] == 0:
            b += 1

    for i in _ordered_distinct([big_x, *x_ids]):
        emit(i, None, rem[i])
    for i in _ordered_distinct([big_y, *y_ids]):
        emit(None, i, rem[i])

    assert all(v == 0 for v in rem.values())
    return pairs, clamped
