"""Colorings of the union line graph and the chains that move them.

Three chains, all driven by uniform proposals:

* Glauber: propose (vertex, color), recolor iff no neighbor holds the color.
* Flip: extend the proposal to the whole two-colored component through the
  vertex and swap its two colors with probability p_s / s, where s is the
  component size.  Components larger than the locality never move.
* List flip: same, but the color is drawn by index from the vertex's own
  list and the swap is allowed only when every component member has both
  swap colors in its list.

Colors are 1-based.  The RNG contract, which the trajectory-equivalence
tests rely on, is exactly: one `randrange(m)` for the vertex, one
`randrange(k)` for the color (or list index), then one `random()` for
acceptance drawn only when the acceptance probability lies strictly
between 0 and 1.  A flip chain with probabilities (1, 0, ...) therefore
consumes the same draw sequence as Glauber and realizes the same walk.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import UnionLineGraph

DEFAULT_FLIP_NUMERATORS = (650, 137, 77, 47, 27, 12)
FLIP_DENOMINATOR = 650


@dataclass(frozen=True)
class FlipParams:
    """Component-size flip probabilities p_1..p_locality (exact rationals)."""

    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probs)
        while probs and probs[-1] == 0:
            probs = probs[:-1]
        if not probs or probs[0] != 1:
            raise ValueError("p_1 must equal 1")
        for i, p in enumerate(probs, start=1):
            if not (0 <= p <= 1):
                raise ValueError(f"p_{i} = {p} outside [0, 1]")
        object.__setattr__(self, "probs", probs)

    @property
    def locality(self) -> int:
        return len(self.probs)

    def p(self, size: int) -> Fraction:
        if 1 <= size <= len(self.probs):
            return self.probs[size - 1]
        return Fraction(0)

    def diff(self, size: int) -> Fraction:
        """p_size - p_{size+1}."""
        return self.p(size) - self.p(size + 1)

    @classmethod
    def default(cls) -> "FlipParams":
        return cls(tuple(Fraction(n, FLIP_DENOMINATOR) for n in DEFAULT_FLIP_NUMERATORS))

    @classmethod
    def glauber(cls) -> "FlipParams":
        return cls((Fraction(1),))

    @classmethod
    def from_text(cls, text: str) -> "FlipParams":
        """Parse one probability per line, each written as "num/den" or "num"."""
        probs = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            probs.append(Fraction(line))
        return cls(tuple(probs))


@dataclass
class Coloring:
    """Assignment of 1-based colors to union-line-graph vertices.

    Properness is not required; the chains are defined on the full product
    space and merely preserve properness once reached.
    """

    assign: list[int]
    k: int

    def __post_init__(self):
        for v, c in enumerate(self.assign):
            if not (1 <= c <= self.k):
                raise ValueError(f"vertex {v} holds color {c} outside 1..{self.k}")

    def copy(self) -> "Coloring":
        return Coloring(assign=list(self.assign), k=self.k)


@dataclass(frozen=True)
class Cluster:
    """Two-colored component reachable from seed by strict alternation."""

    seed: int
    seed_color: int
    other_color: int
    members: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex allowed colors, each list sorted ascending."""

    lists: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self):
        for v, lst in enumerate(self.lists):
            if not lst:
                raise ValueError(f"vertex {v} has an empty list")
            if len(lst) > self.k:
                raise ValueError(f"vertex {v} list longer than k={self.k}")
            if list(lst) != sorted(set(lst)) or lst[0] < 1:
                raise ValueError(f"vertex {v} list must be sorted distinct positives")

    @classmethod
    def full(cls, m: int, k: int) -> "ListAssignment":
        return cls(lists=tuple(tuple(range(1, k + 1)) for _ in range(m)), k=k)


def _grow_cluster(assign, nbrs, seed: int, c: int, cap) -> list[int] | None:
    """BFS closure under strict alternation between assign[seed] and c.

    Returns None as soon as the component exceeds cap members (the flip
    probability is 0 there, so callers never need the full set).
    """
    a = assign[seed]
    if a == c:
        return [seed]
    members = [seed]
    seen = {seed}
    i = 0
    while i < len(members):
        u = members[i]
        want = c if assign[u] == a else a
        for w in nbrs[u]:
            if assign[w] == want and w not in seen:
                seen.add(w)
                members.append(w)
                if cap is not None and len(members) > cap:
                    return None
        i += 1
    return members


def compute_cluster(G: UnionLineGraph, sigma: Coloring, v: int, c: int) -> Cluster:
    members = _grow_cluster(sigma.assign, G.nbrs, v, c, None)
    return Cluster(seed=v, seed_color=sigma.assign[v], other_color=c,
                   members=frozenset(members))


def swap_colors(assign: list[int], members, a: int, b: int) -> None:
    for u in members:
        if assign[u] == a:
            assign[u] = b
        elif assign[u] == b:
            assign[u] = a


def glauber_step(G: UnionLineGraph, sigma: Coloring, rng: random.Random) -> bool:
    """One proposal; returns whether the recoloring was applied."""
    v = rng.randrange(G.m)
    c = rng.randrange(sigma.k) + 1
    assign = sigma.assign
    for w in G.nbrs[v]:
        if assign[w] == c:
            return False
    assign[v] = c
    return True


def _accept(rng: random.Random, p: Fraction) -> bool:
    # acceptance uniform is drawn only for 0 < p < 1, per the RNG contract
    if p <= 0:
        return False
    if p >= 1:
        return True
    return rng.random() < p


def flip_step(G: UnionLineGraph, sigma: Coloring, fp: FlipParams,
              rng: random.Random) -> int:
    """One proposal; returns the flipped component size, 0 on a null move."""
    v = rng.randrange(G.m)
    c = rng.randrange(sigma.k) + 1
    members = _grow_cluster(sigma.assign, G.nbrs, v, c, fp.locality)
    if members is None:
        return 0
    s = len(members)
    if not _accept(rng, fp.p(s) / s):
        return 0
    swap_colors(sigma.assign, members, sigma.assign[v], c)
    return s


def list_flip_step(G: UnionLineGraph, sigma: Coloring, L: ListAssignment,
                   fp: FlipParams, rng: random.Random) -> int:
    """One proposal; index draws beyond the list length are null moves."""
    v = rng.randrange(G.m)
    i = rng.randrange(L.k) + 1
    lst = L.lists[v]
    if i > len(lst):
        return 0
    c = lst[i - 1]
    members = _grow_cluster(sigma.assign, G.nbrs, v, c, fp.locality)
    if members is None:
        return 0
    a = sigma.assign[v]
    for w in members:
        wl = L.lists[w]
        if a not in wl or c not in wl:
            return 0
    s = len(members)
    if not _accept(rng, fp.p(s) / s):
        return 0
    swap_colors(sigma.assign, members, a, c)
    return s


def is_proper(G: UnionLineGraph, sigma: Coloring) -> bool:
    assign = sigma.assign
    for v in range(G.m):
        cv = assign[v]
        for w in G.nbrs[v]:
            if w > v and assign[w] == cv:
                return False
    return True


def respects_lists(sigma: Coloring, L: ListAssignment) -> bool:
    return all(sigma.assign[v] in L.lists[v] for v in range(len(sigma.assign)))


def neighbor_color_counts(G: UnionLineGraph, sigma: Coloring, v: int) -> dict[int, int]:
    """How many neighbors of v hold each color (support only)."""
    counts: dict[int, int] = {}
    for w in G.nbrs[v]:
        c = sigma.assign[w]
        counts[c] = counts.get(c, 0) + 1
    return counts


def greedy_coloring(G: UnionLineGraph, k: int) -> Coloring:
    """First-available color in vertex-id order; proper whenever it returns."""
    assign = [0] * G.m
    for v in range(G.m):
        used = {assign[w] for w in G.nbrs[v] if w < v}
        for c in range(1, k + 1):
            if c not in used:
                assign[v] = c
                break
        else:
            raise ValueError(f"greedy coloring stuck at vertex {v} with k={k}")
    return Coloring(assign=assign, k=k)


@dataclass
class ChainStats:
    steps: int
    accepted: int
    flips_by_size: dict[int, int]


def run_chain(G: UnionLineGraph, sigma: Coloring, steps: int, rng: random.Random,
              kind: str = "glauber", fp: FlipParams | None = None,
              L: ListAssignment | None = None) -> ChainStats:
    """Advance sigma in place for `steps` proposals, tallying acceptances."""
    by_size: dict[int, int] = {}
    accepted = 0
    if kind == "glauber":
        for _ in range(steps):
            if glauber_step(G, sigma, rng):
                accepted += 1
                by_size[1] = by_size.get(1, 0) + 1
    elif kind == "flip":
        if fp is None:
            raise ValueError("flip chain needs flip parameters")
        for _ in range(steps):
            s = flip_step(G, sigma, fp, rng)
            if s:
                accepted += 1
                by_size[s] = by_size.get(s, 0) + 1
    elif kind == "listflip":
        if fp is None or L is None:
            raise ValueError("list flip chain needs flip parameters and lists")
        for _ in range(steps):
            s = list_flip_step(G, sigma, L, fp, rng)
            if s:
                accepted += 1
                by_size[s] = by_size.get(s, 0) + 1
    else:
        raise ValueError(f"unknown chain kind {kind!r}")
    return ChainStats(steps=steps, accepted=accepted, flips_by_size=by_size)
