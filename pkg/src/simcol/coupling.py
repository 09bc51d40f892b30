"""Coupled moves for pairs of colorings that differ at one vertex.

Two couplings live here.  The single-site chain couples through a color
relabeling: both chains draw the same vertex, and the proposed color is
passed through a transposition of the two disagreement colors when the
vertex neighbors the disagreement.  The component-swap chain couples
through an explicit table: per proposed color, the components that behave
differently in the two chains are paired up mass-for-mass by the greedy
matching in `matching`, components the chains agree on ride together
unchanged, and the leftover proposal mass is jointly null.

Everything downstream of a table is exact: entry masses are rationals
with denominators dividing m*k times the flip-probability denominator,
and the one-step expected change of the weighted disagreement metric is
a rational, compared against the certified threshold without tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .certify import threshold_ratio
from .dynamics import (Coloring, FlipParams, _grow_cluster, compute_cluster,
                       flip_step, greedy_coloring, is_proper)
from .graphs import UnionLineGraph
from .matching import match_color_moves, pick_anchor


def weighted_hamming(x: Coloring, y: Coloring, G: UnionLineGraph) -> int:
    """Total weight of the vertices where the two colorings disagree."""
    if len(x.assign) != G.m or len(y.assign) != G.m or x.k != y.k:
        raise ValueError("colorings must live on the same graph with the same k")
    return sum(G.weight[v] for v in range(G.m) if x.assign[v] != y.assign[v])


@dataclass(frozen=True)
class AdjacentPair:
    """Two colorings equal everywhere except at vstar."""

    x: Coloring
    y: Coloring
    vstar: int

    def __post_init__(self):
        if len(self.x.assign) != len(self.y.assign) or self.x.k != self.y.k:
            raise ValueError("chains must share the state space")
        diffs = [v for v in range(len(self.x.assign))
                 if self.x.assign[v] != self.y.assign[v]]
        if diffs != [self.vstar]:
            raise ValueError(f"states must differ exactly at {self.vstar}, differ at {diffs}")

    @property
    def xstar(self) -> int:
        return self.x.assign[self.vstar]

    @property
    def ystar(self) -> int:
        return self.y.assign[self.vstar]


@dataclass(frozen=True)
class Move:
    """One component flip: swap the two colors on the members.

    colors has one element for the null proposal at a vertex already
    carrying the proposed color; applying that move changes nothing but
    it owns real proposal mass, so tables track it like any other.
    """

    members: frozenset
    colors: frozenset

    @property
    def size(self) -> int:
        return len(self.members)

    def color_after(self, current: int) -> int:
        if len(self.colors) == 2 and current in self.colors:
            a, b = self.colors
            return b if current == a else a
        return current

    def apply(self, sigma: Coloring) -> None:
        if len(self.colors) < 2:
            return
        a, b = self.colors
        for v in self.members:
            if sigma.assign[v] == a:
                sigma.assign[v] = b
            elif sigma.assign[v] == b:
                sigma.assign[v] = a


@dataclass(frozen=True)
class TableEntry:
    mass: Fraction
    move_x: Move | None
    move_y: Move | None
    delta: int


@dataclass(frozen=True)
class CouplingTable:
    """Joint move distribution; the residual mass is jointly null."""

    entries: tuple[TableEntry, ...]
    residual: Fraction
    clamp_events: int
    dc_max: int

    def total_mass(self) -> Fraction:
        return sum((e.mass for e in self.entries), Fraction(0)) + self.residual


@dataclass(frozen=True)
class ColorTerm:
    """Per-color share of the expected metric change, times nothing: exact."""

    alpha: Fraction
    weight: int
    dc: int

    @property
    def gamma(self) -> Fraction | None:
        return self.alpha / self.weight if self.weight else None


@dataclass(frozen=True)
class DriftReport:
    exact_drift: Fraction
    per_color: dict[int, ColorTerm]
    bound: Fraction
    beta: Fraction
    dc_max: int
    clamp_events: int = 0


def flip_move_law(G: UnionLineGraph, sigma: Coloring, fp: FlipParams,
                  k: int | None = None) -> dict[Move, Fraction]:
    """Exact move distribution of one flip proposal.

    Every flippable component appears with mass p(size)/(m*k); the
    complement of the total is the null mass.  Zero-probability moves
    are omitted.
    """
    k = sigma.k if k is None else k
    mk = G.m * k
    law: dict[Move, Fraction] = {}
    for v in range(G.m):
        for c in range(1, k + 1):
            members = _grow_cluster(sigma.assign, G.nbrs, v, c, fp.locality)
            if members is None:
                continue
            s = len(members)
            q = fp.p(s)
            if q == 0:
                continue
            mv = Move(frozenset(members), frozenset((sigma.assign[v], c)))
            law[mv] = law.get(mv, Fraction(0)) + Fraction(q, s * mk)
    return law


def _coupled_delta(G: UnionLineGraph, pair: AdjacentPair,
                   move_x: Move | None, move_y: Move | None) -> int:
    touched: set[int] = set()
    if move_x is not None:
        touched |= move_x.members
    if move_y is not None:
        touched |= move_y.members
    d = 0
    for v in touched:
        cx, cy = pair.x.assign[v], pair.y.assign[v]
        nx = move_x.color_after(cx) if move_x is not None and v in move_x.members else cx
        ny = move_y.color_after(cy) if move_y is not None and v in move_y.members else cy
        d += G.weight[v] * ((nx != ny) - (cx != cy))
    return d


def _assemble_flip_table(pair: AdjacentPair, G: UnionLineGraph, k: int,
                         fp: FlipParams):
    """Build the coupled table and the per-color drift terms together.

    Construction doubles as a proof of marginal correctness: every move
    of either single-chain law must be consumed exactly, either by the
    per-color matching around the disagreement or as a shared identity
    entry, and the leftover asserts below fail loudly otherwise.
    """
    x, y, vs = pair.x, pair.y, pair.vstar
    if x.k != k or y.k != k:
        raise ValueError("pair and k disagree")
    if not is_proper(G, x) or not is_proper(G, y):
        raise ValueError("coupled tables are defined for proper states")
    xstar, ystar = pair.xstar, pair.ystar
    mk = G.m * k
    law_x = flip_move_law(G, x, fp, k)
    law_y = flip_move_law(G, y, fp, k)

    entries: list[TableEntry] = []
    per_color: dict[int, ColorTerm] = {}
    used_x: dict[Move, Fraction] = {}
    used_y: dict[Move, Fraction] = {}
    clamp_events = 0
    dc_max = 0

    def consume(entry: TableEntry) -> None:
        entries.append(entry)
        if entry.move_x is not None:
            used_x[entry.move_x] = used_x.get(entry.move_x, Fraction(0)) + entry.mass
        if entry.move_y is not None:
            used_y[entry.move_y] = used_y.get(entry.move_y, Fraction(0)) + entry.mass

    for c in range(1, k + 1):
        nbrs_c = [w for w in G.nbrs[vs] if x.assign[w] == c]
        dc = len(nbrs_c)
        dc_max = max(dc_max, dc)
        if dc == 0:
            # both chains recolor vstar toward c and coalesce; for
            # c = xstar or ystar one side's move is its null proposal
            mv_x = Move(frozenset((vs,)), frozenset((xstar, c)))
            mv_y = Move(frozenset((vs,)), frozenset((ystar, c)))
            mass = Fraction(1, mk)
            delta = _coupled_delta(G, pair, mv_x, mv_y)
            assert delta == -G.weight[vs]
            consume(TableEntry(mass, mv_x, mv_y, delta))
            per_color[c] = ColorTerm(alpha=mass * delta, weight=0, dc=0)
            continue

        big_x = Move(compute_cluster(G, x, vs, c).members, frozenset((xstar, c)))
        big_y = Move(compute_cluster(G, y, vs, c).members, frozenset((ystar, c)))
        u_moves = [Move(compute_cluster(G, y, w, xstar).members, frozenset((xstar, c)))
                   for w in nbrs_c]
        t_moves = [Move(compute_cluster(G, x, w, ystar).members, frozenset((ystar, c)))
                   for w in nbrs_c]
        assert big_x.members == frozenset((vs,)).union(*(u.members for u in u_moves))
        assert big_y.members == frozenset((vs,)).union(*(t.members for t in t_moves))

        mass_map = {big_x: fp.p(big_x.size), big_y: fp.p(big_y.size)}
        for mv in (*t_moves, *u_moves):
            mass_map[mv] = fp.p(mv.size)
        weights = [G.weight[w] for w in nbrs_c]
        m_a = pick_anchor([u.size for u in u_moves], weights)
        m_b = pick_anchor([t.size for t in t_moves], weights)
        matched, clamped = match_color_moves(big_x, big_y, t_moves, u_moves,
                                             mass_map, m_a, m_b)
        clamp_events += clamped
        alpha = Fraction(0)
        for p in matched:
            mass = p.mass / mk
            delta = _coupled_delta(G, pair, p.x, p.y)
            consume(TableEntry(mass, p.x, p.y, delta))
            alpha += mass * delta
        per_color[c] = ColorTerm(alpha=alpha, weight=sum(weights), dc=dc)

    for mv, q in used_x.items():
        assert law_x.get(mv) == q, f"X marginal off at {mv}: used {q}, law {law_x.get(mv)}"
    for mv, q in used_y.items():
        assert law_y.get(mv) == q, f"Y marginal off at {mv}: used {q}, law {law_y.get(mv)}"
    for mv, q in law_x.items():
        if mv in used_x:
            continue
        assert vs not in mv.members and law_y.get(mv) == q, f"unshared leftover {mv}"
        consume(TableEntry(q, mv, mv, 0))
    leftover_y = [mv for mv in law_y if mv not in used_y]
    assert not leftover_y, f"Y moves never consumed: {leftover_y}"

    total = sum((e.mass for e in entries), Fraction(0))
    assert 0 <= total <= 1
    table = CouplingTable(entries=tuple(entries), residual=1 - total,
                          clamp_events=clamp_events, dc_max=dc_max)
    return table, per_color


def build_flip_coupling_table(pair: AdjacentPair, G: UnionLineGraph, k: int,
                              fp: FlipParams) -> CouplingTable:
    table, _ = _assemble_flip_table(pair, G, k, fp)
    return table


def flip_exact_drift(pair: AdjacentPair, G: UnionLineGraph, k: int,
                     fp: FlipParams) -> DriftReport:
    """Exact one-step expectation of the metric change under the table."""
    table, per_color = _assemble_flip_table(pair, G, k, fp)
    drift = sum((e.mass * e.delta for e in table.entries), Fraction(0))
    assert drift == sum((t.alpha for t in per_color.values()), Fraction(0))
    wstar = G.weight[pair.vstar]
    bound = Fraction(wstar, G.m * k) * (threshold_ratio(fp) * G.delta - k)
    return DriftReport(exact_drift=drift, per_color=per_color, bound=bound,
                       beta=1 + drift / wstar, dc_max=table.dc_max,
                       clamp_events=table.clamp_events)


def coupled_flip_step(pair: AdjacentPair, G: UnionLineGraph, k: int,
                      fp: FlipParams, rng: random.Random,
                      table: CouplingTable | None = None):
    """Sample one entry (or the null residual) and apply it to copies."""
    if table is None:
        table = build_flip_coupling_table(pair, G, k, fp)
    u = rng.random()
    acc = Fraction(0)
    x2, y2 = pair.x.copy(), pair.y.copy()
    for e in table.entries:
        acc += e.mass
        if u < acc:
            if e.move_x is not None:
                e.move_x.apply(x2)
            if e.move_y is not None:
                e.move_y.apply(y2)
            break
    return x2, y2


def glauber_partner_color(pair: AdjacentPair, G: UnionLineGraph, v: int,
                          c: int) -> int:
    """Color the mirror chain attempts when the first draws (v, c).

    The transposition of the two disagreement colors on the neighbors of
    vstar, the identity everywhere else; a bijection on colors for every
    vertex, which is what makes the coupling valid.
    """
    if v != pair.vstar and v in G.nbrs[pair.vstar]:
        if c == pair.xstar:
            return pair.ystar
        if c == pair.ystar:
            return pair.xstar
    return c


def coupled_glauber_step(pair: AdjacentPair, G: UnionLineGraph, k: int,
                         rng: random.Random):
    v = rng.randrange(G.m)
    c = rng.randrange(k) + 1
    cp = glauber_partner_color(pair, G, v, c)
    x2, y2 = pair.x.copy(), pair.y.copy()
    if all(x2.assign[w] != c for w in G.nbrs[v]):
        x2.assign[v] = c
    if all(y2.assign[w] != cp for w in G.nbrs[v]):
        y2.assign[v] = cp
    return x2, y2


def glauber_exact_drift(pair: AdjacentPair, G: UnionLineGraph, k: int) -> DriftReport:
    """Exact drift of the coupled single-site step, by direct accounting.

    Proposals at vstar coalesce when the color is free in the common
    neighborhood; proposals at a neighbor can create a new disagreement
    only when the drawn color is the Y-side disagreement color and at
    least one chain accepts; everything else leaves the metric alone.
    """
    if pair.x.k != k or pair.y.k != k:
        raise ValueError("pair and k disagree")
    if not is_proper(G, pair.x) or not is_proper(G, pair.y):
        raise ValueError("drift accounting assumes proper states")
    vs = pair.vstar
    xstar, ystar = pair.xstar, pair.ystar
    mk = G.m * k
    nbr_colors = {pair.x.assign[w] for w in G.nbrs[vs]}
    per_color: dict[int, ColorTerm] = {}
    dc_max = 0
    for c in range(1, k + 1):
        alpha = Fraction(0)
        nbrs_c = [w for w in G.nbrs[vs] if pair.x.assign[w] == c]
        dc_max = max(dc_max, len(nbrs_c))
        if c not in nbr_colors:
            alpha += Fraction(-G.weight[vs], mk)
        if c == ystar:
            for w in G.nbrs[vs]:
                others = {pair.x.assign[u] for u in G.nbrs[w] if u != vs}
                if ystar not in others or xstar not in others:
                    alpha += Fraction(G.weight[w], mk)
        per_color[c] = ColorTerm(alpha=alpha,
                                 weight=sum(G.weight[w] for w in nbrs_c),
                                 dc=len(nbrs_c))
    drift = sum((t.alpha for t in per_color.values()), Fraction(0))
    wstar = G.weight[vs]
    deg = len(G.nbrs[vs])
    bound = Fraction(-wstar * (k - deg) + sum(G.weight[w] for w in G.nbrs[vs]), mk)
    return DriftReport(exact_drift=drift, per_color=per_color, bound=bound,
                       beta=1 + drift / wstar, dc_max=dc_max)


def sample_adjacent_pairs(G: UnionLineGraph, k: int, fp: FlipParams,
                          count: int, rng: random.Random) -> list[AdjacentPair]:
    """Proper adjacent pairs from a warmed-up chain plus one perturbation.

    Burn-in is 20*m*k proposals from the greedy start, with m*k more
    between consecutive pairs; the perturbed vertex and its new color are
    drawn uniformly among the proper choices.
    """
    if k < 4 * G.delta - 2:
        raise ValueError("pair sampling expects k >= 4*delta - 2")
    sigma = greedy_coloring(G, k)
    for _ in range(20 * G.m * k):
        flip_step(G, sigma, fp, rng)
    pairs: list[AdjacentPair] = []
    while len(pairs) < count:
        for _ in range(G.m * k):
            flip_step(G, sigma, fp, rng)
        order = list(range(G.m))
        rng.shuffle(order)
        for v in order:
            taken = {sigma.assign[w] for w in G.nbrs[v]}
            free = [c for c in range(1, k + 1)
                    if c != sigma.assign[v] and c not in taken]
            if not free:
                continue
            c = free[rng.randrange(len(free))]
            y = sigma.copy()
            y.assign[v] = c
            pairs.append(AdjacentPair(x=sigma.copy(), y=y, vstar=v))
            break
        else:
            raise RuntimeError("no proper single-vertex perturbation exists")
    return pairs


@dataclass(frozen=True)
class PairRecord:
    pair_id: int
    vstar: int
    vstar_weight: int
    exact_drift: Fraction
    bound: Fraction
    beta: Fraction
    dc_max: int
    clamp_events: int


@dataclass(frozen=True)
class ContractionSummary:
    records: tuple[PairRecord, ...]
    max_drift: Fraction
    mean_drift: Fraction
    beta: Fraction
    bound_margin: Fraction | None
    dc_over_2: int
    clamp_events: int
    all_bounds_hold: bool


def estimate_contraction(G: UnionLineGraph, k: int, fp: FlipParams,
                         pairs: int, seed: int) -> ContractionSummary:
    """Exact drift over sampled adjacent pairs, worst case summarized.

    The certified bound is asserted only over pairs whose colors all have
    at most two same-colored neighbors at the disagreement; the others
    are counted in dc_over_2 and reported, not judged.
    """
    rng = random.Random(seed)
    sampled = sample_adjacent_pairs(G, k, fp, pairs, rng)
    records = []
    for i, pair in enumerate(sampled):
        rep = flip_exact_drift(pair, G, k, fp)
        records.append(PairRecord(
            pair_id=i, vstar=pair.vstar, vstar_weight=G.weight[pair.vstar],
            exact_drift=rep.exact_drift, bound=rep.bound, beta=rep.beta,
            dc_max=rep.dc_max, clamp_events=rep.clamp_events))
    in_scope = [r for r in records if r.dc_max <= 2]
    margins = [r.bound - r.exact_drift for r in in_scope]
    return ContractionSummary(
        records=tuple(records),
        max_drift=max(r.exact_drift for r in records),
        mean_drift=sum((r.exact_drift for r in records), Fraction(0)) / len(records),
        beta=max(r.beta for r in records),
        bound_margin=min(margins) if margins else None,
        dc_over_2=len(records) - len(in_scope),
        clamp_events=sum(r.clamp_events for r in records),
        all_bounds_hold=all(m >= 0 for m in margins),
    )


def records_to_csv(records) -> str:
    """Drift records in the export schema, one row per pair."""
    lines = ["pair_id,vstar_weight,exact_drift_num,exact_drift_den,"
             "bound_num,bound_den,beta,dc_max"]
    for r in records:
        lines.append(f"{r.pair_id},{r.vstar_weight},"
                     f"{r.exact_drift.numerator},{r.exact_drift.denominator},"
                     f"{r.bound.numerator},{r.bound.denominator},"
                     f"{float(r.beta)!r},{r.dc_max}")
    return "\n".join(lines) + "\n"
