import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from simcol.matching import MatchedPair, match_color_moves, pick_anchor


class TestPickAnchor:
    def test_largest_size_wins(self):
        assert pick_anchor([1, 3, 2], [2, 1, 2]) == 1

    def test_weight_breaks_size_ties(self):
        assert pick_anchor([3, 3], [1, 2]) == 1
        assert pick_anchor([3, 3], [2, 1]) == 0

    def test_first_index_on_full_tie(self):
        assert pick_anchor([2, 2, 2], [1, 1, 1]) == 0
        assert pick_anchor([2, 2], [2, 2]) == 0


def run_matcher(t_sizes, u_sizes, p):
    # masses mirror the coupling's usage: each side's big component is
    # the disagreement vertex plus the other chain's branches, so its
    # mass is p(1 + sum of the opposite sizes)
    big_x, big_y = "X", "Y"
    x_ids = [f"t{i}" for i in range(len(t_sizes))]
    y_ids = [f"u{i}" for i in range(len(u_sizes))]
    mass = {big_x: p(1 + sum(u_sizes)), big_y: p(1 + sum(t_sizes))}
    for i, s in enumerate(t_sizes):
        mass[x_ids[i]] = p(s)
    for i, s in enumerate(u_sizes):
        mass[y_ids[i]] = p(s)
    m_a = pick_anchor(u_sizes, [1] * len(u_sizes))
    m_b = pick_anchor(t_sizes, [1] * len(t_sizes))
    pairs, clamped = match_color_moves(big_x, big_y, x_ids, y_ids, mass, m_a, m_b)
    return pairs, clamped, mass


DEFAULT_P = {1: Fraction(1), 2: Fraction(137, 650), 3: Fraction(77, 650),
             4: Fraction(47, 650), 5: Fraction(27, 650), 6: Fraction(12, 650),
             7: Fraction(0), 8: Fraction(0), 9: Fraction(0)}


def default_p(s):
    return DEFAULT_P.get(s, Fraction(0))


class TestMatchColorMoves:
    def test_marginals_conserved(self):
        pairs, clamped, mass = run_matcher([2, 1], [3, 1], default_p)
        assert clamped == 0
        for side, pick in (("x", lambda pr: pr.x), ("y", lambda pr: pr.y)):
            used = {}
            for pr in pairs:
                ident = pick(pr)
                if ident is not None:
                    used[ident] = used.get(ident, Fraction(0)) + pr.mass
            for ident, total in used.items():
                assert total == mass[ident], (side, ident)
        # nothing left unpaired on either side
        assert sum((pr.mass for pr in pairs if pr.x is not None), Fraction(0)) \
            == sum(mass[i] for i in ("X", "t0", "t1"))
        assert sum((pr.mass for pr in pairs if pr.y is not None), Fraction(0)) \
            == sum(mass[i] for i in ("Y", "u0", "u1"))

    def test_big_pairs_with_anchor_branch(self):
        pairs, _, mass = run_matcher([3, 1], [2, 1], default_p)
        big_partner = [pr for pr in pairs if pr.x == "X"]
        # the big component couples to the anchored opposite branch first
        assert big_partner[0].y == "u0"
        assert big_partner[0].mass == mass["X"]

    def test_masses_positive_and_no_zero_pairs(self):
        pairs, _, _ = run_matcher([2, 2, 1], [1, 1, 3], default_p)
        assert all(pr.mass > 0 for pr in pairs)

    def test_repeated_ids_share_one_ledger_slot(self):
        # merged branches present the same id twice; its mass must be
        # spent once, not once per mention
        mass = {"X": Fraction(1, 10), "Y": Fraction(1, 10),
                "u0": Fraction(2, 10), "t0": Fraction(2, 10)}
        pairs, clamped = match_color_moves("X", "Y", ["u0", "u0"], ["t0", "t0"],
                                           mass, 0, 0)
        spent_u = sum((pr.mass for pr in pairs if pr.x == "u0"), Fraction(0))
        spent_t = sum((pr.mass for pr in pairs if pr.y == "t0"), Fraction(0))
        assert spent_u == Fraction(2, 10)
        assert spent_t == Fraction(2, 10)
        assert clamped == 0

    def test_no_clamping_for_nonincreasing_masses(self):
        # with p nonincreasing in size, the big component is never
        # lighter than the branch it anchors to
        rng = random.Random(0)
        for _ in range(200):
            a = [rng.randint(1, 4) for _ in range(rng.randint(1, 4))]
            b = [rng.randint(1, 4) for _ in range(len(a))]
            _, clamped, _ = run_matcher(a, b, default_p)
            assert clamped == 0

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.data())
    def test_exhaustive_pairing_property(self, a_sizes, data):
        b_sizes = data.draw(st.lists(st.integers(1, 5),
                                     min_size=len(a_sizes), max_size=len(a_sizes)))
        pairs, clamped, mass = run_matcher(a_sizes, b_sizes, default_p)
        assert clamped == 0
        # every identity is fully spent across the pair list
        spend = {ident: Fraction(0) for ident in mass}
        for pr in pairs:
            if pr.x is not None:
                spend[pr.x] += pr.mass
            if pr.y is not None:
                spend[pr.y] += pr.mass
        assert spend == mass


def test_matched_pair_allows_idle_side():
    pr = MatchedPair(x="u0", y=None, mass=Fraction(1, 7))
    assert pr.y is None and pr.mass == Fraction(1, 7)
