"""
Unit tests for induced curve maps
Tests automorphism checks, witnesses and the verification suites
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.complexes import C, HT, N, build_ball, validate_cut_system
from core.curves import (
    TwistWord,
    chain_curves,
    dehn_twist,
    intersection_number,
    is_dual,
    is_nonseparating,
    neighborhood_boundary,
    preset,
    standard_curves,
    torus_curve,
    twist,
)
from core.induced_map import (
    BallTooSmallError,
    InsufficientBallError,
    NotAnAutomorphismError,
    automorphism_from_table,
    automorphism_from_twist_word,
    check_choice_independence,
    check_composition,
    check_disjointness_preservation,
    check_duality_preservation,
    check_realization,
    check_separating_extension,
    check_torus_oracle,
    extend_to_separating,
    identity_automorphism,
    induced_curve_map,
    induced_map,
    random_twist_word,
    torus_action_matrix,
    witness_ball,
    witnesses,
)
from core.surface_core import CurveError, UnsupportedSurfaceError

TORUS = preset(1, 0)
GENUS2 = preset(2, 0)
GENUS3 = preset(3, 0)


def pq(p, q):
    return torus_curve(TORUS, p, q)


def system(p, q):
    return validate_cut_system(TORUS, [pq(p, q)])


@pytest.fixture(scope="module")
def torus_ball():
    return build_ball(HT, TORUS, system(1, 0), depth=1, complexity_bound=3)


@pytest.fixture(scope="module")
def small_torus_ball():
    return build_ball(HT, TORUS, system(1, 0), depth=1, complexity_bound=1)


@pytest.fixture(scope="module")
def genus2_ball():
    std = standard_curves(GENUS2)
    return witness_ball(GENUS2, [std["a1"], std["b1"]])


@pytest.fixture(scope="module")
def chain_ball():
    return witness_ball(GENUS2, chain_curves(GENUS2))


class TestTorusAutomorphisms:
    """Test twist-word and table automorphisms of torus balls."""

    def test_identity(self, torus_ball):
        f = identity_automorphism(torus_ball)
        assert f.is_identity
        for c in torus_ball.curves():
            assert induced_curve_map(f, c) == c

    def test_single_twist(self, torus_ball):
        f = automorphism_from_twist_word(twist(pq(1, 0)), torus_ball)
        assert induced_curve_map(f, pq(0, 1)) == pq(1, 1)
        assert f(system(1, 0)) == system(1, 0)

    def test_realization(self, torus_ball):
        f = automorphism_from_twist_word(twist(pq(0, 1), -1), torus_ball)
        report = check_realization(f)
        assert report["ok"]
        assert not report["fixes_all_curves"]

    def test_identity_realization(self, torus_ball):
        report = check_realization(identity_automorphism(torus_ball))
        assert report["ok"]
        assert report["fixes_all_curves"]

    @settings(max_examples=10, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from([(1, 0), (0, 1)]), st.sampled_from([1, -1])),
                    min_size=1, max_size=3))
    def test_random_words_realize(self, letters):
        ball = build_ball(HT, TORUS, system(1, 0), depth=1, complexity_bound=3)
        w = TwistWord(tuple((pq(*p), e) for p, e in letters))
        assert check_realization(automorphism_from_twist_word(w, ball))["ok"]

    def test_independence_is_exhaustive(self, torus_ball):
        """Every dual of (1,0) in the ball gives the same value."""
        f = automorphism_from_twist_word(twist(pq(1, 0)).compose(twist(pq(0, 1))), torus_ball)
        found = witnesses(f, pq(1, 0))
        assert len(found) == 7
        report = check_choice_independence(f, pq(1, 0), trials=len(found), seed=7)
        assert report["ok"]
        assert not report["vacuous"]
        assert len(report["outcomes"]) == 1

    def test_independence_is_deterministic(self, torus_ball):
        f = automorphism_from_twist_word(twist(pq(0, 1)), torus_ball)
        first = check_choice_independence(f, pq(1, 0), trials=10, seed=3)
        second = check_choice_independence(f, pq(1, 0), trials=10, seed=3)
        assert first == second

    def test_duality_on_torus(self, torus_ball):
        f = automorphism_from_twist_word(twist(pq(1, 1)), torus_ball)
        report = check_duality_preservation(f, [(pq(1, 0), pq(0, 1)), (pq(1, 0), pq(1, 2))])
        assert report["ok"]
        assert report["samples"][1]["skipped"]

    def test_composition_on_torus(self, torus_ball):
        f = automorphism_from_twist_word(twist(pq(1, 0)), torus_ball)
        h = automorphism_from_twist_word(twist(pq(0, 1)), torus_ball)
        report = check_composition(f, h, [pq(1, 0)])
        assert report["ok"]

    def test_reflection_table(self, small_torus_ball):
        """(p,q) -> (p,-q) swaps (1,1) and (1,-1)."""
        table = {v: v for v in small_torus_ball.vertices}
        table[system(1, 1)] = system(1, -1)
        table[system(1, -1)] = system(1, 1)
        f = automorphism_from_table(small_torus_ball, table)
        assert induced_curve_map(f, pq(1, 1)) == pq(1, -1)

    def test_broken_table(self, small_torus_ball):
        table = {v: v for v in small_torus_ball.vertices}
        table[system(1, 0)] = system(1, 1)
        table[system(1, 1)] = system(1, 0)
        with pytest.raises(NotAnAutomorphismError):
            automorphism_from_table(small_torus_ball, table)

    def test_ball_too_small(self, small_torus_ball):
        with pytest.raises(BallTooSmallError) as err:
            automorphism_from_twist_word(twist(pq(1, 0), 10), small_torus_ball)
        assert err.value.vertex in small_torus_ball.vertices

    def test_insufficient_ball(self, torus_ball):
        f = identity_automorphism(torus_ball)
        with pytest.raises(InsufficientBallError):
            induced_curve_map(f, pq(3, 2))

    def test_disjointness_needs_higher_genus(self, torus_ball):
        f = identity_automorphism(torus_ball)
        with pytest.raises(UnsupportedSurfaceError):
            check_disjointness_preservation(f, pq(1, 0), pq(1, 0))


@pytest.mark.slow
class TestGenusTwo:
    """Test induced maps on the closed genus-2 surface."""

    def test_disjoint_twist_fixes(self, genus2_ball):
        std = standard_curves(GENUS2)
        f = automorphism_from_twist_word(twist(std["b2"]), genus2_ball)
        assert induced_curve_map(f, std["a1"]) == std["a1"]

    def test_independence(self, genus2_ball):
        std = standard_curves(GENUS2)
        f = automorphism_from_twist_word(twist(std["b1"]), genus2_ball)
        report = check_choice_independence(f, std["a1"], trials=10, seed=7)
        assert report["ok"]
        assert not report["vacuous"]

    def test_realization(self, genus2_ball):
        std = standard_curves(GENUS2)
        w = twist(std["a1"]).compose(twist(std["b1"], -1))
        f = automorphism_from_twist_word(w, genus2_ball)
        assert check_realization(f, [std["a1"], std["b1"]])["ok"]

    def test_duality(self, genus2_ball):
        std = standard_curves(GENUS2)
        f = automorphism_from_twist_word(twist(chain_curves(GENUS2)[2]), genus2_ball)
        assert check_duality_preservation(f, [(std["a1"], std["b1"])])["ok"]

    def test_composition(self, genus2_ball):
        std = standard_curves(GENUS2)
        f = automorphism_from_twist_word(twist(std["a1"]), genus2_ball)
        h = automorphism_from_twist_word(twist(std["b1"]), genus2_ball)
        assert check_composition(f, h, [std["a1"]])["ok"]

    def test_disjointness_connected_case(self, genus2_ball):
        std = standard_curves(GENUS2)
        f = automorphism_from_twist_word(twist(std["b1"]), genus2_ball)
        report = check_disjointness_preservation(f, std["a1"], std["a2"])
        assert report["ok"]
        assert report["samples"][0]["case"] == "connected"

    def test_identity_extension(self, genus2_ball):
        chain = chain_curves(GENUS2)
        c = neighborhood_boundary(chain[:2])[0]
        fm = induced_map(identity_automorphism(genus2_ball))
        assert extend_to_separating(fm, c) == c

    def test_separating_extension(self, genus2_ball):
        chain = chain_curves(GENUS2)
        c = neighborhood_boundary(chain[:2])[0]
        f = automorphism_from_twist_word(twist(chain[2]), genus2_ball)
        report = check_separating_extension(f, c)
        assert report["ok"]
        assert report["samples"][0]["split"] == [(1, 1), (1, 1)]

    def test_extension_rejects_nonseparating(self, genus2_ball):
        fm = induced_map(identity_automorphism(genus2_ball))
        with pytest.raises(CurveError):
            extend_to_separating(fm, standard_curves(GENUS2)["a1"])


@pytest.mark.slow
class TestGenusThree:
    """Test the disconnected-complement case of disjointness."""

    def test_chain_boundary_pair(self):
        chain = chain_curves(GENUS3)
        a, b = neighborhood_boundary(chain[:3])
        assert is_nonseparating(a) and is_nonseparating(b)
        ball = witness_ball(GENUS3, [chain[0]])
        f = automorphism_from_twist_word(twist(chain[0]), ball)
        report = check_disjointness_preservation(f, a, b)
        assert report["samples"][0]["case"] == "disconnected"
        assert report["ok"]


seeds = st.integers(min_value=0, max_value=2 ** 16)


def seeded_word(seed, length=2):
    return random_twist_word(GENUS2, length, np.random.default_rng(seed))


@pytest.mark.slow
class TestGenusTwoProperties:
    """Seeded random words on the closed genus-2 surface."""

    @settings(max_examples=5, deadline=None)
    @given(seeds)
    def test_independence(self, chain_ball, seed):
        f = automorphism_from_twist_word(seeded_word(seed), chain_ball)
        for c in chain_curves(GENUS2)[:2]:
            report = check_choice_independence(f, c, trials=6, seed=seed)
            assert report["ok"]
            assert not report["vacuous"]

    @settings(max_examples=5, deadline=None)
    @given(seeds)
    def test_duality(self, chain_ball, seed):
        chain = chain_curves(GENUS2)
        f = automorphism_from_twist_word(seeded_word(seed), chain_ball)
        report = check_duality_preservation(f, list(zip(chain, chain[1:])))
        assert report["ok"]
        assert report["failures"] == 0

    @settings(max_examples=4, deadline=None)
    @given(seeds, seeds)
    def test_composition(self, chain_ball, first, second):
        f = automorphism_from_twist_word(seeded_word(first), chain_ball)
        h = automorphism_from_twist_word(seeded_word(second), chain_ball)
        assert check_composition(f, h, chain_curves(GENUS2)[:2])["ok"]

    @settings(max_examples=4, deadline=None)
    @given(seeds)
    def test_disjointness(self, chain_ball, seed):
        chain = chain_curves(GENUS2)
        f = automorphism_from_twist_word(seeded_word(seed), chain_ball)
        rng = np.random.default_rng(seed)
        pairs = [(chain[i], chain[j]) for i in range(len(chain)) for j in range(i + 2, len(chain))]
        a, b = pairs[int(rng.integers(len(pairs)))]
        assert check_disjointness_preservation(f, a, b)["ok"]

    @settings(max_examples=4, deadline=None)
    @given(seeds)
    def test_separating_extension(self, chain_ball, seed):
        waist = neighborhood_boundary(chain_curves(GENUS2)[:2])[0]
        f = automorphism_from_twist_word(seeded_word(seed), chain_ball)
        report = check_separating_extension(f, waist)
        assert report["ok"]
        assert report["samples"][0]["split"] == [(1, 1), (1, 1)]

    @settings(max_examples=6, deadline=None)
    @given(seeds)
    def test_nonseparating_iff_dual_exists(self, seed):
        """A moved curve has a dual among the moved chain exactly when it is nonseparating."""
        chain = chain_curves(GENUS2)
        w = seeded_word(seed, 3)
        moved = [dehn_twist(w, c) for c in chain]
        waist = dehn_twist(w, neighborhood_boundary(chain[:2])[0])
        for c in moved + [waist]:
            assert is_nonseparating(c) == any(is_dual(c, d) for d in moved)

    @settings(max_examples=6, deadline=None)
    @given(seeds)
    def test_twist_is_injective(self, seed):
        chain = chain_curves(GENUS2)
        w = seeded_word(seed, 3)
        sample = chain + [neighborhood_boundary(chain[:2])[0]]
        images = [dehn_twist(w, c) for c in sample]
        assert len(set(images)) == len(sample)
        assert [dehn_twist(w.inverse(), x) for x in images] == sample

    @settings(max_examples=3, deadline=None)
    @given(seeds)
    def test_disjoint_balls(self, seed):
        """N balls stay nonseparating inside C balls, and every edge is a disjoint pair."""
        c = dehn_twist(seeded_word(seed, 1), chain_curves(GENUS2)[0])
        n_ball = build_ball(N, GENUS2, c, depth=1)
        c_ball = build_ball(C, GENUS2, c, depth=1)
        assert all(is_nonseparating(v) for v in n_ball.vertices)
        assert set(n_ball.vertices) <= set(c_ball.vertices)
        assert any(not is_nonseparating(v) for v in c_ball.vertices)
        for ball in (n_ball, c_ball):
            for i, j in ball.edges:
                assert intersection_number(ball.vertices[i], ball.vertices[j]) == 0


class TestSampling:
    """Test seeded twist words."""

    def test_same_seed_same_word(self):
        first = random_twist_word(GENUS2, 4, np.random.default_rng(11))
        second = random_twist_word(GENUS2, 4, np.random.default_rng(11))
        assert first == second
        assert 1 <= len(first) <= 4

    def test_no_immediate_cancellation(self):
        w = random_twist_word(TORUS, 6, np.random.default_rng(5))
        for (c, e), (d, f) in zip(w.letters, w.letters[1:]):
            assert not (c == d and e == -f)

    def test_direct_image_matches_word(self):
        w = random_twist_word(TORUS, 3, np.random.default_rng(2))
        c = pq(2, 1)
        image = c
        for curve, e in w.letters:
            image = dehn_twist(twist(curve, e), image)
        assert dehn_twist(w, c) == image


class TestTorusOracle:
    """Test twist words against integer matrices on torus homology."""

    def test_single_letter_matrix(self):
        m = torus_action_matrix(twist(pq(1, 0)))
        assert [[int(x) for x in m.row(i)] for i in range(2)] == [[1, 1], [0, 1]]

    def test_inverse_letter(self):
        w = twist(pq(2, 1)).compose(twist(pq(2, 1), -1))
        assert torus_action_matrix(w).is_Identity

    def test_central_element(self):
        """(t_a t_b t_a)^2 acts as -1 and so fixes every curve."""
        step = twist(pq(1, 0)).compose(twist(pq(0, 1))).compose(twist(pq(1, 0)))
        report = check_torus_oracle(step.compose(step), [pq(1, 0), pq(0, 1), pq(2, 1)])
        assert report["central"]
        assert report["ok"]
        assert all(s["direct"] == s["curve"] for s in report["samples"])

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from([(1, 0), (0, 1), (1, 1)]), st.sampled_from([1, -1])),
                    min_size=1, max_size=3))
    def test_direct_twists_match_matrix(self, letters):
        w = TwistWord(tuple((pq(*p), e) for p, e in letters))
        assert check_torus_oracle(w, [pq(1, 0), pq(0, 1), pq(1, 2)])["ok"]

    def test_needs_torus(self):
        with pytest.raises(UnsupportedSurfaceError):
            torus_action_matrix(twist(standard_curves(GENUS2)["a1"]))


if __name__ == '__main__':
    import pytest
    pytest.main([__file__, '-v'])
