"""
Unit tests for dual-curve paths
Tests X_C paths, arc surgery, torus HT paths and ball BFS
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest
from hypothesis import given, settings, strategies as st

from core.complexes import G, HT, ball_from_vertices, build_ball, is_elementary_move, validate_cut_system
from core.curves import (
    chain_curves,
    curve_from_word,
    dehn_twist,
    intersection_number,
    is_dual,
    preset,
    standard_curves,
    torus_curve,
    twist,
)
from core.paths import (
    PathError,
    arc_configuration,
    arc_crossings,
    arc_surgery_step,
    bfs_path,
    torus_ht_path,
    twist_power,
    xc_path,
)

TORUS = preset(1, 0)
GENUS2 = preset(2, 0)


def pq(p, q):
    return torus_curve(TORUS, p, q)


def system(p, q):
    return validate_cut_system(TORUS, [pq(p, q)])


class TestTorusXC:
    """Test X_(1,0) on the torus."""

    def test_equal_endpoints(self):
        path = xc_path(pq(1, 0), pq(0, 1), pq(0, 1))
        assert path.sequence == (pq(0, 1),)
        assert path.ok

    def test_dual_endpoints(self):
        path = xc_path(pq(1, 0), pq(0, 1), pq(1, 1))
        assert path.sequence == (pq(0, 1), pq(1, 1))

    def test_two_step_path(self):
        """(0,1) and (2,1) are joined through (1,1)."""
        path = xc_path(pq(1, 0), pq(0, 1), pq(2, 1))
        assert path.sequence == (pq(0, 1), pq(1, 1), pq(2, 1))
        assert path.ok

    @settings(max_examples=20, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3))
    def test_every_pair_connects(self, p, r):
        """Paths between (p,1) and (r,1) stay dual to (1,0) and to each other."""
        c = pq(1, 0)
        path = xc_path(c, pq(p, 1), pq(r, 1))
        assert path.sequence[0] == pq(p, 1)
        assert path.sequence[-1] == pq(r, 1)
        assert all(is_dual(x, c) for x in path.sequence)
        assert all(is_dual(x, y) for x, y in zip(path.sequence, path.sequence[1:]))
        assert path.ok

    def test_inputs_must_be_dual(self):
        with pytest.raises(PathError):
            xc_path(pq(1, 0), pq(1, 2), pq(0, 1))

    def test_verify_flags(self):
        path = xc_path(pq(1, 0), pq(0, 1), pq(3, 1))
        flags = path.verify()
        assert len(flags) == len(path.sequence)
        assert all(f["dual_to_base"] and f["dual_to_previous"] for f in flags)
        assert path.to_dict()["steps"] == flags

    def test_twist_power(self):
        assert twist_power(pq(1, 0), pq(0, 1), 2) == dehn_twist(twist(pq(1, 0), 2), pq(0, 1))
        assert twist_power(pq(1, 0), pq(0, 1), 0) == pq(0, 1)


class TestArcs:
    """Test arcs on the surface cut along the base curve."""

    def test_torus_arcs_are_parallel(self):
        """S cut along (1,0) is an annulus: every pair of arcs is disjoint."""
        cfg = arc_configuration(pq(1, 0), pq(0, 1), pq(3, 1))
        assert arc_crossings(cfg.eps, cfg.tau) == 0
        with pytest.raises(PathError):
            arc_surgery_step(cfg)

    @pytest.mark.slow
    def test_surgery_reduces_crossings(self):
        """Twisting b1 twice along x1 leaves arcs that cross, so surgery runs."""
        a1, b1 = standard_curves(GENUS2)["a1"], standard_curves(GENUS2)["b1"]
        x1 = chain_curves(GENUS2)[2]
        d_prime = dehn_twist(twist(x1, 2), b1)
        assert is_dual(d_prime, a1)
        assert intersection_number(b1, d_prime) == 2

        cfg = arc_configuration(a1, b1, d_prime)
        before = arc_crossings(cfg.eps, cfg.tau)
        assert before >= 1
        nxt = arc_surgery_step(cfg)
        assert arc_crossings(cfg.eps, nxt) < before
        assert arc_crossings(cfg.tau, nxt) == 0
        assert is_dual(nxt.closure, a1)

        path = xc_path(a1, b1, d_prime)
        assert path.ok
        assert len(path.steps) >= 1
        for step in path.steps:
            assert step.after < step.before
            assert step.disjoint_from_previous
        assert all(is_dual(x, a1) for x in path.sequence)

    @pytest.mark.slow
    def test_genus2_disjoint_duals(self):
        """Disjoint duals go through a twist of the first."""
        std = standard_curves(GENUS2)
        a1, b1 = std["a1"], std["b1"]
        d_prime = curve_from_word(GENUS2, [0, 6, 5])
        assert intersection_number(b1, d_prime) == 0
        path = xc_path(a1, b1, d_prime)
        assert path.sequence == (b1, twist_power(a1, b1, 1), d_prime)
        assert all(intersection_number(x, y) == 1 for x, y in zip(path.sequence, path.sequence[1:]))


class TestTorusHT:
    """Test elementary-move paths through continued fractions."""

    def test_convergent_path(self):
        path = torus_ht_path(system(1, 0), system(5, 2))
        assert path[0] == system(1, 0)
        assert path[-1] == system(5, 2)
        assert len(path) == 3
        assert all(is_elementary_move(x, y) for x, y in zip(path, path[1:]))

    def test_same_vertex(self):
        assert torus_ht_path(system(2, 1), system(2, 1)) == [system(2, 1)]

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 1), (3, 2), (5, 3), (1, -2), (4, -3)]),
           st.sampled_from([(1, 0), (2, 3), (3, 1), (5, 2), (1, -1), (3, -4)]))
    def test_paths_are_valid(self, u, v):
        path = torus_ht_path(system(*u), system(*v))
        assert path[0] == system(*u) and path[-1] == system(*v)
        assert len(set(path)) == len(path)
        assert all(is_elementary_move(x, y) for x, y in zip(path, path[1:]))


class TestBallPaths:
    """Test shortest paths inside balls."""

    def test_bfs_in_farey_ball(self):
        ball = build_ball(G, TORUS, pq(1, 0), depth=2, complexity_bound=3)
        path = bfs_path(ball, pq(1, 0), pq(3, 2))
        assert path[0] == pq(1, 0) and path[-1] == pq(3, 2)
        assert all(is_dual(x, y) for x, y in zip(path, path[1:]))

    def test_disconnected_ball(self):
        ball = ball_from_vertices(HT, TORUS, [system(1, 0), system(1, 2)])
        assert bfs_path(ball, system(1, 0), system(1, 2)) is None

    def test_missing_vertex(self):
        ball = build_ball(HT, TORUS, system(1, 0), depth=0)
        with pytest.raises(PathError):
            bfs_path(ball, system(1, 0), system(0, 1))


if __name__ == '__main__':
    import pytest
    pytest.main([__file__, '-v'])
