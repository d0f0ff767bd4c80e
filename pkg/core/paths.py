"""
Paths - constructive connectivity of X_C and HT(S)
Arc surgery on S cut along C, dual paths with their twist tails, continued
fraction paths on the torus and shortest paths inside balls
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

import config
from core.arrangement import Arrangement
from core.complexes import ComplexBall, CutSystem, is_elementary_move, validate_cut_system
from core.curves import (
    CurveClass,
    ProperArc,
    curve_from_word,
    dehn_twist,
    intersection_number,
    is_dual,
    preset,
    require_same_surface,
    torus_coordinates,
    torus_curve,
    twist,
)
from core.surface_core import CutNeighborhood, HatcherError, UnsupportedSurfaceError, cut_along

logger = logging.getLogger(__name__)


class PathError(HatcherError):
    """A path query whose inputs or intermediate steps break the construction."""


# ========== ARCS ==========

def twist_power(c: CurveClass, x: CurveClass, k: int) -> CurveClass:
    return dehn_twist(twist(c, k), x) if k else x


def _best_closure(c: CurveClass, d: CurveClass, x: CurveClass,
                  cap: int = config.TWIST_TAIL_CAP,
                  window: int = config.CLOSING_WINDING_RANGE) -> Tuple[int, int]:
    """(k, i(d, t_c^k x)) minimizing the crossing count; ties go to the smaller |k|, then k > 0."""
    values = {0: intersection_number(d, x)}
    for direction in (1, -1):
        best = values[0]
        stale, k = 0, direction
        while abs(k) <= cap and stale < window:
            values[k] = intersection_number(d, twist_power(c, x, k))
            if values[k] < best:
                best, stale = values[k], 0
            else:
                stale += 1
            k += direction
    k = min(values, key=lambda j: (values[j], abs(j), -j))
    return k, values[k]


def arc_crossings(a: ProperArc, b: ProperArc) -> int:
    """Minimal crossing count of two arcs on S cut along their common base."""
    if a.base != b.base:
        raise PathError("arcs live on different cut surfaces")
    return _best_closure(a.base, a.closure, b.closure)[1]


@dataclass(frozen=True)
class ArcConfiguration:
    """The D-arc eps and the D'-arc tau on the complement of a regular neighborhood of C."""
    complement: CutNeighborhood
    eps: ProperArc
    tau: ProperArc

    @property
    def base(self) -> CurveClass:
        return self.eps.base


def arc_configuration(c: CurveClass, d: CurveClass, d_prime: CurveClass) -> ArcConfiguration:
    for x in (d, d_prime):
        if not is_dual(c, x):
            raise PathError(f"{x} is not dual to {c}")
    nbhd = cut_along(preset(c.genus, c.boundary), c)
    return ArcConfiguration(nbhd, ProperArc(c, d), ProperArc(c, d_prime))


@dataclass
class SurgeryStep:
    """One surgery: tau_k -> tau_(k+1), with the counts the construction must improve."""
    before: int  # |eps n tau_k|
    after: int  # |eps n tau_(k+1)|
    disjoint_from_previous: bool
    side: str  # side of tau the new arc starts on
    representative: CurveClass  # closure of tau_k in minimal position with eps
    result: ProperArc

    def to_dict(self) -> Dict[str, Any]:
        return {"before": self.before, "after": self.after,
                "disjoint_from_previous": self.disjoint_from_previous, "side": self.side,
                "representative": self.representative.to_dict(),
                "result": self.result.closure.to_dict()}


def _crossing_between(arr: Arrangement, i: int, j: int) -> List[int]:
    return [cr.index for cr in arr.crossings if {cr.first[0], cr.second[0]} == {i, j}]


def _chord_at(arr: Arrangement, cid: int, curve: int) -> Tuple[int, int]:
    cr = arr.crossings[cid]
    return cr.first if cr.first[0] == curve else cr.second


def _walk(arr: Arrangement, curve: int, start: int) -> List[Tuple[str, int]]:
    """Crossings ("x", id) and side exits ("s", side) met going once around ``curve`` from a crossing."""
    trace = arr.traces[curve]
    n = len(trace.chords)
    chord = _chord_at(arr, start, curve)
    h0 = chord[1]
    e0 = arr.event_index[(start, chord)]
    first = arr.chord_events(curve, h0)
    items = [("x", cid) for cid in first[e0 + 1:]]
    items.append(("s", trace.chords[h0].exit))
    for step in range(1, n):
        h = (h0 + step) % n
        items.extend(("x", cid) for cid in arr.chord_events(curve, h))
        items.append(("s", trace.chords[h].exit))
    items.extend(("x", cid) for cid in first[:e0])
    return items


def _oriented(c: CurveClass, d: CurveClass, t: CurveClass) -> Arrangement:
    """C, D, T with D and T crossing C from its left to its right."""
    traces = [c.trace, d.trace, t.trace]
    levels = {1: 1, 2: 2}
    arr = Arrangement(traces, pushed=levels)
    flipped = False
    for curve in (1, 2):
        cid = _crossing_between(arr, 0, curve)[0]
        k = _chord_at(arr, cid, 0)[1]
        h = _chord_at(arr, cid, curve)[1]
        p_in, p_out = arr.endpoint_positions(0, k)
        if not arr.in_arc(arr.pos[(curve, h, True)], p_in, p_out):
            traces[curve] = traces[curve].reversed()
            flipped = True
    return Arrangement(traces, pushed=levels) if flipped else arr


def _surgery_word(c: CurveClass, d: CurveClass, t: CurveClass) -> Tuple[Tuple[int, ...], str]:
    arr = _oriented(c, d, t)
    c_d = _crossing_between(arr, 0, 1)[0]
    c_t = _crossing_between(arr, 0, 2)[0]
    eps = _walk(arr, 1, c_d)
    tau = _walk(arr, 2, c_t)
    shared = [cid for kind, cid in eps if kind == "x" and cid in set(_crossing_between(arr, 1, 2))]
    if not shared:
        raise PathError("no surgery needed")
    last = shared[-1]
    cut_tau = tau.index(("x", last))
    cut_eps = eps.index(("x", last))

    # side of tau toward which eps continues at the last crossing
    h_t = _chord_at(arr, last, 2)[1]
    h_d = _chord_at(arr, last, 1)[1]
    side = "left" if arr.left_arc_contains(2, h_t, True, arr.pos[(1, h_d, True)]) else "right"

    along_c = _walk(arr, 0, c_d)
    closing = along_c[:along_c.index(("x", c_t))]
    word = [s for kind, s in tau[:cut_tau] if kind == "s"]
    word += [s for kind, s in eps[cut_eps + 1:] if kind == "s"]
    word += [s for kind, s in closing if kind == "s"]
    return tuple(word), side


def _surgery(eps: ProperArc, tau: ProperArc) -> SurgeryStep:
    c = eps.base
    k, before = _best_closure(c, eps.closure, tau.closure)
    if before == 0:
        raise PathError("no surgery needed")
    representative = twist_power(c, tau.closure, k)
    word, side = _surgery_word(c, eps.closure, representative)
    closure = curve_from_word(preset(c.genus, c.boundary), word)
    result = ProperArc(c, closure)
    if not is_dual(c, closure):
        raise PathError(f"surgery produced {closure}, which is not dual to {c}")
    after = arc_crossings(eps, result)
    disjoint = arc_crossings(tau, result) == 0
    step = SurgeryStep(before, after, disjoint, side, representative, result)
    if after >= before or not disjoint:
        raise PathError(f"surgery step failed its invariants: {step.to_dict()}")
    logger.debug(f"Arc surgery on the {side}: |eps n tau| {before} -> {after}")
    return step


def arc_surgery_step(cfg: ArcConfiguration) -> ProperArc:
    """
    Follow tau from its start until the last crossing with eps along eps,
    then follow eps to the far boundary copy.

    The new arc is disjoint from tau and meets eps fewer times.
    """
    return _surgery(cfg.eps, cfg.tau).result


# ========== X_C PATHS ==========

@dataclass
class DualPath:
    """Classes dual to ``base`` with consecutive entries dual to each other."""
    base: CurveClass
    sequence: Tuple[CurveClass, ...]
    raw: Tuple[CurveClass, ...] = ()
    steps: List[SurgeryStep] = field(default_factory=list)
    tail: int = 0  # m with q = t_c^m(d')

    def verify(self) -> List[Dict[str, Any]]:
        flags = []
        for k, x in enumerate(self.sequence):
            flags.append({
                "index": k,
                "class": str(x),
                "dual_to_base": is_dual(self.base, x),
                "dual_to_previous": True if k == 0 else is_dual(self.sequence[k - 1], x),
            })
        return flags

    @property
    def ok(self) -> bool:
        return all(f["dual_to_base"] and f["dual_to_previous"] for f in self.verify())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "path": [x.to_dict() for x in self.sequence],
            "raw": [x.to_dict() for x in self.raw],
            "steps": self.verify(),
            "surgery": [s.to_dict() for s in self.steps],
            "twist_tail": self.tail,
        }


def _dual_closure(c: CurveClass, prev: CurveClass, x: CurveClass,
                  cap: int = config.TWIST_TAIL_CAP) -> CurveClass:
    for k in sorted(range(-cap, cap + 1), key=lambda j: (abs(j), -j)):
        candidate = twist_power(c, x, k)
        if is_dual(prev, candidate):
            return candidate
    raise PathError(f"no closure of the arc of {x} is dual to {prev} within {cap} twists")


def _twist_exponent(c: CurveClass, q: CurveClass, d_prime: CurveClass,
                    cap: int = config.TWIST_TAIL_CAP) -> int:
    for k in sorted(range(-cap, cap + 1), key=lambda j: (abs(j), -j)):
        if twist_power(c, d_prime, k) == q:
            return k
    raise PathError(f"{q} is not t_c^m({d_prime}) for |m| <= {cap}")


def _erase_loops(seq: Sequence[CurveClass]) -> List[CurveClass]:
    out: List[CurveClass] = []
    for x in seq:
        if x in out:
            out = out[:out.index(x) + 1]
        else:
            out.append(x)
    return out


def xc_path(c: CurveClass, d: CurveClass, d_prime: CurveClass) -> DualPath:
    """
    Path from d to d' in X_C built by arc surgery.

    Disjoint inputs go through t_c(d); dual inputs are one edge; otherwise
    the arcs tau_k are pushed toward eps, closed through the annulus into
    classes Q_k, and the final t_c^m tail is unwound one twist at a time.
    """
    require_same_surface(c, d, d_prime)
    for x in (d, d_prime):
        if not is_dual(c, x):
            raise PathError(f"inputs not dual to {c}: {x}")
    if d == d_prime:
        return DualPath(c, (d,), (d,))
    m = intersection_number(d, d_prime)
    if m == 1:
        return DualPath(c, (d, d_prime), (d, d_prime))
    if m == 0:
        seq = (d, twist_power(c, d, 1), d_prime)
        return DualPath(c, seq, seq)

    eps = ProperArc(c, d)
    taus = [ProperArc(c, d_prime)]
    steps: List[SurgeryStep] = []
    while _best_closure(c, d, taus[-1].closure)[1] > 0:
        step = _surgery(eps, taus[-1])
        steps.append(step)
        taus.append(step.result)

    # Q_(n+1) = D, then closures of tau_n, ..., tau_0 each dual to the previous one
    chain = [d]
    for arc in reversed(taus):
        chain.append(_dual_closure(c, chain[-1], arc.closure))
    q = chain[-1]
    tail = _twist_exponent(c, q, d_prime)
    if tail:
        sign = 1 if tail > 0 else -1
        for k in range(tail - sign, 0, -sign):
            chain.append(twist_power(c, d_prime, k))
    if chain[-1] != d_prime:
        chain.append(d_prime)
    path = _erase_loops(chain)
    logger.info(f"X_C path {d} -> {d_prime}: {len(steps)} surgeries, tail {tail}, length {len(path) - 1}")
    return DualPath(c, tuple(path), tuple(chain), steps, tail)


# ========== HT PATHS ==========

def _convergents(p: int, q: int) -> List[Tuple[int, int]]:
    """Continued-fraction convergents of p/q after 1/0, ending at (p, q) with q >= 0."""
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    if q == 0:
        return []
    out = []
    h_prev, k_prev, h, k = 0, 1, 1, 0
    x = Fraction(p, q)
    while True:
        a = x.numerator // x.denominator
        h_prev, k_prev, h, k = h, k, a * h + h_prev, a * k + k_prev
        out.append((h, k))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def _farey_adjacent(u: Tuple[int, int], v: Tuple[int, int]) -> bool:
    return abs(u[0] * v[1] - u[1] * v[0]) == 1


def torus_ht_path(v: CutSystem, w: CutSystem) -> List[CutSystem]:
    """
    Elementary-move path between torus cut systems.

    Runs up the convergents of v to 1/0 and down the convergents of w,
    erases repeats, then skips ahead to the farthest Farey neighbor at
    each step; no intermediate pair is taller than the endpoints.
    """
    if len(v) != 1 or len(w) != 1:
        raise UnsupportedSurfaceError("torus paths need genus 1")
    a, b = v.classes[0], w.classes[0]
    require_same_surface(a, b)
    surface = preset(a.genus, a.boundary)
    if v == w:
        return [v]
    start, end = torus_coordinates(a), torus_coordinates(b)
    up = [(1, 0)] + _convergents(*start)
    down = [(1, 0)] + _convergents(*end)
    route = [_normal(x) for x in list(reversed(up)) + down[1:]]
    route = _erase_pairs(route)
    shortened = [route[0]]
    i = 0
    while i < len(route) - 1:
        j = max(k for k in range(i + 1, len(route)) if _farey_adjacent(route[i], route[k]))
        shortened.append(route[j])
        i = j
    path = [validate_cut_system(surface, [torus_curve(surface, *x)]) for x in shortened]
    for x, y in zip(path, path[1:]):
        if is_elementary_move(x, y) is None:
            raise PathError(f"{x} -> {y} is not an elementary move")
    return path


def _normal(pair: Tuple[int, int]) -> Tuple[int, int]:
    p, q = pair
    return (-p, -q) if p < 0 or (p == 0 and q < 0) else (p, q)


def _erase_pairs(route: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for x in route:
        if x in out:
            out = out[:out.index(x) + 1]
        else:
            out.append(x)
    return out


def bfs_path(ball: ComplexBall, a, b) -> Optional[list]:
    """Shortest path inside the ball, or None when the ball holds no path."""
    idx = ball.index
    for x in (a, b):
        if x not in idx:
            raise PathError(f"vertex not in ball: {x}")
    try:
        nodes = nx.shortest_path(ball.graph, idx[a], idx[b])
    except nx.NetworkXNoPath:
        logger.warning(f"{a} and {b} are disconnected in the ball")
        return None
    return [ball.vertices[i] for i in nodes]
