"""
Arrangement - several curves drawn in the model polygon at once
Orders chord endpoints along the sides, finds crossings, and traces the
regions of the complement into a cut surface.
"""

import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np

import config
from core.geometry import Trace, polygon_model
from core.surface_core import (
    GeneralPositionError,
    NonSimpleCurveError,
    Surface,
    classify_components,
)

logger = logging.getLogger(__name__)

EVENT_TOLERANCE = 1e-9


def _unit(v) -> np.ndarray:
    return v / float(np.hypot(v[0], v[1]))


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


@dataclass(frozen=True)
class Endpoint:
    curve: int
    chord: int
    out: bool
    side: int
    t: float
    push: int  # side-offset sign when the curve is pushed left, else 0
    level: int = 0


@dataclass(frozen=True)
class Crossing:
    index: int
    first: Tuple[int, int]  # (curve, chord)
    second: Tuple[int, int]


class Arrangement:
    """
    Curves in the polygon with a consistent boundary order and crossing data.

    ``pushed`` names curves moved infinitesimally to their left, which
    separates them from points they share with other curves. A mapping
    curve -> level gives each pushed curve its own order of smallness:
    a push at a higher level dominates every push below it. With
    ``strict`` any coincidence is an input error.
    """

    def __init__(self, traces: Sequence[Trace], pushed: Union[Iterable[int], Mapping[int, int]] = (),
                 strict: bool = False):
        if not traces:
            raise ValueError("arrangement needs at least one curve")
        self.traces = list(traces)
        self.genus = traces[0].genus
        self.boundary = traces[0].boundary
        self.model = polygon_model(self.genus, self.boundary)
        if isinstance(pushed, Mapping):
            self.levels: Dict[int, int] = {i: int(lv) for i, lv in pushed.items() if lv > 0}
        else:
            self.levels = {i: 1 for i in pushed}
        self.pushed: Set[int] = set(self.levels)
        self.strict = strict
        self.tol = config.POSITION_TOLERANCE

        self._order_sides()
        self._find_crossings()
        self._order_events()

    # ----- boundary order -----

    def chord_points(self, curve: int, chord: int) -> Tuple[np.ndarray, np.ndarray]:
        c = self.traces[curve].chords[chord]
        return self.model.point(c.enter, c.t_in), self.model.point(c.exit, c.t_out)

    def chord_direction(self, curve: int, chord: int) -> np.ndarray:
        start, end = self.chord_points(curve, chord)
        return end - start

    def _endpoint(self, curve: int, chord: int, out: bool) -> Endpoint:
        c = self.traces[curve].chords[chord]
        side, t = (c.exit, c.t_out) if out else (c.enter, c.t_in)
        push, level = 0, self.levels.get(curve, 0)
        if level:
            push = 1 if _cross2(self.chord_direction(curve, chord), self.model.side_vector(side)) > 0 else -1
        return Endpoint(curve, chord, out, side, t, push, level)

    def _compare(self, a: Endpoint, b: Endpoint) -> int:
        if abs(a.t - b.t) > self.tol:
            return -1 if a.t < b.t else 1
        if a.curve == b.curve:
            raise NonSimpleCurveError(f"curve {a.curve} meets itself on side {a.side}")
        if self.strict or a.level == b.level and a.push == b.push:
            raise GeneralPositionError()
        if a.level == b.level:
            return -1 if a.push < b.push else 1
        if a.level > b.level:
            return -1 if a.push < 0 else 1
        return 1 if b.push < 0 else -1

    def _order_sides(self):
        per_side: Dict[int, List[Endpoint]] = {k: [] for k in range(self.model.n)}
        for i, trace in enumerate(self.traces):
            for h in range(len(trace.chords)):
                for out in (False, True):
                    e = self._endpoint(i, h, out)
                    per_side[e.side].append(e)
        self.sides: Dict[int, List[Endpoint]] = {}
        self.rank: Dict[Tuple[int, int, bool], Tuple[int, int]] = {}
        self.pos: Dict[Tuple[int, int, bool], int] = {}
        offset = 0
        for k in range(self.model.n):
            ordered = sorted(per_side[k], key=cmp_to_key(self._compare))
            self.sides[k] = ordered
            for r, e in enumerate(ordered):
                self.rank[(e.curve, e.chord, e.out)] = (k, r)
                self.pos[(e.curve, e.chord, e.out)] = offset + r
            offset += len(ordered)
        self.total = offset
        for k in range(self.model.n):
            if len(self.sides[k]) != len(self.sides[self.model.partner[k]]):
                raise GeneralPositionError(f"sides {k} and {self.model.partner[k]} disagree")

    def endpoint_positions(self, curve: int, chord: int) -> Tuple[int, int]:
        return self.pos[(curve, chord, False)], self.pos[(curve, chord, True)]

    def in_arc(self, x: int, start: int, end: int) -> bool:
        """True when position x lies strictly inside the ccw arc from start to end."""
        return x != start and (x - start) % self.total < (end - start) % self.total

    def left_arc_contains(self, curve: int, chord: int, forward: bool, x: int) -> bool:
        """Whether boundary position x lies on the left of the chord for the travel direction."""
        p_in, p_out = self.endpoint_positions(curve, chord)
        return self.in_arc(x, p_out, p_in) if forward else self.in_arc(x, p_in, p_out)

    # ----- crossings -----

    def _interleave(self, a: Tuple[int, int], b: Tuple[int, int]) -> bool:
        a_in, a_out = self.endpoint_positions(*a)
        lo, hi = min(a_in, a_out), max(a_in, a_out)
        b_in, b_out = self.endpoint_positions(*b)
        return (lo < b_in < hi) != (lo < b_out < hi)

    def _find_crossings(self):
        chords = [(i, h) for i, tr in enumerate(self.traces) for h in range(len(tr.chords))]
        self.crossings: List[Crossing] = []
        self.pair_counts: Dict[Tuple[int, int], int] = {}
        for x in range(len(chords)):
            for y in range(x + 1, len(chords)):
                a, b = chords[x], chords[y]
                if not self._interleave(a, b):
                    continue
                if a[0] == b[0]:
                    raise NonSimpleCurveError(f"curve {a[0]} crosses itself")
                self.crossings.append(Crossing(len(self.crossings), a, b))
                key = (min(a[0], b[0]), max(a[0], b[0]))
                self.pair_counts[key] = self.pair_counts.get(key, 0) + 1

    def crossing_count(self, i: int, j: int) -> int:
        return self.pair_counts.get((min(i, j), max(i, j)), 0)

    def other(self, crossing: Crossing, chord: Tuple[int, int]) -> Tuple[int, int]:
        return crossing.second if crossing.first == chord else crossing.first

    # ----- order of crossings along each chord -----

    def _event_parameter(self, chord: Tuple[int, int], other: Tuple[int, int]) -> float:
        p, p_end = self.chord_points(*chord)
        q, q_end = self.chord_points(*other)
        r, s = p_end - p, q_end - q
        return _cross2(q - p, s) / _cross2(r, s)

    def _order_events(self):
        self.events: Dict[Tuple[int, int], List[int]] = {}
        for cr in self.crossings:
            self.events.setdefault(cr.first, []).append(cr.index)
            self.events.setdefault(cr.second, []).append(cr.index)
        self.event_index: Dict[Tuple[int, Tuple[int, int]], int] = {}
        for chord, ids in self.events.items():
            params = {cid: self._event_parameter(chord, self.other(self.crossings[cid], chord)) for cid in ids}

            def compare(x, y, chord=chord, params=params):
                if abs(params[x] - params[y]) > EVENT_TOLERANCE:
                    return -1 if params[x] < params[y] else 1
                return self._break_event_tie(chord, self.other(self.crossings[x], chord),
                                             self.other(self.crossings[y], chord))

            ids.sort(key=cmp_to_key(compare))
            for k, cid in enumerate(ids):
                self.event_index[(cid, chord)] = k

    def _break_event_tie(self, chord, x, y) -> int:
        """
        Order two crossings that coincide before the pushes are applied.

        A crossing with chord x moves along the chord by
        (d_K cos - d_x) / sin of the angle from the chord to x, where d_K
        and d_x are the pushes of the two curves. Levels are compared
        from the largest push down.
        """
        if self.strict:
            raise GeneralPositionError()
        own = _unit(self.chord_direction(*chord))
        vx, vy = _unit(self.chord_direction(*x)), _unit(self.chord_direction(*y))
        sin_x, sin_y = _cross2(own, vx), _cross2(own, vy)
        lk = self.levels.get(chord[0], 0)
        lx, ly = self.levels.get(x[0], 0), self.levels.get(y[0], 0)
        for level in sorted({lk, lx, ly} - {0}, reverse=True):
            if level == lk:
                if level in (lx, ly):
                    raise GeneralPositionError()
                diff = float(np.dot(own, vx)) / sin_x - float(np.dot(own, vy)) / sin_y
            else:
                terms = []
                if level == lx:
                    terms.append(-1.0 / sin_x)
                if level == ly:
                    terms.append(1.0 / sin_y)
                if len(terms) == 2 and (terms[0] > 0) != (terms[1] > 0):
                    raise GeneralPositionError()
                diff = sum(terms)
            if abs(diff) > EVENT_TOLERANCE:
                return -1 if diff < 0 else 1
        raise GeneralPositionError()

    def chord_events(self, curve: int, chord: int) -> List[int]:
        return self.events.get((curve, chord), [])

    # ----- regions -----

    def cut(self) -> "CutResult":
        return CutResult(self)


class CutResult:
    """
    The surface cut along every curve of an arrangement.

    Darts are side segments ("side", k, j), truncated corners ("corner", k)
    and chord pieces ("chord", curve, chord, piece, direction); side
    segments stay glued to their partner segments, everything else becomes
    boundary.
    """

    def __init__(self, arrangement: Arrangement):
        self.arrangement = arrangement
        arr = arrangement
        model = arr.model
        labels: List[tuple] = []
        for k in range(model.n):
            for j in range(len(arr.sides[k]) + 1):
                labels.append(("side", k, j))
        if arr.boundary > 0:
            for k in range(model.n):
                labels.append(("corner", k))
        for i, trace in enumerate(arr.traces):
            for h in range(len(trace.chords)):
                for piece in range(len(arr.chord_events(i, h)) + 1):
                    labels.append(("chord", i, h, piece, 1))
                    labels.append(("chord", i, h, piece, -1))
        self.labels = labels
        self.dart_of: Dict[tuple, int] = {lab: d for d, lab in enumerate(labels)}

        nxt = [self.dart_of[self._next(lab)] for lab in labels]
        faces = []
        seen = set()
        for d in range(len(labels)):
            if d in seen:
                continue
            face = []
            x = d
            while x not in seen:
                seen.add(x)
                face.append(x)
                x = nxt[x]
            if x != d:
                raise GeneralPositionError("region tracing is inconsistent")
            faces.append(tuple(face))

        involution: List[Optional[int]] = [None] * len(labels)
        for k in range(model.n):
            m = len(arr.sides[k])
            p = model.partner[k]
            for j in range(m + 1):
                involution[self.dart_of[("side", k, j)]] = self.dart_of[("side", p, m - j)]
        self.surface = Surface.from_faces(faces, involution, labels)
        self.pieces = classify_components(self.surface)
        logger.debug(f"Cut along {len(arr.traces)} curves: {len(faces)} regions, "
                     f"{len(self.pieces)} components")

    def _next(self, label: tuple) -> tuple:
        arr = self.arrangement
        kind = label[0]
        if kind == "side":
            _, k, j = label
            if j < len(arr.sides[k]):
                e = arr.sides[k][j]
                if e.out:
                    return ("chord", e.curve, e.chord, len(arr.chord_events(e.curve, e.chord)), -1)
                return ("chord", e.curve, e.chord, 0, 1)
            if arr.boundary > 0:
                return ("corner", k)
            return ("side", (k + 1) % arr.model.n, 0)
        if kind == "corner":
            return ("side", (label[1] + 1) % arr.model.n, 0)

        _, i, h, piece, direction = label
        events = arr.chord_events(i, h)
        if direction == 1 and piece < len(events):
            return self._turn(i, h, True, events[piece])
        if direction == -1 and piece > 0:
            return self._turn(i, h, False, events[piece - 1])
        side, r = arr.rank[(i, h, direction == 1)]
        return ("side", side, r + 1)

    def _turn(self, curve: int, chord: int, forward: bool, crossing_id: int) -> tuple:
        """Left turn at a crossing onto the other chord."""
        arr = self.arrangement
        cr = arr.crossings[crossing_id]
        other = arr.other(cr, (curve, chord))
        other_out = arr.pos[(other[0], other[1], True)]
        go_forward = arr.left_arc_contains(curve, chord, forward, other_out)
        q = arr.event_index[(crossing_id, other)]
        if go_forward:
            return ("chord", other[0], other[1], q + 1, 1)
        return ("chord", other[0], other[1], q, -1)

    # ----- queries -----

    def curve_sides(self, curve: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Boundary darts along the right and left copies of a curve."""
        arr = self.arrangement
        left, right = [], []
        for h in range(len(arr.traces[curve].chords)):
            pieces = len(arr.chord_events(curve, h)) + 1
            for piece in range(pieces):
                left.append(self.dart_of[("chord", curve, h, piece, 1)])
        for h in reversed(range(len(arr.traces[curve].chords))):
            pieces = len(arr.chord_events(curve, h)) + 1
            for piece in reversed(range(pieces)):
                right.append(self.dart_of[("chord", curve, h, piece, -1)])
        return tuple(right), tuple(left)

    def component_of(self, dart: int) -> int:
        for i, piece in enumerate(self.pieces):
            if dart in piece.darts:
                return i
        raise KeyError(dart)

    def curve_component(self, curve: int, left: bool = True) -> int:
        right, left_darts = self.curve_sides(curve)
        return self.component_of((left_darts if left else right)[0])

    def cycle_of(self, dart: int) -> Tuple[int, ...]:
        for cycle in self.surface.boundary_cycles:
            if dart in cycle:
                return cycle
        raise KeyError(dart)

    def cycle_curves(self, cycle: Sequence[int]) -> List[Optional[int]]:
        """Curve index of each boundary dart in a cycle (None for the surface's own boundary)."""
        return [self.labels[d][1] if self.labels[d][0] == "chord" else None for d in cycle]

    def boundary_word(self, cycle: Sequence[int]) -> Tuple[int, ...]:
        """Side-exit word of a boundary cycle pushed slightly into its region."""
        s = self.surface
        word = []
        for b in cycle:
            d = s.face_next[b]
            while s.involution[d] is not None:
                word.append(self.labels[d][1])
                d = s.face_next[s.involution[d]]
        return tuple(word)

    def bigons(self) -> List[int]:
        """Components that are disks bounded by one arc of each of two curves."""
        found = []
        for i, piece in enumerate(self.pieces):
            if piece.genus != 0 or piece.boundary_count != 1:
                continue
            cycle = next(c for c in self.surface.boundary_cycles if c[0] in piece.darts)
            owners = self.cycle_curves(cycle)
            if None in owners:
                continue
            switches = sum(1 for k in range(len(owners)) if owners[k] != owners[k - 1])
            if switches == 2:
                found.append(i)
        return found


def count_crossings(first: Trace, second: Trace) -> int:
    """Crossings of two distinct geodesics, the second pushed off shared points."""
    return Arrangement([first, second], pushed=[1]).crossing_count(0, 1)


def check_simple(trace: Trace) -> None:
    """Raise NonSimpleCurveError when a traced geodesic crosses or touches itself."""
    Arrangement([trace])


def cut_surface(surface: Surface, traces: Sequence[Trace]) -> CutResult:
    """Cut a preset along pairwise disjoint traced curves."""
    arrangement = Arrangement(list(traces))
    for i in range(len(traces)):
        for j in range(i + 1, len(traces)):
            if arrangement.crossing_count(i, j):
                raise GeneralPositionError(f"curves {i} and {j} cross; expected disjoint curves")
    return arrangement.cut()
