"""
Geometry - polygon models and geodesic tracing
The closed torus is a flat unit square; every other preset is a regular
polygon in the Klein model of the hyperbolic plane. A curve class is traced
as the closed geodesic of its side-exit word.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

import mpmath
import numpy as np

import config
from core.surface_core import (
    GeometryError,
    ProperPowerError,
    TrivialCurveError,
    polygon_sides,
    side_pairing,
)

logger = logging.getLogger(__name__)

FLAT = "flat"
HYPERBOLIC = "hyperbolic"

# Unit vector of each exit side on the square: side 0 bottom, 1 right, 2 top, 3 left
TORUS_SIDE_VECTORS = {0: (0, -1), 1: (1, 0), 2: (0, 1), 3: (-1, 0)}


class Chord(NamedTuple):
    """One passage of a curve through the polygon, positions in [0, 1] along each side."""
    enter: int
    t_in: float
    exit: int
    t_out: float

    def reversed(self) -> "Chord":
        return Chord(self.exit, self.t_out, self.enter, self.t_in)


@dataclass(frozen=True)
class Trace:
    """Cutting sequence of a closed curve through the model polygon."""
    genus: int
    boundary: int
    chords: Tuple[Chord, ...]
    length: float = 0.0

    @property
    def exits(self) -> Tuple[int, ...]:
        return tuple(c.exit for c in self.chords)

    @property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((c.enter, c.exit) for c in self.chords)

    def reversed(self) -> "Trace":
        return Trace(self.genus, self.boundary,
                     tuple(c.reversed() for c in reversed(self.chords)), self.length)

    def rotated(self, start: int) -> "Trace":
        return Trace(self.genus, self.boundary,
                     self.chords[start:] + self.chords[:start], self.length)


# ========== MATRICES ==========

def _rot(theta):
    c, s = mpmath.cos(theta), mpmath.sin(theta)
    return mpmath.matrix([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def _boost(t):
    ch, sh = mpmath.cosh(t), mpmath.sinh(t)
    return mpmath.matrix([[ch, 0, sh], [0, 1, 0], [sh, 0, ch]])


def _translation(a, b):
    return mpmath.matrix([[1, 0, a], [0, 1, b], [0, 0, 1]])


def _cross(u, v):
    return mpmath.matrix([u[1] * v[2] - u[2] * v[1],
                          u[2] * v[0] - u[0] * v[2],
                          u[0] * v[1] - u[1] * v[0]])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _affine(p):
    return mpmath.matrix([p[0] / p[2], p[1] / p[2], 1])


def _normalized(v):
    norm = mpmath.sqrt(_dot(v, v))
    if norm == 0:
        raise GeometryError("degenerate projective vector")
    return v / norm


def _lorentz_inverse(m):
    j = mpmath.diag([1, 1, -1])
    return j * m.T * j


# ========== MODELS ==========

@dataclass
class PolygonModel:
    """
    Fundamental polygon with side pairings.

    ``side_maps[s]`` carries the polygon onto its neighbor across side s
    and side partner(s) onto side s reversed. ``vertices`` is the polygon
    curves are traced through; ``reduction_covectors`` belong to the
    regular polygon centred at the origin (hyperbolic models only).
    """
    kind: str
    genus: int
    boundary: int
    n: int
    partner: Tuple[int, ...]
    dps: int
    side_maps: List
    vertices: List
    reduction_covectors: List
    vertex_array: np.ndarray
    letter_digits: float

    def side_vector(self, side: int) -> np.ndarray:
        return self.vertex_array[(side + 1) % self.n] - self.vertex_array[side]

    def point(self, side: int, t: float) -> np.ndarray:
        return self.vertex_array[side] + t * self.side_vector(side)


def _partner_table(genus: int, boundary: int) -> Tuple[int, ...]:
    n = polygon_sides(genus, boundary)
    partner = [0] * n
    for s, p in side_pairing(genus, boundary):
        partner[s], partner[p] = p, s
    return tuple(partner)


def _flat_model(dps: int) -> PolygonModel:
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    side_maps = [_translation(*TORUS_SIDE_VECTORS[s]) for s in range(4)]
    return PolygonModel(
        kind=FLAT, genus=1, boundary=0, n=4, partner=(2, 3, 0, 1), dps=dps,
        side_maps=side_maps,
        vertices=[mpmath.matrix([x, y, 1]) for x, y in corners],
        reduction_covectors=[],
        vertex_array=np.array(corners, dtype=float),
        letter_digits=0.0,
    )


def _vertex_cycle(maps, partner, n):
    """h_k with h_k(v_0) = v_k, from E_s h_p = h_{s+1} and E_s h_{p+1} = h_s."""
    h = {0: mpmath.eye(3)}
    frontier = [0]
    while frontier:
        k = frontier.pop()
        for s in range(n):
            p = partner[s]
            targets = []
            if k == p:
                targets.append(((s + 1) % n, maps[s] * h[k]))
            if k == (p + 1) % n:
                targets.append((s, maps[s] * h[k]))
            for j, m in targets:
                if j not in h:
                    h[j] = m
                    frontier.append(j)
    if len(h) != n:
        raise GeometryError("polygon vertices do not form a single cycle")
    return [h[k] for k in range(n)]


def _hyperbolic_model(genus: int, boundary: int, dps: int) -> PolygonModel:
    n = polygon_sides(genus, boundary)
    partner = _partner_table(genus, boundary)
    half = mpmath.pi / n
    if boundary == 0:
        d = mpmath.acosh(mpmath.cot(half))
        radius = mpmath.tanh(mpmath.acosh(mpmath.cot(half) ** 2))
    else:
        d = mpmath.acosh(1 / mpmath.sin(half))
        radius = mpmath.mpf(1)

    def angle(k):
        return 2 * mpmath.pi * k / n

    regular = [mpmath.matrix([radius * mpmath.cos(angle(k) - half),
                              radius * mpmath.sin(angle(k) - half), 1]) for k in range(n)]
    half_turn = _boost(d) * _rot(mpmath.pi) * _boost(-d)
    maps = [_rot(angle(s)) * half_turn * _rot(-angle(partner[s])) for s in range(n)]
    covectors = [_cross(regular[k], regular[(k + 1) % n]) for k in range(n)]

    vertices = regular
    if boundary == 0:
        cycle = _vertex_cycle(maps, partner, n)
        tol = mpmath.mpf(10) ** (-(dps // 2))
        for k, hk in enumerate(cycle):
            moved = _affine(hk * regular[0])
            if mpmath.norm(moved - regular[k]) > tol:
                raise GeometryError(f"vertex cycle mismatch at corner {k}")
        alpha = mpmath.mpf(config.VERTEX_PERTURBATION_ANGLE)
        nudge = _rot(alpha) * _boost(mpmath.mpf(config.VERTEX_PERTURBATION)) * _rot(-alpha)
        base = nudge * regular[0]
        vertices = [_affine(hk * base) for hk in cycle]

    side_norm = max(float(mpmath.mnorm(m, 1)) for m in maps)
    return PolygonModel(
        kind=HYPERBOLIC, genus=genus, boundary=boundary, n=n, partner=partner, dps=dps,
        side_maps=maps,
        vertices=vertices,
        reduction_covectors=covectors,
        vertex_array=np.array([[float(v[0]), float(v[1])] for v in vertices]),
        letter_digits=math.log10(side_norm),
    )


@lru_cache(maxsize=64)
def polygon_model(genus: int, boundary: int, dps: Optional[int] = None) -> PolygonModel:
    """Model for a preset, built at ``dps`` decimal digits (cached per precision)."""
    dps = dps or config.BASE_PRECISION
    with mpmath.workdps(dps):
        if genus == 1 and boundary == 0:
            return _flat_model(dps)
        return _hyperbolic_model(genus, boundary, dps)


def _precision_bucket(digits: float) -> int:
    base = config.BASE_PRECISION
    needed = base + int(math.ceil(digits)) + 10
    return base if needed <= base + 10 else 10 * int(math.ceil(needed / 10))


# ========== WORDS ==========

def reduce_word(word: Sequence[int], partner: Sequence[int]) -> Tuple[int, ...]:
    """Cyclically reduced side-exit word (s followed by partner(s) cancels)."""
    stack: List[int] = []
    for s in word:
        if stack and stack[-1] == partner[s]:
            stack.pop()
        else:
            stack.append(s)
    lo, hi = 0, len(stack)
    while hi - lo > 1 and stack[lo] == partner[stack[hi - 1]]:
        lo += 1
        hi -= 1
    return tuple(stack[lo:hi])


def torus_vector(exits: Sequence[int]) -> Tuple[int, int]:
    """Homology class (p, q) of a genus-1 exit word."""
    p = sum(TORUS_SIDE_VECTORS[s][0] for s in exits)
    q = sum(TORUS_SIDE_VECTORS[s][1] for s in exits)
    return (p, q)


def homology_vector(genus: int, boundary: int, exits: Sequence[int]) -> Tuple[int, ...]:
    """
    First homology class of an exit word in the basis (a_1, b_1, ..., a_g, b_g, x_1, ...).

    Exit through side 4i+1 counts +a_i (4i+3 counts -a_i); side 4i counts
    +b_i (4i+2 counts -b_i); side 4g+2j counts +x_j (4g+2j+1 counts -x_j).
    """
    size = 2 * genus + max(boundary - 1, 0)
    vec = [0] * size
    for s in exits:
        if s < 4 * genus:
            block, slot = divmod(s, 4)
            index = 2 * block + (0 if slot in (1, 3) else 1)
            vec[index] += 1 if slot in (0, 1) else -1
        else:
            j, slot = divmod(s - 4 * genus, 2)
            vec[2 * genus + j] += 1 if slot == 0 else -1
    return tuple(vec)


# ========== TRACING ==========

def _clip(model: PolygonModel, line) -> Optional[Tuple[int, object, int, object]]:
    """Entry and exit sides of an oriented line through the polygon, or None."""
    values = [_dot(line, v) for v in model.vertices]
    scale = max(abs(x) for x in values)
    tiny = scale * mpmath.mpf(10) ** (-(model.dps * 2 // 3))
    entry = exit_ = None
    for k in range(model.n):
        a, b = values[k], values[(k + 1) % model.n]
        if a < 0 < b:
            exit_ = (k, a / (a - b))
        elif a > 0 > b:
            entry = (k, a / (a - b))
    if entry is None or exit_ is None:
        return None
    if any(abs(x) <= tiny for x in values):
        raise GeometryError("curve passes through a polygon vertex")
    return entry[0], entry[1], exit_[0], exit_[1]


def _reduce_line(model: PolygonModel, line):
    """Move an oriented geodesic by deck transformations until it meets the polygon."""
    for _ in range(512):
        denom = line[0] ** 2 + line[1] ** 2
        if denom == 0:
            raise GeometryError("line at infinity")
        foot = mpmath.matrix([-line[2] * line[0] / denom, -line[2] * line[1] / denom, 1])
        outside = [k for k, cov in enumerate(model.reduction_covectors) if _dot(cov, foot) < 0]
        if not outside:
            break
        line = _normalized(model.side_maps[outside[0]].T * line)
    else:
        raise GeometryError("line reduction did not converge")

    # the traced polygon is a small deformation of the regular one: try nearby copies
    queue = [((), line)]
    seen = {()}
    while queue:
        word, candidate = queue.pop(0)
        if _clip(model, candidate) is not None:
            return candidate
        if len(word) >= 3:
            continue
        for s in range(model.n):
            if word and model.partner[s] == word[-1]:
                continue
            nxt = word + (s,)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, _normalized(model.side_maps[s].T * candidate)))
    raise GeometryError("no polygon copy meets the geodesic")


def _word_matrix(model: PolygonModel, word: Sequence[int]):
    m = mpmath.eye(3)
    for s in word:
        m = m * model.side_maps[s]
    return m


def _axis(m):
    """Oriented axis covector (repelling x attracting fixed point) of a hyperbolic isometry."""
    def attractor(a):
        for _ in range(12):
            a = a * a
            a = a / mpmath.mnorm(a, 1)
        return a * mpmath.matrix([0, 0, 1])

    plus = attractor(m)
    minus = attractor(_lorentz_inverse(m))
    return _normalized(_cross(minus, plus))


def _follow(model: PolygonModel, start, guard: int) -> Tuple[List[Chord], List[int]]:
    tol = mpmath.mpf(10) ** (-(config.BASE_PRECISION // 3))
    chords: List[Chord] = []
    line = start
    for _ in range(guard):
        clipped = _clip(model, line)
        if clipped is None:
            raise GeometryError("traced geodesic left the polygon")
        enter, t_in, exit_, t_out = clipped
        chords.append(Chord(enter, float(t_in), exit_, float(t_out)))
        line = _normalized(model.side_maps[exit_].T * line)
        if mpmath.norm(line - start) < tol:
            return chords, [c.exit for c in chords]
    raise GeometryError("geodesic trace did not close up")


def trace_flat_direction(p: int, q: int) -> Trace:
    """Straight line of direction (p, q) through the torus base point."""
    if (p, q) == (0, 0):
        raise TrivialCurveError()
    if math.gcd(p, q) != 1:
        raise ProperPowerError(f"({p},{q}) is not primitive")
    model = polygon_model(1, 0)
    with mpmath.workdps(model.dps):
        bx, by = (mpmath.mpf(x) for x in config.TORUS_BASE_POINT)
        line = _normalized(mpmath.matrix([-q, p, bx * q - by * p]))
        chords, _ = _follow(model, line, 4 * (abs(p) + abs(q)) + 8)
    return Trace(1, 0, tuple(chords), math.hypot(p, q))


def trace_word(genus: int, boundary: int, word: Sequence[int]) -> Trace:
    """
    Trace the closed geodesic freely homotopic to a side-exit word.

    Raises TrivialCurveError for null-homotopic and boundary-parallel
    words and ProperPowerError for proper powers.
    """
    base = polygon_model(genus, boundary)
    reduced = reduce_word(word, base.partner)
    if not reduced:
        raise TrivialCurveError()
    if base.kind == FLAT:
        p, q = torus_vector(reduced)
        return trace_flat_direction(p, q)

    dps = _precision_bucket(2.2 * len(reduced) * base.letter_digits)
    model = polygon_model(genus, boundary, dps)
    with mpmath.workdps(dps):
        g = _word_matrix(model, reduced)
        trace = g[0, 0] + g[1, 1] + g[2, 2]
        tol = mpmath.mpf(10) ** (-(config.BASE_PRECISION // 2))
        if mpmath.mnorm(g - mpmath.eye(3), 1) < tol:
            raise TrivialCurveError()
        if abs(trace - 3) < tol * max(1, abs(trace)):
            raise TrivialCurveError("trivial curve: boundary-parallel")
        if trace < 3:
            raise GeometryError(f"elliptic side-pairing product (trace {float(trace)})")
        start = _reduce_line(model, _axis(g))
        chords, exits = _follow(model, start, 8 * len(reduced) + 64)
        root = _word_matrix(model, exits)
        root_trace = root[0, 0] + root[1, 1] + root[2, 2]
        if trace - root_trace > tol * trace:
            raise ProperPowerError(f"word {list(reduced)} is a proper power")
        length = float(mpmath.acosh((trace - 1) / 2))
    logger.debug(f"Traced word of length {len(reduced)} into {len(chords)} chords at {dps} digits")
    return Trace(genus, boundary, tuple(chords), length)


def flat_exit_word(p: int, q: int) -> Tuple[int, ...]:
    """Exit word of the straight (p, q) line on the square (a Christoffel word)."""
    return trace_flat_direction(p, q).exits
