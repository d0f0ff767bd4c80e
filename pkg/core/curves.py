"""
Curves - isotopy classes of essential simple closed curves
Canonical forms, geometric intersection numbers, duality, separation,
minimal position and Dehn twists
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from core.arrangement import Arrangement, check_simple, count_crossings, cut_surface
from core.geometry import (
    Chord,
    Trace,
    flat_exit_word,
    homology_vector,
    polygon_model,
    torus_vector,
    trace_flat_direction,
    trace_word,
)
from core.surface_core import (
    CurveError,
    DomainMismatchError,
    HatcherError,
    ProperPowerError,
    Surface,
    TrivialCurveError,
    UnsupportedSurfaceError,
    build_surface,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def preset(genus: int, boundary: int) -> Surface:
    return build_surface(genus, boundary)


# ========== TYPES ==========

@dataclass(frozen=True)
class CurveEmbedding:
    """A closed curve drawn as straight chords in the model polygon."""
    trace: Trace
    surface_key: str = ""
    pushed: bool = False

    @property
    def steps(self) -> Tuple[Chord, ...]:
        return self.trace.chords

    @property
    def crossing_order(self) -> Dict[int, List[int]]:
        """For each polygon side, the chords meeting it in order along the side."""
        order: Dict[int, List[Tuple[float, int]]] = {}
        for h, c in enumerate(self.trace.chords):
            order.setdefault(c.enter, []).append((c.t_in, h))
            order.setdefault(c.exit, []).append((c.t_out, h))
        return {side: [h for _, h in sorted(items)] for side, items in sorted(order.items())}

    def to_dict(self) -> Dict[str, Any]:
        return {"surface": self.surface_key,
                "steps": [[c.enter, c.t_in, c.exit, c.t_out] for c in self.trace.chords]}


@dataclass(frozen=True)
class CurveClass:
    """
    Isotopy class of an essential simple closed curve.

    Identity is the canonical cutting sequence of the geodesic
    representative; the traced geodesic itself rides along uncompared.
    """
    surface_key: str
    canonical: Tuple[Tuple[int, int], ...]
    genus: int = field(compare=False)
    boundary: int = field(compare=False)
    trace: Trace = field(compare=False, repr=False)

    @property
    def word(self) -> Tuple[int, ...]:
        return self.trace.exits

    @property
    def embedding(self) -> Trace:
        return self.trace

    @property
    def size(self) -> int:
        return len(self.canonical)

    @property
    def sort_key(self) -> Tuple:
        return (len(self.canonical), self.canonical)

    @property
    def torus_pair(self) -> Optional[Tuple[int, int]]:
        if self.genus == 1 and self.boundary <= 1:
            return _primitive_sign(torus_vector(self.word))
        return None

    def __lt__(self, other: "CurveClass") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        pair = self.torus_pair
        if pair is not None:
            return f"({pair[0]},{pair[1]})"
        return "[" + ",".join(str(s) for s in self.word) + "]"

    def to_dict(self) -> Dict[str, Any]:
        data = {"surface": self.surface_key, "word": list(self.word),
                "canonical": [list(p) for p in self.canonical]}
        pair = self.torus_pair
        if pair is not None:
            data["pq"] = list(pair)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], surface: Surface) -> "CurveClass":
        curve = curve_from_word(surface, data["word"])
        if data.get("surface") and data["surface"] != curve.surface_key:
            raise DomainMismatchError(f"curve belongs to {data['surface']}, not {curve.surface_key}")
        return curve


@dataclass(frozen=True)
class TwistWord:
    """
    Product of Dehn twists, applied left to right: the first letter acts first.

    Each letter is (curve, +1) for a right-handed twist or (curve, -1)
    for its inverse. The empty word is the identity.
    """
    letters: Tuple[Tuple[CurveClass, int], ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -e) for c, e in reversed(self.letters)))

    def compose(self, other: "TwistWord") -> "TwistWord":
        """self after other."""
        return TwistWord(other.letters + self.letters)

    def to_dict(self) -> List[Dict[str, Any]]:
        return [{"curve": c.to_dict(), "exponent": e} for c, e in self.letters]

    def __str__(self) -> str:
        if not self.letters:
            return "id"
        return " ".join(f"t{c}" + ("" if e == 1 else "^-1") for c, e in self.letters)


@dataclass(frozen=True)
class ProperArc:
    """
    Essential arc on S cut along ``base``, running from one copy of the
    base curve to the other.

    Stored by a closure: a class dual to ``base`` whose part off a thin
    annulus around the base curve is the arc. Closures differing by
    twists about the base give the same arc.
    """
    base: CurveClass
    closure: CurveClass

    def to_dict(self) -> Dict[str, Any]:
        return {"base": self.base.to_dict(), "closure": self.closure.to_dict()}


def twist(curve: CurveClass, exponent: int = 1) -> TwistWord:
    """Single-letter word; |exponent| > 1 repeats the letter."""
    sign = 1 if exponent > 0 else -1
    return TwistWord(tuple((curve, sign) for _ in range(abs(exponent))))


# ========== CONSTRUCTION ==========

def _primitive_sign(pair: Tuple[int, int]) -> Tuple[int, int]:
    p, q = pair
    if p < 0 or (p == 0 and q < 0):
        return (-p, -q)
    return (p, q)


def canonical_form(trace: Trace) -> Tuple[Tuple[Tuple[int, int], ...], Trace]:
    """Least rotation or reflection of the (entry, exit) sequence, with the matching trace."""
    best = None
    for flipped, candidate in ((0, trace), (1, trace.reversed())):
        pairs = candidate.pairs
        for start in range(len(pairs)):
            key = pairs[start:] + pairs[:start]
            if best is None or (key, flipped, start) < best[:3]:
                best = (key, flipped, start, candidate)
    key, _, start, candidate = best
    return key, candidate.rotated(start)


def _class_from_trace(surface: Surface, trace: Trace) -> CurveClass:
    check_simple(trace)
    canonical, oriented = canonical_form(trace)
    return CurveClass(surface.key, canonical, surface.genus, surface.boundary_count, oriented)


@lru_cache(maxsize=65536)
def _curve_from_reduced(genus: int, boundary: int, word: Tuple[int, ...]) -> CurveClass:
    surface = preset(genus, boundary)
    return _class_from_trace(surface, trace_word(genus, boundary, word))


def curve_from_word(surface: Surface, word: Sequence[int]) -> CurveClass:
    """
    Class of the closed curve crossing the polygon sides in the order given.

    Raises TrivialCurveError, ProperPowerError or NonSimpleCurveError when
    the word does not name an essential simple closed curve.
    """
    n = polygon_model(surface.genus, surface.boundary_count).n
    bad = [s for s in word if not 0 <= int(s) < n]
    if bad:
        raise CurveError(f"sides {bad} do not exist on a {n}-gon")
    return _curve_from_reduced(surface.genus, surface.boundary_count, tuple(int(s) for s in word))


def torus_curve(surface: Surface, p: int, q: int) -> CurveClass:
    """Class with homology (p, q) on a genus-1 preset with at most one boundary circle."""
    if surface.genus != 1 or surface.boundary_count > 1:
        raise UnsupportedSurfaceError("torus coordinates need genus 1 and at most one boundary circle")
    if math.gcd(p, q) != 1:
        raise ProperPowerError(f"({p},{q}) is not primitive")
    if surface.boundary_count == 0:
        return _class_from_trace(surface, trace_flat_direction(p, q))
    return curve_from_word(surface, flat_exit_word(p, q))


def curve_from_embedding(surface: Surface, embedding: CurveEmbedding) -> CurveClass:
    return curve_from_word(surface, embedding.trace.exits)


def standard_curves(surface: Surface) -> Dict[str, CurveClass]:
    """a_i and b_i for each handle: single crossings of sides 4i+1 and 4i."""
    curves = {}
    for i in range(surface.genus):
        curves[f"a{i + 1}"] = curve_from_word(surface, [4 * i + 1])
        curves[f"b{i + 1}"] = curve_from_word(surface, [4 * i])
    return curves


def _connector(surface: Surface, i: int) -> CurveClass:
    """
    Curve joining a_(i+1) and a_(i+2), homologous to their sum.

    Interior connectors reach a_(i+2) through its cap (sides 4i+6, 4i+4) so
    the next connector can meet a_(i+2) from the other side; the last one
    bands both handles across side 4i+4.
    """
    if i == surface.genus - 2:
        return curve_from_word(surface, [4 * (i + 1) + 1, 4 * i + 1])
    return curve_from_word(surface, [4 * i + 1, 4 * i + 4, 4 * i + 5, 4 * i + 6])


def chain_pattern_defects(chain: Sequence[CurveClass]) -> List[Tuple[int, int, int]]:
    """(i, j, crossings) for every pair breaking i(c_i, c_(i+1)) = 1 and 0 elsewhere."""
    defects = []
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            expected = 1 if j == i + 1 else 0
            found = intersection_number(chain[i], chain[j])
            if found != expected:
                defects.append((i, j, found))
    return defects


@lru_cache(maxsize=64)
def _chain(genus: int, boundary: int) -> Tuple[CurveClass, ...]:
    surface = preset(genus, boundary)
    std = standard_curves(surface)
    if genus == 1:
        return (std["a1"], std["b1"])
    chain = [std["a1"], std["b1"]]
    for i in range(genus - 1):
        chain.append(_connector(surface, i))
        chain.append(std[f"b{i + 2}"])
    chain.append(std[f"a{genus}"])
    defects = chain_pattern_defects(chain)
    if defects:
        raise CurveError(f"standard chain on genus {genus} breaks the chain pattern at {defects}")
    return tuple(chain)


def chain_curves(surface: Surface) -> List[CurveClass]:
    """Maximal chain a1, b1, x1, b2, ..., b_g, a_g; x_i = a_i + a_(i+1) joins neighbouring handles."""
    return list(_chain(surface.genus, surface.boundary_count))


def require_same_surface(*curves: CurveClass) -> None:
    keys = {c.surface_key for c in curves}
    if len(keys) > 1:
        raise DomainMismatchError(f"curves live on different surfaces: {sorted(keys)}")


def require_essential(surface: Surface, c) -> None:
    if not isinstance(c, CurveClass):
        raise TrivialCurveError("trivial curve: not an essential class")
    if c.surface_key != surface.key:
        raise DomainMismatchError(f"curve belongs to {c.surface_key}, not {surface.key}")


# ========== INVARIANTS ==========

@lru_cache(maxsize=262144)
def _crossings(a: CurveClass, b: CurveClass) -> int:
    if a == b:
        return 0
    return count_crossings(a.trace, b.trace)


def intersection_number(a: CurveClass, b: CurveClass) -> int:
    """Geometric intersection number: crossings of the two geodesic representatives."""
    require_same_surface(a, b)
    first, second = (a, b) if a.sort_key <= b.sort_key else (b, a)
    return _crossings(first, second)


def is_dual(a: CurveClass, b: CurveClass) -> bool:
    return intersection_number(a, b) == 1


@lru_cache(maxsize=65536)
def is_nonseparating(a: CurveClass) -> bool:
    """True when cutting along the curve leaves one piece."""
    return len(cut_surface(preset(a.genus, a.boundary), [a.trace]).pieces) == 1


def homology_class(a: CurveClass) -> Tuple[int, ...]:
    return homology_vector(a.genus, a.boundary, a.word)


def algebraic_intersection(a: CurveClass, b: CurveClass) -> Optional[int]:
    """
    |algebraic intersection| of two classes, a lower bound for i(a, b).

    Defined on presets with at most one boundary circle, where first
    homology is spanned by the handle sides; None elsewhere.
    """
    require_same_surface(a, b)
    if a.boundary > 1:
        return None
    ha, hb = homology_class(a), homology_class(b)
    total = 0
    for i in range(a.genus):
        total += ha[2 * i] * hb[2 * i + 1] - ha[2 * i + 1] * hb[2 * i]
    return abs(total)


def torus_coordinates(a: CurveClass) -> Tuple[int, int]:
    """Primitive pair (p, q), sign normalized, of a class on a genus-1 preset."""
    if a.genus != 1 or a.boundary > 1:
        raise UnsupportedSurfaceError("torus coordinates need genus 1 and at most one boundary circle")
    if not is_nonseparating(a):
        raise CurveError(f"{a} is separating")
    return a.torus_pair


def separating_pieces(a: CurveClass) -> List[Tuple[int, int]]:
    """(genus, boundary) of each piece of the surface cut along ``a``."""
    cut = cut_surface(preset(a.genus, a.boundary), [a.trace])
    return sorted((p.genus, p.boundary_count) for p in cut.pieces)


def same_side(c: CurveClass, a: CurveClass, b: CurveClass) -> bool:
    """Whether curves a and b, both disjoint from c, lie in the same piece of S cut along c."""
    cut = Arrangement([c.trace, a.trace, b.trace]).cut()
    return cut.curve_component(1) == cut.curve_component(2)


def is_isotopic(a: CurveClass, b: CurveClass) -> bool:
    """
    Canonical-form equality cross-checked by the annulus test.

    Two disjoint curves are isotopic exactly when one component of the
    complement of their union is an annulus bounded by one copy of each.
    """
    require_same_surface(a, b)
    if a != b and intersection_number(a, b) != 0:
        return False
    cut = Arrangement([a.trace, b.trace], pushed=[1]).cut()
    annulus = False
    for piece in cut.pieces:
        if (piece.genus, piece.boundary_count) != (0, 2):
            continue
        owners = set()
        for cycle in cut.surface.boundary_cycles:
            if cycle[0] in piece.darts:
                owners.add(tuple(sorted(set(cut.cycle_curves(cycle)), key=str)))
        if owners == {(0,), (1,)}:
            annulus = True
    if annulus != (a == b):
        raise HatcherError(f"normal form disagrees with the annulus test for {a} and {b}")
    return annulus


# ========== MINIMAL POSITION ==========

def embedding_crossings(a: CurveEmbedding, b: CurveEmbedding) -> int:
    return _embedding_arrangement(a, b).crossing_count(0, 1)


def count_bigons(a: CurveEmbedding, b: CurveEmbedding) -> int:
    """Disk regions of the complement bounded by one arc of each curve."""
    return len(_embedding_arrangement(a, b).cut().bigons())


def _embedding_arrangement(a: CurveEmbedding, b: CurveEmbedding) -> Arrangement:
    pushed = [i for i, e in enumerate((a, b)) if e.pushed]
    return Arrangement([a.trace, b.trace], pushed=pushed, strict=not pushed)


def tighten(a: CurveEmbedding, b: CurveEmbedding,
            surface: Optional[Surface] = None) -> Tuple[CurveEmbedding, CurveEmbedding]:
    """
    Isotope a pair of curves into minimal position.

    Both curves are replaced by their geodesics (the second pushed off
    shared points), which bound no bigons. Raises GeneralPositionError
    when the input curves touch without crossing.
    """
    _embedding_arrangement(a, b)
    genus, boundary = a.trace.genus, a.trace.boundary
    surface = surface or preset(genus, boundary)
    ca = curve_from_embedding(surface, a)
    cb = curve_from_embedding(surface, b)
    out_a = CurveEmbedding(ca.trace, surface.key)
    out_b = CurveEmbedding(cb.trace, surface.key, pushed=True)
    logger.debug(f"Tightened pair {ca}, {cb}: {embedding_crossings(a, b)} -> "
                 f"{intersection_number(ca, cb)} crossings")
    return out_a, out_b


# ========== DEHN TWISTS ==========

def _twist_once(c: CurveClass, b: CurveClass, sign: int) -> CurveClass:
    if c == b or intersection_number(c, b) == 0:
        return b
    arr = Arrangement([c.trace, b.trace], pushed=[1])
    loop_len = len(c.trace.chords)
    word: List[int] = []
    for h, chord in enumerate(b.trace.chords):
        for cid in arr.chord_events(1, h):
            _, i = arr.other(arr.crossings[cid], (1, h))
            c_out = arr.pos[(0, i, True)]
            p_in, p_out = arr.endpoint_positions(1, h)
            on_right = arr.in_arc(c_out, p_in, p_out)
            if on_right == (sign > 0):
                word.extend(c.trace.chords[(i + k) % loop_len].exit for k in range(loop_len))
            else:
                word.extend(c.trace.chords[(i - k) % loop_len].enter for k in range(loop_len))
        word.append(chord.exit)
    return _curve_from_reduced(b.genus, b.boundary, tuple(word))


@lru_cache(maxsize=262144)
def _twist_cached(c: CurveClass, b: CurveClass, sign: int) -> CurveClass:
    return _twist_once(c, b, sign)


def dehn_twist(w: TwistWord, b: CurveClass) -> CurveClass:
    """Image of ``b`` under the twist word; right-handed letters turn right onto the twist curve."""
    for c, sign in w.letters:
        require_same_surface(c, b)
        b = _twist_cached(c, b, sign)
    return b


def twist_images(word: TwistWord, curves: Iterable[CurveClass]) -> List[CurveClass]:
    return [dehn_twist(word, c) for c in curves]


# ========== NEIGHBORHOODS ==========

def neighborhood_boundary(curves: Sequence[CurveClass]) -> List[CurveClass]:
    """Essential boundary classes of a regular neighborhood of a union of curves."""
    require_same_surface(*curves)
    genus, boundary = curves[0].genus, curves[0].boundary
    surface = preset(genus, boundary)
    levels = {i: i + 1 for i in range(len(curves))}
    cut = Arrangement([c.trace for c in curves], pushed=levels).cut()
    found: List[CurveClass] = []
    for cycle in cut.surface.boundary_cycles:
        if None in cut.cycle_curves(cycle):
            continue
        word = cut.boundary_word(cycle)
        try:
            cls_ = curve_from_word(surface, word)
        except (TrivialCurveError, ProperPowerError):
            continue
        if cls_ not in found:
            found.append(cls_)
    return sorted(found)
