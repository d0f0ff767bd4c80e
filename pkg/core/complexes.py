"""
Complexes - bounded balls in HT(S), G(S), N(S), C(S) and X_C
Cut systems, elementary moves, ball generation, 2-cell detection and export
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

import config
from core.arrangement import cut_surface
from core.curves import (
    CurveClass,
    TwistWord,
    algebraic_intersection,
    chain_curves,
    dehn_twist,
    intersection_number,
    is_dual,
    is_nonseparating,
    neighborhood_boundary,
    preset,
    torus_curve,
)
from core.surface_core import CurveError, DomainMismatchError, HatcherError, Surface, build_surface

logger = logging.getLogger(__name__)

HT, G, N, C, XC = "HT", "G", "N", "C", "XC"
KINDS = (HT, G, N, C, XC)
CELL_LABELS = ("triangle", "rectangle", "pentagon")
BALL_FORMAT = "hatcher-ball"


class CutSystemError(HatcherError, ValueError):
    """A curve set that is not a cut system; ``condition`` names the first failed check."""

    def __init__(self, condition: str, message: str = ""):
        self.condition = condition
        super().__init__(message or condition)

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "condition": self.condition, "message": str(self)}


class BallError(HatcherError, ValueError):
    """Invalid seed, kind or document for a ball."""


# ========== CUT SYSTEMS ==========

@dataclass(frozen=True)
class CutSystem:
    """g pairwise disjoint nonseparating classes with connected complement."""
    classes: Tuple[CurveClass, ...]

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, c: CurveClass) -> bool:
        return c in self.classes

    @property
    def surface_key(self) -> str:
        return self.classes[0].surface_key

    @property
    def sort_key(self) -> Tuple:
        return tuple(c.sort_key for c in self.classes)

    def __lt__(self, other: "CutSystem") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return "<" + ", ".join(str(c) for c in self.classes) + ">"

    def to_dict(self) -> Dict[str, Any]:
        return {"classes": [c.to_dict() for c in self.classes]}


def _system(curves: Iterable[CurveClass]) -> CutSystem:
    return CutSystem(tuple(sorted(curves)))


@lru_cache(maxsize=65536)
def _validated(classes: Tuple[CurveClass, ...]) -> CutSystem:
    first = classes[0]
    surface = preset(first.genus, first.boundary)
    if len(set(classes)) != len(classes):
        raise CutSystemError("duplicate", "cut system repeats a class")
    for c in classes:
        if not is_nonseparating(c):
            raise CutSystemError("separating member", f"{c} is separating")
    for a, b in combinations(classes, 2):
        if intersection_number(a, b):
            raise CutSystemError("pairwise intersection", f"{a} and {b} intersect")
    cut = cut_surface(surface, [c.trace for c in classes])
    expected = (0, 2 * surface.genus + surface.boundary_count)
    if len(cut.pieces) != 1 or (cut.pieces[0].genus, cut.pieces[0].boundary_count) != expected:
        raise CutSystemError("disconnected complement",
                             f"complement is {[(p.genus, p.boundary_count) for p in cut.pieces]}")
    return CutSystem(classes)


def validate_cut_system(s: Surface, curves: Iterable[CurveClass]) -> CutSystem:
    """
    Check the cut-system conditions in order: count, duplicate, separating
    member, pairwise intersection, disconnected complement.

    Raises CutSystemError naming the first condition that fails.
    """
    curves = list(curves)
    if len(curves) != s.genus:
        raise CutSystemError("count", f"expected {s.genus} curves, got {len(curves)}")
    for c in curves:
        if c.surface_key != s.key:
            raise DomainMismatchError(f"{c} does not live on {s.key}")
    return _validated(tuple(sorted(curves)))


def is_elementary_move(v: CutSystem, w: CutSystem) -> Optional[Tuple[CurveClass, CurveClass]]:
    """The dual pair (c, d) with v - {c} = w - {d}, or None."""
    only_v = [c for c in v if c not in w]
    only_w = [d for d in w if d not in v]
    if len(only_v) != 1 or len(only_w) != 1:
        return None
    c, d = only_v[0], only_w[0]
    if intersection_number(c, d) != 1:
        return None
    return (c, d)


# ========== BALLS ==========

Payload = Union[CurveClass, CutSystem]


@dataclass(frozen=True)
class Cell:
    label: str
    vertices: Tuple[int, ...]  # cyclic order, indices into the ball's vertex list
    classes: Tuple[CurveClass, ...]  # moving classes

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "vertices": list(self.vertices),
                "classes": [c.to_dict() for c in self.classes]}


@dataclass(frozen=True)
class ComplexBall:
    """
    A finite truncation of one of the complexes.

    Vertices are sorted by canonical order; edges and cells refer to
    vertex indices. Frontier vertices carry no neighborhood guarantee.
    """
    kind: str
    surface: Surface
    vertices: Tuple[Payload, ...]
    edges: Tuple[Tuple[int, int], ...]
    cells: Tuple[Cell, ...] = ()
    frontier: frozenset = frozenset()
    bounds: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)
    base: Optional[CurveClass] = None
    ambiguous: Tuple[Tuple[int, ...], ...] = ()

    @cached_property
    def index(self) -> Dict[Payload, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges)
        return g

    @property
    def core(self) -> List[Payload]:
        return [v for i, v in enumerate(self.vertices) if i not in self.frontier]

    def curves(self) -> List[CurveClass]:
        """Every class appearing in a vertex payload."""
        if self.kind != HT:
            return list(self.vertices)
        return sorted({c for v in self.vertices for c in v})

    def has_edge(self, a: Payload, b: Payload) -> bool:
        idx = self.index
        if a not in idx or b not in idx:
            return False
        return self.graph.has_edge(idx[a], idx[b])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": BALL_FORMAT,
            "engine_version": config.ENGINE_VERSION,
            "kind": self.kind,
            "surface": {"genus": self.surface.genus, "boundary": self.surface.boundary_count,
                        "hash": self.surface.surface_hash},
            "bounds": dict(self.bounds),
            "base": self.base.to_dict() if self.base is not None else None,
            "vertices": [v.to_dict() for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "cells": [c.to_dict() for c in self.cells],
            "frontier": sorted(self.frontier),
            "ambiguous": [list(a) for a in self.ambiguous],
        }


def _edge_predicate(kind: str, base: Optional[CurveClass]):
    if kind == HT:
        return lambda v, w: is_elementary_move(v, w) is not None
    if kind == G:
        return lambda a, b: _quick_rule_out(a, b, 1) and intersection_number(a, b) == 1
    if kind in (N, C):
        return lambda a, b: _quick_rule_out(a, b, 0) and intersection_number(a, b) == 0
    return lambda a, b: _quick_rule_out(a, b, 1) and is_dual(a, b)


def _quick_rule_out(a: CurveClass, b: CurveClass, target: int) -> bool:
    """False when homology already forces i(a, b) > target."""
    if a == b:
        return False
    bound = algebraic_intersection(a, b)
    return bound is None or bound <= target


def _check_vertex(kind: str, v: Payload, base: Optional[CurveClass], surface: Surface) -> None:
    if kind == HT:
        if not isinstance(v, CutSystem):
            raise BallError("seed invalid for kind HT: expected a cut system")
        validate_cut_system(surface, v.classes)
        return
    if not isinstance(v, CurveClass) or v.surface_key != surface.key:
        raise BallError(f"seed invalid for kind {kind}: expected a curve on {surface.key}")
    if kind in (G, N, XC) and not is_nonseparating(v):
        raise BallError(f"seed invalid for kind {kind}: {v} is separating")
    if kind == XC and (base is None or not is_dual(v, base)):
        raise BallError(f"seed invalid for kind XC: {v} is not dual to the base curve")


def _is_torus(surface: Surface) -> bool:
    return surface.genus == 1 and surface.boundary_count <= 1


def primitive_pairs(height: int) -> List[Tuple[int, int]]:
    """Sign-normalized primitive pairs with max(|p|, |q|) <= height."""
    pairs = []
    for p in range(0, height + 1):
        for q in range(-height, height + 1):
            if (p == 0 and q <= 0) or math.gcd(p, q) != 1:
                continue
            pairs.append((p, q))
    return pairs


def farey_neighbors(p: int, q: int, height: int) -> List[Tuple[int, int]]:
    """Determinant oracle: primitive pairs within height with |pq' - qp'| = 1."""
    return [(a, b) for a, b in primitive_pairs(height) if abs(p * b - q * a) == 1]


def _twist_words(generators: Sequence[CurveClass], length: int) -> List[TwistWord]:
    letters = [(c, e) for c in generators for e in (1, -1)]
    words = [TwistWord()]
    layer = [TwistWord()]
    for _ in range(length):
        nxt = []
        for w in layer:
            for letter in letters:
                if w.letters and w.letters[-1] == (letter[0], -letter[1]):
                    continue
                nxt.append(TwistWord(w.letters + (letter,)))
        words.extend(nxt)
        layer = nxt
    return words


def _separating_sources(surface: Surface) -> List[CurveClass]:
    """Boundaries of neighborhoods of the even chain prefixes c1..c2k, 0 < k < genus."""
    chain = chain_curves(surface)
    found: List[CurveClass] = []
    for k in range(2, 2 * surface.genus - 1, 2):
        for c in neighborhood_boundary(chain[:k]):
            if not is_nonseparating(c) and c not in found:
                found.append(c)
    return found


class _Generator:
    """Neighbor candidates for one ball build."""

    def __init__(self, kind: str, surface: Surface, base: Optional[CurveClass],
                 complexity_bound: int, word_length: int):
        self.kind = kind
        self.surface = surface
        self.base = base
        self.bound = complexity_bound
        self.predicate = _edge_predicate(kind, base)
        if _is_torus(surface):
            curves = [torus_curve(surface, p, q) for p, q in primitive_pairs(complexity_bound)]
            self.pool: Optional[List[CurveClass]] = sorted(curves)
            self.words: List[TwistWord] = []
            self.generators: List[CurveClass] = []
        else:
            self.pool = None
            gens = list(dict.fromkeys(chain_curves(surface) + ([base] if base is not None else [])))
            self.generators = gens
            self.words = _twist_words(gens, word_length)
        self.separating: List[CurveClass] = []
        if kind == C and self.pool is None:
            self.separating = [c for c in _separating_sources(surface) if c.size <= complexity_bound]

    def curve_candidates(self, x: CurveClass) -> List[CurveClass]:
        if self.pool is not None:
            return self.pool
        found = set()
        for source in [x] + self.generators + self.separating:
            for w in self.words:
                image = dehn_twist(w, source)
                if image.size <= self.bound:
                    found.add(image)
        return sorted(found)

    def admissible(self, c: CurveClass) -> bool:
        if c.size > self.bound and self.pool is None:
            return False
        if self.kind in (G, N, XC, HT) and not is_nonseparating(c):
            return False
        if self.kind == XC and not is_dual(c, self.base):
            return False
        return True

    def neighbors(self, v: Payload) -> List[Payload]:
        if self.kind != HT:
            return [c for c in self.curve_candidates(v) if self.admissible(c) and self.predicate(v, c)]
        found = set()
        for c in v:
            rest = [x for x in v if x != c]
            for d in self.curve_candidates(c):
                if d in v or not self.admissible(d) or intersection_number(c, d) != 1:
                    continue
                if any(intersection_number(d, x) for x in rest):
                    continue
                try:
                    found.add(validate_cut_system(self.surface, rest + [d]))
                except CutSystemError:
                    continue
        return sorted(found)


def _assemble(kind: str, surface: Surface, vertices: Iterable[Payload], frontier: Set[Payload],
              bounds: Dict[str, Any], base: Optional[CurveClass]) -> ComplexBall:
    ordered = sorted(set(vertices))
    predicate = _edge_predicate(kind, base)
    edges = [(i, j) for i, j in combinations(range(len(ordered)), 2) if predicate(ordered[i], ordered[j])]
    idx = {v: i for i, v in enumerate(ordered)}
    return ComplexBall(kind, surface, tuple(ordered), tuple(edges),
                       frontier=frozenset(idx[v] for v in frontier), bounds=bounds, base=base)


def build_ball(kind: str, surface: Surface, seed: Payload, depth: int = config.DEFAULT_DEPTH,
               complexity_bound: Optional[int] = None, word_length: int = config.TWIST_WORD_LENGTH,
               base: Optional[CurveClass] = None) -> ComplexBall:
    """
    Breadth-first ball of the given depth around ``seed``.

    On genus-1 presets with at most one boundary circle neighbors are all
    classes of height <= complexity_bound; elsewhere they are twist images
    (words of length <= word_length over the chain curves) of canonical
    size <= complexity_bound. The last layer is the frontier.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise BallError(f"unknown kind {kind}")
    if depth < 0:
        raise BallError("depth must be nonnegative")
    if complexity_bound is None:
        complexity_bound = config.DEFAULT_TORUS_HEIGHT if _is_torus(surface) else config.DEFAULT_COMPLEXITY_BOUND
    _check_vertex(kind, seed, base, surface)

    gen = _Generator(kind, surface, base, complexity_bound, word_length)
    seen: Set[Payload] = {seed}
    layer = [seed]
    for step in range(depth):
        nxt = []
        for v in layer:
            for w in gen.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        layer = sorted(nxt)
        logger.debug(f"{kind} ball layer {step + 1}: {len(layer)} new vertices")
    bounds = {"depth": depth, "complexity_bound": complexity_bound,
              "word_length": 0 if _is_torus(surface) else word_length,
              "torus_height": complexity_bound if _is_torus(surface) else None}
    ball = _assemble(kind, surface, seen, set(layer), bounds, base)
    logger.info(f"Built {kind} ball on {surface.key}: {len(ball.vertices)} vertices, "
                f"{len(ball.edges)} edges, {len(ball.frontier)} frontier")
    return ball


def ball_from_vertices(kind: str, surface: Surface, vertices: Iterable[Payload],
                       base: Optional[CurveClass] = None, frontier: Iterable[Payload] = ()) -> ComplexBall:
    """Ball spanned by explicit payloads with every edge among them."""
    kind = kind.upper()
    if kind not in KINDS:
        raise BallError(f"unknown kind {kind}")
    vertices = list(vertices)
    for v in vertices:
        _check_vertex(kind, v, base, surface)
    return _assemble(kind, surface, vertices, set(frontier), {"explicit": True}, base)


# ========== CELLS ==========

def _normalize_cycle(cycle: Sequence[int]) -> Tuple[int, ...]:
    k = cycle.index(min(cycle))
    rotated = list(cycle[k:]) + list(cycle[:k])
    if rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[1:][::-1]
    return tuple(rotated)


def _triangle(systems: List[CutSystem], genus: int) -> Optional[Tuple[CurveClass, ...]]:
    common = set(systems[0]).intersection(*systems[1:])
    if len(common) != genus - 1:
        return None
    moving = [next(c for c in v if c not in common) for v in systems]
    if len(set(moving)) != 3 or not all(is_dual(a, b) for a, b in combinations(moving, 2)):
        return None
    return tuple(moving)


def _rectangle_splits(systems: List[CutSystem], genus: int) -> List[Tuple[CurveClass, ...]]:
    common = set(systems[0]).intersection(*systems[1:])
    if genus < 2 or len(common) != genus - 2:
        return []
    parts = [frozenset(c for c in v if c not in common) for v in systems]
    moving = sorted(set().union(*parts))
    if len(moving) != 4 or any(len(p) != 2 for p in parts):
        return []
    found = []
    a = moving[0]
    for b in moving[1:]:
        pair1 = {a, b}
        pair2 = set(moving) - pair1
        c2, d2 = sorted(pair2)
        # each vertex takes one class of each move pair
        if any(len(p & pair1) != 1 or len(p & pair2) != 1 for p in parts):
            continue
        if intersection_number(a, b) != 1 or intersection_number(c2, d2) != 1:
            continue
        if any(intersection_number(x, y) for x in pair1 for y in pair2):
            continue
        found.append((a, b, c2, d2))
    return found


def _pentagon(systems: List[CutSystem], genus: int) -> Optional[Tuple[CurveClass, ...]]:
    common = set(systems[0]).intersection(*systems[1:])
    if genus < 2 or len(common) != genus - 2:
        return None
    parts = [frozenset(c for c in v if c not in common) for v in systems]
    moving = sorted(set().union(*parts))
    if len(moving) != 5 or any(len(p) != 2 for p in parts):
        return None
    duality = nx.Graph()
    duality.add_nodes_from(moving)
    for x, y in combinations(moving, 2):
        k = intersection_number(x, y)
        if k == 1:
            duality.add_edge(x, y)
        elif k != 0:
            return None
    if duality.number_of_edges() != 5 or any(d != 2 for _, d in duality.degree()) \
            or not nx.is_connected(duality):
        return None
    if any(duality.has_edge(*sorted(p)) for p in parts):
        return None
    order = [moving[0]]
    while len(order) < 5:
        order.append(next(x for x in sorted(duality[order[-1]]) if x not in order))
    return tuple(order)


def detect_cells(ball: ComplexBall) -> ComplexBall:
    """
    Annotate every triangle, rectangle and pentagon of an HT ball.

    Every vertex cycle of length 3, 4 or 5 is tested against its
    intersection pattern; 4-cycles matched by more than one pattern are
    recorded in ``ambiguous``.
    """
    if ball.kind != HT:
        raise BallError("cells exist only in HT balls")
    genus = ball.surface.genus
    cells: List[Cell] = []
    ambiguous: List[Tuple[int, ...]] = []
    seen = set()
    for cycle in nx.simple_cycles(ball.graph, length_bound=5):
        key = _normalize_cycle(cycle)
        if len(key) < 3 or key in seen:
            continue
        seen.add(key)
        systems = [ball.vertices[i] for i in key]
        if len(key) == 3:
            moving = _triangle(systems, genus)
            if moving is not None:
                cells.append(Cell("triangle", key, moving))
        elif len(key) == 4:
            splits = _rectangle_splits(systems, genus)
            if splits:
                cells.append(Cell("rectangle", key, splits[0]))
            if len(splits) > 1:
                ambiguous.append(key)
        else:
            moving = _pentagon(systems, genus)
            if moving is not None:
                cells.append(Cell("pentagon", key, moving))
    cells.sort(key=lambda c: (CELL_LABELS.index(c.label), c.vertices))
    counts = {label: sum(1 for c in cells if c.label == label) for label in CELL_LABELS}
    logger.info(f"Detected cells {counts}; {len(ambiguous)} ambiguous 4-cycles")
    if ambiguous:
        logger.warning(f"{len(ambiguous)} 4-cycles match more than one rectangle pattern")
    return replace(ball, cells=tuple(cells), ambiguous=tuple(sorted(ambiguous)))


# ========== EXPORT ==========

def export_ball(ball: ComplexBall, fmt: str = "json") -> str:
    """DOT or JSON text, byte-stable for a fixed ball."""
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps(ball.to_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "dot":
        lines = [f"graph {ball.kind.lower()}_ball {{",
                 f"  // surface {ball.surface.key} bounds {json.dumps(ball.bounds, sort_keys=True)}"]
        for i, v in enumerate(ball.vertices):
            shape = ", style=dashed" if i in ball.frontier else ""
            label = str(v).replace('"', "'")
            lines.append(f'  v{i} [label="{label}"{shape}];')
        for i, j in ball.edges:
            lines.append(f"  v{i} -- v{j};")
        for cell in ball.cells:
            lines.append(f"  // {cell.label}: " + " ".join(f"v{i}" for i in cell.vertices))
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise BallError(f"unknown format {fmt}")


def _payload_from_dict(kind: str, data: Dict[str, Any], surface: Surface) -> Payload:
    if kind == HT:
        return _system(CurveClass.from_dict(c, surface) for c in data["classes"])
    return CurveClass.from_dict(data, surface)


def load_ball(document: Union[str, Dict[str, Any]]) -> ComplexBall:
    """Rebuild a ball from its JSON document."""
    data = json.loads(document) if isinstance(document, str) else document
    if data.get("format") != BALL_FORMAT:
        raise BallError("not a ball document")
    info = data["surface"]
    surface = build_surface(info["genus"], info["boundary"])
    if surface.surface_hash != info["hash"]:
        raise BallError("surface hash does not match the preset")
    kind = data["kind"]
    try:
        vertices = tuple(_payload_from_dict(kind, v, surface) for v in data["vertices"])
        base = CurveClass.from_dict(data["base"], surface) if data.get("base") else None
        cells = tuple(Cell(c["label"], tuple(c["vertices"]),
                           tuple(CurveClass.from_dict(x, surface) for x in c["classes"]))
                      for c in data["cells"])
    except (KeyError, CurveError) as e:
        raise BallError(f"malformed ball document: {e}") from e
    return ComplexBall(kind, surface, vertices, tuple(tuple(e) for e in data["edges"]), cells,
                       frozenset(data["frontier"]), data.get("bounds", {}), base,
                       tuple(tuple(a) for a in data.get("ambiguous", [])))
