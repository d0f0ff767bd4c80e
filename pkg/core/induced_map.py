"""
Induced Map - curve maps induced by automorphisms of HT balls
Builds f~ from single-class differences of adjacent cut systems and checks
its well-definedness, duality, composition, disjointness and the
separating-curve extension
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

import config
from core.arrangement import cut_surface
from core.complexes import (
    HT,
    ComplexBall,
    CutSystem,
    CutSystemError,
    _pentagon,
    _rectangle_splits,
    _triangle,
    ball_from_vertices,
    is_elementary_move,
    validate_cut_system,
)
from core.curves import (
    CurveClass,
    TwistWord,
    chain_curves,
    chain_pattern_defects,
    dehn_twist,
    intersection_number,
    is_dual,
    is_nonseparating,
    neighborhood_boundary,
    preset,
    separating_pieces,
    torus_curve,
    twist,
)
from core.surface_core import CurveError, HatcherError, Surface, UnsupportedSurfaceError

logger = logging.getLogger(__name__)

TWIST_WORD = "twist-word"
ABSTRACT_TABLE = "abstract table"


class BallTooSmallError(HatcherError):
    """A vertex image left the declared enlargement of the ball."""

    def __init__(self, vertex, message: str = ""):
        self.vertex = vertex
        super().__init__(message or f"ball too small: image of {vertex} escapes the enlargement")

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), "vertex": str(self.vertex)}


class InsufficientBallError(HatcherError):
    """No admissible witness inside the ball."""


class NotAnAutomorphismError(HatcherError):
    """A vertex map that breaks edges, cells or single-class differences."""


# ========== AUTOMORPHISMS ==========

def _image_system(word: TwistWord, v: CutSystem) -> CutSystem:
    first = v.classes[0]
    surface = preset(first.genus, first.boundary)
    try:
        return validate_cut_system(surface, [dehn_twist(word, c) for c in v])
    except CutSystemError as e:
        raise NotAnAutomorphismError(f"image of {v} is not a cut system: {e}") from e


@dataclass
class BallAutomorphism:
    """
    Vertex bijection of an HT ball onto its image.

    Twist-word automorphisms are defined on every cut system; abstract
    tables only on the ball's vertices.
    """
    source: ComplexBall
    vertex_map: Dict[CutSystem, CutSystem]
    provenance: str
    word: Optional[TwistWord] = None

    def __call__(self, v: CutSystem) -> CutSystem:
        if v in self.vertex_map:
            return self.vertex_map[v]
        if self.word is not None:
            image = _image_system(self.word, v)
            self.vertex_map[v] = image
            return image
        raise InsufficientBallError(f"{v} is outside the automorphism's ball")

    @property
    def is_identity(self) -> bool:
        return all(k == v for k, v in self.vertex_map.items())

    def on_ball(self, ball: ComplexBall) -> "BallAutomorphism":
        """The same twist word acting on another ball."""
        if self.word is None:
            raise InsufficientBallError("an abstract table cannot move to another ball")
        return automorphism_from_twist_word(self.word, ball)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": self.provenance,
            "word": str(self.word) if self.word is not None else None,
            "vertex_map": [[str(k), str(v)] for k, v in sorted(self.vertex_map.items())
                           if k in self.source.index],
        }


def _enlargement_limit(ball: ComplexBall, factor: int) -> Tuple[str, int]:
    curves = ball.curves()
    if ball.surface.genus == 1 and ball.surface.boundary_count <= 1:
        height = max((max(abs(x) for x in c.torus_pair) for c in curves), default=1)
        return "height", factor * max(height, 1)
    size = ball.bounds.get("complexity_bound") or max((c.size for c in curves), default=1)
    return "size", factor * size


def _within(c: CurveClass, limit: Tuple[str, int]) -> bool:
    kind, value = limit
    if kind == "height":
        return max(abs(x) for x in c.torus_pair) <= value
    return c.size <= value


def _check_structure(f: BallAutomorphism) -> None:
    """Edges and non-edges among core vertices, injectivity, and cell labels."""
    ball = f.source
    core = [i for i in range(len(ball.vertices)) if i not in ball.frontier]
    images = [f(v) for v in ball.vertices]
    if len(set(images)) != len(images):
        raise NotAnAutomorphismError("vertex map is not injective")
    g = ball.graph
    for i, j in combinations(core, 2):
        moved = is_elementary_move(images[i], images[j]) is not None
        if moved != g.has_edge(i, j):
            raise NotAnAutomorphismError(
                f"edge relation between {ball.vertices[i]} and {ball.vertices[j]} not preserved")
    for i, j in ball.edges:
        pair = is_elementary_move(images[i], images[j])
        if pair is None:
            raise NotAnAutomorphismError(f"edge {ball.vertices[i]} -- {ball.vertices[j]} not preserved")
    genus = ball.surface.genus
    for cell in ball.cells:
        systems = [images[i] for i in cell.vertices]
        if cell.label == "triangle":
            ok = _triangle(systems, genus) is not None
        elif cell.label == "rectangle":
            ok = bool(_rectangle_splits(systems, genus))
        else:
            ok = _pentagon(systems, genus) is not None
        if not ok:
            raise NotAnAutomorphismError(f"{cell.label} {cell.vertices} not preserved")


def automorphism_from_twist_word(w: TwistWord, ball: ComplexBall,
                                 enlargement: int = config.ENLARGEMENT_FACTOR) -> BallAutomorphism:
    """
    Vertex map v -> (twist images of v's classes) on an HT ball.

    Raises BallTooSmallError when an image class exceeds the enlargement
    of the ball's complexity.
    """
    if ball.kind != HT:
        raise HatcherError("automorphisms act on HT balls")
    limit = _enlargement_limit(ball, enlargement)
    vertex_map: Dict[CutSystem, CutSystem] = {}
    for v in ball.vertices:
        image = _image_system(w, v)
        if not all(_within(c, limit) for c in image):
            raise BallTooSmallError(v)
        vertex_map[v] = image
    f = BallAutomorphism(ball, vertex_map, TWIST_WORD, w)
    _check_structure(f)
    logger.info(f"Automorphism {w} on {len(ball.vertices)} vertices")
    return f


def automorphism_from_table(ball: ComplexBall, table: Dict[CutSystem, CutSystem]) -> BallAutomorphism:
    """Abstract vertex table; must be a bijection of the ball preserving core structure."""
    if set(table) != set(ball.vertices) or set(table.values()) != set(ball.vertices):
        raise NotAnAutomorphismError("table is not a bijection of the ball's vertices")
    f = BallAutomorphism(ball, dict(table), ABSTRACT_TABLE)
    _check_structure(f)
    return f


def identity_automorphism(ball: ComplexBall) -> BallAutomorphism:
    return automorphism_from_twist_word(TwistWord(), ball)


def compose(f: BallAutomorphism, h: BallAutomorphism) -> BallAutomorphism:
    """f after h on h's ball."""
    if f.word is not None and h.word is not None:
        return automorphism_from_twist_word(f.word.compose(h.word), h.source)
    table = {v: f(h(v)) for v in h.source.vertices}
    return BallAutomorphism(h.source, table, ABSTRACT_TABLE)


# ========== WITNESSES ==========

@dataclass(frozen=True)
class Witness:
    """Completion v of c, and w = v - {c} + {dual} adjacent to v."""
    completion: CutSystem
    neighbor: CutSystem
    dual: Optional[CurveClass]

    def to_dict(self) -> Dict[str, Any]:
        return {"completion": str(self.completion), "neighbor": str(self.neighbor),
                "dual": str(self.dual) if self.dual is not None else None}


def witnesses(f: BallAutomorphism, c: CurveClass) -> List[Witness]:
    """Admissible (completion, dual) pairs for c among the ball's edges, in canonical order."""
    ball = f.source
    found = []
    for i, j in ball.edges:
        for a, b in ((i, j), (j, i)):
            v, w = ball.vertices[a], ball.vertices[b]
            if c not in v:
                continue
            pair = is_elementary_move(v, w)
            if pair is not None and pair[0] == c:
                found.append(Witness(v, w, pair[1]))
    return sorted(found, key=lambda x: (x.completion.sort_key, x.neighbor.sort_key))


def _outcome(f: BallAutomorphism, witness: Witness) -> CurveClass:
    fv, fw = f(witness.completion), f(witness.neighbor)
    difference = [x for x in fv if x not in fw]
    if len(difference) != 1:
        raise NotAnAutomorphismError(
            f"f({witness.completion}) - f({witness.neighbor}) has {len(difference)} classes")
    return difference[0]


@dataclass
class InducedCurveMap:
    """Partial map c -> f~(c) with the witness used for each value."""
    automorphism: BallAutomorphism
    assignments: Dict[CurveClass, CurveClass] = field(default_factory=dict)
    witness: Dict[CurveClass, Witness] = field(default_factory=dict)

    def __call__(self, c: CurveClass) -> CurveClass:
        if c not in self.assignments:
            value, wit = _induced(self.automorphism, c)
            self.assignments[c] = value
            self.witness[c] = wit
        return self.assignments[c]

    def to_dict(self) -> Dict[str, Any]:
        return {"assignments": [[str(k), str(v)] for k, v in sorted(self.assignments.items())],
                "witness": {str(k): w.to_dict() for k, w in sorted(self.witness.items())}}


def _induced(f: BallAutomorphism, c: CurveClass) -> Tuple[CurveClass, Witness]:
    if not is_nonseparating(c):
        raise CurveError(f"{c} is separating")
    if c.genus == 1:
        v = next((x for x in f.source.vertices if c in x), None)
        if v is None:
            raise InsufficientBallError(f"insufficient ball: <{c}> is not a vertex")
        image = f(v)
        return image.classes[0], Witness(v, v, None)
    found = witnesses(f, c)
    if not found:
        raise InsufficientBallError(f"insufficient ball: no completion and dual for {c}")
    return _outcome(f, found[0]), found[0]


def induced_curve_map(f: BallAutomorphism, c: CurveClass) -> CurveClass:
    """The unique class of f(v) - f(w) for an admissible edge (v, w) at c."""
    return _induced(f, c)[0]


def induced_map(f: BallAutomorphism) -> InducedCurveMap:
    return InducedCurveMap(f)


# ========== WITNESS BALLS ==========

def _pool(surface: Surface, curves: Sequence[CurveClass], word_length: int) -> List[CurveClass]:
    gens = chain_curves(surface)
    found = set(gens) | set(curves)
    for source in list(found):
        for g in gens:
            for e in (1, -1):
                image = source
                for _ in range(word_length):
                    image = dehn_twist(twist(g, e), image)
                    found.add(image)
    return sorted(found)


def witness_ball(surface: Surface, curves: Iterable[CurveClass], completions: int = 3,
                 duals: int = 4, word_length: int = config.TWIST_WORD_LENGTH) -> ComplexBall:
    """
    Explicit HT ball holding, for each curve, up to ``completions`` cut
    systems through it and for each of those up to ``duals`` adjacent
    systems obtained by replacing the curve.
    """
    curves = [c for c in curves if is_nonseparating(c)]
    pool = _pool(surface, curves, word_length)
    systems = set()
    for c in curves:
        others = [x for x in pool if x != c and is_nonseparating(x) and intersection_number(c, x) == 0]
        duals_of_c = sorted({x for x in pool if is_dual(c, x)}
                            | {dehn_twist(twist(c, e), x) for x in pool if is_dual(c, x) for e in (1, -1)})
        made = 0
        for rest in combinations(others, surface.genus - 1):
            if made >= completions:
                break
            try:
                v = validate_cut_system(surface, [c, *rest])
            except CutSystemError:
                continue
            made += 1
            systems.add(v)
            added = 0
            for d in duals_of_c:
                if added >= duals:
                    break
                if any(intersection_number(d, x) for x in rest):
                    continue
                try:
                    systems.add(validate_cut_system(surface, [d, *rest]))
                except CutSystemError:
                    continue
                added += 1
    if not systems:
        raise InsufficientBallError("no cut systems found for the requested curves")
    return ball_from_vertices(HT, surface, systems)


# ========== CHECKS ==========

def _report(suite: str, samples: List[Dict[str, Any]], **extra) -> Dict[str, Any]:
    failures = sum(1 for s in samples if not s.get("pass", False) and not s.get("skipped", False))
    report = {"suite": suite, "samples": samples, "failures": failures, "ok": failures == 0}
    report.update(extra)
    return report


def check_choice_independence(f: BallAutomorphism, c: CurveClass, trials: int = config.DEFAULT_TRIALS,
                              seed: int = config.DEFAULT_SEED) -> Dict[str, Any]:
    """f~(c) over randomized admissible witnesses; exactly one outcome is required."""
    found = witnesses(f, c)
    if len(found) < 2:
        logger.warning(f"Independence check for {c} is vacuous: {len(found)} witnesses")
        return _report("independence", [], curve=str(c), vacuous=True, seed=seed, outcomes=[])
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(found), size=trials, replace=len(found) < trials)
    samples = []
    outcomes = set()
    for k in sorted(int(p) for p in picks):
        value = _outcome(f, found[k])
        outcomes.add(value)
        samples.append({"curve": str(c), "witness": found[k].to_dict(), "value": str(value), "pass": True})
    single = len(outcomes) == 1
    for s in samples:
        s["pass"] = single
    return _report("independence", samples, curve=str(c), vacuous=False, seed=seed,
                   outcomes=sorted(str(x) for x in outcomes))


def check_duality_preservation(f: BallAutomorphism,
                               pairs: Iterable[Tuple[CurveClass, CurveClass]]) -> Dict[str, Any]:
    samples = []
    fm = induced_map(f)
    for c, d in pairs:
        if not is_dual(c, d):
            samples.append({"pair": [str(c), str(d)], "skipped": True, "note": "pair not dual"})
            continue
        fc, fd = fm(c), fm(d)
        k = intersection_number(fc, fd)
        samples.append({"pair": [str(c), str(d)], "images": [str(fc), str(fd)],
                        "intersection": k, "pass": k == 1})
    return _report("duality", samples)


def _has_witness(f: BallAutomorphism, c: CurveClass) -> bool:
    if c.genus == 1:
        return any(c in v for v in f.source.vertices)
    return bool(witnesses(f, c))


def _ensure(f: BallAutomorphism, curves: Sequence[CurveClass]) -> BallAutomorphism:
    """Twist-word automorphisms move to a ball with witnesses for every curve; tables stay put."""
    if f.word is None or all(_has_witness(f, c) for c in curves):
        return f
    extra = witness_ball(f.source.surface, curves)
    merged = ball_from_vertices(HT, f.source.surface, set(f.source.vertices) | set(extra.vertices))
    return f.on_ball(merged)


def check_composition(f: BallAutomorphism, h: BallAutomorphism,
                      sample: Iterable[CurveClass]) -> Dict[str, Any]:
    """(fh)~(c) = f~(h~(c)) for each sample curve."""
    samples = []
    fh = compose(f, h)
    for c in sample:
        try:
            left = induced_curve_map(fh, c)
            inner = induced_curve_map(h, c)
            right = induced_curve_map(_ensure(f, [inner]), inner)
        except InsufficientBallError as e:
            samples.append({"curve": str(c), "pass": False, "error": str(e)})
            continue
        samples.append({"curve": str(c), "left": str(left), "right": str(right), "pass": left == right})
    return _report("composition", samples)


def _require_closed(surface: Surface) -> None:
    if not surface.is_closed or surface.genus < 2:
        raise UnsupportedSurfaceError("unsupported: closed surface of genus at least 2 required")


def find_chain_for(a: CurveClass, b: CurveClass,
                   words: Optional[Sequence[TwistWord]] = None) -> Tuple[List[CurveClass], int]:
    """
    Maximal chain c_1..c_(2g+1) and k with a, b dual to c_(2k) and disjoint
    from every other chain curve. Tries the standard chain, then its
    images under ``words``.
    """
    surface = preset(a.genus, a.boundary)
    standard = chain_curves(surface)
    candidates = [standard]
    for w in words or ():
        candidates.append([dehn_twist(w, c) for c in standard])
    for chain in candidates:
        for k in range(1, surface.genus + 1):
            mid = chain[2 * k - 1]
            if not (is_dual(a, mid) and is_dual(b, mid)):
                continue
            rest = [x for i, x in enumerate(chain) if i != 2 * k - 1]
            if all(intersection_number(a, x) == 0 and intersection_number(b, x) == 0 for x in rest):
                return chain, k
    raise InsufficientBallError(f"no maximal chain found for {a} and {b}")


def check_disjointness_preservation(f: BallAutomorphism, a: CurveClass, b: CurveClass,
                                    words: Optional[Sequence[TwistWord]] = None) -> Dict[str, Any]:
    """
    i(f~(a), f~(b)) = 0 for disjoint nonseparating a, b.

    Connected complement: {a, b} completes to a cut system whose image
    holds both values. Disconnected complement: a maximal chain with a and
    b dual to its 2k-th curve is carried through f~ and must stay a chain.
    """
    surface = f.source.surface
    _require_closed(surface)
    if intersection_number(a, b) != 0:
        raise CurveError(f"{a} and {b} intersect")
    fm = induced_map(_ensure(f, [a, b]))
    pieces = cut_surface(surface, [a.trace, b.trace]).pieces if a != b else [None]
    sample: Dict[str, Any] = {"pair": [str(a), str(b)]}
    if len(pieces) == 1:
        sample["case"] = "connected"
        completion = _complete(surface, [a, b])
        image = _ensure(f, list(completion))(completion)
        fa, fb = fm(a), fm(b)
        sample.update({"completion": str(completion), "image": str(image),
                       "images": [str(fa), str(fb)]})
        ok = fa in image and fb in image and intersection_number(fa, fb) == 0
    else:
        sample["case"] = "disconnected"
        chain, k = find_chain_for(a, b, words)
        fm = induced_map(_ensure(f, list(chain) + [a, b]))
        images = [fm(x) for x in chain]
        fa, fb = fm(a), fm(b)
        mid = images[2 * k - 1]
        sample.update({"chain": [str(x) for x in chain], "k": k,
                       "images": [str(fa), str(fb)]})
        ok = (not chain_pattern_defects(images) and is_dual(fa, mid) and is_dual(fb, mid)
              and intersection_number(fa, fb) == 0)
    sample["pass"] = ok
    return _report("disjointness", [sample])


def _complete(surface: Surface, curves: List[CurveClass]) -> CutSystem:
    if len(curves) == surface.genus:
        return validate_cut_system(surface, curves)
    pool = _pool(surface, curves, config.TWIST_WORD_LENGTH)
    others = [x for x in pool if x not in curves and is_nonseparating(x)
              and all(intersection_number(x, c) == 0 for c in curves)]
    for rest in combinations(others, surface.genus - len(curves)):
        try:
            return validate_cut_system(surface, [*curves, *rest])
        except CutSystemError:
            continue
    raise InsufficientBallError(f"insufficient ball: cannot complete {[str(c) for c in curves]}")


def check_realization(f: BallAutomorphism, curves: Optional[Iterable[CurveClass]] = None) -> Dict[str, Any]:
    """
    f~(c) equals the direct twist image for every ball curve, and
    f(<c_1..c_g>) = <f~(c_1)..f~(c_g)> on the core ball.
    """
    if f.word is None:
        raise HatcherError("realization needs a twist-word automorphism")
    fm = induced_map(f)
    samples = []
    targets = list(curves) if curves is not None else f.source.curves()
    for c in targets:
        try:
            value = fm(c)
        except InsufficientBallError as e:
            samples.append({"curve": str(c), "skipped": True, "note": str(e)})
            continue
        direct = dehn_twist(f.word, c)
        samples.append({"curve": str(c), "induced": str(value), "direct": str(direct),
                        "pass": value == direct})
    fixes_all = all(s.get("pass") and s["induced"] == s["curve"] for s in samples if not s.get("skipped"))
    for v in f.source.core:
        try:
            expected = validate_cut_system(f.source.surface, [fm(c) for c in v])
        except InsufficientBallError as e:
            samples.append({"vertex": str(v), "skipped": True, "note": str(e)})
            continue
        ok = f(v) == expected and (not fixes_all or f(v) == v)
        samples.append({"vertex": str(v), "image": str(f(v)), "pass": ok})
    return _report("realization", samples, fixes_all_curves=fixes_all)


# ========== SEPARATING CURVES ==========

def separating_chains(c: CurveClass, words: Optional[Sequence[TwistWord]] = None) -> List[List[CurveClass]]:
    """Even chains whose regular neighborhood is bounded by the separating curve c."""
    surface = preset(c.genus, c.boundary)
    standard = chain_curves(surface)
    bases = [standard, list(reversed(standard))]
    found = []
    for w in [TwistWord()] + list(words or ()):
        for base in bases:
            moved = [dehn_twist(w, x) for x in base]
            for length in range(2, len(moved), 2):
                chain = moved[:length]
                if neighborhood_boundary(chain) == [c]:
                    found.append(chain)
    return found


def extend_to_separating(f_tilde: InducedCurveMap, c: CurveClass,
                         words: Optional[Sequence[TwistWord]] = None) -> CurveClass:
    """
    Image of a separating curve: the boundary of a regular neighborhood
    of the f~-images of an even chain that c bounds.

    The chain on the side with fewer chain crossings is used; ties go to
    canonical order.
    """
    surface = preset(c.genus, c.boundary)
    _require_closed(surface)
    if is_nonseparating(c):
        raise CurveError(f"wrong operation: {c} is nonseparating")
    chains = separating_chains(c, words)
    if not chains:
        raise InsufficientBallError(f"insufficient ball: no chain bounded by {c}")
    chain = min(chains, key=lambda ch: (sum(x.size for x in ch), [x.sort_key for x in ch]))
    f = f_tilde.automorphism
    if f.word is not None:
        f_tilde = induced_map(_ensure(f, chain))
    images = [f_tilde(x) for x in chain]
    boundary = neighborhood_boundary(images)
    if len(boundary) != 1:
        raise NotAnAutomorphismError(f"chain images bound {len(boundary)} classes")
    logger.debug(f"Extended f~ over {c} via a chain of length {len(chain)}")
    return boundary[0]


def check_separating_extension(f: BallAutomorphism, c: CurveClass,
                               words: Optional[Sequence[TwistWord]] = None) -> Dict[str, Any]:
    """Extended image is separating, disjoint from the chain images, with the same genus split."""
    fm = induced_map(f)
    result = extend_to_separating(fm, c, words)
    chain = min(separating_chains(c, words), key=lambda ch: (sum(x.size for x in ch), [x.sort_key for x in ch]))
    images = [dehn_twist(f.word, x) for x in chain] if f.word is not None else [fm(x) for x in chain]
    sample = {
        "curve": str(c),
        "result": str(result),
        "separating": not is_nonseparating(result),
        "disjoint_from_chain": all(intersection_number(result, x) == 0 for x in images),
        "split": separating_pieces(result),
        "source_split": separating_pieces(c),
    }
    ok = sample["separating"] and sample["disjoint_from_chain"] and sample["split"] == sample["source_split"]
    if f.word is not None:
        sample["direct"] = str(dehn_twist(f.word, c))
        ok = ok and sample["direct"] == sample["result"]
    sample["pass"] = ok
    return _report("separating", [sample])


# ========== SAMPLING ==========

def random_twist_word(surface: Surface, max_length: int, rng: np.random.Generator) -> TwistWord:
    """Word of length 1..max_length over the chain curves, letters +-1, no immediate cancellation."""
    gens = chain_curves(surface)
    length = int(rng.integers(1, max_length + 1))
    letters: List[Tuple[CurveClass, int]] = []
    while len(letters) < length:
        c = gens[int(rng.integers(len(gens)))]
        e = 1 if rng.random() < 0.5 else -1
        if letters and letters[-1] == (c, -e):
            continue
        letters.append((c, e))
    return TwistWord(tuple(letters))


# ========== TORUS ORACLE ==========

def torus_action_matrix(word: TwistWord) -> sympy.Matrix:
    """Integer matrix of a twist word on torus homology; t_v(x) = x + det(v, x) v."""
    m = sympy.eye(2)
    for c, e in word.letters:
        pair = c.torus_pair
        if pair is None:
            raise UnsupportedSurfaceError("torus homology needs genus 1 and at most one boundary circle")
        p, q = pair
        m = (sympy.eye(2) + e * sympy.Matrix([[p], [q]]) * sympy.Matrix([[-q, p]])) * m
    return m


def check_torus_oracle(word: TwistWord, curves: Iterable[CurveClass]) -> Dict[str, Any]:
    """Direct twist images against the homology matrix of the word."""
    m = torus_action_matrix(word)
    samples = []
    for c in curves:
        p, q = c.torus_pair
        image = m * sympy.Matrix([[p], [q]])
        expected = torus_curve(preset(c.genus, c.boundary), int(image[0]), int(image[1]))
        direct = dehn_twist(word, c)
        samples.append({"curve": str(c), "direct": str(direct), "matrix_image": str(expected),
                        "pass": direct == expected})
    return _report("torus-oracle", samples, matrix=[[int(x) for x in m.row(i)] for i in range(2)],
                   central=m == -sympy.eye(2))
