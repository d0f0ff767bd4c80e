"""
Surface Core - combinatorial maps for compact orientable surfaces
Polygon-gluing presets, Euler-characteristic classification, cut surgery
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from networkx.utils import UnionFind

logger = logging.getLogger(__name__)

SURFACE_FORMAT = "hatcher-surface"
SURFACE_FORMAT_VERSION = 1


# ========== ERRORS ==========

class HatcherError(Exception):
    """Base class for every error raised by the engine."""

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self)}


class SurfaceError(HatcherError, ValueError):
    """Unsupported preset or malformed surface data."""


class UnsupportedSurfaceError(HatcherError):
    """Operation is not defined on this surface (e.g. needs a closed surface)."""


class GeometryError(HatcherError):
    """Numerical degeneracy while tracing a curve."""


class CurveError(HatcherError, ValueError):
    """Invalid curve input."""


class TrivialCurveError(CurveError):
    """Curve is null-homotopic or parallel to a boundary component."""

    def __init__(self, message: str = "trivial curve"):
        super().__init__(message)


class NonSimpleCurveError(CurveError):
    """Curve class has no simple representative."""


class ProperPowerError(CurveError):
    """Word names a proper power of a primitive class."""


class GeneralPositionError(CurveError):
    """Input embeddings touch instead of crossing transversely."""

    def __init__(self, message: str = "general position required"):
        super().__init__(message)


class DomainMismatchError(CurveError):
    """Curves live on different surfaces."""


# ========== SURFACE ==========

@dataclass(frozen=True)
class Surface:
    """
    Combinatorial map with boundary.

    Each face is a cycle of darts listed counterclockwise; the face
    successor of a dart is the next dart of its cycle. ``involution[d]``
    is the dart glued to ``d`` (traversed the other way) or None when
    ``d`` lies on the boundary.
    """
    faces: Tuple[Tuple[int, ...], ...]
    involution: Tuple[Optional[int], ...]
    genus: int
    boundary_count: int
    labels: Tuple[Any, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        n = len(self.involution)
        seen = sorted(d for face in self.faces for d in face)
        if seen != list(range(n)):
            raise SurfaceError("faces must partition the darts 0..n-1")
        for d, e in enumerate(self.involution):
            if e is None:
                continue
            if e == d or not 0 <= e < n or self.involution[e] != d:
                raise SurfaceError(f"involution is not fixed-point free at dart {d}")

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]], involution: Sequence[Optional[int]],
                   labels: Sequence[Any] = ()) -> "Surface":
        """Build a surface and compute its genus and boundary count."""
        draft = cls(tuple(tuple(f) for f in faces), tuple(involution), 0, 0, tuple(labels))
        pieces = classify_components(draft)
        return cls(draft.faces, draft.involution,
                   sum(p.genus for p in pieces),
                   sum(p.boundary_count for p in pieces),
                   tuple(labels))

    @property
    def dart_count(self) -> int:
        return len(self.involution)

    @property
    def is_closed(self) -> bool:
        return all(e is not None for e in self.involution)

    @cached_property
    def face_next(self) -> Tuple[int, ...]:
        nxt = [0] * self.dart_count
        for face in self.faces:
            for i, d in enumerate(face):
                nxt[d] = face[(i + 1) % len(face)]
        return tuple(nxt)

    @cached_property
    def face_prev(self) -> Tuple[int, ...]:
        prv = [0] * self.dart_count
        for d, e in enumerate(self.face_next):
            prv[e] = d
        return tuple(prv)

    @cached_property
    def vertex_classes(self) -> List[frozenset]:
        """Darts grouped by their starting vertex."""
        uf = UnionFind(range(self.dart_count))
        for d, e in enumerate(self.involution):
            if e is not None:
                uf.union(e, self.face_next[d])
        return sorted((frozenset(s) for s in uf.to_sets()), key=min)

    @cached_property
    def rotation(self) -> Tuple[int, ...]:
        """Counterclockwise successor of each dart around its starting vertex."""
        rot = [0] * self.dart_count
        for d, e in enumerate(self.involution):
            if e is not None:
                rot[d] = self.face_next[e]
                continue
            # fan start: walk backwards until the incoming dart is unglued
            x = d
            for _ in range(self.dart_count):
                back = self.involution[self.face_prev[x]]
                if back is None:
                    break
                x = back
            rot[d] = x
        return tuple(rot)

    def boundary_successor(self, b: int) -> int:
        """Next boundary dart after ``b`` along its boundary cycle."""
        d = self.face_next[b]
        for _ in range(self.dart_count + 1):
            e = self.involution[d]
            if e is None:
                return d
            d = self.face_next[e]
        raise SurfaceError(f"boundary walk from dart {b} does not terminate")

    @cached_property
    def boundary_cycles(self) -> Tuple[Tuple[int, ...], ...]:
        cycles = []
        seen = set()
        for b in range(self.dart_count):
            if self.involution[b] is not None or b in seen:
                continue
            cycle = []
            d = b
            while d not in seen:
                seen.add(d)
                cycle.append(d)
                d = self.boundary_successor(d)
            cycles.append(tuple(cycle))
        return tuple(cycles)

    @cached_property
    def components(self) -> List[frozenset]:
        uf = UnionFind(range(self.dart_count))
        for face in self.faces:
            for d in face[1:]:
                uf.union(face[0], d)
        for d, e in enumerate(self.involution):
            if e is not None:
                uf.union(d, e)
        return sorted((frozenset(s) for s in uf.to_sets()), key=min)

    @property
    def edge_count(self) -> int:
        paired = sum(1 for e in self.involution if e is not None)
        return paired // 2 + (self.dart_count - paired)

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertex_classes) - self.edge_count + len(self.faces)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": SURFACE_FORMAT,
            "version": SURFACE_FORMAT_VERSION,
            "darts": self.dart_count,
            "involution": list(self.involution),
            "rotation": list(self.rotation),
            "faces": [list(f) for f in self.faces],
            "boundary": [list(c) for c in self.boundary_cycles],
            "genus": self.genus,
            "r": self.boundary_count,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Surface":
        if data.get("format") != SURFACE_FORMAT or data.get("version") != SURFACE_FORMAT_VERSION:
            raise SurfaceError(f"unsupported surface document: {data.get('format')} v{data.get('version')}")
        surface = cls(tuple(tuple(f) for f in data["faces"]), tuple(data["involution"]),
                      int(data["genus"]), int(data["r"]))
        if list(surface.rotation) != list(data["rotation"]):
            raise SurfaceError("rotation does not match faces and involution")
        if classify(surface)[:2] != (surface.genus, surface.boundary_count):
            raise SurfaceError("stored genus/boundary disagree with the permutation data")
        return surface

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @cached_property
    def surface_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @property
    def key(self) -> str:
        """Short identity used by curves to name their home surface."""
        return f"S{self.genus}.{self.boundary_count}:{self.surface_hash[:16]}"


@dataclass(frozen=True)
class ComponentSignature:
    """Topological type of one connected component."""
    genus: int
    boundary_count: int
    euler_characteristic: int
    darts: frozenset = field(compare=False, repr=False)

    def to_dict(self):
        return {"genus": self.genus, "boundary_count": self.boundary_count,
                "euler_characteristic": self.euler_characteristic}


def classify_components(s: Surface) -> List[ComponentSignature]:
    """Genus and boundary count of every component, recomputed from scratch."""
    vertex_of = {}
    for i, cls_ in enumerate(s.vertex_classes):
        for d in cls_:
            vertex_of[d] = i
    face_of = {}
    for i, face in enumerate(s.faces):
        for d in face:
            face_of[d] = i
    boundary_of = {}
    for i, cycle in enumerate(s.boundary_cycles):
        for d in cycle:
            boundary_of[d] = i

    pieces = []
    for comp in s.components:
        vertices = {vertex_of[d] for d in comp}
        faces = {face_of[d] for d in comp}
        unglued = sum(1 for d in comp if s.involution[d] is None)
        edges = (len(comp) - unglued) // 2 + unglued
        chi = len(vertices) - edges + len(faces)
        r = len({boundary_of[d] for d in comp if d in boundary_of})
        twice_genus = 2 - chi - r
        if twice_genus < 0 or twice_genus % 2:
            raise SurfaceError(f"component with chi={chi}, r={r} is not an orientable surface")
        pieces.append(ComponentSignature(twice_genus // 2, r, chi, frozenset(comp)))
    return pieces


def classify(s: Surface) -> Tuple[int, int, int]:
    """Return (genus, boundary_count, connected_components)."""
    pieces = classify_components(s)
    return (sum(p.genus for p in pieces), sum(p.boundary_count for p in pieces), len(pieces))


# ========== PRESETS ==========

def side_pairing(genus: int, boundary: int) -> List[Tuple[int, int]]:
    """Glued side pairs of the preset polygon: commutator blocks, then adjacent pairs."""
    pairs = []
    for i in range(genus):
        pairs.append((4 * i, 4 * i + 2))
        pairs.append((4 * i + 1, 4 * i + 3))
    for j in range(max(boundary - 1, 0)):
        pairs.append((4 * genus + 2 * j, 4 * genus + 2 * j + 1))
    return pairs


def polygon_sides(genus: int, boundary: int) -> int:
    return 4 * genus if boundary == 0 else 4 * genus + 2 * boundary - 2


def side_dart(surface: Surface, side: int) -> int:
    """Dart carrying polygon side ``side`` in a preset."""
    return side if surface.boundary_count == 0 else 2 * side


def build_surface(genus: int, boundary: int = 0) -> Surface:
    """
    Canonical preset for (genus, boundary).

    Closed surfaces are one 4g-gon with dart k on side k. With r >= 1
    boundary components the polygon has n = 4g+2r-2 sides and every corner
    is truncated: dart 2k is side k, dart 2k+1 the boundary arc after it.
    """
    if genus < 1:
        raise SurfaceError("unsupported: positive genus required")
    if boundary < 0:
        raise SurfaceError("boundary count must be nonnegative")

    n = polygon_sides(genus, boundary)
    if boundary == 0:
        involution: List[Optional[int]] = [None] * n
        for s, p in side_pairing(genus, boundary):
            involution[s], involution[p] = p, s
        labels = tuple(("side", k) for k in range(n))
        face = tuple(range(n))
    else:
        involution = [None] * (2 * n)
        for s, p in side_pairing(genus, boundary):
            involution[2 * s], involution[2 * p] = 2 * p, 2 * s
        labels = tuple(("side", d // 2) if d % 2 == 0 else ("corner", d // 2) for d in range(2 * n))
        face = tuple(range(2 * n))

    surface = Surface((face,), tuple(involution), genus, boundary, labels)
    if classify(surface) != (genus, boundary, 1):
        raise SurfaceError(f"preset ({genus},{boundary}) failed classification: {classify(surface)}")
    logger.debug(f"Built preset surface g={genus} r={boundary} with {surface.dart_count} darts")
    return surface


def annulus_surface() -> Surface:
    """Square with one pair of opposite sides glued: genus 0, two boundary circles."""
    return Surface(((0, 1, 2, 3),), (2, None, 0, None), 0, 2,
                   (("core", 0), ("edge", 1), ("core", 1), ("edge", 2)))


# ========== CUTTING ==========

@dataclass(frozen=True)
class CutNeighborhood:
    """
    Regular neighborhood N of a curve and the complement R = S_C.

    ``boundary_pair`` lists the complement's boundary darts along the two
    copies of C: the first runs along the right side of C, the second
    along its left side.
    """
    annulus: Surface
    complement: Surface
    boundary_pair: Tuple[Tuple[int, ...], Tuple[int, ...]]
    source_genus: int = 0
    source_boundary: int = 0

    def reglued_signature(self) -> Tuple[int, int, int]:
        """(genus, boundary, components) after gluing N back along both copies."""
        chi = self.complement.euler_characteristic + self.annulus.euler_characteristic
        r = self.complement.boundary_count - 2
        components = 1
        return ((2 - chi - r) // 2, r, components)

    def side_of(self, dart: int) -> int:
        """0 or 1: the complement component holding ``dart`` (0 for connected R)."""
        for i, comp in enumerate(self.complement.components):
            if dart in comp:
                return i
        raise SurfaceError(f"dart {dart} not in complement")

    def to_dict(self):
        return {
            "annulus": list(classify(self.annulus)),
            "complement": list(classify(self.complement)),
            "boundary_pair": [list(self.boundary_pair[0]), list(self.boundary_pair[1])],
        }


def cut_along(s: Surface, c) -> CutNeighborhood:
    """Cut ``s`` along the essential curve class ``c``."""
    from core.arrangement import cut_surface
    from core.curves import require_essential

    require_essential(s, c)
    cut = cut_surface(s, [c.embedding])
    right, left = cut.curve_sides(0)
    nbhd = CutNeighborhood(annulus_surface(), cut.surface, (right, left), s.genus, s.boundary_count)
    logger.debug(f"Cut {c} : complement {classify(cut.surface)}")
    return nbhd


def cut_along_system(s: Surface, v) -> Surface:
    """Cut ``s`` along every class of a validated cut system."""
    from core.arrangement import cut_surface
    from core.complexes import validate_cut_system

    system = validate_cut_system(s, getattr(v, "classes", v))
    return cut_surface(s, [c.embedding for c in system.classes]).surface
