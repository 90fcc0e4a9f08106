import copy
import json
import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

PLAIN = "plain"
NOTCHED = "notched"

Edge = Union[int, str]


class TriangulationError(ValueError):
    """Raised by validate; carries every violation found."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("invalid triangulation:\n  " + "\n  ".join(self.violations))


class AssumptionError(ValueError):
    pass


class Arc:
    def __init__(self, arc_data: dict):
        self.id = int(arc_data.get('id'))
        self.ends = list(arc_data.get('ends', []))
        self.tags = list(arc_data.get('tags', [PLAIN, PLAIN]))

    def notched_ends(self) -> List:
        return [end for end, tag in zip(self.ends, self.tags) if tag == NOTCHED]

    def asdict(self):
        return {'id': self.id, 'ends': list(self.ends), 'tags': list(self.tags)}


class BoundarySegment:
    def __init__(self, segment_data: dict):
        self.id = str(segment_data.get('id'))
        self.ends = list(segment_data.get('ends', []))

    def asdict(self):
        return {'id': self.id, 'ends': list(self.ends)}


class Triangle:
    def __init__(self, index: int, triangle_data: dict):
        self.index = index
        self.edges = tuple(_edge_ref(e) for e in triangle_data.get('edges', []))
        self.vertices = tuple(triangle_data.get('vertices', []))
        self.self_folded = bool(triangle_data.get('self_folded', False))
        self.name = triangle_data.get('name', str(index))

    def side_ends(self, side: int) -> Tuple:
        return self.vertices[side], self.vertices[(side + 1) % 3]

    def folded_parts(self) -> Optional[Tuple[int, Edge, Edge]]:
        """Return (loop side, loop, radius) of a self-folded triangle, or None when the sides do not fold."""
        for side in range(3):
            a, b = self.edges[(side + 1) % 3], self.edges[(side + 2) % 3]
            if a == b and self.edges[side] != a:
                return side, self.edges[side], a
        return None

    def asdict(self):
        return {'name': self.name, 'edges': list(self.edges), 'vertices': list(self.vertices),
                'self_folded': self.self_folded}


def _edge_ref(edge) -> Edge:
    if isinstance(edge, bool):
        raise TypeError("edge references are arc ids or boundary names")
    if isinstance(edge, int):
        return edge
    if isinstance(edge, str) and edge.lstrip('-').isdigit():
        return int(edge)
    return str(edge)


def is_arc(edge: Edge) -> bool:
    return isinstance(edge, int)


class Triangulation:
    """
    Tagged triangulation of a marked surface.

    The triangle list always describes the ideal triangulation: a 1-notched arc j appears on the loop side of its self-folded triangle.
    Side k of a triangle runs from vertices[k] to vertices[k+1], and triangles are listed counterclockwise.
    """

    def __init__(self, surface_data: dict):
        self.name = surface_data.get('name', '')
        self.arcs = {arc.id: arc for arc in (Arc(a) for a in surface_data.get('arcs', []))}
        self.boundary = {seg.id: seg for seg in (BoundarySegment(b) for b in surface_data.get('boundary', []))}
        self.triangles = [Triangle(i, t) for i, t in enumerate(surface_data.get('triangles', []))]
        self.punctures = list(surface_data.get('punctures', []))
        self._slots = {}
        for triangle in self.triangles:
            for side, edge in enumerate(triangle.edges):
                self._slots.setdefault(edge, []).append((triangle.index, side))

    @classmethod
    def from_json(cls, path: str) -> "Triangulation":
        with open(path, "r") as f:
            return cls(json.load(f))

    @property
    def nvars(self) -> int:
        return len(self.arcs)

    def asdict(self) -> dict:
        return {'name': self.name,
                'arcs': [self.arcs[i].asdict() for i in sorted(self.arcs)],
                'boundary': [self.boundary[b].asdict() for b in sorted(self.boundary)],
                'triangles': [t.asdict() for t in self.triangles],
                'punctures': list(self.punctures)}

    def copy(self) -> "Triangulation":
        return Triangulation(copy.deepcopy(self.asdict()))

    def triangle_index(self, ref) -> int:
        """Accept a triangle index or a triangle name."""
        if isinstance(ref, int) and not isinstance(ref, bool):
            if 0 <= ref < len(self.triangles):
                return ref
            raise IndexError(f"triangle {ref} out of range")
        for triangle in self.triangles:
            if triangle.name == ref:
                return triangle.index
        raise KeyError(f"unknown triangle {ref!r}")

    def slots(self, edge: Edge) -> List[Tuple[int, int]]:
        return list(self._slots.get(edge, []))

    def partner(self, tri: int, side: int) -> Optional[Tuple[int, int]]:
        """The other slot of the edge on side `side` of triangle `tri`, or None for a boundary segment."""
        edge = self.triangles[tri].edges[side]
        others = [slot for slot in self._slots.get(edge, []) if slot != (tri, side)]
        return others[0] if others else None

    def label(self, tri: int, side: int) -> Edge:
        return self.triangles[tri].edges[side]

    def vertex(self, tri: int, corner: int):
        return self.triangles[tri].vertices[corner % 3]

    def next_corner_ccw(self, tri: int, corner: int) -> Optional[Tuple[int, int]]:
        """Step counterclockwise around the vertex at (tri, corner) across side corner-1."""
        slot = self.partner(tri, (corner - 1) % 3)
        if slot is None:
            return None
        return slot

    def corners_at(self, point) -> List[Tuple[int, int]]:
        return [(t.index, c) for t in self.triangles for c in range(3) if t.vertices[c] == point]

    def marked_points(self) -> List:
        points = []
        for triangle in self.triangles:
            for v in triangle.vertices:
                if v not in points:
                    points.append(v)
        return points

    def is_closed(self) -> bool:
        return not self.boundary

    def one_notched(self) -> Dict[int, Tuple[int, object]]:
        """Map each 1-notched arc id to (plain partner id, notched puncture)."""
        result = {}
        for arc in self.arcs.values():
            notched = arc.notched_ends()
            if len(notched) != 1:
                continue
            puncture = notched[0]
            for other in self.arcs.values():
                if other.id != arc.id and sorted(map(str, other.ends)) == sorted(map(str, arc.ends)) and not other.notched_ends():
                    result[arc.id] = (other.id, puncture)
                    break
            else:
                result[arc.id] = (None, puncture)
        return result

    def plain_partner(self, arc_id: int) -> Optional[int]:
        return self.one_notched().get(arc_id, (None, None))[0]

    def notched_partner(self, arc_id: int) -> Optional[int]:
        for notched, (plain, _) in self.one_notched().items():
            if plain == arc_id:
                return notched
        return None

    def ideal_ends(self, arc_id: int) -> List:
        arc = self.arcs[arc_id]
        notched = arc.notched_ends()
        if len(notched) == 1 and self.plain_partner(arc_id) is not None:
            base = [e for e, tag in zip(arc.ends, arc.tags) if tag == PLAIN][0]
            return [base, base]
        return list(arc.ends)

    def self_folded_triangles(self) -> List[Tuple[int, Edge, Edge, object]]:
        """List (triangle index, loop, radius, puncture) for every self-folded triangle."""
        found = []
        for triangle in self.triangles:
            parts = triangle.folded_parts()
            if parts is None:
                continue
            loop_side, loop, radius = parts
            puncture = triangle.vertices[(loop_side + 2) % 3]
            found.append((triangle.index, loop, radius, puncture))
        return found


def validate(t: Triangulation) -> None:
    """
    Check the structural invariants of a triangulation and raise one report listing every violation.

    Parameters:
    -----------
    t (Triangulation): Triangulation to check.

    Returns:
    -----------
    None
    """
    violations = []
    ids = sorted(t.arcs)
    if ids != list(range(1, len(ids) + 1)):
        violations.append(f"arc ids must be 1..N, got {ids}")
    punctures = set(t.punctures)
    points = set(t.marked_points())
    for p in punctures:
        if p not in points:
            violations.append(f"puncture {p!r} is not a vertex of any triangle")
    for triangle in t.triangles:
        if len(triangle.edges) != 3 or len(triangle.vertices) != 3:
            violations.append(f"triangle {triangle.name} needs three edges and three vertices")
    if violations:
        raise TriangulationError(violations)

    for edge in list(t.arcs) + list(t.boundary):
        count = len(t.slots(edge))
        expected = 2 if is_arc(edge) else 1
        if count != expected:
            kind = "arc" if is_arc(edge) else "boundary segment"
            violations.append(f"{kind} {edge} lies on {count} triangle sides, expected {expected}")
    for edge in t._slots:
        if edge not in t.arcs and edge not in t.boundary:
            violations.append(f"triangle side refers to unknown edge {edge!r}")

    for arc in t.arcs.values():
        if len(arc.ends) != 2 or len(arc.tags) != 2:
            violations.append(f"arc {arc.id} needs two ends and two tags")
            continue
        for end, tag in zip(arc.ends, arc.tags):
            if tag not in (PLAIN, NOTCHED):
                violations.append(f"arc {arc.id} has unknown tag {tag!r}")
            if tag == NOTCHED and end not in punctures:
                violations.append(f"arc {arc.id} is notched at {end!r}, which lies on the boundary")

    notched_at = {}
    for arc_id, (partner, puncture) in t.one_notched().items():
        notched_at.setdefault(puncture, []).append(arc_id)
        if partner is None:
            violations.append(f"1-notched arc {arc_id} has no plain partner in the triangulation")
    for puncture, arcs in notched_at.items():
        if len(arcs) > 1:
            violations.append(f"puncture {puncture!r} carries several 1-notched arcs {sorted(arcs)}")

    for arc_id in t.arcs:
        slots = t.slots(arc_id)
        if len(slots) != 2:
            continue
        (t1, s1), (t2, s2) = slots
        a1, b1 = t.triangles[t1].side_ends(s1)
        a2, b2 = t.triangles[t2].side_ends(s2)
        if (a1, b1) != (b2, a2):
            violations.append(f"arc {arc_id} is not traversed in opposite directions by its two triangles")
        if sorted(map(str, (a1, b1))) != sorted(map(str, t.ideal_ends(arc_id))):
            violations.append(f"arc {arc_id} joins {a1!r} and {b1!r} in the triangles but {t.ideal_ends(arc_id)} in the arc list")

    folded = {tri for tri, *_ in t.self_folded_triangles()}
    for triangle in t.triangles:
        if triangle.self_folded and triangle.index not in folded:
            violations.append(f"triangle {triangle.name} is flagged self-folded but its sides do not fold")
        if not triangle.self_folded and triangle.index in folded:
            violations.append(f"triangle {triangle.name} folds but is not flagged self-folded")
    for tri, loop, radius, puncture in t.self_folded_triangles():
        if puncture not in punctures:
            violations.append(f"self-folded triangle {t.triangles[tri].name} encloses {puncture!r}, which is no puncture")
        if is_arc(loop) and loop in t.arcs and t.plain_partner(loop) != radius:
            violations.append(f"loop {loop} of a self-folded triangle must be the 1-notched partner of radius {radius}")

    if violations:
        raise TriangulationError(violations)
    logger.debug("triangulation %s valid: %d arcs, %d triangles", t.name, t.nvars, len(t.triangles))


def to_ideal(t: Triangulation) -> Triangulation:
    """
    Replace every 1-notched arc with the loop of its self-folded triangle.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation satisfying the one-notched-arc-per-puncture assumption.

    Returns:
    -----------
    ideal (Triangulation): The ideal triangulation with all tags plain.
    """
    by_puncture = {}
    for arc_id, (partner, puncture) in t.one_notched().items():
        if partner is None:
            raise AssumptionError(f"1-notched arc {arc_id} has no plain partner")
        by_puncture.setdefault(puncture, []).append(arc_id)
    for puncture, arcs in by_puncture.items():
        if len(arcs) > 1:
            raise AssumptionError(f"puncture {puncture!r} carries several 1-notched arcs")
    for arc in t.arcs.values():
        if len(arc.notched_ends()) == 2:
            raise AssumptionError(f"arc {arc.id} is notched at both ends; normalize tags first")
    data = t.asdict()
    for arc in data['arcs']:
        if arc['id'] in t.one_notched():
            arc['ends'] = t.ideal_ends(arc['id'])
            arc['tags'] = [PLAIN, PLAIN]
    return Triangulation(data)


def retag(ideal: Triangulation) -> Triangulation:
    """Inverse of to_ideal: each loop of a self-folded triangle becomes the arc notched at the enclosed puncture."""
    data = ideal.asdict()
    arcs = {a['id']: a for a in data['arcs']}
    for tri, loop, radius, puncture in ideal.self_folded_triangles():
        base = ideal.triangles[tri].vertices[(ideal.triangles[tri].folded_parts()[0])]
        arcs[loop]['ends'] = [base, puncture]
        arcs[loop]['tags'] = [PLAIN, NOTCHED]
    return Triangulation(data)


class TaggedArcSpec:
    """
    Crossing data of a tagged arc.

    triangles lists the crossed triangles of the ideal triangulation from the start to the end, arcs the shared arcs between consecutive ones.
    `sides` optionally pins [entry, exit] per triangle; `underlying` names the arc of T isotopic to the underlying plain arc, when there is one.
    """

    def __init__(self, arc_data: dict):
        self.name = arc_data.get('name', '')
        self.ends = list(arc_data.get('ends', []))
        self.tags = list(arc_data.get('tags', [PLAIN, PLAIN]))
        self.triangles = list(arc_data.get('triangles', []))
        self.arcs = [int(a) for a in arc_data.get('arcs', [])]
        self.sides = arc_data.get('sides')
        self.underlying = arc_data.get('underlying')

    @classmethod
    def from_json(cls, path: str) -> "TaggedArcSpec":
        with open(path, "r") as f:
            return cls(json.load(f))

    @property
    def kind(self) -> str:
        notched = self.tags.count(NOTCHED)
        return {0: "plain", 1: "notched1", 2: "notched2"}[notched]

    def notched_ends(self) -> List:
        return [end for end, tag in zip(self.ends, self.tags) if tag == NOTCHED]

    def asdict(self) -> dict:
        data = {'name': self.name, 'ends': list(self.ends), 'tags': list(self.tags),
                'triangles': list(self.triangles), 'arcs': list(self.arcs)}
        if self.sides is not None:
            data['sides'] = [list(s) for s in self.sides]
        if self.underlying is not None:
            data['underlying'] = self.underlying
        return data

    def reversed(self) -> "TaggedArcSpec":
        data = self.asdict()
        data['ends'] = data['ends'][::-1]
        data['tags'] = data['tags'][::-1]
        data['triangles'] = data['triangles'][::-1]
        data['arcs'] = data['arcs'][::-1]
        if self.sides is not None:
            data['sides'] = [[s[1], s[0]] for s in self.sides[::-1]]
        return TaggedArcSpec(data)

    def plain(self) -> "TaggedArcSpec":
        data = self.asdict()
        data['tags'] = [PLAIN, PLAIN]
        return TaggedArcSpec(data)


class LoopSpec:
    def __init__(self, loop_data: dict):
        self.name = loop_data.get('name', '')
        self.triangles = list(loop_data.get('triangles', []))
        self.arcs = [int(a) for a in loop_data.get('arcs', [])]
        self.sides = loop_data.get('sides')

    @classmethod
    def from_json(cls, path: str) -> "LoopSpec":
        with open(path, "r") as f:
            return cls(json.load(f))

    def asdict(self) -> dict:
        data = {'name': self.name, 'triangles': list(self.triangles), 'arcs': list(self.arcs)}
        if self.sides is not None:
            data['sides'] = [list(s) for s in self.sides]
        return data


def arc_in_triangulation(t: Triangulation, d: TaggedArcSpec) -> Optional[int]:
    """Return the id of the arc of T equal to d, or None."""
    if d.underlying is None:
        return None
    u = int(d.underlying)
    if u not in t.arcs:
        raise KeyError(f"underlying arc {u} is not in the triangulation")
    for candidate in (u, t.notched_partner(u)):
        if candidate is None:
            continue
        arc = t.arcs[candidate]
        tags = {str(e): tag for e, tag in zip(arc.ends, arc.tags)}
        if all(tags.get(str(e)) == tag for e, tag in zip(d.ends, d.tags)):
            return candidate
    return None


def _flip_tags(ends: List, tags: List, puncture) -> List:
    return [(NOTCHED if tag == PLAIN else PLAIN) if end == puncture else tag for end, tag in zip(ends, tags)]


def normalize_tags(t: Triangulation, d: TaggedArcSpec) -> Tuple[Triangulation, TaggedArcSpec, Dict[int, int]]:
    """
    Change tags simultaneously at punctures so that T has at most one 1-notched arc per puncture and none at a notched end of d.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Tagged arc to expand.

    Returns:
    -----------
    t (Triangulation): Normalized triangulation.

    d (TaggedArcSpec): Normalized arc.

    relabeling (dict): Permutation of arc ids to apply to every result computed for the normalized pair.
    """
    if d.notched_ends() and t.is_closed() and len(t.punctures) == 1:
        raise AssumptionError("a closed surface with a single puncture admits plain arcs only")
    t_data = t.asdict()
    d_data = d.asdict()
    for puncture in t.punctures:
        notched = sum(1 for a in t.arcs.values() for e, tag in zip(a.ends, a.tags) if e == puncture and tag == NOTCHED)
        plain = sum(1 for a in t.arcs.values() for e, tag in zip(a.ends, a.tags) if e == puncture and tag == PLAIN)
        if notched > plain:
            logger.info("changing all tags at %r", puncture)
            for arc in t_data['arcs']:
                arc['tags'] = _flip_tags(arc['ends'], arc['tags'], puncture)
            d_data['tags'] = _flip_tags(d_data['ends'], d_data['tags'], puncture)
    t = Triangulation(t_data)
    d = TaggedArcSpec(d_data)

    relabeling = {i: i for i in t.arcs}
    for notched_arc, (partner, puncture) in t.one_notched().items():
        if puncture in d.notched_ends() and partner is not None:
            logger.info("tag change at %r swaps arcs %d and %d", puncture, notched_arc, partner)
            d_data = d.asdict()
            d_data['tags'] = _flip_tags(d_data['ends'], d_data['tags'], puncture)
            d = TaggedArcSpec(d_data)
            relabeling[notched_arc], relabeling[partner] = partner, notched_arc
    for notched_arc, (_, puncture) in t.one_notched().items():
        if puncture in d.notched_ends():
            raise AssumptionError(f"1-notched arc {notched_arc} ends at the notched end {puncture!r}")
    return t, d, relabeling


def puncture_fan(t: Triangulation, p) -> List[int]:
    """
    Arcs incident to a puncture in counterclockwise order, starting from an arbitrary corner.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    p: Puncture id.

    Returns:
    -----------
    fan (list): Arc ids, one entry per arc end at p.
    """
    if p not in t.punctures:
        raise ValueError(f"{p!r} is not a puncture")
    corners = t.corners_at(p)
    if not corners:
        raise ValueError(f"puncture {p!r} lies on no triangle")
    start = corners[0]
    fan = []
    tri, corner = start
    while True:
        fan.append(t.label(tri, corner))
        nxt = t.next_corner_ccw(tri, corner)
        if nxt is None:
            raise TriangulationError([f"puncture {p!r} meets the boundary"])
        tri, corner = nxt
        if (tri, corner) == start:
            return fan
        if len(fan) > 3 * len(t.triangles):
            raise TriangulationError([f"corner walk around {p!r} does not close"])


def exchange_matrix(t: Triangulation) -> np.ndarray:
    """
    Signed adjacency matrix of the ideal triangulation.

    Each non-self-folded triangle adds +1 at (side k, side k-1) and -1 at the transposed entry; a radius then takes the row and column of its loop.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    Returns:
    -----------
    B (np.ndarray): Skew-symmetric N x N integer matrix, indexed by arc id - 1.
    """
    n = t.nvars
    raw = np.zeros((n, n), dtype=np.int64)
    for triangle in t.triangles:
        if triangle.self_folded:
            continue
        for k in range(3):
            a, b = triangle.edges[k], triangle.edges[k - 1]
            if is_arc(a) and is_arc(b):
                raw[a - 1, b - 1] += 1
                raw[b - 1, a - 1] -= 1
    pi = list(range(n))
    for _, loop, radius, _ in t.self_folded_triangles():
        if is_arc(loop) and is_arc(radius):
            pi[radius - 1] = loop - 1
    return raw[np.ix_(pi, pi)]


def end_count(t: Triangulation, arc: int, s) -> int:
    return list(t.arcs[arc].ends).count(s)
