import json
import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

from networkx.utils import UnionFind

from cluspa.src.lpoly import LPoly
from cluspa.src.surface import (NOTCHED, AssumptionError, LoopSpec,
                                TaggedArcSpec, Triangulation, is_arc)

logger = logging.getLogger(__name__)


class PolygonError(ValueError):
    pass


class CrossingError(PolygonError):
    pass


class ArcInTriangulation(PolygonError):
    pass


class Angle(NamedTuple):
    triangle: int
    corner: int
    vertex: int


class PolygonTriangle:
    def __init__(self, index: int, source: int, origin: Tuple[str, int], vertices: List[int], edges: List[int]):
        self.index = index
        self.source = source
        self.origin = tuple(origin)
        self.vertices = list(vertices)
        self.edges = list(edges)


class TPolygon:
    """
    Triangulated polygon (or annulus) assembled from copies of triangles of T.

    Copies keep the side indexing of the triangle they copy. Edges carry the label of the arc or boundary segment they come from.
    """

    def __init__(self, name: str, kind: str, shape: str, nvars: int):
        self.name = name
        self.kind = kind
        self.shape = shape
        self.nvars = nvars
        self.triangles: List[PolygonTriangle] = []
        self.edge_labels: Dict[int, object] = {}
        self.edge_sides: Dict[int, List[Tuple[int, int]]] = {}
        self.vertex_points: Dict[int, object] = {}
        self.tau: List[int] = []
        self.zeta: List[int] = []
        self.xi: List[int] = []
        self.start: Optional[int] = None
        self.end: Optional[int] = None
        self.band: Dict[str, object] = {}

    # incidence

    def label(self, edge: int):
        return self.edge_labels[edge]

    def is_diagonal(self, edge: int) -> bool:
        return len(self.edge_sides[edge]) == 2

    def diagonals(self) -> List[int]:
        return [e for e in sorted(self.edge_sides) if self.is_diagonal(e)]

    def boundary_edges(self) -> List[int]:
        return [e for e in sorted(self.edge_sides) if not self.is_diagonal(e)]

    def side_edge(self, tri: int, side: int) -> int:
        return self.triangles[tri].edges[side % 3]

    def corner_vertex(self, tri: int, corner: int) -> int:
        return self.triangles[tri].vertices[corner % 3]

    def edge_ends(self, edge: int) -> Tuple[int, int]:
        tri, side = self.edge_sides[edge][0]
        return self.corner_vertex(tri, side), self.corner_vertex(tri, side + 1)

    def other_side(self, tri: int, side: int) -> Optional[Tuple[int, int]]:
        others = [s for s in self.edge_sides[self.side_edge(tri, side)] if s != (tri, side % 3)]
        return others[0] if others else None

    def next_corner_ccw(self, tri: int, corner: int) -> Optional[Tuple[int, int]]:
        return self.other_side(tri, (corner - 1) % 3)

    def corners_at(self, vertex: int) -> List[Tuple[int, int]]:
        return [(t.index, c) for t in self.triangles for c in range(3) if t.vertices[c] == vertex]

    def is_interior(self, vertex: int) -> bool:
        return not any(vertex in self.edge_ends(e) for e in self.boundary_edges())

    def ccw_corners(self, vertex: int) -> List[Tuple[int, int]]:
        """
        Corners at a vertex in counterclockwise order.

        At a boundary vertex the walk starts at the corner whose leaving side is a boundary edge; at an interior vertex it starts at the first corner.
        """
        corners = self.corners_at(vertex)
        start = corners[0]
        for tri, corner in corners:
            if not self.is_diagonal(self.side_edge(tri, corner)):
                start = (tri, corner)
                break
        ordered = [start]
        current = self.next_corner_ccw(*start)
        while current is not None and current != start:
            ordered.append(current)
            current = self.next_corner_ccw(*current)
        if len(ordered) != len(corners):
            raise PolygonError(f"corners at vertex {vertex} do not form a single fan")
        return ordered

    def vertices(self) -> List[int]:
        return sorted(self.vertex_points)

    def diagonal_vertices(self) -> List[int]:
        found = set()
        for edge in self.diagonals():
            found.update(self.edge_ends(edge))
        return sorted(found)

    def boundary_components(self) -> List[List[int]]:
        """Vertex sets of the connected components of the boundary."""
        uf = UnionFind()
        for edge in self.boundary_edges():
            a, b = self.edge_ends(edge)
            uf.union(a, b)
        components = {}
        for v in self.vertices():
            if not self.is_interior(v):
                components.setdefault(uf[v], []).append(v)
        return sorted(components.values())

    # weights

    def x_weight(self, edge: int) -> LPoly:
        label = self.edge_labels[edge]
        if is_arc(label):
            return LPoly.x(label, self.nvars)
        return LPoly.one(self.nvars)

    def y_weight(self, edge: int) -> LPoly:
        label = self.edge_labels[edge]
        if is_arc(label):
            return LPoly.y(label, self.nvars)
        return LPoly.one(self.nvars)

    def cross(self) -> LPoly:
        result = LPoly.one(self.nvars)
        for edge in self.diagonals():
            result = result * self.x_weight(edge)
        return result

    def copies_with(self, kind: str) -> List[int]:
        return [t.index for t in self.triangles if t.origin[0] == kind]

    # serialization

    def to_dict(self) -> dict:
        return {
            'name': self.name, 'kind': self.kind, 'shape': self.shape, 'nvars': self.nvars,
            'triangles': [{'source': t.source, 'origin': list(t.origin), 'vertices': list(t.vertices),
                           'edges': list(t.edges)} for t in self.triangles],
            'edges': [{'id': e, 'label': self.edge_labels[e], 'sides': [list(s) for s in self.edge_sides[e]],
                       'diagonal': self.is_diagonal(e)} for e in sorted(self.edge_sides)],
            'vertices': [{'id': v, 'point': self.vertex_points[v], 'interior': self.is_interior(v)}
                         for v in self.vertices()],
            'tau': list(self.tau), 'zeta': list(self.zeta), 'xi': list(self.xi),
            'start': self.start, 'end': self.end, 'band': dict(self.band),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TPolygon":
        polygon = cls(data.get('name', ''), data.get('kind', 'plain'), data.get('shape', 'polygon'), data.get('nvars', 0))
        for index, t in enumerate(data.get('triangles', [])):
            polygon.triangles.append(PolygonTriangle(index, t['source'], tuple(t['origin']), t['vertices'], t['edges']))
        for e in data.get('edges', []):
            polygon.edge_labels[e['id']] = e['label']
            polygon.edge_sides[e['id']] = [tuple(s) for s in e['sides']]
        for v in data.get('vertices', []):
            polygon.vertex_points[v['id']] = v['point']
        polygon.tau = list(data.get('tau', []))
        polygon.zeta = list(data.get('zeta', []))
        polygon.xi = list(data.get('xi', []))
        polygon.start = data.get('start')
        polygon.end = data.get('end')
        polygon.band = dict(data.get('band', {}))
        return polygon

    def dump(self, path: str) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)


def angles(tp: TPolygon) -> Tuple[List[Angle], List[Angle], List[Angle]]:
    """
    Angles of a triangulated polygon.

    Parameters:
    -----------
    tp (TPolygon): Triangulated polygon.

    Returns:
    -----------
    all_angles (list): Every corner of every triangle.

    at_diagonals (list): Angles with at least one diagonal side.

    exterior (list): Angles between a diagonal and a boundary edge.
    """
    all_angles, at_diagonals, exterior = [], [], []
    for triangle in tp.triangles:
        for corner in range(3):
            angle = Angle(triangle.index, corner, triangle.vertices[corner])
            all_angles.append(angle)
            diagonal_sides = sum(1 for e in angle_sides(tp, angle) if tp.is_diagonal(e))
            if diagonal_sides:
                at_diagonals.append(angle)
            if diagonal_sides == 1:
                exterior.append(angle)
    return all_angles, at_diagonals, exterior


def angle_sides(tp: TPolygon, angle: Angle) -> Tuple[int, int]:
    """Edges (arriving, leaving) bounding an angle."""
    return tp.side_edge(angle.triangle, angle.corner - 1), tp.side_edge(angle.triangle, angle.corner)


def opposite_edge(tp: TPolygon, angle: Angle) -> int:
    return tp.side_edge(angle.triangle, angle.corner + 1)


def angle_weight(tp: TPolygon, angle: Angle) -> LPoly:
    return tp.x_weight(opposite_edge(tp, angle))


class _Assembler:
    """Glue copies of triangles of T along matching sides and number the result."""

    def __init__(self, t: Triangulation):
        self.t = t
        self.copies: List[Tuple[int, Tuple[str, int]]] = []
        self.uf = UnionFind()

    def add(self, source: int, origin: Tuple[str, int]) -> int:
        self.copies.append((source, origin))
        return len(self.copies) - 1

    def glue(self, a: int, side_a: int, b: int, side_b: int) -> None:
        src_a, src_b = self.copies[a][0], self.copies[b][0]
        if self.t.partner(src_a, side_a) != (src_b, side_b):
            raise CrossingError(
                f"side {side_a} of {self.t.triangles[src_a].name} is not glued to side {side_b} of {self.t.triangles[src_b].name} in T")
        self.uf.union(('s', a, side_a), ('s', b, side_b))
        self.uf.union(('c', a, side_a), ('c', b, (side_b + 1) % 3))
        self.uf.union(('c', a, (side_a + 1) % 3), ('c', b, side_b))

    def build(self, name: str, kind: str, shape: str = 'polygon') -> TPolygon:
        polygon = TPolygon(name, kind, shape, self.t.nvars)
        vertex_ids, edge_ids = {}, {}
        for index, (source, origin) in enumerate(self.copies):
            vertices, edges = [], []
            for k in range(3):
                root = self.uf[('c', index, k)]
                if root not in vertex_ids:
                    vertex_ids[root] = len(vertex_ids)
                    polygon.vertex_points[vertex_ids[root]] = self.t.vertex(source, k)
                vertices.append(vertex_ids[root])
                root = self.uf[('s', index, k)]
                if root not in edge_ids:
                    edge_ids[root] = len(edge_ids)
                    polygon.edge_labels[edge_ids[root]] = self.t.label(source, k)
                    polygon.edge_sides[edge_ids[root]] = []
                polygon.edge_sides[edge_ids[root]].append((index, k))
                edges.append(edge_ids[root])
            polygon.triangles.append(PolygonTriangle(index, source, origin, vertices, edges))
        return polygon


Step = Tuple[int, Optional[int], Optional[int]]


def _exit_side(t: Triangulation, tri: int, entry: Optional[int], arc: int, next_tri: int) -> int:
    for side in range(3):
        if side == entry or t.label(tri, side) != arc:
            continue
        slot = t.partner(tri, side)
        if slot is not None and slot[0] == next_tri:
            return side
    raise CrossingError(f"triangle {t.triangles[tri].name} has no side {arc} leading to {t.triangles[next_tri].name}")


def resolve_crossings(t: Triangulation, d: TaggedArcSpec) -> List[Step]:
    """
    Entry and exit sides of every crossed triangle.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    d (TaggedArcSpec): Arc with its crossing data.

    Returns:
    -----------
    steps (list): (triangle index, entry side, exit side) per crossed triangle; the first entry and last exit are None.
    """
    tris = [t.triangle_index(ref) for ref in d.triangles]
    n = len(d.arcs)
    if len(tris) != n + 1:
        raise CrossingError(f"{d.name}: {len(tris)} triangles for {n} crossed arcs")
    steps = []
    if d.sides is not None:
        if len(d.sides) != n + 1:
            raise CrossingError(f"{d.name}: sides must list one [entry, exit] pair per triangle")
        for i, (entry, exit_side) in enumerate(d.sides):
            if i < n and t.label(tris[i], exit_side) != d.arcs[i]:
                raise CrossingError(f"{d.name}: side {exit_side} of triangle {i} is not arc {d.arcs[i]}")
            steps.append((tris[i], entry if i else None, exit_side if i < n else None))
    else:
        entry = None
        for i in range(n):
            exit_side = _exit_side(t, tris[i], entry, d.arcs[i], tris[i + 1])
            steps.append((tris[i], entry, exit_side))
            entry = t.partner(tris[i], exit_side)[1]
        steps.append((tris[n], entry, None))
    for i in range(n):
        if t.partner(steps[i][0], steps[i][2]) != (steps[i + 1][0], steps[i + 1][1]):
            raise CrossingError(f"{d.name}: crossing {i + 1} does not lead into the next triangle")
    if n and d.ends:
        first = t.vertex(steps[0][0], steps[0][2] + 2)
        last = t.vertex(steps[n][0], steps[n][1] + 2)
        if [first, last] != list(d.ends):
            raise CrossingError(f"{d.name}: crossings run from {first!r} to {last!r}, not {d.ends}")
    return steps


def resolve_loop(t: Triangulation, z: LoopSpec) -> List[Step]:
    """Entry and exit sides of a closed loop; triangle i is left through arcs[i] into triangle i+1 (cyclically)."""
    tris = [t.triangle_index(ref) for ref in z.triangles]
    n = len(tris)
    if n == 0 or len(z.arcs) != n:
        raise CrossingError(f"{z.name}: a loop needs one crossed arc per triangle")
    if z.sides is not None:
        steps = [(tris[i], z.sides[i][0], z.sides[i][1]) for i in range(n)]
    else:
        steps = None
        for first_exit in range(3):
            if t.label(tris[0], first_exit) != z.arcs[0]:
                continue
            slot = t.partner(tris[0], first_exit)
            if slot is None or slot[0] != tris[1 % n]:
                continue
            candidate = [(tris[0], None, first_exit)]
            entry = slot[1]
            try:
                for i in range(1, n):
                    exit_side = _exit_side(t, tris[i], entry, z.arcs[i], tris[(i + 1) % n])
                    candidate.append((tris[i], entry, exit_side))
                    entry = t.partner(tris[i], exit_side)[1]
            except CrossingError:
                continue
            if entry != first_exit:
                candidate[0] = (tris[0], entry, first_exit)
                steps = candidate
                break
        if steps is None:
            raise CrossingError(f"{z.name}: crossing sequence does not close up")
    for i in range(n):
        tri, _, exit_side = steps[i]
        nxt = steps[(i + 1) % n]
        if t.partner(tri, exit_side) != (nxt[0], nxt[1]):
            raise CrossingError(f"{z.name}: crossing {i + 1} does not lead into the next triangle")
    return steps


def _assemble(t: Triangulation, steps: List[Tuple[int, Optional[int], Optional[int], Tuple[str, int]]]) -> _Assembler:
    assembler = _Assembler(t)
    for tri, _, _, origin in steps:
        assembler.add(tri, origin)
    for i in range(len(steps) - 1):
        assembler.glue(i, steps[i][2], i + 1, steps[i + 1][1])
    return assembler


def _fan_walk(t: Triangulation, tri: int, corner: int) -> List[Tuple[int, int]]:
    """Corners met walking counterclockwise from (tri, corner) until the walk returns, excluding the start."""
    walk = []
    current = t.next_corner_ccw(tri, corner)
    while current != (tri, corner):
        if current is None:
            raise AssumptionError(f"vertex {t.vertex(tri, corner)!r} is not a puncture")
        walk.append(current)
        if len(walk) > 3 * len(t.triangles):
            raise PolygonError("fan walk does not close")
        current = t.next_corner_ccw(*current)
    if not walk:
        raise AssumptionError(f"the fan at {t.vertex(tri, corner)!r} closes on itself; normalize tags first")
    return walk


def _attach_fan(assembler: _Assembler, copy: int, corner: int, kind: str) -> List[Tuple[int, int]]:
    """Glue the fan around the vertex at `corner` of `copy`; return the (copy, side) pairs of its spokes in ccw order."""
    t = assembler.t
    source = assembler.copies[copy][0]
    spokes = [(copy, (corner - 1) % 3)]
    previous = (copy, (corner - 1) % 3)
    for j, (tri, c) in enumerate(_fan_walk(t, source, corner), start=1):
        new = assembler.add(tri, (kind, j))
        assembler.glue(previous[0], previous[1], new, c)
        previous = (new, (c - 1) % 3)
        spokes.append(previous)
    assembler.glue(previous[0], previous[1], copy, corner)
    spokes[-1] = (copy, corner)
    return spokes


def _path_steps(steps: List[Step]) -> List[Tuple[int, Optional[int], Optional[int], Tuple[str, int]]]:
    return [(tri, entry, exit_side, ('path', i)) for i, (tri, entry, exit_side) in enumerate(steps)]


def _finish_path(polygon: TPolygon, steps: List[Step]) -> None:
    n = len(steps) - 1
    polygon.tau = [polygon.side_edge(i, steps[i][2]) for i in range(n)]
    polygon.start = polygon.corner_vertex(0, steps[0][2] + 2)
    polygon.end = polygon.corner_vertex(n, steps[n][1] + 2)


def build_plain(t: Triangulation, d: TaggedArcSpec, steps: Optional[List[Step]] = None) -> TPolygon:
    """
    Triangulated polygon of a plain arc: the crossed triangles glued along the crossed arcs.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    d (TaggedArcSpec): Arc crossing at least one arc of T.

    steps (list, optional): Resolved crossings.

    Returns:
    -----------
    polygon (TPolygon): Polygon with tau set to the glued edges, start and end at the arc's endpoints.
    """
    steps = steps or resolve_crossings(t, d)
    if len(steps) < 2:
        raise ArcInTriangulation(f"{d.name} crosses no arc of T")
    assembler = _assemble(t, _path_steps(steps))
    polygon = assembler.build(d.name, 'plain')
    _finish_path(polygon, steps)
    logger.debug("built polygon for %s with %d triangles", d.name, len(polygon.triangles))
    return polygon


def build_notched(t: Triangulation, d: TaggedArcSpec) -> TPolygon:
    """
    Triangulated polygon of an arc notched at one or both ends: the plain polygon with the full fan of each notched puncture attached.

    An arc notched only at its start is reversed first, so zeta always surrounds the end.
    """
    if d.kind == 'plain':
        return build_plain(t, d)
    if d.kind == 'notched1' and d.tags[0] == NOTCHED:
        d = d.reversed()
    steps = resolve_crossings(t, d)
    if len(steps) < 2:
        raise ArcInTriangulation(f"{d.name} crosses no arc of T")
    n = len(steps) - 1
    assembler = _assemble(t, _path_steps(steps))
    end_corner = (steps[n][1] + 2) % 3
    zeta = _attach_fan(assembler, n, end_corner, 'fan')
    xi = []
    if d.kind == 'notched2':
        start_corner = (steps[0][2] + 2) % 3
        xi = _attach_fan(assembler, 0, start_corner, 'fan_start')
    polygon = assembler.build(d.name, d.kind)
    _finish_path(polygon, steps)
    polygon.zeta = [polygon.side_edge(c, s) for c, s in zeta]
    polygon.xi = [polygon.side_edge(c, s) for c, s in xi]
    logger.debug("built %s polygon for %s: %d triangles, fan sizes %d/%d",
                 d.kind, d.name, len(polygon.triangles), len(polygon.zeta), len(polygon.xi))
    return polygon


def build(t: Triangulation, d: TaggedArcSpec) -> TPolygon:
    """Dispatch on the tag type of d."""
    if d.kind == 'plain':
        return build_plain(t, d)
    return build_notched(t, d)


def build_arc_loop(t: Triangulation, d: TaggedArcSpec, side: str = 'end') -> TPolygon:
    """
    Polygon of the loop that follows d, turns once around its endpoint and comes back.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    d (TaggedArcSpec): Arc whose endpoint is a puncture; tags are ignored.

    side (str): 'end' to go around the end of d, 'start' for its start.

    Returns:
    -----------
    polygon (TPolygon): Strip of 2n+m+1 triangles; copies carry origins ('path', i), ('fan', j) and ('mirror', i) relative to d.
    """
    if side not in ('end', 'start'):
        raise ValueError("side must be 'end' or 'start'")
    gamma = d.reversed() if side == 'start' else d
    steps = resolve_crossings(t, gamma)
    n = len(steps) - 1
    if n < 1:
        raise ArcInTriangulation(f"{d.name} crosses no arc of T")
    tri_n, entry_n, _ = steps[n]
    corner = (entry_n + 2) % 3
    fan = _fan_walk(t, tri_n, corner)

    loop_steps = [(tri, entry, exit_side, ('path', i)) for i, (tri, entry, exit_side) in enumerate(steps[:-1])]
    loop_steps.append((tri_n, entry_n, (corner - 1) % 3, ('path', n)))
    for j, (tri, c) in enumerate(fan, start=1):
        loop_steps.append((tri, c, (c - 1) % 3, ('fan', j)))
    loop_steps.append((tri_n, corner, entry_n, ('mirror', n)))
    for i in range(n - 1, -1, -1):
        tri, entry, exit_side = steps[i]
        loop_steps.append((tri, exit_side, entry, ('mirror', i)))

    if side == 'start':
        loop_steps = [(tri, entry, exit_side, (kind, n - i if kind in ('path', 'mirror') else i))
                      for tri, entry, exit_side, (kind, i) in loop_steps]
    assembler = _assemble(t, loop_steps)
    polygon = assembler.build(f"{d.name}:loop-{side}", 'loop')
    count = len(loop_steps)
    polygon.tau = [polygon.side_edge(i, loop_steps[i][2]) for i in range(count - 1)]
    polygon.start = polygon.corner_vertex(0, loop_steps[0][2] + 2)
    polygon.end = polygon.corner_vertex(count - 1, loop_steps[-1][1] + 2)
    polygon.band = {'n': n, 'm': len(fan) + 1, 'side': side}
    return polygon


def build_loop_polygon(t: Triangulation, base, s, arc: Optional[int] = None) -> TPolygon:
    """
    Polygon of the loop at `base` enclosing the puncture s and the arc of T joining them.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    base: Marked point where the loop is based.

    s: Enclosed puncture.

    arc (int, optional): Arc of T joining base and s; required when several do.

    Returns:
    -----------
    polygon (TPolygon): Fan of the triangles around s, opened along the arc. A polygon without diagonals means the loop is itself an arc of T.
    """
    candidates = [a.id for a in t.arcs.values() if sorted(map(str, t.ideal_ends(a.id))) == sorted(map(str, (base, s)))]
    if arc is not None:
        if arc not in candidates:
            raise PolygonError(f"arc {arc} does not join {base!r} and {s!r}")
        candidates = [arc]
    if len(candidates) != 1:
        raise PolygonError(f"{len(candidates)} arcs of T join {base!r} and {s!r}; pass arc explicitly")
    arc = candidates[0]
    start = next(((tri, c) for tri, c in t.corners_at(s) if t.label(tri, c) == arc), None)
    if start is None:
        raise PolygonError(f"arc {arc} does not leave {s!r}")
    walk = [start]
    current = start
    while t.label(current[0], current[1] - 1) != arc:
        current = t.next_corner_ccw(*current)
        if current is None or current == start:
            raise PolygonError(f"walk around {s!r} does not return to arc {arc}")
        walk.append(current)
    loop_steps = []
    for i, (tri, c) in enumerate(walk):
        entry = c if i else None
        exit_side = (c - 1) % 3 if i < len(walk) - 1 else None
        loop_steps.append((tri, entry, exit_side, ('loop', i)))
    assembler = _assemble(t, loop_steps)
    polygon = assembler.build(f"loop:{base}-{s}", 'loop_s')
    polygon.tau = [polygon.side_edge(i, loop_steps[i][2]) for i in range(len(walk) - 1)]
    polygon.band = {'underlying': arc, 'base': base, 'puncture': s}
    if polygon.tau:
        polygon.start = polygon.corner_vertex(0, loop_steps[0][2] + 2)
        polygon.end = polygon.corner_vertex(len(walk) - 1, loop_steps[-1][1] + 2)
    return polygon


def loop_label(t: Triangulation, polygon: TPolygon):
    """Label of the loop when its polygon has no diagonal, i.e. when the loop is an arc of T."""
    if polygon.diagonals():
        return None
    source = polygon.triangles[0].source
    arc = polygon.band['underlying']
    others = [t.label(source, side) for side in range(3) if t.label(source, side) != arc]
    if len(others) != 1 or not is_arc(others[0]):
        raise PolygonError(f"loop around {polygon.band['puncture']!r} is not an arc of T")
    return others[0]


def build_annulus(t: Triangulation, z: LoopSpec) -> TPolygon:
    """Annulus obtained by gluing the crossed triangles of a closed loop cyclically."""
    steps = resolve_loop(t, z)
    n = len(steps)
    assembler = _Assembler(t)
    for i, (tri, _, _) in enumerate(steps):
        assembler.add(tri, ('path', i))
    for i in range(n):
        assembler.glue(i, steps[i][2], (i + 1) % n, steps[(i + 1) % n][1])
    polygon = assembler.build(z.name, 'annulus', shape='annulus')
    polygon.tau = [polygon.side_edge(i, steps[i][2]) for i in range(n)]
    return polygon


def build_band_strip(t: Triangulation, z: LoopSpec) -> TPolygon:
    """
    Strip obtained by cutting a closed loop open in its first triangle: copies of triangles 0..n-1 and a second copy of triangle 0.

    band records, for the first and last copies, the corners where the cut side tau meets alpha (the last exit) and beta (the first exit).
    """
    steps = resolve_loop(t, z)
    n = len(steps)
    tri0, entry0, exit0 = steps[0]
    strip_steps = [(tri0, None, exit0, ('path', 0))]
    for i in range(1, n):
        tri, entry, exit_side = steps[i]
        strip_steps.append((tri, entry, exit_side, ('path', i)))
    strip_steps.append((tri0, entry0, None, ('path', n)))
    assembler = _assemble(t, strip_steps)
    polygon = assembler.build(f"{z.name}:strip", 'strip')
    polygon.tau = [polygon.side_edge(i, strip_steps[i][2]) for i in range(n)]
    alpha, beta = entry0, exit0
    tau = 3 - alpha - beta
    polygon.band = {
        'alpha': alpha, 'beta': beta, 'tau': tau,
        'v': polygon.corner_vertex(0, _shared_corner(tau, alpha)),
        'w': polygon.corner_vertex(0, _shared_corner(tau, beta)),
        'v_prime': polygon.corner_vertex(n, _shared_corner(tau, beta)),
        'w_prime': polygon.corner_vertex(n, _shared_corner(tau, alpha)),
        'tau_first': polygon.side_edge(0, tau),
        'tau_last': polygon.side_edge(n, tau),
    }
    return polygon


def _shared_corner(a: int, b: int) -> int:
    """Corner where sides a and b of a triangle meet."""
    if (a + 1) % 3 == b:
        return b
    return a
