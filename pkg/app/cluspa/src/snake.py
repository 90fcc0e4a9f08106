import logging
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
from networkx.utils import UnionFind

from cluspa.src.lpoly import LPoly, div_exact
from cluspa.src.matching import (StructureError, decompose_into_faces,
                                 enumerate_perfect_matchings,
                                 is_perfect_matching)
from cluspa.src.polygon import PolygonError, TPolygon

logger = logging.getLogger(__name__)

EdgeKey = Tuple[int, int]
Matching = FrozenSet[EdgeKey]


class SnakeGraph:
    """
    Snake graph of a triangulated strip: tile i is the quadrilateral of copies i-1 and i around the diagonal tau_i.

    Edges are keyed by (copy, side) of the polygon; nodes are (polygon vertex, tile) pairs merged along the glued edges.
    """

    def __init__(self, polygon: TPolygon):
        self.polygon = polygon
        self.graph = nx.MultiGraph()
        self.tiles: List[Tuple[int, List[EdgeKey]]] = []
        self.glue: List[EdgeKey] = []
        self.e0: Optional[EdgeKey] = None
        self._nodes = UnionFind()
        self._ends: Dict[EdgeKey, Tuple] = {}

    def node(self, vertex: int, tile: int):
        return self._nodes[(vertex, tile)]

    def x_weight(self, key: EdgeKey) -> LPoly:
        return self.polygon.x_weight(self.polygon.side_edge(*key))

    def x(self, p: Matching) -> LPoly:
        result = LPoly.one(self.polygon.nvars)
        for key in sorted(p):
            result = result * self.x_weight(key)
        return result

    def faces(self) -> Dict[int, List[EdgeKey]]:
        return {i: keys for i, (_, keys) in enumerate(self.tiles, start=1)}

    def tile_label(self, tile: int):
        return self.polygon.label(self.tiles[tile - 1][0])

    def perfect_matchings(self) -> List[Matching]:
        return enumerate_perfect_matchings(self.graph)

    def minimal_matching(self) -> Matching:
        """The matching made of boundary edges only that contains e0."""
        glue = set(self.glue)
        boundary = nx.MultiGraph()
        boundary.add_nodes_from(self.graph.nodes)
        for u, v, key in self.graph.edges(keys=True):
            if key not in glue:
                boundary.add_edge(u, v, key=key)
        found = [p for p in enumerate_perfect_matchings(boundary) if self.e0 in p]
        if len(found) != 1:
            raise StructureError(f"{self.polygon.name}: {len(found)} boundary matchings contain e0")
        return found[0]

    def height(self, p: Matching, minimal: Optional[Matching] = None) -> FrozenSet[int]:
        minimal = minimal if minimal is not None else self.minimal_matching()
        tiles = decompose_into_faces(minimal ^ p, self.faces())
        if tiles is None:
            raise StructureError(f"{self.polygon.name}: symmetric difference is not a union of tiles")
        return tiles

    def y(self, p: Matching, minimal: Optional[Matching] = None) -> LPoly:
        result = LPoly.one(self.polygon.nvars)
        for tile in sorted(self.height(p, minimal)):
            label = self.tile_label(tile)
            result = result * LPoly.y(label, self.polygon.nvars)
        return result

    def uncovered(self, p: Matching) -> set:
        covered = set()
        for key in p:
            covered.update(self._ends[key])
        return set(self.graph.nodes) - covered

    def is_perfect(self, p: Matching) -> bool:
        return is_perfect_matching(self.graph, p)


def build_snake(tp: TPolygon) -> SnakeGraph:
    """
    Snake graph of a polygon whose copies form a strip.

    Parameters:
    -----------
    tp (TPolygon): Polygon of a plain arc or a loop strip; polygons carrying fans are rejected.

    Returns:
    -----------
    snake (SnakeGraph): One tile per diagonal.
    """
    if tp.zeta or tp.xi or tp.shape != 'polygon':
        raise PolygonError(f"{tp.name}: snake graphs are built on strips without fans")
    n = len(tp.tau)
    if n == 0:
        raise PolygonError(f"{tp.name} has no diagonal")
    for i in range(n):
        if tp.tau[i] not in tp.triangles[i].edges or tp.tau[i] not in tp.triangles[i + 1].edges:
            raise PolygonError(f"{tp.name}: copies do not form a strip")
    snake = SnakeGraph(tp)
    keys_by_tile = []
    for tile in range(1, n + 1):
        tau = tp.tau[tile - 1]
        keys = []
        for copy in (tile - 1, tile):
            for side in range(3):
                if tp.side_edge(copy, side) == tau:
                    continue
                keys.append((copy, side))
        keys_by_tile.append(keys)
        snake.tiles.append((tau, keys))
        for copy, side in keys:
            snake._nodes.union((tp.corner_vertex(copy, side), tile))
            snake._nodes.union((tp.corner_vertex(copy, side + 1), tile))
    for tile in range(1, n):
        shared = set(keys_by_tile[tile - 1]) & set(keys_by_tile[tile])
        if len(shared) != 1:
            raise PolygonError(f"{tp.name}: tiles {tile} and {tile + 1} share {len(shared)} edges")
        copy, side = shared.pop()
        snake.glue.append((copy, side))
        for corner in (side, side + 1):
            vertex = tp.corner_vertex(copy, corner)
            snake._nodes.union((vertex, tile), (vertex, tile + 1))
    seen = set()
    for tile, keys in enumerate(keys_by_tile, start=1):
        for copy, side in keys:
            if (copy, side) in seen:
                continue
            seen.add((copy, side))
            u = snake.node(tp.corner_vertex(copy, side), tile)
            v = snake.node(tp.corner_vertex(copy, side + 1), tile)
            snake._ends[(copy, side)] = (u, v)
            snake.graph.add_edge(u, v, key=(copy, side))
    first_side = _side_of(tp, 0, tp.tau[0])
    snake.e0 = (0, (first_side - 1) % 3)
    logger.debug("snake graph of %s: %d tiles, %d nodes, %d edges",
                 tp.name, n, snake.graph.number_of_nodes(), snake.graph.number_of_edges())
    return snake


def _side_of(tp: TPolygon, copy: int, edge: int) -> int:
    for side in range(3):
        if tp.side_edge(copy, side) == edge:
            return side
    raise PolygonError(f"copy {copy} of {tp.name} does not contain edge {edge}")


def snake_terms(snake: SnakeGraph) -> List[Tuple[Matching, LPoly, LPoly]]:
    minimal = snake.minimal_matching()
    return [(p, snake.x(p), snake.y(p, minimal)) for p in snake.perfect_matchings()]


def snake_sum(snake: SnakeGraph) -> LPoly:
    result = LPoly.zero(snake.polygon.nvars)
    for _, x, y in snake_terms(snake):
        result = result + x * y
    return result


# arcs notched at one end: symmetric matchings of the loop around the end

def _origin_index(tp: TPolygon, copy: int) -> Tuple[str, int]:
    return tp.triangles[copy].origin


def _ends_corner(loop: TPolygon) -> Tuple[int, int]:
    """(index of the copy of the end triangle on the way in, on the way back) in a loop-of-arc polygon."""
    n, m = loop.band['n'], loop.band['m']
    return n, n + m


def _map_to_gamma(loop: TPolygon, keys) -> FrozenSet[EdgeKey]:
    mapped = set()
    for copy, side in keys:
        kind, index = _origin_index(loop, copy)
        if kind not in ('path', 'mirror'):
            raise StructureError(f"copy {copy} of {loop.name} lies in the fan")
        mapped.add((index, side))
    return frozenset(mapped)


def _gamma_index(loop: TPolygon, copy: int) -> int:
    return _origin_index(loop, copy)[1]


def _zeta_sides(loop: TPolygon) -> Tuple[int, int]:
    """Sides (c-1, c) of the end triangle around the loop's puncture."""
    n = loop.band['n']
    entry = _side_of(loop, n, loop.tau[n - 1])
    corner = (entry + 2) % 3
    return (corner - 1) % 3, corner


def _half(loop_snake: SnakeGraph, first: bool) -> List[EdgeKey]:
    loop = loop_snake.polygon
    n, back = _ends_corner(loop)
    fan_sides = set(_zeta_sides(loop))
    tiles = range(1, n + 1) if first else range(back + 1, back + n + 1)
    excluded_copy = n if first else back
    keys = []
    for tile in tiles:
        for key in loop_snake.tiles[tile - 1][1]:
            if key[0] == excluded_copy and key[1] in fan_sides:
                continue
            if key not in keys:
                keys.append(key)
    return keys


def symmetric_pms(loop_snake: SnakeGraph, gamma_snake: SnakeGraph) -> List[Tuple[Matching, Matching]]:
    """
    Symmetric perfect matchings of the snake graph of a loop around an endpoint, with their restrictions.

    A matching is symmetric when its restrictions to the two copies of the arc's tiles agree.
    The restriction is the matching of the arc's snake graph extending the first half by one end edge.

    Parameters:
    -----------
    loop_snake (SnakeGraph): Snake graph of build_arc_loop.

    gamma_snake (SnakeGraph): Snake graph of the plain arc.

    Returns:
    -----------
    pairs (list): (symmetric matching, its restriction) pairs.
    """
    loop = loop_snake.polygon
    first_half, second_half = set(_half(loop_snake, True)), set(_half(loop_snake, False))
    n = loop.band['n']
    gamma_n = _gamma_index(loop, n)
    candidates = [(gamma_n, side) for side in _zeta_sides(loop)]
    result = []
    for p in loop_snake.perfect_matchings():
        r1 = _map_to_gamma(loop, p & first_half)
        r2 = _map_to_gamma(loop, p & second_half)
        if r1 != r2:
            continue
        restrictions = [r1 | {edge} for edge in candidates if gamma_snake.is_perfect(r1 | {edge})]
        if len(restrictions) != 1:
            raise StructureError(f"{loop.name}: {len(restrictions)} restrictions for a symmetric matching")
        result.append((p, frozenset(restrictions[0])))
    logger.info("%s: %d symmetric matchings", loop.name, len(result))
    return result


def symmetric_terms(loop_snake: SnakeGraph, gamma_snake: SnakeGraph) -> List[Tuple[Matching, LPoly, LPoly]]:
    loop_minimal = loop_snake.minimal_matching()
    gamma_minimal = gamma_snake.minimal_matching()
    terms = []
    for p, res in symmetric_pms(loop_snake, gamma_snake):
        x = div_exact(loop_snake.x(p), gamma_snake.x(res))
        y = div_exact(loop_snake.y(p, loop_minimal), gamma_snake.y(res, gamma_minimal))
        terms.append((p, x, y))
    return terms


def compatible_pairs(p_terms: List[Tuple[Matching, Matching]], q_terms: List[Tuple[Matching, Matching]]) -> List[Tuple[Matching, Matching, Matching]]:
    """Pairs of symmetric matchings around both ends whose restrictions coincide, with that restriction."""
    return [(pp, pq, res_p) for pp, res_p in p_terms for pq, res_q in q_terms if res_p == res_q]


def compatible_terms(p_snake: SnakeGraph, q_snake: SnakeGraph, gamma_snake: SnakeGraph) -> List[Tuple[Tuple[Matching, Matching], LPoly, LPoly]]:
    p_minimal, q_minimal = p_snake.minimal_matching(), q_snake.minimal_matching()
    gamma_minimal = gamma_snake.minimal_matching()
    terms = []
    for pp, pq, res in compatible_pairs(symmetric_pms(p_snake, gamma_snake), symmetric_pms(q_snake, gamma_snake)):
        x = div_exact(p_snake.x(pp) * q_snake.x(pq), gamma_snake.x(res) ** 3)
        y = div_exact(p_snake.y(pp, p_minimal) * q_snake.y(pq, q_minimal), gamma_snake.y(res, gamma_minimal) ** 3)
        terms.append(((pp, pq), x, y))
    return terms


# closed loops: band graphs

class BandGraph:
    """Band graph of a closed loop: the snake graph of the cut strip with its two tau edges identified."""

    def __init__(self, snake: SnakeGraph):
        self.snake = snake
        tp = snake.polygon
        n = len(tp.tau)
        band = tp.band
        self.tau_first = (0, band['tau'])
        self.tau_last = (n, band['tau'])
        self.v = snake.node(band['v'], 1)
        self.w = snake.node(band['w'], 1)
        self.v_prime = snake.node(band['v_prime'], n)
        self.w_prime = snake.node(band['w_prime'], n)
        merge = {a: b for a, b in ((self.v_prime, self.v), (self.w_prime, self.w)) if a != b}
        self.graph = nx.MultiGraph()
        self.graph.add_nodes_from(node for node in snake.graph.nodes if node not in merge)
        for u, v, key in snake.graph.edges(keys=True):
            if key == self.tau_last:
                continue
            self.graph.add_edge(merge.get(u, u), merge.get(v, v), key=key)

    def completion(self, p: Matching) -> Optional[Matching]:
        """The snake graph matching obtained by adding a tau edge, or None when p is not good."""
        if self.tau_first in p:
            return frozenset(p | {self.tau_last})
        uncovered = self.snake.uncovered(p)
        if uncovered == {self.v_prime, self.w_prime}:
            return frozenset(p | {self.tau_last})
        if uncovered == {self.v, self.w}:
            return frozenset(p | {self.tau_first})
        return None

    def perfect_matchings(self) -> List[Matching]:
        return enumerate_perfect_matchings(self.graph)

    def good_matchings(self) -> List[Tuple[Matching, Matching]]:
        found = []
        for p in self.perfect_matchings():
            completed = self.completion(p)
            if completed is not None:
                found.append((p, completed))
        return found

    def terms(self) -> List[Tuple[Matching, LPoly, LPoly]]:
        tau_weight = self.snake.x_weight(self.tau_first)
        minimal = self.snake.minimal_matching()
        return [(p, div_exact(self.snake.x(completed), tau_weight), self.snake.y(completed, minimal))
                for p, completed in self.good_matchings()]


def build_band(strip: TPolygon) -> BandGraph:
    if strip.kind != 'strip':
        raise PolygonError(f"{strip.name} is not a band strip")
    return BandGraph(build_snake(strip))
