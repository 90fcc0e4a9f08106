import logging
from typing import Dict, FrozenSet, List, Tuple

import networkx as nx

from cluspa.src import angle_matchings
from cluspa.src.lpoly import LPoly
from cluspa.src.matching import (StructureError, decompose_into_faces,
                                 enumerate_perfect_matchings)
from cluspa.src.polygon import Angle, TPolygon, angle_weight, angles

logger = logging.getLogger(__name__)

EdgeKey = Tuple[int, int]


class BipartiteGraph:
    """
    Bipartite graph of a triangulated polygon.

    Black nodes ('b', v) are the vertices on diagonals, white nodes ('w', t) the triangles.
    Each angle with a diagonal side is an edge keyed by (triangle, corner), so edges and angles correspond one to one.
    """

    def __init__(self, tp: TPolygon):
        self.polygon = tp
        self.graph = nx.MultiGraph()
        _, at_diagonals, _ = angles(tp)
        self.angles: Dict[EdgeKey, Angle] = {}
        for triangle in tp.triangles:
            self.graph.add_node(('w', triangle.index), bipartite=1)
        for vertex in tp.diagonal_vertices():
            self.graph.add_node(('b', vertex), bipartite=0)
        for angle in at_diagonals:
            key = (angle.triangle, angle.corner)
            self.angles[key] = angle
            self.graph.add_edge(('b', angle.vertex), ('w', angle.triangle), key=key)

    def squares(self) -> Dict[int, List[EdgeKey]]:
        """Square of each diagonal: the four edges joining its endpoints to its two triangles."""
        faces = {}
        for edge in self.polygon.diagonals():
            faces[edge] = [(tri, (side + k) % 3) for tri, side in self.polygon.edge_sides[edge] for k in (0, 1)]
        return faces

    def perfect_matchings(self) -> List[FrozenSet[EdgeKey]]:
        return enumerate_perfect_matchings(self.graph)

    def minimal_matching(self) -> FrozenSet[EdgeKey]:
        return frozenset((a.triangle, a.corner) for a in angle_matchings.minimal_matching(self.polygon))

    def x(self, e: FrozenSet[EdgeKey]) -> LPoly:
        result = LPoly.one(self.polygon.nvars)
        for key in sorted(e):
            result = result * angle_weight(self.polygon, self.angles[key])
        return result

    def enclosed_squares(self, e: FrozenSet[EdgeKey], minimal: FrozenSet[EdgeKey] = None) -> FrozenSet[int]:
        minimal = minimal if minimal is not None else self.minimal_matching()
        squares = decompose_into_faces(minimal ^ e, self.squares())
        if squares is None:
            raise StructureError(f"{self.polygon.name}: symmetric difference is not a union of squares")
        return squares

    def y(self, e: FrozenSet[EdgeKey], minimal: FrozenSet[EdgeKey] = None) -> LPoly:
        result = LPoly.one(self.polygon.nvars)
        support = set(self.enclosed_squares(e, minimal))
        extra = angle_matchings.four_angle_diagonal(self.polygon, frozenset(self.angles[key] for key in e))
        if extra is not None:
            support.add(extra)
        for edge in sorted(support):
            result = result * self.polygon.y_weight(edge)
        return result


def build_bipartite(tp: TPolygon) -> BipartiteGraph:
    graph = BipartiteGraph(tp)
    logger.debug("bipartite graph of %s: %d nodes, %d edges", tp.name,
                 graph.graph.number_of_nodes(), graph.graph.number_of_edges())
    return graph


def bipartite_terms(graph: BipartiteGraph) -> List[Tuple[FrozenSet[EdgeKey], LPoly, LPoly]]:
    """
    (matching, x-weight, y-weight) for every perfect matching of the bipartite graph.

    Parameters:
    -----------
    graph (BipartiteGraph): Graph built from a triangulated polygon.

    Returns:
    -----------
    terms (list): One triple per perfect matching.
    """
    minimal = graph.minimal_matching()
    return [(e, graph.x(e), graph.y(e, minimal)) for e in graph.perfect_matchings()]


def bipartite_sum(graph: BipartiteGraph) -> LPoly:
    result = LPoly.zero(graph.polygon.nvars)
    for _, x, y in bipartite_terms(graph):
        result = result + x * y
    return result
