import logging
from typing import Dict, FrozenSet, List, Tuple

import networkx as nx

from cluspa.src import angle_matchings
from cluspa.src.lpoly import LPoly
from cluspa.src.matching import StructureError
from cluspa.src.polygon import Angle, TPolygon, angles

logger = logging.getLogger(__name__)

Arrow = Tuple


class QuiverWithPotential:
    """
    Quiver on the edges of a triangulated polygon with its potential.

    Arrow ('t', tri, c) runs inside triangle tri from side c-1 to side c; arrow ('b', v) closes the exterior cycle at a boundary vertex v.
    Triangle cycles enter the potential with sign +1, exterior cycles with sign -1.
    """

    def __init__(self, tp: TPolygon):
        self.polygon = tp
        self.quiver = nx.MultiDiGraph()
        self.quiver.add_nodes_from(sorted(tp.edge_sides))
        self.cycles: List[Tuple[int, List[Arrow]]] = []
        for triangle in tp.triangles:
            arrows = []
            for c in range(3):
                arrow = ('t', triangle.index, c)
                self.quiver.add_edge(triangle.edges[(c - 1) % 3], triangle.edges[c], key=arrow)
                arrows.append(arrow)
            self.cycles.append((1, arrows))
        for vertex in tp.diagonal_vertices():
            corners = tp.ccw_corners(vertex)
            arrows = [('t', tri, c) for tri, c in corners]
            if not tp.is_interior(vertex):
                first, last = corners[0], corners[-1]
                source = tp.side_edge(first[0], first[1])
                target = tp.side_edge(last[0], last[1] - 1)
                arrow = ('b', vertex)
                self.quiver.add_edge(source, target, key=arrow)
                arrows.append(arrow)
            self.cycles.append((-1, arrows))

    def arrows(self) -> List[Arrow]:
        return sorted((key for _, _, key in self.quiver.edges(keys=True)), key=repr)

    def potential(self) -> List[Tuple[int, List[Arrow]]]:
        return list(self.cycles)

    @property
    def size(self) -> int:
        """Number of triangle cycles, which is also the number of exterior cycles."""
        return len(self.polygon.triangles)


def rho(angle: Angle) -> Arrow:
    return ('t', angle.triangle, angle.corner)


def rho_inverse(qp: QuiverWithPotential, arrow: Arrow) -> Angle:
    if len(arrow) != 3 or arrow[0] != 't':
        raise StructureError(f"arrow {arrow!r} is not the image of an angle")
    _, tri, corner = arrow
    return Angle(tri, corner, qp.polygon.corner_vertex(tri, corner))


def build_qp(tp: TPolygon) -> QuiverWithPotential:
    return QuiverWithPotential(tp)


def cuts(qp: QuiverWithPotential, full: bool = False) -> List[FrozenSet[Arrow]]:
    """
    Cuts of the potential: arrow sets meeting every cycle of the potential exactly once.

    Parameters:
    -----------
    qp (QuiverWithPotential): Quiver with potential.

    full (bool): Search all arrows instead of the images of angles with a diagonal side.

    Returns:
    -----------
    cuts (list): Every cut found, minimal or not.
    """
    if full:
        allowed = set(qp.arrows())
    else:
        _, at_diagonals, _ = angles(qp.polygon)
        allowed = {rho(a) for a in at_diagonals}
    cycles = [[a for a in arrows if a in allowed] for _, arrows in qp.cycles]
    member: Dict[Arrow, List[int]] = {}
    for index, (_, arrows) in enumerate(qp.cycles):
        for arrow in arrows:
            member.setdefault(arrow, []).append(index)
    hits = [0] * len(cycles)
    chosen: List[Arrow] = []
    found = []

    def backtrack():
        index = next((i for i, h in enumerate(hits) if h == 0), None)
        if index is None:
            found.append(frozenset(chosen))
            return
        for arrow in cycles[index]:
            if any(hits[i] for i in member[arrow]):
                continue
            for i in member[arrow]:
                hits[i] += 1
            chosen.append(arrow)
            backtrack()
            chosen.pop()
            for i in member[arrow]:
                hits[i] -= 1

    backtrack()
    return found


def minimal_cuts(qp: QuiverWithPotential, full: bool = False) -> List[FrozenSet[Arrow]]:
    return [c for c in cuts(qp, full) if len(c) == qp.size]


def cut_terms(qp: QuiverWithPotential, full: bool = False) -> List[Tuple[FrozenSet[Arrow], LPoly, LPoly]]:
    """(cut, x-weight, y-weight) for every minimal cut, weighted through the corresponding angles."""
    tp = qp.polygon
    minimal = angle_matchings.minimal_matching(tp)
    terms = []
    for cut in minimal_cuts(qp, full):
        matching = frozenset(rho_inverse(qp, arrow) for arrow in cut)
        terms.append((cut, angle_matchings.x_weight(tp, matching), angle_matchings.y_weight(tp, matching, minimal)))
    logger.debug("%s: %d minimal cuts", tp.name, len(terms))
    return terms


def qp_sum(qp: QuiverWithPotential, full: bool = False) -> LPoly:
    result = LPoly.zero(qp.polygon.nvars)
    for _, x, y in cut_terms(qp, full):
        result = result + x * y
    return result


def all_cuts(qp: QuiverWithPotential) -> List[FrozenSet[Arrow]]:
    """Cuts over every arrow of the quiver, for checking that minimal cuts stay inside the angle images."""
    return cuts(qp, full=True)
