import logging
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from cluspa.src.lpoly import LPoly
from cluspa.src.matching import StructureError
from cluspa.src.polygon import (Angle, PolygonError, TPolygon, angle_sides,
                                angle_weight, angles)

logger = logging.getLogger(__name__)

AngleMatching = FrozenSet[Angle]


def _search(tp: TPolygon, forced: Optional[Dict[int, Angle]] = None) -> List[AngleMatching]:
    _, candidates, _ = angles(tp)
    targets = set(tp.diagonal_vertices())
    by_triangle: Dict[int, List[Angle]] = {}
    for angle in candidates:
        if forced and angle.vertex in forced and forced[angle.vertex] != angle:
            continue
        by_triangle.setdefault(angle.triangle, []).append(angle)
    order = [t.index for t in tp.triangles]
    if len(order) != len(targets):
        logger.warning("%s: %d triangles but %d vertices on diagonals", tp.name, len(order), len(targets))
        return []

    found = []
    used: Set[int] = set()
    chosen: List[Angle] = []

    def backtrack(position: int):
        if position == len(order):
            found.append(frozenset(chosen))
            return
        for angle in by_triangle.get(order[position], []):
            if angle.vertex in used:
                continue
            used.add(angle.vertex)
            chosen.append(angle)
            backtrack(position + 1)
            chosen.pop()
            used.discard(angle.vertex)

    backtrack(0)
    return found


def enumerate(tp: TPolygon) -> List[AngleMatching]:
    """
    All perfect matchings of angles: one angle per triangle and one per vertex lying on a diagonal, using angles with a diagonal side.

    Parameters:
    -----------
    tp (TPolygon): Triangulated polygon or annulus.

    Returns:
    -----------
    matchings (list): Frozensets of angles, in backtracking order.
    """
    return _search(tp)


def min_angle(tp: TPolygon, vertex: int) -> Angle:
    tri, corner = tp.ccw_corners(vertex)[0]
    return Angle(tri, corner, vertex)


def max_angle(tp: TPolygon, vertex: int) -> Angle:
    tri, corner = tp.ccw_corners(vertex)[-1]
    return Angle(tri, corner, vertex)


def _constrained_vertices(tp: TPolygon) -> List[int]:
    return [v for v in tp.diagonal_vertices() if not tp.is_interior(v)]


def minimal_matching(tp: TPolygon) -> AngleMatching:
    """
    The perfect matching taking the first counterclockwise angle at every boundary vertex on a diagonal.

    Punctures inside the polygon carry no condition.

    Parameters:
    -----------
    tp (TPolygon): Triangulated polygon or annulus.

    Returns:
    -----------
    minimal (frozenset): The minimal matching.
    """
    forced = {v: min_angle(tp, v) for v in _constrained_vertices(tp)}
    found = _search(tp, forced)
    if len(found) != 1:
        raise StructureError(f"{tp.name}: {len(found)} matchings satisfy the min-condition, expected exactly one")
    return found[0]


def four_angle_diagonal(tp: TPolygon, a: AngleMatching) -> Optional[int]:
    """tau_1 when a doubly notched arc crossing a single arc meets the extra coefficient rule."""
    if tp.kind != 'notched2' or len(tp.tau) != 1 or not tp.zeta or not tp.xi:
        return None
    tau = tp.tau[0]
    for angle in a:
        first, second = angle_sides(tp, angle)
        for fan_edge in (tp.zeta[-1], tp.xi[-1]):
            if fan_edge not in (first, second):
                continue
            other = second if first == fan_edge else first
            if other == tau or not tp.is_diagonal(other):
                return tau
    return None


def y_support(tp: TPolygon, a: AngleMatching, minimal: Optional[AngleMatching] = None) -> List[int]:
    """
    Diagonals contributing a coefficient to the matching a.

    These are the diagonal sides of exterior angles in the symmetric difference with the minimal matching.
    A doubly notched arc crossing one arc adds tau_1 when a uses an angle between the last spoke of a fan and tau_1 or a boundary edge.

    Parameters:
    -----------
    tp (TPolygon): Triangulated polygon.

    a (frozenset): Perfect matching of angles.

    minimal (frozenset, optional): Precomputed minimal matching.

    Returns:
    -----------
    diagonals (list): Sorted edge ids.
    """
    minimal = minimal if minimal is not None else minimal_matching(tp)
    _, _, exterior = angles(tp)
    exterior = set(exterior)
    support = set()
    for angle in minimal ^ a:
        if angle in exterior:
            support.update(e for e in angle_sides(tp, angle) if tp.is_diagonal(e))
    extra = four_angle_diagonal(tp, a)
    if extra is not None:
        support.add(extra)
    return sorted(support)


def x_weight(tp: TPolygon, a: AngleMatching) -> LPoly:
    result = LPoly.one(tp.nvars)
    for angle in sorted(a):
        result = result * angle_weight(tp, angle)
    return result


def y_weight(tp: TPolygon, a: AngleMatching, minimal: Optional[AngleMatching] = None) -> LPoly:
    result = LPoly.one(tp.nvars)
    for edge in y_support(tp, a, minimal):
        result = result * tp.y_weight(edge)
    return result


def is_bad(tp: TPolygon, a: AngleMatching) -> bool:
    """Whether a takes the min angle all along one boundary component and the max angle all along the other."""
    components = tp.boundary_components()
    if len(components) != 2:
        raise PolygonError(f"{tp.name}: an annulus has two boundary components, found {len(components)}")
    at = {angle.vertex: angle for angle in a}
    diagonal_vertices = set(tp.diagonal_vertices())

    def all_at(component, pick):
        vertices = [v for v in component if v in diagonal_vertices]
        return all(at.get(v) == pick(tp, v) for v in vertices)

    first, second = components
    return (all_at(first, min_angle) and all_at(second, max_angle)) or \
        (all_at(first, max_angle) and all_at(second, min_angle))


def good_enumerate(tp: TPolygon) -> List[AngleMatching]:
    """
    Perfect matchings of angles in a triangulated annulus that are not bad.

    Parameters:
    -----------
    tp (TPolygon): Triangulated annulus.

    Returns:
    -----------
    good (list): Good matchings.
    """
    if tp.shape != 'annulus':
        raise PolygonError(f"{tp.name}: good matchings are defined on annuli only")
    matchings = _search(tp)
    good = [a for a in matchings if not is_bad(tp, a)]
    logger.info("%s: %d matchings, %d good", tp.name, len(matchings), len(good))
    return good


def expansion_terms(tp: TPolygon, good_only: bool = False) -> List[Tuple[AngleMatching, LPoly, LPoly]]:
    """(matching, x-weight, y-weight) for every matching of tp; annuli use only good matchings when good_only is set."""
    matchings = good_enumerate(tp) if good_only else _search(tp)
    if not matchings:
        raise StructureError(f"{tp.name} admits no perfect matching of angles")
    minimal = minimal_matching(tp)
    return [(a, x_weight(tp, a), y_weight(tp, a, minimal)) for a in matchings]


def angle_sum(tp: TPolygon, good_only: bool = False) -> LPoly:
    result = LPoly.zero(tp.nvars)
    for _, x, y in expansion_terms(tp, good_only):
        result = result + x * y
    return result
