import logging
from collections import Counter
from typing import Dict, List, Optional, Tuple

from cluspa.src import angle_matchings
from cluspa.src.bipartite import bipartite_terms, build_bipartite
from cluspa.src.config import (BACKENDS, BRANCHES, CLUSPA_BACKEND,
                               CLUSPA_TWO_NOTCHED_BRANCH, check_choice)
from cluspa.src.lpoly import (LPoly, all_coefficients_positive, div_exact,
                              has_negative_y, max_y_degrees, product,
                              set_y_one, substitute)
from cluspa.src.polygon import (ArcInTriangulation, TPolygon,
                                build, build_annulus, build_arc_loop,
                                build_band_strip, build_loop_polygon,
                                build_plain, loop_label)
from cluspa.src.qp import build_qp, cut_terms
from cluspa.src.snake import (build_band, build_snake, compatible_terms,
                              snake_terms, symmetric_terms)
from cluspa.src.surface import (NOTCHED, LoopSpec, TaggedArcSpec,
                                Triangulation, arc_in_triangulation,
                                end_count, normalize_tags, to_ideal, validate)

logger = logging.getLogger(__name__)


def cross(tp: TPolygon) -> LPoly:
    return tp.cross()


def phi(t: Triangulation) -> Tuple[Dict[int, LPoly], Dict[int, LPoly]]:
    """
    Images of x and y under the substitution attached to the 1-notched arcs of T.

    For a 1-notched arc j with plain partner k, x_j goes to x_j x_k and y_k goes to y_k / y_j.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    Returns:
    -----------
    sx (dict): Images of the x variables that move.

    sy (dict): Images of the y variables that move.
    """
    n = t.nvars
    sx, sy = {}, {}
    for j, (k, _) in t.one_notched().items():
        if k is None:
            continue
        sx[j] = LPoly.x(j, n) * LPoly.x(k, n)
        sy[k] = LPoly.y(k, n) * LPoly.y(j, n, -1)
    return sx, sy


def apply_phi(t: Triangulation, f: LPoly) -> LPoly:
    sx, sy = phi(t)
    if not sx and not sy:
        return f
    return substitute(f, sx, sy)


def relabel(f: LPoly, relabeling: Dict[int, int]) -> LPoly:
    """Rename variables: index i becomes relabeling[i] in both x and y."""
    moved = {i: j for i, j in relabeling.items() if i != j}
    if not moved:
        return f
    n = f.nvars
    sx = {i: LPoly.x(j, n) for i, j in moved.items()}
    sy = {i: LPoly.y(j, n) for i, j in moved.items()}
    return substitute(f, sx, sy)


def _terms(t: Triangulation, d: TaggedArcSpec, backend: str, full_cuts: bool = False) -> List[Tuple[object, LPoly, LPoly]]:
    """Weighted combinatorial objects of one backend, for an arc whose underlying plain arc is not in T."""
    if backend == 'snake':
        return _snake_terms(t, d)
    tp = build(t, d)
    if backend == 'angles':
        return angle_matchings.expansion_terms(tp)
    if backend == 'bipartite':
        return bipartite_terms(build_bipartite(tp))
    if backend == 'qp':
        return cut_terms(build_qp(tp), full=full_cuts)
    raise ValueError(f"unknown backend {backend!r}")


def _oriented(d: TaggedArcSpec) -> TaggedArcSpec:
    """Orient an arc notched at one end so that the notch sits at its end."""
    if d.kind == 'notched1' and d.tags[0] == NOTCHED:
        return d.reversed()
    return d


def _snake_terms(t: Triangulation, d: TaggedArcSpec) -> List[Tuple[object, LPoly, LPoly]]:
    d = _oriented(d)
    gamma = d.plain()
    gamma_snake = build_snake(build_plain(t, gamma))
    if d.kind == 'plain':
        return snake_terms(gamma_snake)
    p_snake = build_snake(build_arc_loop(t, gamma, 'end'))
    if d.kind == 'notched1':
        return symmetric_terms(p_snake, gamma_snake)
    q_snake = build_snake(build_arc_loop(t, gamma, 'start'))
    return compatible_terms(p_snake, q_snake, gamma_snake)


def laurent_sum(t: Triangulation, d: TaggedArcSpec, backend: str = 'angles', full_cuts: bool = False) -> LPoly:
    """
    Sum of x(obj) y(obj) over the objects of a backend, divided by the crossing monomial, before the substitution.

    Parameters:
    -----------
    t (Triangulation): Ideal triangulation.

    d (TaggedArcSpec): Arc whose underlying plain arc is not in T.

    backend (str): One of angles, snake, bipartite, qp.

    Returns:
    -----------
    value (LPoly): Laurent polynomial in the variables of the ideal triangulation.
    """
    terms = _terms(t, d, backend, full_cuts)
    if not terms:
        raise ValueError(f"{d.name}: backend {backend} found no objects")
    total = LPoly.zero(t.nvars)
    for _, x, y in terms:
        total = total + x * y
    return total * build(t, d).cross().inverse()


def _check_output(value: LPoly, name: str) -> LPoly:
    if has_negative_y(value):
        raise ValueError(f"{name}: expansion has a negative y exponent")
    if not all_coefficients_positive(value):
        raise ValueError(f"{name}: expansion has a nonpositive coefficient")
    return value


def loop_variable(t: Triangulation, base, s, arc: Optional[int] = None, backend: str = 'angles') -> LPoly:
    """
    Variable of the loop at `base` cutting out a monogon around the puncture s.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation, already normalized.

    base: Marked point the loop is based at.

    s: Enclosed puncture.

    arc (int, optional): Arc of T joining base and s.

    backend (str): Backend computing the polygon sum; the snake backend uses its own graph of the same polygon.

    Returns:
    -----------
    x (LPoly): Laurent polynomial of the loop.
    """
    ideal = to_ideal(t)
    tp = build_loop_polygon(ideal, base, s, arc)
    label = loop_label(ideal, tp)
    if label is not None:
        return LPoly.x(label, t.nvars)
    if backend == 'snake':
        terms = snake_terms(build_snake(tp))
    elif backend == 'bipartite':
        terms = bipartite_terms(build_bipartite(tp))
    elif backend == 'qp':
        terms = cut_terms(build_qp(tp))
    else:
        terms = angle_matchings.expansion_terms(tp)
    total = LPoly.zero(t.nvars)
    for _, x, y in terms:
        total = total + x * y
    return apply_phi(t, total * tp.cross().inverse())


def end_monomial(t: Triangulation, s) -> LPoly:
    """Product of y_tau^(number of ends of tau at s) over the tagged arcs of T."""
    n = t.nvars
    return product((LPoly.y(arc, n, end_count(t, arc, s)) for arc in sorted(t.arcs) if end_count(t, arc, s)), n)


def two_notched_values(t: Triangulation, d: TaggedArcSpec, backend: str = 'angles') -> Dict[str, LPoly]:
    """
    Candidate values for an arc notched at both ends whose underlying arc is in T, one per formula branch.

    Parameters:
    -----------
    t (Triangulation): Normalized tagged triangulation.

    d (TaggedArcSpec): Doubly notched arc with `underlying` set.

    Returns:
    -----------
    values (dict): Branch name -> Laurent polynomial.
    """
    n = t.nvars
    u = int(d.underlying)
    q, p = d.ends
    x_bar = LPoly.x(u, n)
    loop_p = loop_variable(t, q, p, u, backend)
    loop_q = loop_variable(t, p, q, u, backend)
    y_bar = LPoly.y(u, n)
    one = LPoly.one(n)
    correction = (one - end_monomial(t, p)) * (one - end_monomial(t, q))
    composed_p = div_exact(loop_p, x_bar)
    composed_q = div_exact(loop_q, x_bar)
    return {
        'composed': div_exact(composed_p * composed_q * y_bar + correction, x_bar),
        'printed': div_exact(loop_p * loop_q * y_bar + correction, x_bar),
        'printed_coefficient_free': div_exact(loop_p * loop_q + one, x_bar),
    }


def cluster_variable(t: Triangulation, d: TaggedArcSpec, backend: str = CLUSPA_BACKEND,
                     coefficient_free: bool = False, branch: str = CLUSPA_TWO_NOTCHED_BRANCH,
                     full_cuts: bool = False) -> LPoly:
    """
    Laurent expansion of the cluster variable of a tagged arc in the initial seed of T, with principal coefficients.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Tagged arc.

    backend (str): angles, snake, bipartite or qp.

    coefficient_free (bool): Specialize every y to 1.

    branch (str): Formula for doubly notched arcs whose underlying arc is in T.

    full_cuts (bool): Let the qp backend search cuts over all arrows.

    Returns:
    -----------
    x (LPoly): The cluster variable.
    """
    check_choice(backend, BACKENDS, 'backend')
    check_choice(branch, BRANCHES, 'branch')
    validate(t)
    t, d, relabeling = normalize_tags(t, d)
    ideal = to_ideal(t)
    n = t.nvars

    checked = True
    in_t = arc_in_triangulation(t, d)
    if in_t is not None:
        logger.info("%s is arc %d of T", d.name, in_t)
        value = LPoly.x(in_t, n)
    elif d.kind == 'plain' or d.underlying is None:
        value = apply_phi(t, laurent_sum(ideal, d, backend, full_cuts))
    elif d.kind == 'notched1':
        s = d.notched_ends()[0]
        base = d.ends[1] if d.ends[0] == s else d.ends[0]
        u = int(d.underlying)
        value = div_exact(loop_variable(t, base, s, u, backend), LPoly.x(u, n))
    else:
        value = two_notched_values(t, d, backend)[branch]
        checked = branch == 'composed'
    value = relabel(value, relabeling)
    if coefficient_free:
        value = set_y_one(value)
    if checked:
        _check_output(value, d.name)
    return value


def objects(t: Triangulation, d: TaggedArcSpec, backend: str = CLUSPA_BACKEND,
            full_cuts: bool = False) -> List[Tuple[object, LPoly, LPoly]]:
    """
    Weighted combinatorial objects of one backend for an arc whose underlying plain arc is not in T.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Tagged arc.

    backend (str): angles, snake, bipartite or qp.

    Returns:
    -----------
    terms (list): (object, x-weight, y-weight) triples in the variables of the normalized ideal triangulation.
    """
    check_choice(backend, BACKENDS, 'backend')
    validate(t)
    t, d, _ = normalize_tags(t, d)
    if arc_in_triangulation(t, d) is not None or (d.underlying is not None and d.kind != 'plain'):
        raise ArcInTriangulation(f"{d.name}: underlying arc lies in T, there is no polygon to enumerate")
    return _terms(to_ideal(t), d, backend, full_cuts)


def compare_backends(t: Triangulation, d: TaggedArcSpec, backends=BACKENDS) -> Dict[str, dict]:
    """
    Run every backend on one arc and report object counts and weight multisets.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Arc whose underlying plain arc is not in T.

    Returns:
    -----------
    report (dict): backend -> {'count', 'weights', 'value'}; weights count each term x(obj) y(obj).
    """
    report = {}
    for backend in backends:
        terms = objects(t, d, backend)
        weights = Counter(x * y for _, x, y in terms)
        report[backend] = {'count': len(terms), 'weights': weights,
                           'value': sum((x * y for _, x, y in terms), LPoly.zero(t.nvars))}
    return report


def backends_agree(report: Dict[str, dict]) -> bool:
    first = next(iter(report.values()))
    return all(entry['count'] == first['count'] and entry['weights'] == first['weights'] for entry in report.values())


def intersection_number(t: Triangulation, d: TaggedArcSpec, i: int) -> int:
    """
    Tagged intersection number of the arc i of T with d, read off the crossing data and the tags.

    Parameters:
    -----------
    t (Triangulation): Normalized tagged triangulation.

    d (TaggedArcSpec): Normalized tagged arc.

    i (int): Arc id in T.

    Returns:
    -----------
    number (int): Crossings with the underlying curve of i, plus tag conflicts at shared punctures, minus one when the two form a self-folded pair.
    """
    if arc_in_triangulation(t, d) is not None:
        return 0
    partner = t.plain_partner(i)
    target = partner if partner is not None else i
    crossings = sum(1 for arc in d.arcs if arc == target) if d.underlying is None or d.kind == 'plain' else 0
    arc = t.arcs[i]
    conflicts = 0
    for end_d, tag_d in zip(d.ends, d.tags):
        for end_i, tag_i in zip(arc.ends, arc.tags):
            if end_d == end_i and tag_d != tag_i and end_d in t.punctures:
                conflicts += 1
    folded = 0
    if d.underlying is not None and d.kind == 'notched1' and int(d.underlying) == i:
        folded = -1
    return crossings + conflicts + folded


def f_vector(t: Triangulation, d: TaggedArcSpec, method: str = 'max_degree', backend: str = CLUSPA_BACKEND) -> List[int]:
    """
    f-vector of the cluster variable of d.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Tagged arc.

    method (str): 'max_degree' reads maximal y-degrees of the expansion, 'formula' evaluates the closed formula, 'intersection' counts tagged intersections.

    Returns:
    -----------
    f (list): One entry per arc of T.
    """
    if method == 'max_degree':
        return max_y_degrees(cluster_variable(t, d, backend))
    validate(t)
    t, d, relabeling = normalize_tags(t, d)
    n = t.nvars
    inverse = {j: i for i, j in relabeling.items()}
    if method == 'intersection':
        values = [intersection_number(t, d, i) for i in range(1, n + 1)]
        return [values[inverse[i] - 1] for i in range(1, n + 1)]
    if method != 'formula':
        raise ValueError(f"unknown f-vector method {method!r}")
    if arc_in_triangulation(t, d) is not None:
        values = [0] * n
    elif d.kind == 'plain' or d.underlying is None:
        tp = build(to_ideal(t), d)
        monomial = product((tp.y_weight(e) for e in tp.diagonals()), n)
        values = list(next(iter(apply_phi(t, monomial).terms)).yexp)
    elif d.kind == 'notched1':
        s = d.notched_ends()[0]
        u = int(d.underlying)
        values = [end_count(t, i, s) - (1 if i == u else 0) for i in range(1, n + 1)]
    else:
        p, q = d.ends
        values = [end_count(t, i, p) + end_count(t, i, q) for i in range(1, n + 1)]
    return [values[inverse[i] - 1] for i in range(1, n + 1)]


def loop_element(t: Triangulation, z: LoopSpec, backend: str = 'angles', coefficient_free: bool = False) -> LPoly:
    """
    Element of the cluster algebra attached to a closed loop in a surface without punctures.

    Parameters:
    -----------
    t (Triangulation): Triangulation without punctures.

    z (LoopSpec): Closed loop with its crossing data.

    backend (str): 'angles' for good matchings of angles in the annulus, 'band' for good matchings of the band graph.

    Returns:
    -----------
    x (LPoly): Sum of the weights of good matchings divided by the crossing monomial.
    """
    validate(t)
    if t.punctures:
        raise ValueError("loop elements are defined for surfaces without punctures")
    if backend == 'angles':
        tp = build_annulus(t, z)
        terms = angle_matchings.expansion_terms(tp, good_only=True)
    elif backend == 'band':
        tp = build_band_strip(t, z)
        terms = build_band(tp).terms()
    else:
        raise ValueError(f"unknown loop backend {backend!r}")
    total = LPoly.zero(t.nvars)
    for _, x, y in terms:
        total = total + x * y
    value = total * tp.cross().inverse()
    if coefficient_free:
        value = set_y_one(value)
    return _check_output(value, z.name)


def loop_terms(t: Triangulation, z: LoopSpec, backend: str = 'angles') -> List[Tuple[object, LPoly, LPoly]]:
    if backend == 'angles':
        return angle_matchings.expansion_terms(build_annulus(t, z), good_only=True)
    return build_band(build_band_strip(t, z)).terms()


def substitution_targets(t: Triangulation) -> Dict[str, List[int]]:
    """Arcs moved by the substitution, for reports."""
    sx, sy = phi(t)
    return {'x': sorted(sx), 'y': sorted(sy)}
