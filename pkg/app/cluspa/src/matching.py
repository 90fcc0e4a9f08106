from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional

import networkx as nx


class StructureError(ValueError):
    """A combinatorial object lacks the structure the expansion relies on."""


def is_perfect_matching(graph: nx.MultiGraph, edges: Iterable[Hashable]) -> bool:
    """Whether the edge keys in `edges` cover every node of `graph` exactly once."""
    ends = {key: (u, v) for u, v, key in graph.edges(keys=True)}
    covered = []
    for key in edges:
        if key not in ends:
            return False
        u, v = ends[key]
        covered.extend([u, v] if u != v else [u, u])
    return len(covered) == len(set(covered)) and set(covered) == set(graph.nodes)


def enumerate_perfect_matchings(graph: nx.MultiGraph) -> List[FrozenSet[Hashable]]:
    """
    Every perfect matching of a multigraph, as frozensets of edge keys.

    Backtracks on the first uncovered node in sorted order, trying its incident edges by key.

    Parameters:
    -----------
    graph (nx.MultiGraph): Graph whose edge keys are unique and sortable.

    Returns:
    -----------
    matchings (list): Perfect matchings in a deterministic order.
    """
    nodes = sorted(graph.nodes, key=repr)
    incident: Dict[Hashable, List] = {node: [] for node in nodes}
    for u, v, key in graph.edges(keys=True):
        if u == v:
            continue
        incident[u].append((key, v))
        incident[v].append((key, u))
    for node in nodes:
        incident[node].sort(key=lambda item: repr(item[0]))

    matchings = []
    covered = set()
    chosen = []

    def backtrack():
        node = next((n for n in nodes if n not in covered), None)
        if node is None:
            matchings.append(frozenset(chosen))
            return
        covered.add(node)
        for key, other in incident[node]:
            if other in covered:
                continue
            covered.add(other)
            chosen.append(key)
            backtrack()
            chosen.pop()
            covered.discard(other)
        covered.discard(node)

    if len(nodes) % 2 == 0:
        backtrack()
    return matchings


def decompose_into_faces(target: Iterable[Hashable], faces: Dict[Hashable, Iterable[Hashable]]) -> Optional[FrozenSet[Hashable]]:
    """
    Write a set of edges as a symmetric difference of faces.

    Solves the linear system over GF(2) with integer bitmasks.

    Parameters:
    -----------
    target (iterable): Edge keys of the set to decompose.

    faces (dict): Map face id -> edge keys on its boundary.

    Returns:
    -----------
    faces (frozenset): Face ids whose symmetric difference is `target`, or None when none exists.
    """
    edge_index = {}

    def mask(edges):
        bits = 0
        for edge in edges:
            if edge not in edge_index:
                edge_index[edge] = len(edge_index)
            bits ^= 1 << edge_index[edge]
        return bits

    face_ids = sorted(faces, key=repr)
    rows = [(mask(faces[f]), 1 << i) for i, f in enumerate(face_ids)]
    goal = mask(target)
    pivots = []
    for bits, combination in rows:
        for pivot_bit, pivot_bits, pivot_combination in pivots:
            if bits & pivot_bit:
                bits ^= pivot_bits
                combination ^= pivot_combination
        if bits:
            pivots.append((bits & -bits, bits, combination))
    combination = 0
    for pivot_bit, pivot_bits, pivot_combination in pivots:
        if goal & pivot_bit:
            goal ^= pivot_bits
            combination ^= pivot_combination
    if goal:
        return None
    return frozenset(f for i, f in enumerate(face_ids) if combination >> i & 1)
