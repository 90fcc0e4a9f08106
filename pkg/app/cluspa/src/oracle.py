import logging
import random
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from cluspa.src.config import BRANCHES, CLUSPA_DEPTH
from cluspa.src.lpoly import LPoly, div_exact, set_y_one
from cluspa.src.surface import (TaggedArcSpec, Triangulation, exchange_matrix,
                                normalize_tags, validate)

logger = logging.getLogger(__name__)


class OracleMismatch(ValueError):
    pass


class Seed:
    """Cluster, as Laurent polynomials in the initial variables, with its 2N x N extended exchange matrix."""

    def __init__(self, cluster: List[LPoly], matrix: np.ndarray):
        self.cluster = list(cluster)
        self.matrix = np.array(matrix, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.cluster)

    def key(self) -> FrozenSet[LPoly]:
        return frozenset(self.cluster)


def seed_from_matrix(b: np.ndarray) -> Seed:
    """
    Initial seed with principal coefficients.

    Parameters:
    -----------
    b (np.ndarray): Skew-symmetric N x N exchange matrix.

    Returns:
    -----------
    seed (Seed): Cluster x_1..x_N over the matrix B stacked on the identity.
    """
    b = np.asarray(b, dtype=np.int64)
    n = b.shape[0]
    if b.shape != (n, n) or not np.array_equal(b, -b.T):
        raise ValueError("exchange matrix must be square and skew-symmetric")
    return Seed([LPoly.x(i, n) for i in range(1, n + 1)], np.vstack([b, np.eye(n, dtype=np.int64)]))


def seed_from_triangulation(t: Triangulation) -> Seed:
    validate(t)
    return seed_from_matrix(exchange_matrix(t))


def _monomial_product(seed: Seed, column: np.ndarray, sign: int) -> LPoly:
    n = seed.rank
    result = LPoly.one(n)
    for i in range(n):
        e = int(column[i]) * sign
        if e > 0:
            result = result * seed.cluster[i] ** e
    for j in range(n):
        e = int(column[n + j]) * sign
        if e > 0:
            result = result * LPoly.y(j + 1, n, e)
    return result


def mutate_matrix(matrix: np.ndarray, k: int) -> np.ndarray:
    """Matrix mutation in direction k (0-based)."""
    b = np.asarray(matrix, dtype=np.int64)
    column = b[:, k]
    row = b[k, :]
    mutated = b + (np.sign(column)[:, None] * np.maximum(column[:, None] * row[None, :], 0))
    mutated[:, k] = -b[:, k]
    mutated[k, :] = -b[k, :]
    return mutated


def mutate(seed: Seed, k: int) -> Seed:
    """
    Mutate a seed in direction k.

    Parameters:
    -----------
    seed (Seed): Seed to mutate.

    k (int): 1-based direction.

    Returns:
    -----------
    seed (Seed): The mutated seed; the new variable is obtained by exact division.
    """
    if not 1 <= k <= seed.rank:
        raise ValueError(f"direction {k} outside 1..{seed.rank}")
    column = seed.matrix[:, k - 1]
    numerator = _monomial_product(seed, column, 1) + _monomial_product(seed, column, -1)
    cluster = list(seed.cluster)
    cluster[k - 1] = div_exact(numerator, seed.cluster[k - 1])
    return Seed(cluster, mutate_matrix(seed.matrix, k - 1))


def mutation_closure(seed: Seed, max_depth: int = CLUSPA_DEPTH) -> Tuple[Set[LPoly], bool]:
    """
    Cluster variables reachable by at most max_depth mutations.

    Parameters:
    -----------
    seed (Seed): Initial seed.

    max_depth (int): Breadth-first search depth.

    Returns:
    -----------
    variables (set): Every cluster variable met.

    complete (bool): Whether the search exhausted the exchange graph within the depth.
    """
    variables = set(seed.cluster)
    seen = {seed.key()}
    queue = deque([(seed, 0, None)])
    complete = True
    while queue:
        current, depth, last = queue.popleft()
        for k in range(1, current.rank + 1):
            if k == last:
                continue
            mutated = mutate(current, k)
            if mutated.key() in seen:
                continue
            if depth == max_depth:
                complete = False
                continue
            seen.add(mutated.key())
            variables.update(mutated.cluster)
            queue.append((mutated, depth + 1, k))
    if not complete:
        logger.warning("mutation closure cut off at depth %d with %d variables", max_depth, len(variables))
    logger.info("closure: %d clusters, %d variables", len(seen), len(variables))
    return variables, complete


def random_mutation_check(seed: Seed, steps: int = 20, rng: Optional[random.Random] = None) -> int:
    """
    Mutate along a random walk and check that mutating twice in the same direction restores the seed.

    Returns:
    -----------
    steps (int): Number of involution checks performed.
    """
    rng = rng or random.Random(0)
    current = seed
    for _ in range(steps):
        k = rng.randint(1, current.rank)
        mutated = mutate(current, k)
        back = mutate(mutated, k)
        if back.cluster != current.cluster or not np.array_equal(back.matrix, current.matrix):
            raise OracleMismatch(f"mutation in direction {k} is not an involution")
        current = mutated
    return steps


def verify_against_formula(t: Triangulation, arcs: Iterable[TaggedArcSpec], depth: int = CLUSPA_DEPTH,
                           backend: str = 'angles') -> Dict[str, dict]:
    """
    Check that the expansion of each arc appears among the variables of the mutation closure.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    arcs (iterable): Tagged arcs to check.

    depth (int): Closure depth.

    Returns:
    -----------
    report (dict): arc name -> {'value', 'found', 'complete'}.
    """
    from cluspa.src.expand import cluster_variable

    variables, complete = mutation_closure(seed_from_triangulation(t), depth)
    report = {}
    for d in arcs:
        value = cluster_variable(t, d, backend)
        report[d.name] = {'value': value, 'found': value in variables, 'complete': complete}
        if value not in variables:
            logger.warning("%s: expansion not found among %d closure variables", d.name, len(variables))
    return report


def resolve_two_notched_branch(t: Triangulation, d: TaggedArcSpec, depth: int = CLUSPA_DEPTH) -> Dict[str, Dict[str, bool]]:
    """
    Decide which formula for a doubly notched arc over an arc of T lies in the cluster algebra.

    Each branch is looked up among the closure variables, with principal coefficients and after setting every y to 1.

    Parameters:
    -----------
    t (Triangulation): Tagged triangulation.

    d (TaggedArcSpec): Doubly notched arc with `underlying` set.

    depth (int): Closure depth.

    Returns:
    -----------
    verdict (dict): branch -> {'principal': bool, 'coefficient_free': bool, 'complete': bool}.
    """
    from cluspa.src.expand import relabel, two_notched_values

    if d.kind != 'notched2' or d.underlying is None:
        raise ValueError(f"{d.name} is not a doubly notched arc over an arc of T")
    validate(t)
    variables, complete = mutation_closure(seed_from_triangulation(t), depth)
    free = {set_y_one(v) for v in variables}
    normalized_t, normalized_d, relabeling = normalize_tags(t, d)
    values = two_notched_values(normalized_t, normalized_d)
    verdict = {}
    for branch in BRANCHES:
        value = relabel(values[branch], relabeling)
        verdict[branch] = {'principal': value in variables, 'coefficient_free': set_y_one(value) in free,
                           'complete': complete}
        logger.info("branch %s: principal %s, coefficient-free %s", branch,
                    verdict[branch]['principal'], verdict[branch]['coefficient_free'])
    return verdict
