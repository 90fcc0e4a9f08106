import argparse
import json
import logging
import random
import sys
from typing import List, Optional

import networkx as nx
import pandas as pd
from pyvis.network import Network

from cluspa.src.bipartite import build_bipartite
from cluspa.src.config import (BACKENDS, BRANCHES, CLUSPA_BACKEND,
                               CLUSPA_DEPTH, CLUSPA_LOG_LEVEL, CLUSPA_SEED,
                               CLUSPA_TWO_NOTCHED_BRANCH, check_choice,
                               configure_logging)
from cluspa.src.expand import (backends_agree, cluster_variable,
                               compare_backends, f_vector, loop_element,
                               loop_terms, objects)
from cluspa.src.lpoly import (LPoly, format_fraction, format_lpoly,
                              monomial_to_compact, to_compact, x_denominator)
from cluspa.src.oracle import (mutation_closure, random_mutation_check,
                               resolve_two_notched_branch,
                               seed_from_triangulation, verify_against_formula)
from cluspa.src.polygon import ArcInTriangulation, TPolygon, build
from cluspa.src.qp import build_qp
from cluspa.src.snake import build_snake
from cluspa.src.surface import (LoopSpec, TaggedArcSpec, Triangulation,
                                normalize_tags, to_ideal, validate)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class RunConfig:
    """Validated settings of one command line invocation."""

    def __init__(self, args: dict):
        self.command = args.get('command')
        self.oracle_command = args.get('oracle_command')
        self.surface = args.get('surface')
        self.arcs = args.get('arc') or []
        self.loop = args.get('loop')
        self.backend = args.get('backend') or CLUSPA_BACKEND
        self.branch = args.get('branch') or CLUSPA_TWO_NOTCHED_BRANCH
        self.coefficient_free = bool(args.get('coefficient_free'))
        self.full_cuts = bool(args.get('full_cuts'))
        self.all_backends = bool(args.get('all_backends'))
        self.depth = args.get('depth') if args.get('depth') is not None else CLUSPA_DEPTH
        self.seed = args.get('seed') if args.get('seed') is not None else CLUSPA_SEED
        self.steps = args.get('steps') or 0
        self.json_out = args.get('json_out')
        self.table_out = args.get('table_out')
        self.graph_out = args.get('graph_out')
        self.dump_polygon = args.get('dump_polygon')
        self.log_level = args.get('log_level') or CLUSPA_LOG_LEVEL

    def validate(self) -> "RunConfig":
        if self.command == 'loop':
            check_choice(self.backend, ('angles', 'band', 'both'), 'backend')
        elif self.command == 'expand':
            check_choice(self.backend, BACKENDS + ('all',), 'backend')
        else:
            check_choice(self.backend, BACKENDS, 'backend')
        check_choice(self.branch, BRANCHES, 'branch')
        if self.depth < 0:
            raise UsageError("--depth must be nonnegative")
        if self.command in ('expand', 'enumerate', 'verify', 'fvector') and len(self.arcs) != 1:
            raise UsageError(f"{self.command} takes exactly one --arc")
        if self.command == 'oracle' and self.oracle_command in ('verify', 'branch') and not self.arcs:
            raise UsageError(f"oracle {self.oracle_command} needs at least one --arc")
        if self.command == 'loop' and not self.loop:
            raise UsageError("loop needs --loop")
        return self


def _jsonable(obj):
    if isinstance(obj, LPoly):
        return format_lpoly(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted((_jsonable(o) for o in obj), key=repr)
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def write_json(report: dict, path: str) -> None:
    with open(path, "w") as f:
        json.dump(_jsonable(report), f, indent=2, sort_keys=True)
    print(f"Wrote report to {path}")


def write_table(rows: List[dict], path: str) -> None:
    """
    Write one row per combinatorial object.

    Parameters:
    -----------
    rows (list): Dicts with backend, index, object, x and y.

    path (str): Output CSV file.

    Returns:
    -----------
    None
    """
    dataframe = pd.DataFrame(rows, columns=['backend', 'index', 'object', 'x', 'y'])
    dataframe.to_csv(path, index=False)
    print(f"Wrote table to {path}")


def _term_rows(backend: str, terms) -> List[dict]:
    rows = []
    for index, (obj, x, y) in enumerate(terms, start=1):
        rows.append({'backend': backend, 'index': index, 'object': json.dumps(_jsonable(obj)),
                     'x': to_compact(x), 'y': to_compact(y)})
    return rows


def combinatorial_graph(tp: TPolygon, backend: str) -> nx.MultiGraph:
    """Graph drawn for a polygon: its snake graph, bipartite graph or quiver, and the dual graph for angles."""
    if backend == 'snake':
        return build_snake(tp).graph
    if backend == 'bipartite':
        return build_bipartite(tp).graph
    if backend == 'qp':
        return build_qp(tp).quiver
    dual = nx.MultiGraph()
    for triangle in tp.triangles:
        dual.add_node(('w', triangle.index))
    for edge in tp.diagonals():
        (a, _), (b, _) = tp.edge_sides[edge]
        dual.add_edge(('w', a), ('w', b), key=edge)
    return dual


def write_graph(graph: nx.MultiGraph, path: str, height: str = "750px", width: str = "100%") -> None:
    """
    Render a graph as an interactive html page.

    Parameters:
    -----------
    graph (nx.MultiGraph): Graph to draw; node and edge keys become labels.

    path (str): Output html file.

    Returns:
    -----------
    None
    """
    net = Network(height=height, width=width, bgcolor="#222222", font_color="white",
                  directed=graph.is_directed())
    for node in graph.nodes:
        net.add_node(str(node), str(node), title=str(node))
    for source, destination, key in graph.edges(keys=True):
        net.add_edge(str(source), str(destination), title=str(key))
    net.write_html(path, notebook=False)
    print(f"Wrote graph to {path}")


def _polygon(t: Triangulation, d: TaggedArcSpec) -> TPolygon:
    validate(t)
    normalized_t, normalized_d, _ = normalize_tags(t, d)
    return build(to_ideal(normalized_t), normalized_d)


def _write_polygon_outputs(config: RunConfig, t: Triangulation, d: TaggedArcSpec, backend: str) -> None:
    if not config.dump_polygon and not config.graph_out:
        return
    try:
        tp = _polygon(t, d)
    except ArcInTriangulation as e:
        logger.warning("no polygon to write: %s", e)
        return
    if config.dump_polygon:
        tp.dump(config.dump_polygon)
        print(f"Wrote polygon to {config.dump_polygon}")
    if config.graph_out:
        try:
            graph = combinatorial_graph(tp, backend)
        except ValueError as e:
            logger.warning("no %s graph for %s: %s", backend, tp.name, e)
            return
        write_graph(graph, config.graph_out)


def cmd_expand(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    d = TaggedArcSpec.from_json(config.arcs[0])
    backends = BACKENDS if config.backend == 'all' else (config.backend,)
    results = {}
    for backend in backends:
        value = cluster_variable(t, d, backend, coefficient_free=config.coefficient_free,
                                 branch=config.branch, full_cuts=config.full_cuts)
        results[backend] = {'value': format_lpoly(value), 'fraction': format_fraction(value),
                            'denominator': monomial_to_compact(x_denominator(value)), 'terms': len(value)}
    values = {entry['value'] for entry in results.values()}
    agree = len(values) == 1
    first = results[backends[0]]
    print(first['value'])
    print(first['fraction'])
    if len(backends) > 1:
        print(f"{len(backends)} backends, {'all values equal' if agree else 'values differ'}")
    if config.json_out:
        write_json({'command': 'expand', 'surface': config.surface, 'arc': config.arcs[0],
                    'coefficient_free': config.coefficient_free, 'results': results, 'agree': agree},
                   config.json_out)
    _write_polygon_outputs(config, t, d, backends[0])
    return EXIT_OK if agree else EXIT_FAILED


def cmd_enumerate(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    d = TaggedArcSpec.from_json(config.arcs[0])
    try:
        terms = objects(t, d, config.backend, full_cuts=config.full_cuts)
    except ArcInTriangulation as e:
        raise UsageError(str(e))
    for index, (obj, x, y) in enumerate(terms, start=1):
        print(f"{index}\t{to_compact(x)}\t{to_compact(y)}\t{json.dumps(_jsonable(obj))}")
    print(f"{len(terms)} objects")
    if config.table_out:
        write_table(_term_rows(config.backend, terms), config.table_out)
    if config.json_out:
        write_json({'command': 'enumerate', 'backend': config.backend, 'count': len(terms),
                    'objects': [{'object': obj, 'x': x, 'y': y} for obj, x, y in terms]}, config.json_out)
    _write_polygon_outputs(config, t, d, config.backend)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    d = TaggedArcSpec.from_json(config.arcs[0])
    if config.all_backends:
        backends = BACKENDS
    else:
        backends = tuple(dict.fromkeys(('angles', config.backend)))
    try:
        report = compare_backends(t, d, backends)
    except ArcInTriangulation as e:
        raise UsageError(str(e))
    agree = backends_agree(report)
    counts = sorted({entry['count'] for entry in report.values()})
    if agree:
        print(f"{len(report)} backends, {counts[0]} objects each, all weights equal")
    else:
        print(f"{len(report)} backends disagree: " +
              ", ".join(f"{b} {entry['count']} objects" for b, entry in report.items()))
    if config.table_out:
        rows = []
        for backend in backends:
            rows += _term_rows(backend, objects(t, d, backend))
        write_table(rows, config.table_out)
    if config.json_out:
        write_json({'command': 'verify', 'agree': agree,
                    'backends': {b: {'count': e['count'], 'value': e['value']} for b, e in report.items()}},
                   config.json_out)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_fvector(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    d = TaggedArcSpec.from_json(config.arcs[0])
    vectors = {method: f_vector(t, d, method, config.backend)
               for method in ('max_degree', 'formula', 'intersection')}
    for method, vector in vectors.items():
        print(f"{method}: {' '.join(str(v) for v in vector)}")
    agree = len({tuple(v) for v in vectors.values()}) == 1
    print("f-vectors agree" if agree else "f-vectors differ")
    if config.json_out:
        write_json({'command': 'fvector', 'arc': config.arcs[0], 'vectors': vectors, 'agree': agree},
                   config.json_out)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_loop(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    z = LoopSpec.from_json(config.loop)
    backends = ('angles', 'band') if config.backend == 'both' else (config.backend,)
    values = {b: loop_element(t, z, b, config.coefficient_free) for b in backends}
    agree = len(set(values.values())) == 1
    value = values[backends[0]]
    print(format_lpoly(value))
    print(format_fraction(value))
    if len(backends) > 1:
        print("angle and band graph loop elements agree" if agree else "angle and band graph loop elements differ")
    if config.table_out:
        rows = []
        for backend in backends:
            rows += _term_rows(backend, loop_terms(t, z, backend))
        write_table(rows, config.table_out)
    if config.json_out:
        write_json({'command': 'loop', 'loop': config.loop, 'values': values, 'agree': agree}, config.json_out)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_oracle(config: RunConfig) -> int:
    t = Triangulation.from_json(config.surface)
    arcs = [TaggedArcSpec.from_json(path) for path in config.arcs]
    if config.oracle_command == 'closure':
        seed = seed_from_triangulation(t)
        if config.steps:
            random_mutation_check(seed, config.steps, random.Random(config.seed))
            print(f"{config.steps} random mutations are involutions")
        variables, complete = mutation_closure(seed, config.depth)
        suffix = "" if complete else f" (closure cut off at depth {config.depth})"
        print(f"{len(variables)} cluster variables{suffix}")
        if config.json_out:
            write_json({'command': 'oracle closure', 'depth': config.depth, 'complete': complete,
                        'variables': sorted(format_lpoly(v) for v in variables)}, config.json_out)
        return EXIT_OK
    if config.oracle_command == 'verify':
        report = verify_against_formula(t, arcs, config.depth, config.backend)
        for name, entry in report.items():
            print(f"{name}: {'found' if entry['found'] else 'missing'}")
        found = all(entry['found'] for entry in report.values())
        if config.json_out:
            write_json({'command': 'oracle verify', 'report': report, 'found': found}, config.json_out)
        return EXIT_OK if found else EXIT_FAILED
    verdicts = {d.name: resolve_two_notched_branch(t, d, config.depth) for d in arcs}
    for name, verdict in verdicts.items():
        for branch, entry in verdict.items():
            print(f"{name} {branch}: principal {entry['principal']}, coefficient-free {entry['coefficient_free']}")
    if config.json_out:
        write_json({'command': 'oracle branch', 'verdicts': verdicts}, config.json_out)
    return EXIT_OK if all(v['composed']['principal'] for v in verdicts.values()) else EXIT_FAILED


COMMANDS = {
    'expand': cmd_expand,
    'enumerate': cmd_enumerate,
    'verify': cmd_verify,
    'fvector': cmd_fvector,
    'loop': cmd_loop,
    'oracle': cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--surface', '-s', required=True)
    common.add_argument('--backend', '-b')
    common.add_argument('--json-out', '-o')
    common.add_argument('--log-level', default=None)

    arc = argparse.ArgumentParser(add_help=False)
    arc.add_argument('--arc', '-a', action='append')

    outputs = argparse.ArgumentParser(add_help=False)
    outputs.add_argument('--table-out')
    outputs.add_argument('--graph-out')
    outputs.add_argument('--dump-polygon')
    outputs.add_argument('--full-cuts', action='store_true')

    parser = argparse.ArgumentParser(prog='cluspa', description="Laurent expansions of cluster variables of triangulated surfaces.")
    commands = parser.add_subparsers(dest='command', required=True)

    expand = commands.add_parser('expand', parents=[common, arc, outputs])
    expand.add_argument('--coefficient-free', action='store_true')
    expand.add_argument('--branch', choices=BRANCHES)

    commands.add_parser('enumerate', parents=[common, arc, outputs])

    verify = commands.add_parser('verify', parents=[common, arc])
    verify.add_argument('--all-backends', action='store_true')
    verify.add_argument('--table-out')

    commands.add_parser('fvector', parents=[common, arc])

    loop = commands.add_parser('loop', parents=[common])
    loop.add_argument('--loop', '-l', required=True)
    loop.add_argument('--coefficient-free', action='store_true')
    loop.add_argument('--table-out')

    oracle = commands.add_parser('oracle')
    oracle_commands = oracle.add_subparsers(dest='oracle_command', required=True)
    closure = oracle_commands.add_parser('closure', parents=[common])
    closure.add_argument('--steps', type=int, default=0)
    closure.add_argument('--seed', type=int)
    for name in ('verify', 'branch'):
        oracle_commands.add_parser(name, parents=[common, arc])
    for sub in (closure, oracle_commands.choices['verify'], oracle_commands.choices['branch']):
        sub.add_argument('--depth', type=int)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the command line interface.

    Parameters:
    -----------
    argv (list): Arguments without the program name; defaults to sys.argv[1:].

    Returns:
    -----------
    code (int): 0 on success, 1 when a check fails, 2 on usage errors, 3 on unreadable input.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(vars(args)).validate()
        configure_logging(config.log_level)
    except (UsageError, ValueError) as e:
        print(f"cluspa: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[config.command](config)
    except UsageError as e:
        print(f"cluspa: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as e:
        print(f"cluspa: cannot read input: {e}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, AssertionError) as e:
        print(f"cluspa: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
