import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

import pandas as pd

from cluspa.src.cli import (EXIT_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE,
                            build_parser, main)
from cluspa.src.lpoly import format_lpoly, parse_lpoly

DATA = os.path.join(os.path.dirname(__file__), 'data')


def data(name: str) -> str:
    return os.path.join(DATA, name)


def run(argv):
    with patch('sys.stdout', new_callable=io.StringIO) as out, \
            patch('sys.stderr', new_callable=io.StringIO) as err:
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.square = data('surface_three_punctured_square.json')

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def diagonal(self, surface: str, index: int) -> str:
        with open(data(surface), "r") as f:
            d = json.load(f)['diagonals'][index]
        path = self.path(f"{d['name']}.json")
        with open(path, "w") as f:
            json.dump(d, f)
        return path

    def test_expand(self):
        code, out, _ = run(['expand', '-s', self.square, '-a', data('delta1.json'), '-o', self.path('r.json')])
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertTrue(lines[1].endswith("/(x1x2x3)"))
        self.assertIn("Wrote report to", out)
        with open(self.path('r.json'), "r") as f:
            report = json.load(f)
        self.assertTrue(report['agree'])
        self.assertEqual(format_lpoly(parse_lpoly(report['results']['angles']['value'], 10)), lines[0])
        self.assertEqual(report['results']['angles']['terms'], 5)

    def test_expand_every_backend(self):
        code, out, _ = run(['expand', '-s', self.square, '-a', data('delta1.json'), '-b', 'all'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("4 backends, all values equal", out)

    def test_expand_coefficient_free(self):
        code, out, _ = run(['expand', '-s', data('pentagon.json'), '-a', self.diagonal('pentagon.json', 0),
                            '--coefficient-free'])
        self.assertEqual(code, EXIT_OK)
        self.assertNotIn("y", out.splitlines()[0])

    def test_expand_writes_polygon_and_graph(self):
        with patch('cluspa.src.cli.Network') as network:
            code, out, _ = run(['expand', '-s', self.square, '-a', data('delta1.json'), '-b', 'snake',
                                '--dump-polygon', self.path('p.json'), '--graph-out', self.path('g.html')])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Wrote polygon to", out)
        self.assertIn("Wrote graph to", out)
        self.assertTrue(os.path.exists(self.path('p.json')))
        self.assertEqual(network.return_value.add_node.call_count, 10)
        network.return_value.write_html.assert_called_once_with(self.path('g.html'), notebook=False)

    def test_enumerate(self):
        code, out, _ = run(['enumerate', '-s', self.square, '-a', data('delta2.json'), '-b', 'qp',
                            '--table-out', self.path('t.csv')])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("9 objects", out)
        table = pd.read_csv(self.path('t.csv'))
        self.assertEqual(list(table.columns), ['backend', 'index', 'object', 'x', 'y'])
        self.assertEqual(len(table), 9)

    def test_enumerate_arc_of_the_triangulation(self):
        with open(data('punctured_digon.json'), "r") as f:
            arc = json.load(f)['tagged_arcs'][0]
        with open(self.path('r1.json'), "w") as f:
            json.dump(arc, f)
        code, _, err = run(['enumerate', '-s', data('punctured_digon.json'), '-a', self.path('r1.json')])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("cluspa: error:", err)

    def test_verify(self):
        code, out, _ = run(['verify', '-s', self.square, '-a', data('delta1.json'), '--all-backends'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("4 backends, 5 objects each, all weights equal", out)
        code, out, _ = run(['verify', '-s', self.square, '-a', data('delta2.json'), '--all-backends'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("4 backends, 9 objects each, all weights equal", out)

    def test_fvector(self):
        code, out, _ = run(['fvector', '-s', self.square, '-a', data('delta3.json')])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("intersection: 0 0 0 1 1 1 1 1 1 1", out)
        self.assertIn("f-vectors agree", out)

    def test_loop(self):
        code, out, _ = run(['loop', '-s', data('kronecker.json'), '-l', data('kronecker_loop.json'), '-b', 'both',
                            '--table-out', self.path('loop.csv')])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("angle and band graph loop elements agree", out)
        self.assertEqual(set(pd.read_csv(self.path('loop.csv'))['backend']), {'angles', 'band'})

    def test_oracle_closure(self):
        code, out, _ = run(['oracle', 'closure', '-s', data('hexagon_fan.json'), '--steps', '5'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("5 random mutations are involutions", out)
        self.assertIn("9 cluster variables", out)
        code, out, _ = run(['oracle', 'closure', '-s', data('kronecker.json'), '--depth', '2'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(closure cut off at depth 2)", out)

    def test_oracle_verify(self):
        code, out, _ = run(['oracle', 'verify', '-s', data('pentagon.json'),
                            '-a', self.diagonal('pentagon.json', 0), '-a', self.diagonal('pentagon.json', 2)])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines(), ["d13: found", "d14: found"])

    def test_oracle_branch(self):
        code, out, _ = run(['oracle', 'branch', '-s', data('twice_punctured_monogon.json'), '-a', data('a_pq.json'),
                            '--depth', '4'])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("composed: principal True", out)
        self.assertIn("printed: principal False", out)

    def test_usage_errors(self):
        self.assertEqual(run(['expand', '-s', self.square])[0], EXIT_USAGE)
        self.assertEqual(run(['expand', '-s', self.square, '-a', data('delta1.json'), '-b', 'tiles'])[0], EXIT_USAGE)
        self.assertEqual(run(['oracle', 'verify', '-s', self.square])[0], EXIT_USAGE)
        self.assertEqual(run(['oracle', 'closure', '-s', self.square, '--depth', '-1'])[0], EXIT_USAGE)
        self.assertEqual(run(['expand', '-s', self.square, '-a', data('delta1.json'),
                              '--log-level', 'LOUD'])[0], EXIT_USAGE)
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as raised:
                build_parser().parse_args(['expand'])
        self.assertEqual(raised.exception.code, 2)

    def test_unreadable_input(self):
        code, _, err = run(['expand', '-s', self.path('missing.json'), '-a', data('delta1.json')])
        self.assertEqual(code, EXIT_IO)
        self.assertIn("cannot read input", err)
        with open(self.path('broken.json'), "w") as f:
            f.write("{")
        self.assertEqual(run(['expand', '-s', self.path('broken.json'), '-a', data('delta1.json')])[0], EXIT_IO)

    def test_invalid_triangulation(self):
        with open(data('pentagon.json'), "r") as f:
            surface = json.load(f)
        surface['triangles'][0]['edges'][0] = 'b_missing'
        with open(self.path('bad.json'), "w") as f:
            json.dump(surface, f)
        code, _, _ = run(['oracle', 'closure', '-s', self.path('bad.json')])
        self.assertEqual(code, EXIT_FAILED)


if __name__ == '__main__':
    unittest.main()
