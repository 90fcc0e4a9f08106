import json
import os
import unittest

import networkx as nx

from cluspa.src import angle_matchings
from cluspa.src.matching import (decompose_into_faces,
                                 enumerate_perfect_matchings,
                                 is_perfect_matching)
from cluspa.src.polygon import (PolygonError, build, build_arc_loop,
                                build_band_strip, build_plain)
from cluspa.src.snake import (build_band, build_snake, snake_sum,
                              symmetric_pms)
from cluspa.src.surface import (LoopSpec, TaggedArcSpec, Triangulation,
                                to_ideal)

DATA = os.path.join(os.path.dirname(__file__), 'data')


def load(name: str) -> dict:
    with open(os.path.join(DATA, name), "r") as f:
        return json.load(f)


def square() -> Triangulation:
    return to_ideal(Triangulation(load('surface_three_punctured_square.json')))


class TestMatching(unittest.TestCase):
    def setUp(self):
        self.square = nx.MultiGraph()
        for key, (u, v) in enumerate([(0, 1), (1, 2), (2, 3), (3, 0)]):
            self.square.add_edge(u, v, key=key)

    def test_four_cycle(self):
        matchings = enumerate_perfect_matchings(self.square)
        self.assertEqual(set(matchings), {frozenset({0, 2}), frozenset({1, 3})})
        self.assertTrue(is_perfect_matching(self.square, [0, 2]))
        self.assertFalse(is_perfect_matching(self.square, [0, 1]))
        self.assertFalse(is_perfect_matching(self.square, [7]))

    def test_parallel_edges(self):
        self.square.add_edge(0, 1, key=4)
        self.assertEqual(len(enumerate_perfect_matchings(self.square)), 3)

    def test_odd_graph(self):
        self.square.add_node(4)
        self.assertEqual(enumerate_perfect_matchings(self.square), [])

    def test_decompose_into_faces(self):
        faces = {'a': [0, 1, 2, 3], 'b': [2, 4, 5, 6]}
        self.assertEqual(decompose_into_faces([0, 1, 3, 4, 5, 6], faces), frozenset({'a', 'b'}))
        self.assertEqual(decompose_into_faces([], faces), frozenset())
        self.assertIsNone(decompose_into_faces([0], faces))


class TestSnakeGraph(unittest.TestCase):
    def test_delta1(self):
        tp = build_plain(square(), TaggedArcSpec(load('delta1.json')))
        snake = build_snake(tp)
        self.assertEqual(len(snake.tiles), 4)
        self.assertEqual([snake.tile_label(i) for i in range(1, 5)], [2, 1, 2, 3])
        self.assertEqual(len(snake.perfect_matchings()), 5)
        self.assertEqual(snake.graph.number_of_nodes(), 10)
        self.assertEqual(snake_sum(snake), angle_matchings.angle_sum(tp))

    def test_minimal_matching_has_height_zero(self):
        snake = build_snake(build_plain(square(), TaggedArcSpec(load('delta3.json')).plain()))
        minimal = snake.minimal_matching()
        self.assertEqual(snake.height(minimal), frozenset())
        self.assertIn(snake.e0, minimal)

    def test_fans_are_rejected(self):
        with self.assertRaises(PolygonError):
            build_snake(build(square(), TaggedArcSpec(load('delta2.json'))))


class TestSymmetricMatchings(unittest.TestCase):
    def test_loop_around_the_notched_end(self):
        gamma = TaggedArcSpec(load('delta2.json')).plain()
        loop = build_arc_loop(square(), gamma, 'end')
        self.assertEqual([loop.label(e) for e in loop.tau], [2, 3, 4, 5, 6, 3, 2])
        loop_snake = build_snake(loop)
        gamma_snake = build_snake(build_plain(square(), gamma))
        pairs = symmetric_pms(loop_snake, gamma_snake)
        self.assertEqual(len(pairs), 9)
        for p, restriction in pairs:
            self.assertTrue(loop_snake.is_perfect(p))
            self.assertTrue(gamma_snake.is_perfect(restriction))


class TestBandGraph(unittest.TestCase):
    def test_kronecker_band(self):
        strip = build_band_strip(Triangulation(load('kronecker.json')), LoopSpec(load('kronecker_loop.json')))
        band = build_band(strip)
        self.assertEqual(len(band.good_matchings()), 3)
        for p, completed in band.good_matchings():
            self.assertTrue(band.snake.is_perfect(completed))

    def test_band_needs_a_strip(self):
        with self.assertRaises(PolygonError):
            build_band(build_plain(square(), TaggedArcSpec(load('delta1.json'))))


if __name__ == '__main__':
    unittest.main()
