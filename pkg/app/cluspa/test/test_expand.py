import json
import os
import random
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cluspa.src.config import BACKENDS
from cluspa.src.expand import (apply_phi, backends_agree, cluster_variable,
                               compare_backends, cross, f_vector,
                               loop_element, objects, phi, relabel,
                               substitution_targets, two_notched_values)
from cluspa.src.lpoly import (LPoly, all_coefficients_positive, from_compact,
                              max_y_degrees, set_y_one)
from cluspa.src.polygon import ArcInTriangulation, build
from cluspa.src.surface import (LoopSpec, TaggedArcSpec, Triangulation,
                                exchange_matrix, normalize_tags, to_ideal)
from cluspa.test.generators import (random_annulus, random_polygon,
                                    random_punctured_polygon)

DATA = os.path.join(os.path.dirname(__file__), 'data')


def load(name: str) -> dict:
    with open(os.path.join(DATA, name), "r") as f:
        return json.load(f)


def fraction(numerator: str, denominator: str, n: int) -> LPoly:
    return from_compact(numerator, n) * from_compact(denominator, n).inverse()


def g_vectors(t: Triangulation, value: LPoly) -> set:
    """Degrees of the terms of value, with deg x_i = e_i and deg y_j = -(column j of B)."""
    b = exchange_matrix(t)
    return {tuple(np.array(m.xexp) - b @ np.array(m.yexp)) for m in value.terms}


SQUARE = Triangulation(load('surface_three_punctured_square.json'))
DELTA1 = TaggedArcSpec(load('delta1.json'))
DELTA2 = TaggedArcSpec(load('delta2.json'))
DELTA3 = TaggedArcSpec(load('delta3.json'))

DELTA1_PRINCIPAL = fraction("x1x2x6 + x4y3 + x3x4y2y3 + x3x4y1y3 + x3^2x4y1y2y3", "x1x2x3", 10)
DELTA1_FREE = fraction("x1x2x6 + x4 + 2x3x4 + x3^2x4", "x1x2x3", 10)
DELTA2_PRINCIPAL = fraction(
    "x1x2x3x5x6 + x1x2x6^2y4 + x1x2x4x6x7y4y5 + x4x6y3y4 + x4^2x7y3y4y5 + x3x4x6y2y3y4"
    " + x3x4x5y3y4y5y6 + x3x4^2x7y2y3y4y5 + x3^2x4x5y2y3y4y5y6", "x2x3x4x5x6", 10)
DELTA2_FREE = fraction(
    "x1x2x3x5x6 + x1x2x6^2 + x1x2x4x6x7 + x4x6 + x4^2x7 + x3x4x6 + x3x4x5 + x3x4^2x7 + x3^2x4x5",
    "x2x3x4x5x6", 10)
DELTA3_PRINCIPAL = fraction(
    "x4x5x7^2x9x10 + x4x5x7x10^2y8 + x3x5^2x7x9x10y6 + x4x5x7x8x10y8y9 + x5x6x7x9x10y4y6"
    " + x3x5^2x10^2y6y8 + x3x5^2x8x10y6y8y9 + x5x6x10^2y4y6y8 + x3x5x6x8x10y6y7y8"
    " + x5x6x8x10y4y6y8y9 + x3x5x6x8^2y6y7y8y9 + x6^2x8x10y4y6y7y8 + x6^2x8^2y4y6y7y8y9"
    " + x4x6x7x8x10y4y5y6y7y8 + x3x5x6x7x8x9y6y7y8y9y10 + x4x6x7x8^2y4y5y6y7y8y9"
    " + x6^2x7x8x9y4y6y7y8y9y10 + x4x6x7^2x8x9y4y5y6y7y8y9y10", "x4x5x6x7x8x9x10", 10)


class TestSubstitution(unittest.TestCase):
    def test_phi_of_the_square(self):
        sx, sy = phi(SQUARE)
        self.assertEqual(sx, {2: LPoly.x(2, 10) * LPoly.x(1, 10)})
        self.assertEqual(sy, {1: LPoly.y(1, 10) * LPoly.y(2, 10, -1)})
        self.assertEqual(substitution_targets(SQUARE), {'x': [2], 'y': [1]})
        self.assertEqual(apply_phi(SQUARE, LPoly.y(1, 10) * LPoly.y(2, 10)), LPoly.y(1, 10))

    def test_phi_is_trivial_without_notched_arcs(self):
        t = Triangulation(load('pentagon.json'))
        f = LPoly.x(1, 2) + LPoly.y(2, 2)
        self.assertIs(apply_phi(t, f), f)

    def test_relabel_swaps_x_and_y(self):
        f = LPoly.x(1, 2) * LPoly.y(2, 2)
        self.assertEqual(relabel(f, {1: 2, 2: 1}), LPoly.x(2, 2) * LPoly.y(1, 2))
        self.assertIs(relabel(f, {1: 1, 2: 2}), f)

    def test_crossing_monomial(self):
        self.assertEqual(cross(build(to_ideal(SQUARE), DELTA1)), from_compact("x1x2^2x3", 10))


class TestClusterVariable(unittest.TestCase):
    def test_plain_arc_every_backend(self):
        for backend in BACKENDS:
            self.assertEqual(cluster_variable(SQUARE, DELTA1, backend), DELTA1_PRINCIPAL)
        self.assertEqual(cluster_variable(SQUARE, DELTA1, coefficient_free=True), DELTA1_FREE)

    def test_arc_notched_at_one_end(self):
        self.assertEqual(cluster_variable(SQUARE, DELTA2, 'angles'), DELTA2_PRINCIPAL)
        self.assertEqual(cluster_variable(SQUARE, DELTA2, 'snake'), DELTA2_PRINCIPAL)
        self.assertEqual(cluster_variable(SQUARE, DELTA2, coefficient_free=True), DELTA2_FREE)

    def test_arc_notched_at_both_ends(self):
        for backend in BACKENDS:
            value = cluster_variable(SQUARE, DELTA3, backend)
            self.assertEqual(value, DELTA3_PRINCIPAL, backend)
        self.assertEqual(len(set_y_one(DELTA3_PRINCIPAL)), 18)
        self.assertEqual(cluster_variable(SQUARE, DELTA3, coefficient_free=True), set_y_one(DELTA3_PRINCIPAL))

    def test_terms_share_one_g_vector(self):
        for value in (DELTA1_PRINCIPAL, DELTA2_PRINCIPAL, DELTA3_PRINCIPAL):
            self.assertEqual(len(g_vectors(SQUARE, value)), 1)
        for d in (DELTA1, DELTA2, DELTA3):
            self.assertEqual(len(g_vectors(SQUARE, cluster_variable(SQUARE, d))), 1, d.name)
        data = load('pentagon.json')
        t = Triangulation(data)
        for d in data['diagonals']:
            self.assertEqual(len(g_vectors(t, cluster_variable(t, TaggedArcSpec(d)))), 1, d['name'])
        data = load('punctured_square.json')
        t = Triangulation(data)
        for d in data['tagged_arcs']:
            self.assertEqual(len(g_vectors(t, cluster_variable(t, TaggedArcSpec(d)))), 1, d['name'])

    def test_arc_of_the_triangulation(self):
        d = TaggedArcSpec({'name': 'tau4', 'ends': ['O', 'Q'], 'tags': ['plain', 'plain'], 'underlying': 4})
        self.assertEqual(cluster_variable(SQUARE, d), LPoly.x(4, 10))
        notched = TaggedArcSpec({'name': 'tau2', 'ends': ['O', 'P'], 'tags': ['plain', 'notched'], 'underlying': 1})
        self.assertEqual(cluster_variable(SQUARE, notched), LPoly.x(2, 10))

    def test_pentagon(self):
        data = load('pentagon.json')
        t = Triangulation(data)
        values = [cluster_variable(t, TaggedArcSpec(d)) for d in data['diagonals']]
        self.assertEqual(values, [fraction("x2 + y1", "x1", 2), fraction("1 + x1y2", "x2", 2),
                                  fraction("x2 + y1 + x1y1y2", "x1x2", 2)])

    def test_punctured_digon(self):
        data = load('punctured_digon.json')
        t = Triangulation(data)
        r1, r2 = (TaggedArcSpec(d) for d in data['tagged_arcs'])
        self.assertEqual(cluster_variable(t, r1), fraction("1 + y2", "x2", 2))
        self.assertEqual(cluster_variable(t, r2), fraction("1 + y1", "x1", 2))

    def test_punctured_digon_with_notched_arc(self):
        data = load('punctured_digon_notched.json')
        t = Triangulation(data)
        r2_notched, r2 = (TaggedArcSpec(d) for d in data['tagged_arcs'])
        self.assertEqual(cluster_variable(t, r2_notched), fraction("1 + y1", "x1", 2))
        self.assertEqual(cluster_variable(t, r2), fraction("1 + y2", "x2", 2))

    def test_two_notched_branches(self):
        t = Triangulation(load('twice_punctured_monogon.json'))
        d = TaggedArcSpec(load('a_pq.json'))
        normalized_t, normalized_d, _ = normalize_tags(t, d)
        values = two_notched_values(normalized_t, normalized_d)
        self.assertEqual(set(values), {'composed', 'printed', 'printed_coefficient_free'})
        composed = cluster_variable(t, d)
        self.assertEqual(composed, values['composed'])
        self.assertTrue(all_coefficients_positive(composed))
        self.assertEqual(cluster_variable(t, d, branch='printed'), values['printed'])

    def test_unknown_backend(self):
        with self.assertRaises(ValueError):
            cluster_variable(SQUARE, DELTA1, 'tiles')
        with self.assertRaises(ValueError):
            cluster_variable(SQUARE, DELTA1, branch='guess')


class TestBackends(unittest.TestCase):
    def test_objects(self):
        self.assertEqual(len(objects(SQUARE, DELTA1, 'angles')), 5)
        self.assertEqual(len(objects(SQUARE, DELTA2, 'qp')), 9)
        self.assertEqual(len(objects(SQUARE, DELTA3, 'angles')), 18)

    def test_objects_need_a_polygon(self):
        data = load('punctured_digon.json')
        with self.assertRaises(ArcInTriangulation):
            objects(Triangulation(data), TaggedArcSpec(data['tagged_arcs'][0]))

    def test_compare_backends(self):
        for d, count in ((DELTA1, 5), (DELTA2, 9)):
            report = compare_backends(SQUARE, d)
            self.assertEqual(set(report), set(BACKENDS))
            self.assertTrue(backends_agree(report))
            self.assertEqual({entry['count'] for entry in report.values()}, {count})

    def test_doubly_notched_arc(self):
        report = compare_backends(SQUARE, DELTA3)
        self.assertEqual(set(report), set(BACKENDS))
        self.assertTrue(backends_agree(report))
        self.assertEqual({entry['count'] for entry in report.values()}, {18})

    def test_disagreement_is_reported(self):
        report = compare_backends(SQUARE, DELTA1, ('angles', 'qp'))
        report['qp']['count'] += 1
        self.assertFalse(backends_agree(report))


class TestFVector(unittest.TestCase):
    def test_methods_agree(self):
        cases = [(SQUARE, DELTA1), (SQUARE, DELTA2), (SQUARE, DELTA3)]
        data = load('punctured_digon.json')
        cases += [(Triangulation(data), TaggedArcSpec(d)) for d in data['tagged_arcs']]
        for t, d in cases:
            vectors = [f_vector(t, d, method) for method in ('max_degree', 'formula', 'intersection')]
            self.assertEqual(vectors[0], vectors[1], d.name)
            self.assertEqual(vectors[0], vectors[2], d.name)

    def test_values(self):
        self.assertEqual(f_vector(SQUARE, DELTA1), [1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        self.assertEqual(f_vector(SQUARE, DELTA2, 'intersection'), [0, 1, 1, 1, 1, 1, 0, 0, 0, 0])
        self.assertEqual(f_vector(SQUARE, DELTA3, 'formula'), [0, 0, 0, 1, 1, 1, 1, 1, 1, 1])

    def test_arc_of_the_triangulation(self):
        d = TaggedArcSpec({'name': 'tau4', 'ends': ['O', 'Q'], 'tags': ['plain', 'plain'], 'underlying': 4})
        for method in ('max_degree', 'formula', 'intersection'):
            self.assertEqual(f_vector(SQUARE, d, method), [0] * 10)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            f_vector(SQUARE, DELTA1, 'guess')


class TestLoopElement(unittest.TestCase):
    def test_kronecker(self):
        t = Triangulation(load('kronecker.json'))
        z = LoopSpec(load('kronecker_loop.json'))
        expected = fraction("x1^2 + x2^2 + 1", "x1x2", 2)
        self.assertEqual(loop_element(t, z, 'angles', coefficient_free=True), expected)
        self.assertEqual(loop_element(t, z, 'band', coefficient_free=True), expected)
        self.assertEqual(loop_element(t, z, 'angles'), loop_element(t, z, 'band'))

    def test_annulus(self):
        t = Triangulation(load('annulus_six.json'))
        z = LoopSpec(load('zeta.json'))
        value = loop_element(t, z, 'angles')
        self.assertEqual(value, loop_element(t, z, 'band'))
        self.assertTrue(all_coefficients_positive(value))

    def test_punctures_are_rejected(self):
        with self.assertRaises(ValueError):
            loop_element(SQUARE, LoopSpec({'name': 'z', 'triangles': ['D', 'E'], 'arcs': [7, 7]}))

    def test_unknown_backend(self):
        t = Triangulation(load('kronecker.json'))
        with self.assertRaises(ValueError):
            loop_element(t, LoopSpec(load('kronecker_loop.json')), 'snake')


class TestRandomSurfaces(unittest.TestCase):
    @given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=4, max_value=7))
    @settings(max_examples=15, deadline=None)
    def test_polygon_backends_agree(self, seed, n):
        surface = random_polygon(n, random.Random(seed))
        for d in surface.arcs():
            self.assertTrue(backends_agree(compare_backends(surface.triangulation, d)), d.name)
            value = cluster_variable(surface.triangulation, d)
            self.assertEqual(max_y_degrees(value), f_vector(surface.triangulation, d, 'intersection'))

    @given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=3, max_value=5),
           st.sampled_from([(1, 3), (1, 4), (2, 3)]))
    @settings(max_examples=10, deadline=None)
    def test_punctured_polygon_expansions(self, seed, n, shape):
        punctures, fan = shape
        surface = random_punctured_polygon(n, random.Random(seed), punctures, fan)
        t = surface.triangulation
        for d in surface.arcs():
            value = cluster_variable(t, d, 'angles')
            self.assertTrue(all_coefficients_positive(value), d.name)
            self.assertEqual(f_vector(t, d, 'max_degree'), f_vector(t, d, 'formula'), d.name)
            if d.kind == 'plain':
                self.assertEqual(value, cluster_variable(t, d, 'snake'), d.name)

    @given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=3, max_value=5),
           st.sampled_from([(1, 3), (1, 4), (2, 3)]))
    @settings(max_examples=8, deadline=None)
    def test_punctured_polygon_backends_agree(self, seed, n, shape):
        punctures, fan = shape
        surface = random_punctured_polygon(n, random.Random(seed), punctures, fan)
        t = surface.triangulation
        for d in surface.arcs():
            report = compare_backends(t, d)
            self.assertTrue(backends_agree(report), d.name)
            value = cluster_variable(t, d)
            self.assertEqual(len(g_vectors(t, value)), 1, d.name)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=10, deadline=None)
    def test_annulus_loop_backends_agree(self, seed):
        t, z = random_annulus(random.Random(seed))
        self.assertEqual(loop_element(t, z, 'angles'), loop_element(t, z, 'band'))


if __name__ == '__main__':
    unittest.main()
