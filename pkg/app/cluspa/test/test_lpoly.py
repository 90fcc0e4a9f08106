import unittest

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cluspa.src.lpoly import (DimensionMismatch, LPoly, NotDivisible,
                              ParseError, as_fraction, div_exact,
                              format_fraction, format_lpoly, from_compact,
                              has_negative_y, make_monomial, max_y_degrees,
                              parse_lpoly, set_x_one, set_y_one, substitute,
                              to_compact, x_denominator)

N = 3

exponents = st.integers(min_value=-2, max_value=2)
monomials = st.builds(lambda xs, ys: make_monomial(N, dict(enumerate(xs, 1)), dict(enumerate(ys, 1))),
                      st.lists(exponents, min_size=N, max_size=N), st.lists(exponents, min_size=N, max_size=N))
polys = st.builds(lambda terms: LPoly(terms, N),
                  st.dictionaries(monomials, st.integers(min_value=-5, max_value=5), max_size=4))


def to_sympy(p: LPoly):
    xs = sympy.symbols(f"x1:{N + 1}")
    ys = sympy.symbols(f"y1:{N + 1}")
    total = sympy.Integer(0)
    for monomial, coeff in p.terms.items():
        term = sympy.Integer(coeff)
        for symbol, e in zip(xs + ys, monomial.xexp + monomial.yexp):
            term *= symbol ** e
        total += term
    return total


class TestRing(unittest.TestCase):
    @given(polys, polys, polys)
    @settings(max_examples=50, deadline=None)
    def test_ring_laws(self, a, b, c):
        self.assertEqual(a + b, b + a)
        self.assertEqual(a * b, b * a)
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual(a - a, LPoly.zero(N))

    @given(polys, polys)
    @settings(max_examples=30, deadline=None)
    def test_product_matches_sympy(self, a, b):
        self.assertEqual(sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)), 0)

    @given(polys, polys.filter(bool))
    @settings(max_examples=40, deadline=None)
    def test_div_exact_inverts_product(self, a, b):
        self.assertEqual(div_exact(a * b, b), a)

    def test_zero_terms_are_dropped(self):
        x1 = LPoly.x(1, N)
        self.assertFalse(x1 - x1)
        self.assertEqual(len(x1 + x1), 1)
        self.assertEqual(LPoly.one(N), 1)

    def test_negative_powers_of_monomials(self):
        x1 = LPoly.x(1, N)
        self.assertEqual(x1 ** -2 * x1 ** 2, 1)
        with self.assertRaises(ValueError):
            (x1 + 1) ** -1

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            LPoly.x(1, 2) + LPoly.x(1, 3)
        with self.assertRaises(DimensionMismatch):
            make_monomial(2, x={3: 1})


class TestDivExact(unittest.TestCase):
    def test_exchange_relation(self):
        x1, x2 = LPoly.x(1, 2), LPoly.x(2, 2)
        numerator = x2 + LPoly.y(1, 2)
        self.assertEqual(div_exact(numerator, x1), numerator * x1 ** -1)

    def test_not_divisible(self):
        x1, x2 = LPoly.x(1, 2), LPoly.x(2, 2)
        with self.assertRaises(NotDivisible):
            div_exact(x1 + 1, x2 + 1)
        with self.assertRaises(NotDivisible):
            div_exact(LPoly.constant(3, 2), LPoly.constant(2, 2))

    def test_zero_divisor(self):
        with self.assertRaises(ZeroDivisionError):
            div_exact(LPoly.one(2), LPoly.zero(2))


class TestSubstitute(unittest.TestCase):
    def test_substitution_and_specialization(self):
        n = 2
        f = from_compact("x1y2 + x2^2", n) * LPoly.x(1, n) ** -1
        g = substitute(f, {1: LPoly.x(1, n) * LPoly.x(2, n)}, {2: LPoly.y(2, n) * LPoly.y(1, n, -1)})
        expected = from_compact("x1x2y1^-1y2 + x2^2", n) * (LPoly.x(1, n) * LPoly.x(2, n)) ** -1
        self.assertEqual(g, expected)
        self.assertTrue(has_negative_y(g))
        self.assertEqual(set_y_one(g), from_compact("x1x2 + x2^2", n) * (LPoly.x(1, n) * LPoly.x(2, n)) ** -1)
        self.assertEqual(set_x_one(f), from_compact("y2 + 1", n))

    def test_max_y_degrees(self):
        f = from_compact("x1 + x1y1y2^2 + y1^3", 2)
        self.assertEqual(max_y_degrees(f), [3, 2])
        self.assertEqual(max_y_degrees(LPoly.zero(2)), [0, 0])


class TestFormatting(unittest.TestCase):
    def test_canonical_text(self):
        f = from_compact("x1x2^2 + 2x3y1", N) * LPoly.x(3, N) ** -1
        text = format_lpoly(f)
        self.assertIn("1*x1^1*x2^2*x3^-1", text)
        self.assertEqual(parse_lpoly(text, N), f)
        self.assertEqual(format_lpoly(LPoly.zero(N)), "0")
        self.assertEqual(parse_lpoly("0", N), LPoly.zero(N))

    def test_parse_errors(self):
        with self.assertRaises(ParseError):
            parse_lpoly("x1^1", N)
        with self.assertRaises(ParseError):
            parse_lpoly("1*z1^1", N)
        with self.assertRaises(ParseError):
            from_compact("x1 + + x2", N)

    def test_fraction(self):
        f = from_compact("x1x2x6 + x4 + 2x3x4 + x3^2x4", 6) * from_compact("x1x2x3", 6) ** -1
        numerator, denominator = as_fraction(f)
        self.assertEqual(denominator, x_denominator(f))
        self.assertEqual(denominator.xexp, (1, 1, 1, 0, 0, 0))
        self.assertEqual(format_fraction(f), f"({to_compact(numerator)})/(x1x2x3)")
        self.assertEqual(format_fraction(LPoly.x(2, 6)), "x2")

    def test_compact_signs(self):
        f = from_compact("x1 - 2x2 + 3", 2)
        self.assertEqual(f, LPoly.x(1, 2) - LPoly.x(2, 2) * 2 + 3)
        self.assertEqual(from_compact(to_compact(f), 2), f)


if __name__ == '__main__':
    unittest.main()
