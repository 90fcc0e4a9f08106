import re
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple


class DimensionMismatch(ValueError):
    pass


class NotDivisible(ValueError):
    pass


class ParseError(ValueError):
    pass


class Monomial(NamedTuple):
    xexp: Tuple[int, ...]
    yexp: Tuple[int, ...]

    def __mul__(self, other):
        return Monomial(tuple(a + b for a, b in zip(self.xexp, other.xexp)),
                        tuple(a + b for a, b in zip(self.yexp, other.yexp)))

    def __truediv__(self, other):
        return Monomial(tuple(a - b for a, b in zip(self.xexp, other.xexp)),
                        tuple(a - b for a, b in zip(self.yexp, other.yexp)))

    def is_one(self) -> bool:
        return not any(self.xexp) and not any(self.yexp)


def unit_monomial(nvars: int) -> Monomial:
    return Monomial((0,) * nvars, (0,) * nvars)


def make_monomial(nvars: int, x: Optional[Dict[int, int]] = None, y: Optional[Dict[int, int]] = None) -> Monomial:
    """
    Build a monomial from sparse 1-based exponent maps.

    Parameters:
    -----------
    nvars (int): Number of x (and y) variables.

    x (dict, optional): Map index -> exponent of x_index.

    y (dict, optional): Map index -> exponent of y_index.

    Returns:
    -----------
    monomial (Monomial): The dense monomial.
    """
    xexp = [0] * nvars
    yexp = [0] * nvars
    for index, exponent in (x or {}).items():
        if not 1 <= index <= nvars:
            raise DimensionMismatch(f"x{index} outside 1..{nvars}")
        xexp[index - 1] += exponent
    for index, exponent in (y or {}).items():
        if not 1 <= index <= nvars:
            raise DimensionMismatch(f"y{index} outside 1..{nvars}")
        yexp[index - 1] += exponent
    return Monomial(tuple(xexp), tuple(yexp))


class LPoly:
    """
    Laurent polynomial over the integers in x_1..x_N, y_1..y_N, stored as a map Monomial -> nonzero coefficient.
    Instances are treated as immutable values.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Optional[Dict[Monomial, int]] = None, nvars: int = 0):
        self.nvars = nvars
        self.terms = {}
        for monomial, coeff in (terms or {}).items():
            if len(monomial.xexp) != nvars or len(monomial.yexp) != nvars:
                raise DimensionMismatch(
                    f"monomial of length {len(monomial.xexp)} in a ring with {nvars} variables")
            if coeff:
                self.terms[monomial] = coeff
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "LPoly":
        return cls({}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "LPoly":
        return cls.constant(1, nvars)

    @classmethod
    def constant(cls, value: int, nvars: int) -> "LPoly":
        return cls({unit_monomial(nvars): value}, nvars)

    @classmethod
    def x(cls, index: int, nvars: int, exponent: int = 1) -> "LPoly":
        return cls({make_monomial(nvars, x={index: exponent}): 1}, nvars)

    @classmethod
    def y(cls, index: int, nvars: int, exponent: int = 1) -> "LPoly":
        return cls({make_monomial(nvars, y={index: exponent}): 1}, nvars)

    @classmethod
    def from_monomial(cls, monomial: Monomial, coeff: int = 1) -> "LPoly":
        return cls({monomial: coeff}, len(monomial.xexp))

    def _check(self, other: "LPoly") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"cannot combine rings with {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> "LPoly":
        if isinstance(other, int):
            return LPoly.constant(other, self.nvars)
        if not isinstance(other, LPoly):
            return NotImplemented
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for monomial, coeff in other.terms.items():
            terms[monomial] = terms.get(monomial, 0) + coeff
        return LPoly(terms, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return LPoly({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                monomial = m1 * m2
                terms[monomial] = terms.get(monomial, 0) + c1 * c2
        return LPoly(terms, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = LPoly.one(self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LPoly.constant(other, self.nvars)
        if not isinstance(other, LPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"LPoly({to_compact(self)!r}, nvars={self.nvars})"

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "LPoly":
        """Inverse of a unit, i.e. of a monomial with coefficient +1 or -1."""
        if not self.is_monomial():
            raise NotDivisible("only monomials are invertible")
        (monomial, coeff), = self.terms.items()
        if coeff not in (1, -1):
            raise NotDivisible(f"coefficient {coeff} is not a unit")
        return LPoly({unit_monomial(self.nvars) / monomial: coeff}, self.nvars)

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items())

    def leading_term(self) -> Tuple[Monomial, int]:
        monomial = max(self.terms, key=_order_key)
        return monomial, self.terms[monomial]


def _order_key(monomial: Monomial) -> Tuple[int, ...]:
    return monomial.xexp + monomial.yexp


def add(a: LPoly, b: LPoly) -> LPoly:
    return a + b


def mul(a: LPoly, b: LPoly) -> LPoly:
    return a * b


def _exponent_box(p: LPoly) -> Tuple[List[int], List[int]]:
    keys = [_order_key(m) for m in p.terms]
    return [min(column) for column in zip(*keys)], [max(column) for column in zip(*keys)]


def div_exact(a: LPoly, b: LPoly) -> LPoly:
    """
    Exact division in the Laurent polynomial ring.

    The quotient is built term by term from leading terms under the lexicographic order on (xexp, yexp).
    Every quotient exponent is confined to the box spanned by the exponent ranges of a and b, which bounds the loop.

    Parameters:
    -----------
    a (LPoly): Dividend.

    b (LPoly): Nonzero divisor.

    Returns:
    -----------
    quotient (LPoly): q with q * b == a.
    """
    if a.nvars != b.nvars:
        raise DimensionMismatch(f"cannot divide across {a.nvars} and {b.nvars} variables")
    if not b:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not a:
        return LPoly.zero(a.nvars)
    low_a, high_a = _exponent_box(a)
    low_b, high_b = _exponent_box(b)
    low = [x - y for x, y in zip(low_a, low_b)]
    high = [x - y for x, y in zip(high_a, high_b)]
    lead_b, lead_coeff_b = b.leading_term()
    quotient = {}
    remainder = a
    while remainder:
        lead_r, lead_coeff_r = remainder.leading_term()
        if lead_coeff_r % lead_coeff_b:
            raise NotDivisible(f"coefficient {lead_coeff_r} is not a multiple of {lead_coeff_b}")
        monomial = lead_r / lead_b
        key = _order_key(monomial)
        if any(k < lo or k > hi for k, lo, hi in zip(key, low, high)):
            raise NotDivisible("no exact Laurent quotient exists")
        coeff = lead_coeff_r // lead_coeff_b
        quotient[monomial] = quotient.get(monomial, 0) + coeff
        remainder = remainder - LPoly({monomial: coeff}, a.nvars) * b
    return LPoly(quotient, a.nvars)


def substitute(a: LPoly, sx: Optional[Dict[int, LPoly]] = None, sy: Optional[Dict[int, LPoly]] = None) -> LPoly:
    """
    Apply the ring homomorphism sending x_i to sx[i] and y_i to sy[i]; unlisted variables are fixed.

    Parameters:
    -----------
    a (LPoly): Polynomial to transform.

    sx (dict): Map 1-based index -> image of x_index.

    sy (dict): Map 1-based index -> image of y_index.

    Returns:
    -----------
    image (LPoly): The substituted polynomial. Negative exponents require monomial images.
    """
    sx = sx or {}
    sy = sy or {}
    for image in list(sx.values()) + list(sy.values()):
        if not image:
            raise ValueError("substitution images must be nonzero")
    n = a.nvars
    cache = {}

    def power(kind: str, index: int, exponent: int) -> LPoly:
        key = (kind, index, exponent)
        if key not in cache:
            images = sx if kind == "x" else sy
            if index in images:
                cache[key] = images[index] ** exponent
            else:
                maker = LPoly.x if kind == "x" else LPoly.y
                cache[key] = maker(index, n, exponent)
        return cache[key]

    result = LPoly.zero(n)
    for monomial, coeff in a.terms.items():
        term = LPoly.constant(coeff, n)
        for i, e in enumerate(monomial.xexp):
            if e:
                term = term * power("x", i + 1, e)
        for i, e in enumerate(monomial.yexp):
            if e:
                term = term * power("y", i + 1, e)
        result = result + term
    return result


def set_y_one(a: LPoly) -> LPoly:
    zeros = (0,) * a.nvars
    terms = {}
    for monomial, coeff in a.terms.items():
        key = Monomial(monomial.xexp, zeros)
        terms[key] = terms.get(key, 0) + coeff
    return LPoly(terms, a.nvars)


def set_x_one(a: LPoly) -> LPoly:
    zeros = (0,) * a.nvars
    terms = {}
    for monomial, coeff in a.terms.items():
        key = Monomial(zeros, monomial.yexp)
        terms[key] = terms.get(key, 0) + coeff
    return LPoly(terms, a.nvars)


def max_y_degrees(a: LPoly) -> List[int]:
    """Componentwise maximal y-degrees, read after specializing every x to 1."""
    f = set_x_one(a)
    if not f:
        return [0] * a.nvars
    return [max(column) for column in zip(*(m.yexp for m in f.terms))]


def has_negative_y(a: LPoly) -> bool:
    return any(e < 0 for m in a.terms for e in m.yexp)


def x_denominator(a: LPoly) -> Monomial:
    """
    Smallest x-monomial d such that d * a is a polynomial in the x's.

    Returns:
    -----------
    denominator (Monomial): Monomial with nonnegative x exponents and no y part.
    """
    n = a.nvars
    if not a:
        return unit_monomial(n)
    xexp = tuple(max(0, -min(m.xexp[i] for m in a.terms)) for i in range(n))
    return Monomial(xexp, (0,) * n)


def as_fraction(a: LPoly) -> Tuple[LPoly, Monomial]:
    denominator = x_denominator(a)
    return a * LPoly.from_monomial(denominator), denominator


def all_coefficients_positive(a: LPoly) -> bool:
    return all(c > 0 for c in a.terms.values())


# canonical text form: "3*x1^-1*y2^1 + 1*x2^1", "0" for the zero polynomial

def _format_term(monomial: Monomial, coeff: int) -> str:
    factors = [str(coeff)]
    factors += [f"x{i + 1}^{e}" for i, e in enumerate(monomial.xexp) if e]
    factors += [f"y{i + 1}^{e}" for i, e in enumerate(monomial.yexp) if e]
    return "*".join(factors)


def format_lpoly(a: LPoly) -> str:
    """
    Serialize to the canonical text form used in golden files.

    Parameters:
    -----------
    a (LPoly): Polynomial to serialize.

    Returns:
    -----------
    text (str): Terms in lexicographic (xexp, yexp) order joined by ' + '.
    """
    if not a:
        return "0"
    return " + ".join(_format_term(m, c) for m, c in a.sorted_terms())


_FACTOR = re.compile(r"^([xy])(\d+)\^(-?\d+)$")


def parse_lpoly(text: str, nvars: int) -> LPoly:
    """
    Parse the canonical text form produced by format_lpoly.

    Parameters:
    -----------
    text (str): Canonical text.

    nvars (int): Number of variables of the ambient ring.

    Returns:
    -----------
    poly (LPoly): Parsed polynomial.
    """
    text = text.strip()
    if text == "0":
        return LPoly.zero(nvars)
    terms = {}
    for chunk in text.split(" + "):
        parts = chunk.split("*")
        try:
            coeff = int(parts[0])
        except ValueError:
            raise ParseError(f"term {chunk!r} does not start with an integer coefficient")
        x, y = {}, {}
        for factor in parts[1:]:
            match = _FACTOR.match(factor)
            if not match:
                raise ParseError(f"malformed factor {factor!r}")
            kind, index, exponent = match.group(1), int(match.group(2)), int(match.group(3))
            (x if kind == "x" else y)[index] = exponent
        monomial = make_monomial(nvars, x, y)
        terms[monomial] = terms.get(monomial, 0) + coeff
    return LPoly(terms, nvars)


# compact notation: "x1x2^2x6 + 2x3x4y3 - x5", used for display and fixtures

_COMPACT_TERM = re.compile(r"^(-?\d*)((?:[xy]\d+(?:\^-?\d+)?)*)$")
_COMPACT_FACTOR = re.compile(r"([xy])(\d+)(?:\^(-?\d+))?")


def from_compact(text: str, nvars: int) -> LPoly:
    """
    Parse compact notation such as 'x1x2x6 + 2x3x4 + x3^2x4y1'.

    Parameters:
    -----------
    text (str): Sum of terms separated by ' + ' or ' - '.

    nvars (int): Number of variables of the ambient ring.

    Returns:
    -----------
    poly (LPoly): Parsed polynomial.
    """
    text = " ".join(text.split()).replace(" - ", " + -")
    result = LPoly.zero(nvars)
    for chunk in text.split(" + "):
        chunk = chunk.replace(" ", "")
        match = _COMPACT_TERM.match(chunk)
        if not chunk or not match:
            raise ParseError(f"malformed compact term {chunk!r}")
        sign_and_coeff, factors = match.group(1), match.group(2)
        if sign_and_coeff in ("", "-"):
            coeff = -1 if sign_and_coeff == "-" else 1
        else:
            coeff = int(sign_and_coeff)
        if not factors and sign_and_coeff in ("", "-"):
            raise ParseError(f"empty compact term {chunk!r}")
        x, y = {}, {}
        for kind, index, exponent in _COMPACT_FACTOR.findall(factors):
            target = x if kind == "x" else y
            target[int(index)] = target.get(int(index), 0) + int(exponent or 1)
        result = result + LPoly({make_monomial(nvars, x, y): coeff}, nvars)
    return result


def _compact_factors(monomial: Monomial) -> str:
    text = ""
    for kind, exponents in (("x", monomial.xexp), ("y", monomial.yexp)):
        for i, e in enumerate(exponents):
            if e == 1:
                text += f"{kind}{i + 1}"
            elif e:
                text += f"{kind}{i + 1}^{e}"
    return text


def to_compact(a: LPoly) -> str:
    if not a:
        return "0"
    pieces = []
    for monomial, coeff in a.sorted_terms():
        factors = _compact_factors(monomial)
        if not factors:
            body = str(abs(coeff))
        elif abs(coeff) == 1:
            body = factors
        else:
            body = f"{abs(coeff)}{factors}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def format_fraction(a: LPoly) -> str:
    """Render a as '(numerator)/(denominator)' in compact notation, or the bare numerator when the denominator is 1."""
    numerator, denominator = as_fraction(a)
    if denominator.is_one():
        return to_compact(numerator)
    return f"({to_compact(numerator)})/({_compact_factors(denominator)})"


def monomial_to_compact(monomial: Monomial) -> str:
    return _compact_factors(monomial) or "1"


def product(factors: Iterable[LPoly], nvars: int) -> LPoly:
    result = LPoly.one(nvars)
    for factor in factors:
        result = result * factor
    return result
