"""Exact integer/rational vector helpers shared by all modules.

Points and vectors are plain tuples of ints or Fractions; all arithmetic is
exact. Directions are integer tuples in canonical form: coordinate gcd 1 and
first nonzero coordinate positive.
"""

from fractions import Fraction
from math import gcd

Vec = tuple  # tuple of int or Fraction


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(t, a: Vec) -> Vec:
    return tuple(t * x for x in a)


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def dot(a: Vec, b: Vec):
    return sum(x * y for x, y in zip(a, b))


def norm_sq(a: Vec):
    return sum(x * x for x in a)


def is_zero(a: Vec) -> bool:
    return all(x == 0 for x in a)


def is_integral(a: Vec) -> bool:
    return all(x == int(x) for x in a)


def as_int_vec(a: Vec) -> tuple:
    """Cast an integral tuple (possibly holding Fractions) to pure ints."""
    return tuple(int(x) for x in a)


def content(a: Vec) -> int:
    """Gcd of the absolute coordinate values of an integer vector."""
    g = 0
    for x in a:
        g = gcd(g, abs(int(x)))
    return g


def primitivize(v: Vec) -> tuple[tuple, int]:
    """Reduce an integer vector to (canonical primitive direction, multiplier).

    multiplier * direction == +-v, with the sign chosen so the first nonzero
    coordinate of the direction is positive. Raises on the zero vector.
    """
    if is_zero(v):
        raise ValueError("no primitive direction: zero vector")
    g = content(v)
    w = tuple(int(x) // g for x in v)
    for x in w:
        if x != 0:
            if x < 0:
                w = vneg(w)
            break
    return w, g


def is_primitive(v: Vec) -> bool:
    return not is_zero(v) and content(v) == 1


def is_canonical_direction(v: Vec) -> bool:
    if not is_primitive(v):
        return False
    for x in v:
        if x != 0:
            return x > 0
    return False


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fvec(a: Vec) -> tuple:
    return tuple(frac(x) for x in a)


def format_fraction(x) -> str:
    """Serialize an exact rational as 'p' or 'p/q'; never a float."""
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def floor_frac(x) -> int:
    x = frac(x)
    return x.numerator // x.denominator


def ceil_frac(x) -> int:
    x = frac(x)
    return -((-x.numerator) // x.denominator)
