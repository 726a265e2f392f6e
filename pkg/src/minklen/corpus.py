"""Built-in regression corpus of exactly known invariant values.

Each check recomputes a published closed-form quantity from scratch and
compares exactly. `run_corpus` returns deterministic records suitable for
byte-stable CLI output; any mismatch means the build is wrong.
"""

from dataclasses import dataclass
from fractions import Fraction

from .dilation import QuasiLinearFunction, dilate_table, evaluate, \
    fit_quasilinear
from .families import (
    coordinate_box,
    degree_one_pyramid,
    lawrence_prism,
    standard_simplex,
    tilted_triangle,
)
from .lengths import (
    brute_force_length,
    minkowski_length,
    smallest_maximal_decomposition,
)
from .polytope import LatticePolytope, contains, dilate, lattice_width, \
    normalized_volume
from .rational import (
    directional_length,
    period,
    polygon_upper_bound,
    rational_diameter,
    rational_length_profile,
)
from .vectors import format_fraction


@dataclass(frozen=True)
class CorpusCheck:
    name: str
    expected: str
    got: str

    @property
    def ok(self):
        return self.expected == self.got


def _fmt(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def skew_square() -> LatticePolytope:
    """The period-3 square with volume 5 and rational length 10/3."""
    return LatticePolytope([(2, 0), (3, 2), (1, 3), (0, 1)])


def wide_gap_square() -> LatticePolytope:
    """Twice the square whose rational length 68/5 beats its length by 8/5."""
    Q = LatticePolytope([(1, 0), (5, 1), (4, 5), (0, 4)])
    return dilate(Q, 2)


def _checks():
    sq = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    P = skew_square()

    yield CorpusCheck("unit-square-profile",
                      "[1, 2]",
                      _fmt([minkowski_length(sq, n)[0] for n in (1, 2)]))
    yield CorpusCheck("unit-square-rational-length", "2",
                      _fmt(rational_length_profile(sq).value))
    yield CorpusCheck("unit-square-period", "1", _fmt(period(sq)))

    for d in (1, 2, 3):
        got = [minkowski_length(dilate(standard_simplex(d), t), d)[0]
               for t in range(1, 7)]
        yield CorpusCheck(f"simplex-dilates-dim{d}", _fmt(list(range(1, 7))),
                          _fmt(got))

    yield CorpusCheck("box-2x3-length", "5",
                      _fmt(minkowski_length(coordinate_box([2, 3]), 2)[0]))
    box = coordinate_box([2, 1, 3])
    yield CorpusCheck("box-2x1x3-length", "6",
                      _fmt(minkowski_length(box, 3)[0]))

    yield CorpusCheck("lawrence-h12-length", "2",
                      _fmt(minkowski_length(lawrence_prism([1, 2]), 2)[0]))
    yield CorpusCheck("lawrence-h22-length", "3",
                      _fmt(minkowski_length(lawrence_prism([2, 2]), 2)[0]))
    yield CorpusCheck("lawrence-h22-diameter", "2",
                      _fmt(minkowski_length(lawrence_prism([2, 2]), 1)[0]))
    yield CorpusCheck("pyramid-length", "2",
                      _fmt(minkowski_length(degree_one_pyramid(3), 3)[0]))

    for k in (2, 3, 4, 5):
        T = tilted_triangle(k)
        s, _ = rational_diameter(T)
        yield CorpusCheck(f"tilted-{k}-rational-diameter",
                          format_fraction(Fraction(k * k - 1, k)), _fmt(s))
        yield CorpusCheck(f"tilted-{k}-lattice-diameter", str(k - 1),
                          _fmt(minkowski_length(T, 1)[0]))
        want = [(Fraction(k * k - 1, k) * t).__floor__()
                for t in range(1, 9)]
        yield CorpusCheck(f"tilted-{k}-dilates", _fmt(want),
                          _fmt(list(dilate_table(T, 8).values)))
        yield CorpusCheck(f"tilted-{k}-period", str(k), _fmt(period(T)))

    yield CorpusCheck("skew-square-volume", "5", _fmt(normalized_volume(P)))
    yield CorpusCheck("skew-square-width", "3", _fmt(lattice_width(P)[0]))
    yield CorpusCheck("skew-square-length", "3",
                      _fmt(minkowski_length(P, 2)[0]))
    yield CorpusCheck("skew-square-length-oracle", "3",
                      _fmt(brute_force_length(P, 2)))
    yield CorpusCheck("skew-square-bound", "10/3",
                      _fmt(polygon_upper_bound(P)))
    res = rational_length_profile(P)
    yield CorpusCheck("skew-square-rational-length", "10/3", _fmt(res.value))
    yield CorpusCheck("skew-square-period", "3", _fmt(period(P, res)))
    tab = dilate_table(P, 9, rational=res)
    want = [10 * (t // 3) + 3 * (t % 3) for t in range(1, 10)]
    yield CorpusCheck("skew-square-dilates", _fmt(want),
                      _fmt(list(tab.values)))
    fit = fit_quasilinear(P, 9, rational=res, table=tab, period_value=3)
    yield CorpusCheck("skew-square-fit",
                      "period=3 constants=[0, 3, 6]",
                      f"period={fit.period} constants={_fmt(list(fit.constants))}")
    yield CorpusCheck("skew-square-fit-at-7", "23", _fmt(evaluate(fit, 7)))

    G = wide_gap_square()
    resg = rational_length_profile(G)
    yield CorpusCheck("gap-square-rational-length", "68/5", _fmt(resg.value))
    Lg, _ = minkowski_length(G, 2)
    yield CorpusCheck("gap-square-length", "12", _fmt(Lg))
    yield CorpusCheck("gap-square-gap", "8/5", _fmt(resg.value - Lg))

    yield CorpusCheck("chord-8-3", "8/3",
                      _fmt(directional_length(tilted_triangle(3), (0, 1))))
    yield CorpusCheck("triangle-bound-tight", "8/3",
                      _fmt(polygon_upper_bound(tilted_triangle(3))))

    Z = smallest_maximal_decomposition(dilate(standard_simplex(2), 3))
    ok = (Z.weight_sum == 3 and len(Z.terms) <= 3
          and contains(dilate(standard_simplex(2), 3), Z))
    yield CorpusCheck("smallest-decomposition-3simplex",
                      "weight 3, at most 3 directions, contained",
                      "weight 3, at most 3 directions, contained" if ok
                      else f"weight {Z.weight_sum}, {len(Z.terms)} directions")

    g = QuasiLinearFunction(3, Fraction(1), (4, 4, 4), 1, "proven-stable")
    yield CorpusCheck("worked-evaluate-example", "7", _fmt(evaluate(g, 5)))

    T2 = tilted_triangle(2)
    yield CorpusCheck("tilted-2-length-oracle", "1",
                      _fmt(brute_force_length(T2, 2)))
    yield CorpusCheck("unit-square-length-oracle", "2",
                      _fmt(brute_force_length(sq, 2)))


def run_corpus():
    """All corpus checks, deterministically ordered."""
    return list(_checks())
