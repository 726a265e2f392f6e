"""Rational length invariants: directional lengths, rational diameter,
the rational Minkowski length profile, and the period.

The profile is computed level by level. Each level runs exact LP
maximizations of the total weight of a rational zonotope with a fixed
direction set over its containment polytope, sweeping direction sets drawn
from a certified finite budget: every direction whose directional length
meets the epsilon threshold, closed under bounded-volume completions inside
spans of independent subsets. Epsilon is derived from exact lower bounds
only, which can only enlarge the budget relative to the covering argument
it implements, so a stable pass certifies the level.

In two dimensions the area/width bound gives an independent upper bound;
when a witness meets it the level is certified without any enumeration,
which settles triangles immediately.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Optional

from . import lp as _lp
from .lengths import (
    CapExceeded,
    _catalog_from_points,
    _segment_witness,
    _simplex_cap,
    minkowski_length,
    minkowski_length_at_least,
)
from .linalg import int_det, invert, mat_rank, saturation_basis
from .polytope import (
    LatticePolytope,
    Zonotope,
    contains,
    dilate,
    lattice_width,
    normalized_volume,
    zonotope,
)
from .vectors import (
    as_int_vec,
    dot,
    frac,
    is_integral,
    is_primitive,
    primitivize,
    vadd,
    vsub,
)


class CertificationError(RuntimeError):
    """An exact cross-check failed; indicates a bug, not an input problem."""


# ---------------------------------------------------------------------------
# directional lengths

def _reduction(P):
    if P.dim == P.ambient_dim:
        return P, None
    return P.reduced, P.span


def _dir_to_reduced(P, span, v):
    """Span coordinates of an ambient direction, or None if off the span."""
    if span is None:
        return v
    t = span.to_coords(vadd(span.origin, v))
    if t is None:
        return None
    return as_int_vec(t)


def _dir_to_ambient(span, v):
    if span is None:
        return v
    amb = span.from_coords_linear(v)
    return primitivize(as_int_vec(amb))[0]


def _point_to_ambient(span, a):
    if span is None:
        return a
    return span.from_coords(a)


def _sv_lp(R: LatticePolytope, v):
    """(s_v(R), chord anchor) by exact LP on a full-dimensional R."""
    d = R.ambient_dim
    if R.facets is not None:
        rows = []
        for u, b in R.facets:
            rows.append((tuple(u) + (0,), "<=", b))
            rows.append((tuple(u) + (dot(v, u),), "<=", b))
        prog = _lp.lp(d + 1, rows, (0,) * d + (1,),
                      nonneg=(False,) * d + (True,))
    else:
        verts = R.vertices
        nv = len(verts)
        rows = [((1,) * nv + (0,) * nv + (0,), "==", 1),
                ((0,) * nv + (1,) * nv + (0,), "==", 1)]
        for k in range(d):
            coeffs = tuple(-p[k] for p in verts) + \
                tuple(p[k] for p in verts) + (-v[k],)
            rows.append((coeffs, "==", 0))
        prog = _lp.lp(2 * nv + 1, rows, (0,) * (2 * nv) + (1,),
                      nonneg=(True,) * (2 * nv) + (False,))
    out = _lp.solve(prog)
    assert out.status == "optimal"
    if R.facets is not None:
        return out.optimum, out.witness[:d]
    anchor = tuple(
        sum(out.witness[i] * verts[i][k] for i in range(len(verts)))
        for k in range(d))
    return out.optimum, anchor


def directional_length(P: LatticePolytope, v) -> Fraction:
    """s_v(P): the largest s with a rational translate of [0, s v] in P."""
    v = tuple(int(x) for x in v)
    if not is_primitive(v):
        raise ValueError(f"direction {v} is not primitive")
    if P.dim == 0:
        return Fraction(0)
    R, span = _reduction(P)
    vr = _dir_to_reduced(P, span, v)
    if vr is None:
        return Fraction(0)
    s, _ = _sv_lp(R, vr)
    return s


def _canonical_dirs_in_ball(dim, norm_sq_cap):
    """Canonical primitive integer vectors with |v|^2 <= norm_sq_cap."""
    if norm_sq_cap < 1:
        return []
    box = isqrt(int(norm_sq_cap))
    out = []
    for w in itertools.product(range(-box, box + 1), repeat=dim):
        if all(x == 0 for x in w):
            continue
        if sum(x * x for x in w) > norm_sq_cap:
            continue
        v0, mult = primitivize(w)
        if mult == 1 and v0 == w:
            out.append(w)
    return sorted(out)


def bounded_direction_set(P: LatticePolytope, eps) -> tuple:
    """All primitive directions v with s_v(P) >= eps (a finite set).

    Any chord of length s along v has Euclidean length s*|v| inside P, so
    |v| <= diam(P)/eps bounds the candidates; each survivor is confirmed
    by an exact LP.
    """
    eps = frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if P.dim == 0:
        return ()
    R, span = _reduction(P)
    cap = frac(R.squared_diameter) / (eps * eps)
    out = []
    for v in _canonical_dirs_in_ball(R.ambient_dim, cap):
        s, _ = _sv_lp(R, v)
        if s >= eps:
            out.append(_dir_to_ambient(span, v))
    return tuple(sorted(out))


def rational_diameter(P: LatticePolytope):
    """(s(P), attaining direction), ties to the lex-smallest direction.

    Seeds with the lattice-diameter direction; only directions with
    |v| <= diam(P)/seed can beat the seed, and that ball is enumerated
    exhaustively.
    """
    s, v, _ = _rational_diameter_witness(P)
    return s, v


def _rational_diameter_witness(P: LatticePolytope):
    if P.dim == 0:
        d = P.ambient_dim
        return Fraction(0), tuple(int(k == 0) for k in range(d)), \
            zonotope(P.vertices[0], [])
    R, span = _reduction(P)
    pts = list(R.lattice_points)
    catalog = _catalog_from_points(pts)
    ell, seg = _segment_witness(pts, catalog)
    assert ell >= 1, "a positive-dimensional lattice polytope has a segment"
    seed_dir = seg.terms[0][0]
    best_s, best_anchor = _sv_lp(R, seed_dir)
    best_dir = seed_dir
    cap = frac(R.squared_diameter) / (best_s * best_s)
    for v in _canonical_dirs_in_ball(R.ambient_dim, cap):
        if v == seed_dir:
            continue
        s, anchor = _sv_lp(R, v)
        if s > best_s or (s == best_s and v < best_dir):
            best_s, best_dir, best_anchor = s, v, anchor
    direction = _dir_to_ambient(span, best_dir)
    witness = zonotope(_point_to_ambient(span, best_anchor),
                       [(direction, best_s)])
    if not contains(P, witness):
        raise CertificationError("diameter witness failed containment")
    return best_s, direction, witness


def polygon_upper_bound(P: LatticePolytope) -> Fraction:
    """2 Vol_2(P) / w(P), an upper bound for the rational length of a
    full-dimensional lattice polygon (tight on triangles)."""
    if P.ambient_dim != 2 or P.dim != 2:
        raise ValueError("polygon bound needs a full-dimensional polygon")
    w, _ = lattice_width(P)
    return 2 * normalized_volume(P) / w


# ---------------------------------------------------------------------------
# bounded-volume completions

def direction_completions(basis_dirs, bound, ncols=None) -> tuple:
    """All primitive lattice vectors in span(basis_dirs) whose single
    substitutions into the basis span cells of volume <= bound.

    By Cramer's rule those are exactly the vectors whose basis coordinates
    satisfy |x_i| <= bound / Vol(basis), a finite box; candidates are
    filtered by integer substitution determinants in span coordinates.
    """
    B = [tuple(int(x) for x in v) for v in basis_dirs]
    if not B:
        raise ValueError("empty basis")
    d = ncols or len(B[0])
    k = len(B)
    if mat_rank(B) != k:
        raise ValueError("basis directions must be independent")
    bound = frac(bound)
    lat = saturation_basis(B, d)  # rows: basis of span cap Z^d, size k x d
    # coordinates of B rows in the span lattice
    gram = [[dot(a, b) for b in lat] for a in lat]
    ginv = invert(gram)
    bc = []
    for v in B:
        rhs = [dot(row, v) for row in lat]
        t = tuple(sum(ginv[i][j] * rhs[j] for j in range(k)) for i in range(k))
        assert all(x.denominator == 1 for x in t)
        bc.append(as_int_vec(t))
    vol = abs(int_det(bc))
    c = bound / vol
    box = [_floor(sum(abs(b[j]) for b in bc) * c) for j in range(k)]
    out = set()
    for w in itertools.product(*[range(-b, b + 1) for b in box]):
        if all(x == 0 for x in w):
            continue
        if any(abs(int_det([w if i == j else bc[j] for j in range(k)]))
               > bound for i in range(k)):
            continue
        v0, mult = primitivize(w)
        if mult != 1 or v0 != w:
            continue
        amb = tuple(sum(w[i] * lat[i][m] for i in range(k))
                    for m in range(d))
        out.add(primitivize(amb)[0])
    return tuple(sorted(out))


def _floor(x):
    x = frac(x)
    return x.numerator // x.denominator


# ---------------------------------------------------------------------------
# certified rational length profile

@dataclass(frozen=True)
class DirectionBudget:
    """The finite direction set used to certify one profile level."""
    epsilon: Fraction
    directions: tuple
    completions: tuple  # ((basis, completion dirs), ...)

    @property
    def all_directions(self):
        out = set(self.directions)
        for _, comp in self.completions:
            out.update(comp)
        return tuple(sorted(out))


@dataclass(frozen=True)
class LevelResult:
    value: Fraction
    witness: Zonotope
    certified: bool
    budget: Optional[DirectionBudget] = None


@dataclass(frozen=True)
class RationalLengthResult:
    """Rational length profile with a witness attaining the top value."""
    lambdas: tuple
    witnesses: tuple
    threshold_index: int
    certification: str  # certified | lower-bound-only

    @property
    def value(self):
        return self.lambdas[-1]

    @property
    def witness(self):
        return self.witnesses[-1]


class _ZonotopeFitter:
    """LP machinery for max |Z| over zonotopes with fixed directions in R."""

    def __init__(self, R: LatticePolytope):
        self.R = R
        self.sv_cache = {}

    def sv(self, v):
        if v not in self.sv_cache:
            self.sv_cache[v] = _sv_lp(self.R, v)[0]
        return self.sv_cache[v]

    def fit(self, dirs):
        """(max total weight, witness zonotope) for the direction tuple."""
        R = self.R
        d = R.ambient_dim
        m = len(dirs)
        rows = []
        for u, b in R.facets:
            coeffs = tuple(u) + tuple(max(dot(v, u), 0) for v in dirs)
            rows.append((coeffs, "<=", b))
        prog = _lp.lp(d + m, rows, (0,) * d + (1,) * m,
                      nonneg=(False,) * d + (True,) * m)
        out = _lp.solve(prog)
        assert out.status == "optimal", "containment polytope is bounded"
        anchor = out.witness[:d]
        weights = out.witness[d:]
        return out.optimum, zonotope(anchor, list(zip(dirs, weights)))


def _lp_pass(fitter, dirs, n, M, value, witness, stop_at=None):
    """Sweep direction subsets (size <= M, rank <= n) maximizing the fit.

    The fit value is monotone under adding directions, so only subsets with
    no admissible extension are solved; subsets whose directional lengths
    cannot sum past the incumbent are pruned.
    """
    pool = sorted(set(dirs), key=lambda v: (-fitter.sv(v), v))
    svs = [fitter.sv(v) for v in pool]

    def tail(i, k):
        return sum(svs[i:i + k], Fraction(0))

    best = [value, witness]

    def descend(start, chosen, basis):
        partial = sum((svs[i] for i in chosen), Fraction(0))
        extended = False
        for i in range(start, len(pool)):
            room = M - len(chosen) - 1
            if partial + svs[i] + tail(i + 1, room) <= best[0]:
                break
            if svs[i] <= 0:
                break
            rank = mat_rank(basis + [pool[i]])
            if rank > n:
                continue
            extended = True
            chosen.append(i)
            new_basis = basis + [pool[i]] if rank > len(basis) else basis
            if len(chosen) < M:
                descend(i + 1, chosen, new_basis)
            else:
                evaluate(chosen)
            chosen.pop()
            if stop_at is not None and best[0] >= stop_at:
                return
        if chosen and not extended:
            evaluate(chosen)

    def evaluate(chosen):
        val, z = fitter.fit(tuple(pool[i] for i in chosen))
        if val > best[0]:
            if not contains(fitter.R, z):
                raise CertificationError("zonotope witness escaped P")
            best[0], best[1] = val, z

    descend(0, [], [])
    return best[0], best[1]


def _level(fitter, R, n, prev_values, prev_witness, *, length_seed_cap,
           budget_cap, max_rounds=8):
    """Certify one profile level; returns a LevelResult."""
    d = R.ambient_dim
    M = 2 ** d - 1
    ub = frac(_simplex_cap(R))
    if d == 2:
        w, _ = lattice_width(R)
        ub = min(ub, 2 * normalized_volume(R) / w)
    value = prev_values[-1]
    witness = prev_witness
    if len(R.lattice_points) <= length_seed_cap:
        Ln, Zn = minkowski_length(R, n)
        if Ln > value:
            value, witness = frac(Ln), Zn
    if value > ub:
        raise CertificationError("lower bound exceeded the geometric cap")
    if value == ub:
        return LevelResult(value, witness, True, None)

    # seeded pass: witness directions plus the strongest catalog directions
    seeds = {v for v, _ in witness.terms}
    catalog = _catalog_from_points(list(R.lattice_points))
    ranked = sorted(catalog.entries, key=lambda e: (-e[1], e[0]))
    seeds.update(v for v, _ in ranked[:12])
    value, witness = _lp_pass(fitter, seeds, n, M, value, witness,
                              stop_at=ub)

    budget = None
    for _ in range(max_rounds):
        if value == ub:
            return LevelResult(value, witness, True, budget)
        j = n
        for idx in range(1, n):
            if prev_values[idx] == value:
                j = idx
                break
        below = prev_values[j - 1]
        delta = (value - below) / 2
        assert delta > 0
        eps = min((value + below) / (2 * M), delta / M)
        U = bounded_direction_set(R, eps)
        if len(U) > budget_cap:
            return LevelResult(value, witness, False, None)
        completions = []
        if n >= 2:
            pool = [v for v in U]
            for size in range(2, n + 1):
                for B in itertools.combinations(pool, size):
                    if mat_rank(list(B)) < size:
                        continue
                    comp = direction_completions(list(B), n ** d,
                                                 ncols=d)
                    completions.append((B, comp))
        budget = DirectionBudget(eps, U, tuple(completions))
        dirs = budget.all_directions
        if len(dirs) > budget_cap:
            return LevelResult(value, witness, False, budget)
        new_value, new_witness = _lp_pass(fitter, dirs, n, M, value, witness)
        if new_value == value:
            return LevelResult(value, witness, True, budget)
        value, witness = new_value, new_witness
    return LevelResult(value, witness, False, budget)


def rational_length_profile(P: LatticePolytope, *, length_seed_cap=60,
                            budget_cap=600,
                            cross_check_dilates=1) -> RationalLengthResult:
    """The profile (lambda_1, .., lambda_d) with witnesses, computed level
    by level with certification.

    Levels beyond the span dimension repeat the top value. The optional
    dilate cross-check recomputes L(tP)/t for small t and raises if any
    exceeds the certified value.
    """
    d = P.ambient_dim
    if P.dim == 0:
        z = zonotope(P.vertices[0], [])
        return RationalLengthResult((Fraction(0),) * d, (z,) * d, 1,
                                    "certified")
    s, _, wit = _rational_diameter_witness(P)
    lambdas = [s]
    witnesses = [wit]
    certified = True
    if P.dim > 1:
        R, span = _reduction(P)
        if P.dim > 3:
            raise NotImplementedError(
                "certified profile needs span dimension <= 3")
        fitter = _ZonotopeFitter(R)
        values_red = [Fraction(0), s]
        wit_red = _to_reduced_zonotope(P, span, wit)
        for n in range(2, P.dim + 1):
            out = _level(fitter, R, n, values_red, wit_red,
                         length_seed_cap=length_seed_cap,
                         budget_cap=budget_cap)
            values_red.append(out.value)
            wit_red = out.witness
            certified = certified and out.certified
            lambdas.append(out.value)
            witnesses.append(_to_ambient_zonotope(span, out.witness))
    while len(lambdas) < d:
        lambdas.append(lambdas[-1])
        witnesses.append(witnesses[-1])
    top = lambdas[-1]
    threshold = next(i + 1 for i, v in enumerate(lambdas) if v == top)
    result = RationalLengthResult(tuple(lambdas), tuple(witnesses), threshold,
                                  "certified" if certified
                                  else "lower-bound-only")
    if certified:
        for t in range(1, cross_check_dilates + 1):
            Lt, _ = minkowski_length(dilate(P, t), min(P.dim, d))
            if Fraction(Lt, t) > top:
                raise CertificationError(
                    f"L({t}P)/{t} exceeds the certified value")
    return result


def _to_reduced_zonotope(P, span, Z):
    if span is None:
        return Z
    anchor = span.to_coords(Z.anchor)
    terms = [(as_int_vec(span.to_coords(vadd(span.origin, v))), w)
             for v, w in Z.terms]
    return zonotope(anchor, terms)


def _to_ambient_zonotope(span, Z):
    if span is None:
        return Z
    anchor = span.from_coords(Z.anchor)
    terms = [(as_int_vec(span.from_coords_linear(v)), w) for v, w in Z.terms]
    return zonotope(anchor, terms)


def rational_minkowski_length(P: LatticePolytope, n: int,
                              **kwargs) -> LevelResult:
    """lambda_n(P) with witness and certification flag."""
    d = P.ambient_dim
    if not 1 <= n <= d:
        raise ValueError(f"profile index {n} outside 1..{d}")
    res = rational_length_profile(P, **kwargs)
    return LevelResult(res.lambdas[n - 1], res.witnesses[n - 1],
                       res.certification == "certified")


# ---------------------------------------------------------------------------
# period

def witness_scale_factor(Z: Zonotope) -> int:
    """Smallest positive k making kZ a lattice zonotope."""
    k = 1
    for x in Z.anchor:
        k = lcm(k, frac(x).denominator)
    for _, w in Z.terms:
        k = lcm(k, frac(w).denominator)
    return k


def period(P: LatticePolytope, result: Optional[RationalLengthResult] = None,
           *, n: Optional[int] = None, cap_multiplier: int = 64,
           **kwargs) -> int:
    """Smallest k with L_n(kP) = k * lambda_n(P) (default n = d).

    Only multiples of the denominator of lambda qualify; each candidate is
    settled either by scaling the rational witness (when it turns integral)
    or by a targeted search on the dilate.
    """
    if result is None:
        result = rational_length_profile(P, **kwargs)
    if result.certification != "certified":
        raise CertificationError("period needs a certified rational length")
    n = P.ambient_dim if n is None else n
    lam = result.lambdas[n - 1]
    witness = result.witnesses[n - 1]
    if lam == 0:
        return 1
    q = lam.denominator
    kprime = lcm(q, witness_scale_factor(witness))
    for k in range(q, cap_multiplier * q + 1, q):
        if k % kprime == 0:
            return k  # scaled witness is a lattice zonotope of weight k*lam
        target = lam * k
        assert target.denominator == 1
        if minkowski_length_at_least(dilate(P, k), int(target), n=n):
            return k
    raise CapExceeded(f"period not found below {cap_multiplier * q} dilates")
