"""Exact lattice/convex geometry core.

LatticePolytope stores the irredundant vertex set of the convex hull of its
input points; all coordinates are integers and every operation is exact.
Zonotopes are anchored weighted sums of primitive segments in the normal form
anchor + sum(weight_i * [0, dir_i]) with distinct canonical directions.

Lower-dimensional polytopes are first class: computations that need a
full-dimensional body run inside the saturated lattice of the affine span,
where vertices get integer coordinates again.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import lp as _lp
from .linalg import invert, mat_rank, saturation_basis
from .vectors import (
    as_int_vec,
    ceil_frac,
    dot,
    floor_frac,
    frac,
    fvec,
    is_integral,
    primitivize,
    vadd,
    vscale,
    vsub,
)

__all__ = [
    "LatticePolytope",
    "RationalPolytope",
    "Zonotope",
    "zonotope",
    "minkowski_sum",
    "dilate",
    "contains",
    "lattice_points",
    "lattice_width",
    "normalized_volume",
    "unimodular_image",
    "primitivize",
]


# ---------------------------------------------------------------------------
# hull helpers

def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points):
    """Convex hull in counterclockwise order (strict turns, exact)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _in_hull_lp(point, others):
    """Exact test: is `point` a convex combination of `others`?"""
    if not others:
        return False
    d = len(point)
    rows = [(tuple(1 for _ in others), "==", 1)]
    for k in range(d):
        rows.append((tuple(q[k] for q in others), "==", point[k]))
    prog = _lp.lp(len(others), rows, (0,) * len(others),
                  nonneg=(True,) * len(others))
    ok, _ = _lp.feasible(prog)
    return ok


def _prune_vertices(points, ndim):
    """Irredundant vertex set of conv(points) for points in Z^ndim."""
    pts = sorted(set(points))
    if len(pts) <= 2 or ndim == 1:
        if ndim == 1:
            return sorted({min(pts), max(pts)})
        return pts
    if ndim == 2:
        return sorted(_hull2d(pts))
    return sorted(p for p in pts
                  if not _in_hull_lp(p, [q for q in pts if q != p]))


def _facets_full(verts, ndim):
    """Facet inequalities <u, x> <= b of a full-dimensional hull, ndim <= 3.

    Normals are primitive integer vectors, offsets integers; the list is
    sorted for determinism.
    """
    if ndim == 1:
        lo = min(v[0] for v in verts)
        hi = max(v[0] for v in verts)
        return [((-1,), -lo), ((1,), hi)]
    if ndim == 2:
        hull = _hull2d(verts)
        out = []
        for p, q in zip(hull, hull[1:] + hull[:1]):
            t = vsub(q, p)
            u, _ = primitivize((t[1], -t[0]))
            b = dot(p, u)
            # orient outward: all vertices on the <= side
            if any(dot(v, u) > b for v in verts):
                u = tuple(-x for x in u)
                b = dot(p, u)
            out.append((u, b))
        return sorted(set(out))
    if ndim == 3:
        out = set()
        for p, q, r in itertools.combinations(verts, 3):
            n = _cross3(vsub(q, p), vsub(r, p))
            if n == (0, 0, 0):
                continue
            u, _ = primitivize(n)
            b = dot(p, u)
            vals = [dot(v, u) for v in verts]
            if all(v <= b for v in vals):
                out.add((u, b))
            elif all(v >= b for v in vals):
                out.add((tuple(-x for x in u), -b))
        return sorted(out)
    raise NotImplementedError("facet enumeration beyond dimension 3")


# ---------------------------------------------------------------------------
# span reduction

@dataclass(frozen=True)
class _SpanMap:
    """Affine chart of the saturated lattice of a polytope's span."""
    origin: tuple          # base vertex in ambient coordinates
    basis: tuple           # rows: basis of span(P - origin) cap Z^d
    gram_inv: tuple        # inverse of basis * basis^T, rational rows

    def to_coords(self, x):
        """Span coordinates of ambient x, or None if x is off the span."""
        diff = vsub(fvec(x), fvec(self.origin))
        rhs = tuple(dot(b, diff) for b in self.basis)
        t = tuple(
            sum(self.gram_inv[i][j] * rhs[j] for j in range(len(rhs)))
            for i in range(len(rhs)))
        back = self.from_coords_linear(t)
        if back != tuple(diff):
            return None
        return t

    def from_coords_linear(self, t):
        d = len(self.origin)
        out = [Fraction(0)] * d
        for ti, b in zip(t, self.basis):
            for k in range(d):
                out[k] += ti * b[k]
        return tuple(out)

    def from_coords(self, t):
        return vadd(fvec(self.origin), self.from_coords_linear(t))


# ---------------------------------------------------------------------------
# main types

class LatticePolytope:
    """Integer-vertex polytope given by its irredundant vertex set.

    Immutable after construction; duplicate and interior input points are
    pruned. Vertices are kept sorted so equal polytopes compare equal.
    """

    def __init__(self, points):
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("polytope needs at least one point")
        d = len(pts[0])
        if d < 1:
            raise ValueError("ambient dimension must be >= 1")
        for p in pts:
            if len(p) != d:
                raise ValueError("inconsistent point dimensions")
            if not all(isinstance(x, int) or x == int(x) for x in p):
                raise ValueError(f"non-integer vertex {p}")
        pts = sorted({as_int_vec(p) for p in pts})
        self.ambient_dim = d
        p0 = pts[0]
        diffs = [vsub(p, p0) for p in pts[1:]]
        self.dim = mat_rank(diffs) if diffs else 0
        if self.dim == d:
            self.vertices = tuple(_prune_vertices(pts, d))
        elif self.dim == 0:
            self.vertices = (p0,)
        else:
            basis = saturation_basis(diffs, d)
            gram = [[dot(a, b) for b in basis] for a in basis]
            span = _SpanMap(p0, tuple(basis), tuple(invert(gram)))
            coords = [as_int_vec(span.to_coords(p)) for p in pts]
            keep = set(_prune_vertices(coords, self.dim))
            self.vertices = tuple(sorted(
                p for p, c in zip(pts, coords) if c in keep))
            self._span_override = span
        self._cache = {}

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, LatticePolytope)
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({list(self.vertices)!r})"

    # -- structure ---------------------------------------------------------

    @cached_property
    def span(self):
        """Chart of the affine span; None when already full-dimensional."""
        if self.dim == self.ambient_dim:
            return None
        if self.dim == 0:
            return None
        return self._span_override

    @cached_property
    def reduced(self):
        """Full-dimensional copy in span-lattice coordinates (maybe self)."""
        if self.dim == self.ambient_dim:
            return self
        if self.dim == 0:
            return LatticePolytope([(0,) * max(1, 1)])  # 1-dim ambient point
        coords = [as_int_vec(self.span.to_coords(v)) for v in self.vertices]
        return LatticePolytope(coords)

    @cached_property
    def facets(self):
        """Outward facet pairs (normal, offset) with <x,u> <= b; full-dim,
        dimension <= 3 only (None otherwise)."""
        if self.dim != self.ambient_dim or self.dim == 0:
            return None
        if self.ambient_dim > 3:
            return None
        return tuple(_facets_full(list(self.vertices), self.ambient_dim))

    @cached_property
    def bounding_box(self):
        lo = tuple(min(v[k] for v in self.vertices)
                   for k in range(self.ambient_dim))
        hi = tuple(max(v[k] for v in self.vertices)
                   for k in range(self.ambient_dim))
        return lo, hi

    @cached_property
    def squared_diameter(self):
        """Max squared Euclidean distance between vertices (0 for a point)."""
        best = 0
        vs = self.vertices
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                d2 = sum(x * x for x in vsub(vs[i], vs[j]))
                best = max(best, d2)
        return best

    # -- membership --------------------------------------------------------

    def contains_point(self, x):
        """Exact membership for a rational point (fast internal route)."""
        x = tuple(x)
        if len(x) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if self.dim == 0:
            return all(frac(a) == b for a, b in zip(x, self.vertices[0]))
        if self.dim < self.ambient_dim:
            t = self.span.to_coords(x)
            if t is None:
                return False
            return self.reduced.contains_point(t)
        if self.facets is not None:
            return all(dot(x, u) <= b for u, b in self.facets)
        return _in_hull_lp(fvec(x), [fvec(v) for v in self.vertices])

    @cached_property
    def lattice_points(self):
        """All integer points of the polytope, sorted lexicographically."""
        if self.dim == 0:
            return (self.vertices[0],)
        if self.dim < self.ambient_dim:
            pts = []
            for c in self.reduced.lattice_points:
                p = self.span.from_coords(c)
                if is_integral(p):
                    pts.append(as_int_vec(p))
            return tuple(sorted(pts))
        return tuple(self._scan_lattice())

    def _scan_lattice(self):
        d = self.ambient_dim
        lo, hi = self.bounding_box
        facets = self.facets
        if facets is None:
            ranges = [range(lo[k], hi[k] + 1) for k in range(d)]
            return [p for p in itertools.product(*ranges)
                    if self.contains_point(p)]
        out = []
        outer = [range(lo[k], hi[k] + 1) for k in range(d - 1)]
        for prefix in itertools.product(*outer):
            xlo, xhi = lo[d - 1], hi[d - 1]
            ok = True
            for u, b in facets:
                rest = b - sum(u[k] * prefix[k] for k in range(d - 1))
                c = u[d - 1]
                if c == 0:
                    if rest < 0:
                        ok = False
                        break
                elif c > 0:
                    xhi = min(xhi, floor_frac(Fraction(rest, c)))
                else:
                    xlo = max(xlo, ceil_frac(Fraction(rest, c)))
            if ok:
                out.extend(prefix + (x,) for x in range(xlo, xhi + 1))
        return out

    def translate(self, v):
        return LatticePolytope([vadd(p, v) for p in self.vertices])


class RationalPolytope:
    """Polytope with exact rational vertices (result of fractional dilation)."""

    def __init__(self, points):
        pts = sorted({fvec(p) for p in points})
        if not pts:
            raise ValueError("polytope needs at least one point")
        self.ambient_dim = len(pts[0])
        self.vertices = tuple(pts)

    @property
    def is_lattice(self):
        return all(is_integral(v) for v in self.vertices)

    def contains_point(self, x):
        return _in_hull_lp(fvec(x), list(self.vertices))

    def __eq__(self, other):
        return (isinstance(other, RationalPolytope)
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"RationalPolytope({list(self.vertices)!r})"


@dataclass(frozen=True)
class Zonotope:
    """anchor + sum of weight * [0, direction] with distinct primitive
    directions in canonical sign; weights are positive exact rationals."""
    anchor: tuple
    terms: tuple  # ((direction, weight), ...) sorted by direction

    @property
    def num_terms(self):
        return len(self.terms)

    @property
    def weight_sum(self):
        return sum((w for _, w in self.terms), Fraction(0))

    @property
    def is_lattice(self):
        return (is_integral(self.anchor)
                and all(w.denominator == 1 for _, w in self.terms))

    @property
    def directions(self):
        return tuple(v for v, _ in self.terms)

    def span_dim(self):
        return mat_rank([v for v, _ in self.terms])

    def corners(self):
        """The 2^m anchor-plus-subset-sum points whose hull is the zonotope."""
        pts = [fvec(self.anchor)]
        for v, w in self.terms:
            step = vscale(w, v)
            pts = pts + [vadd(p, step) for p in pts]
        return pts

    def scale(self, t):
        t = frac(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        return Zonotope(vscale(t, fvec(self.anchor)),
                        tuple((v, w * t) for v, w in self.terms))

    def translate(self, shift):
        return Zonotope(vadd(fvec(self.anchor), fvec(shift)), self.terms)

    def polytope(self):
        corners = self.corners()
        if all(is_integral(p) for p in corners):
            return LatticePolytope([as_int_vec(p) for p in corners])
        return RationalPolytope(corners)


def zonotope(anchor, terms) -> Zonotope:
    """Normalize raw (vector, weight) pairs into zonotope normal form.

    Vectors need not be primitive or canonically signed; weights must be
    positive. Parallel terms merge; sign flips shift the anchor.
    """
    anchor = fvec(anchor)
    merged = {}
    for v, w in terms:
        w = frac(w)
        if w < 0:
            raise ValueError("zonotope weights must be nonnegative")
        if w == 0:
            continue
        v0, mult = primitivize(v)
        weight = w * mult
        # a sign flip [0, v] -> [0, -v] shifts the anchor by the segment
        if tuple(-mult * c for c in v0) == tuple(int(x) for x in v):
            anchor = vsub(anchor, vscale(weight, v0))
        merged[v0] = merged.get(v0, Fraction(0)) + weight
    terms = tuple(sorted((v, w) for v, w in merged.items()))
    return Zonotope(anchor, terms)


# ---------------------------------------------------------------------------
# operations

def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    """Vertex form of P + Q = {p + q}; associative and commutative."""
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("dimension mismatch")
    return LatticePolytope([vadd(p, q)
                            for p in P.vertices for q in Q.vertices])


def dilate(P: LatticePolytope, t):
    """Scale by a positive rational; lattice result iff t*vertices integral."""
    t = frac(t)
    if t <= 0:
        raise ValueError("dilation factor must be positive")
    verts = [vscale(t, v) for v in P.vertices]
    if all(is_integral(v) for v in verts):
        return LatticePolytope([as_int_vec(v) for v in verts])
    return RationalPolytope(verts)


def contains(P, x) -> bool:
    """Exact membership of a rational point or a whole zonotope in P.

    Point membership is decided by exact LP feasibility of a convex
    combination of the vertices; zonotope membership reduces to the 2^m
    corner points by convexity.
    """
    if isinstance(x, Zonotope):
        return all(contains(P, c) for c in x.corners())
    x = fvec(x)
    if len(x) != P.ambient_dim:
        raise ValueError("dimension mismatch")
    return _in_hull_lp(x, [fvec(v) for v in P.vertices])


def lattice_points(P: LatticePolytope):
    """Integer points of P, sorted lexicographically."""
    return list(P.lattice_points)


def _width_along(P: LatticePolytope, u):
    vals = [dot(v, u) for v in P.vertices]
    return max(vals) - min(vals)


def _normal_to_span(P: LatticePolytope):
    from .linalg import kernel_basis
    p0 = P.vertices[0]
    diffs = [vsub(v, p0) for v in P.vertices[1:]]
    if not diffs:
        diffs = [(0,) * P.ambient_dim]
    perp = kernel_basis(diffs, P.ambient_dim)
    u, _ = primitivize(perp[0])
    return u


def lattice_width(P: LatticePolytope):
    """(w(P), direction): minimal integer range of <x, u> over primitive u.

    Certified by a dual box: any u with width at most the seed width W0
    satisfies |<D_i, u>| <= W0 for independent vertex differences D_i, so
    enumerating that box cannot miss the minimizer. Ties break to the
    lexicographically smallest direction.
    """
    d = P.ambient_dim
    if P.dim < d:
        return 0, _normal_to_span(P)
    if d == 1:
        return _width_along(P, (1,)), (1,)

    # seed directions: coordinate axes, facet normals, and (2D) normals of
    # all pairwise vertex differences
    seeds = {tuple(int(i == k) for i in range(d)) for k in range(d)}
    if P.facets is not None:
        for u, _ in P.facets:
            seeds.add(primitivize(u)[0])
    if d == 2:
        vs = P.vertices
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                t = vsub(vs[i], vs[j])
                seeds.add(primitivize((t[1], -t[0]))[0])
    best = None
    for u in sorted(seeds):
        w = _width_along(P, u)
        if best is None or (w, u) < best:
            best = (w, u)
    w0 = best[0]

    # independent long differences give the certified candidate box
    p0 = P.vertices[0]
    diffs = sorted((vsub(v, p0) for v in P.vertices[1:]),
                   key=lambda v: (-sum(x * x for x in v), v))
    chosen = []
    for v in diffs:
        if mat_rank(chosen + [v]) > len(chosen):
            chosen.append(v)
        if len(chosen) == d:
            break
    dinv = invert(chosen)
    bounds = [sum(abs(dinv[j][i]) for i in range(d)) * w0 for j in range(d)]
    ranges = [range(-floor_frac(b), floor_frac(b) + 1) for b in bounds]
    for u in itertools.product(*ranges):
        if all(x == 0 for x in u):
            continue
        v0, mult = primitivize(u)
        if v0 != u:
            continue
        if any(abs(dot(dvec, u)) > w0 for dvec in chosen):
            continue
        w = _width_along(P, u)
        if (w, u) < best:
            best = (w, u)
    return best


def normalized_volume(P: LatticePolytope) -> Fraction:
    """Volume in the affine span, normalized to the induced lattice.

    Equals the Euclidean volume of the span-coordinate image; zero for
    points. Supported up to span dimension 3.
    """
    n = P.dim
    if n == 0:
        return Fraction(0)
    R = P.reduced
    if n == 1:
        vals = [v[0] for v in R.vertices]
        return Fraction(max(vals) - min(vals))
    if n == 2:
        hull = _hull2d(R.vertices)
        s = 0
        for p, q in zip(hull, hull[1:] + hull[:1]):
            s += p[0] * q[1] - q[0] * p[1]
        return Fraction(abs(s), 2)
    if n == 3:
        total = Fraction(0)
        r = R.vertices[0]
        for u, b in R.facets:
            if dot(r, u) == b:
                continue
            on = [v for v in R.vertices if dot(v, u) == b]
            ordered = _order_facet_cycle(on, u)
            q0 = ordered[0]
            for a, c in zip(ordered[1:], ordered[2:]):
                m = [vsub(q0, r), vsub(a, r), vsub(c, r)]
                det3 = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
                total += Fraction(abs(det3), 6)
        return total
    raise NotImplementedError("volume beyond span dimension 3")


def _order_facet_cycle(points, normal):
    """Vertices of a 3D facet in convex-cycle order."""
    p0 = points[0]
    e1 = next(vsub(p, p0) for p in points[1:] if vsub(p, p0) != (0, 0, 0))
    e2 = _cross3(normal, e1)
    plane = [(dot(vsub(p, p0), e1), dot(vsub(p, p0), e2)) for p in points]
    order = _hull2d(plane)
    lookup = {}
    for p, c in zip(points, plane):
        lookup.setdefault(c, p)
    return [lookup[c] for c in order]


def unimodular_image(P: LatticePolytope, U, shift=None) -> LatticePolytope:
    """Apply x -> Ux + shift for an integer matrix with det +-1."""
    d = P.ambient_dim
    U = [tuple(int(x) for x in row) for row in U]
    if len(U) != d or any(len(r) != d for r in U):
        raise ValueError("transform shape mismatch")
    from .linalg import int_det
    if abs(int_det(U)) != 1:
        raise ValueError("transform must be unimodular (det +-1)")
    if shift is None:
        shift = (0,) * d
    shift = as_int_vec(shift)
    verts = [vadd(tuple(dot(row, v) for row in U), shift) for v in P.vertices]
    return LatticePolytope(verts)
