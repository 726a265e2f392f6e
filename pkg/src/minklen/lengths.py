"""Minkowski lengths: exact L_n(P) with witness zonotopes.

The certified search is a branch-and-bound over direction subsets drawn from
the segment catalog of P (primitivized differences of lattice points), with
integer weights per direction and lattice anchors. Candidate subsets carry at
most 2^d - 1 distinct directions and rank at most n; weight feasibility is
decided exactly through facet thresholds. Closed forms cover dilated
unimodular simplices, coordinate boxes, degree-one normal forms, and lattice
triangles. A slow exhaustive oracle double-checks everything at small sizes.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import int_det, invert, mat_rank, saturation_basis
from .polytope import LatticePolytope, Zonotope, zonotope
from .vectors import (
    as_int_vec,
    ceil_frac,
    dot,
    floor_frac,
    frac,
    is_integral,
    primitivize,
    vadd,
    vscale,
    vsub,
)


class CapExceeded(RuntimeError):
    """A configured resource cap was hit; results would be partial."""


@dataclass(frozen=True)
class SegmentCatalog:
    """Primitive directions realizable by lattice segments inside P.

    entries: ((direction, max_len), ...) where max_len is the largest c for
    which some lattice translate of [0, c*direction] fits in P.
    """
    entries: tuple

    @property
    def directions(self):
        return tuple(v for v, _ in self.entries)

    def max_len(self, v):
        for w, c in self.entries:
            if w == v:
                return c
        return 0


@dataclass(frozen=True)
class FastpathResult:
    value: int
    reason: str
    witness: Zonotope


def _catalog_from_points(pts):
    best = {}
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            v, mult = primitivize(vsub(pts[j], pts[i]))
            if mult > best.get(v, 0):
                best[v] = mult
    return SegmentCatalog(tuple(sorted(best.items())))


def fitting_segments(P: LatticePolytope) -> SegmentCatalog:
    """Catalog of primitive segment directions fitting in P with their
    maximal integer lengths (from pairwise lattice-point differences; the
    segment between two points of P lies in P by convexity)."""
    return _catalog_from_points(P.lattice_points)


def _best_run_along(pts, v):
    """(length, anchor) of the longest lattice run along direction v."""
    pts_set = set(pts)
    best = (0, pts[0])
    for p in pts:
        prev = vsub(p, v)
        if prev in pts_set:
            continue  # not a run start
        c = 0
        q = p
        while vadd(q, v) in pts_set:
            q = vadd(q, v)
            c += 1
        if c > best[0] or (c == best[0] and p < best[1]):
            best = (c, p)
    return best


def _segment_witness(pts, catalog) -> tuple[int, Zonotope]:
    """Lattice diameter with a lex-minimal best segment witness."""
    if not catalog.entries:
        return 0, zonotope(pts[0], [])
    top = max(c for _, c in catalog.entries)
    direction = min(v for v, c in catalog.entries if c == top)
    _, anchor = _best_run_along(pts, direction)
    return top, zonotope(anchor, [(direction, top)])


# ---------------------------------------------------------------------------
# exact search (full-dimensional input, ambient dim <= 3)

def _facet_widths(R):
    return [(u, b, b - min(dot(v, u) for v in R.vertices))
            for u, b in R.facets]


def _lattice_anchor(R, terms):
    """Lex-min integer anchor a with a + sum(w_i [0, v_i]) inside R, or None.

    Uses the support function of the zonotope against the facet description:
    the anchor set is {a : <a,u> <= b_u - sum_i w_i * max(<v_i,u>, 0)}.
    """
    d = R.ambient_dim
    thresholds = []
    for u, b in R.facets:
        shift = sum(w * max(dot(v, u), 0) for v, w in terms)
        thresholds.append((u, frac(b) - shift))
    lo, hi = R.bounding_box
    if d == 1:
        xlo, xhi = lo[0], hi[0]
        for u, c in thresholds:
            if u[0] > 0:
                xhi = min(xhi, floor_frac(c / u[0]))
            else:
                xlo = max(xlo, ceil_frac(c / u[0]))
        return (xlo,) if xlo <= xhi else None
    outer = [range(lo[k], hi[k] + 1) for k in range(d - 1)]
    for prefix in itertools.product(*outer):
        xlo, xhi = lo[d - 1], hi[d - 1]
        ok = True
        for u, c in thresholds:
            rest = c - sum(u[k] * prefix[k] for k in range(d - 1))
            uk = u[d - 1]
            if uk == 0:
                if rest < 0:
                    ok = False
                    break
            elif uk > 0:
                xhi = min(xhi, floor_frac(rest / uk))
            else:
                xlo = max(xlo, ceil_frac(rest / uk))
        if ok and xlo <= xhi:
            return prefix + (xlo,)
    return None


def _simplex_cap(R):
    """Upper bound on L from containment in a dilated unimodular simplex:
    the tightest axis-sign frame b + alpha * conv{0, e_1, .., e_d}."""
    d = R.ambient_dim
    best = None
    for signs in itertools.product((1, -1), repeat=d):
        lo = [min(s * v[k] for v in R.vertices)
              for k, s in enumerate(signs)]
        alpha = max(sum(s * v[k] for k, s in enumerate(signs))
                    for v in R.vertices) - sum(lo)
        best = alpha if best is None else min(best, alpha)
    return best


def _polygon_cap(R):
    """2D: L <= lambda <= 2 Vol / w."""
    from .polytope import lattice_width, normalized_volume
    w, _ = lattice_width(R)
    if w == 0:
        return None
    return floor_frac(2 * normalized_volume(R) / w)


class _Search:
    def __init__(self, R, n, target=None):
        self.R = R
        self.n = n
        self.pts = list(R.lattice_points)
        self.catalog = _catalog_from_points(self.pts)
        self.d = R.ambient_dim
        self.M = 2 ** self.d - 1
        self.target = target
        entries = sorted(self.catalog.entries, key=lambda e: (-e[1], e[0]))
        self.dirs = [v for v, _ in entries]
        self.lens = [c for _, c in entries]
        cap = sum(self.lens)
        cap = min(cap, _simplex_cap(R))
        if self.d == 2:
            pc = _polygon_cap(R)
            if pc is not None:
                cap = min(cap, pc)
        self.cap = cap
        self.bestL, self.bestZ = _segment_witness(self.pts, self.catalog)
        if target is not None:
            # refutation mode: only care whether target is reachable
            self.bestL = max(self.bestL, target - 1)

    def _tail_top(self, i, k):
        return sum(self.lens[i:i + k])

    def run(self):
        if not self.dirs or self.n < 1:
            return self.bestL, self.bestZ
        if self.done():
            return self.bestL, self.bestZ
        self._subsets(0, [], [])
        return self.bestL, self.bestZ

    def done(self):
        return self.target is not None and self.bestL >= self.target

    def _subsets(self, start, chosen, basis):
        partial = sum(self.lens[i] for i in chosen)
        for i in range(start, len(self.dirs)):
            room = self.M - len(chosen) - 1
            if partial + self.lens[i] + self._tail_top(i + 1, room) <= self.bestL:
                break  # catalog sorted by falling max_len: bound only drops
            v = self.dirs[i]
            rank = mat_rank(basis + [v])
            if rank > self.n:
                continue  # a later direction may still fit the span budget
            new_basis = basis + [v] if rank > len(basis) else basis
            chosen.append(i)
            self._weights(chosen)
            if self.done():
                chosen.pop()
                return
            if len(chosen) < self.M:
                self._subsets(i + 1, chosen, new_basis)
            chosen.pop()
            if self.done():
                return

    def _weights(self, chosen):
        terms = [(self.dirs[i], self.lens[i]) for i in chosen]
        total_cap = min(self.cap, sum(c for _, c in terms))
        if total_cap <= self.bestL:
            return
        weights = [1] * len(terms)
        self._weight_dfs(terms, weights, 0, total_cap)

    def _weight_dfs(self, terms, weights, idx, total_cap):
        if self.done():
            return
        if idx == len(terms):
            s = sum(weights)
            if s > self.bestL:
                anchor = _lattice_anchor(
                    self.R, list(zip((v for v, _ in terms), weights)))
                if anchor is not None:
                    self.bestL = s
                    self.bestZ = zonotope(
                        anchor, list(zip((v for v, _ in terms), weights)))
            return
        rest_min = len(terms) - idx - 1
        rest_max = sum(c for _, c in terms[idx + 1:])
        lo = 1
        hi = min(terms[idx][1], total_cap - sum(weights[:idx]) - rest_min)
        for w in range(lo, hi + 1):
            weights[idx] = w
            # prefix feasibility at minimal tail weights; infeasible prefixes
            # only get worse as w grows
            probe = list(zip((v for v, _ in terms[:idx + 1]),
                             weights[:idx + 1]))
            probe += [(v, 1) for v, _ in terms[idx + 1:]]
            if _lattice_anchor(self.R, probe) is None:
                break
            if sum(weights[:idx + 1]) + rest_max > self.bestL:
                self._weight_dfs(terms, weights, idx + 1, total_cap)
            if self.done():
                weights[idx] = 1
                return
        weights[idx] = 1


def _search_full(R, n, target=None):
    return _Search(R, n, target).run()


# ---------------------------------------------------------------------------
# closed forms

def _int_root(x, k):
    if x <= 0:
        return None
    t = round(x ** (1.0 / k))
    for cand in (t - 1, t, t + 1):
        if cand >= 1 and cand ** k == x:
            return cand
    return None


def _match_simplex_dilate(R):
    k = R.ambient_dim
    verts = R.vertices
    if len(verts) != k + 1:
        return None
    v0 = verts[0]
    D = [vsub(v, v0) for v in verts[1:]]
    vol = abs(int_det(D))
    t = _int_root(vol, k)
    if t is None:
        return None
    if any(x % t for row in D for x in row):
        return None
    U = [tuple(x // t for x in row) for row in D]
    if abs(int_det(U)) != 1:
        return None
    direction = primitivize(U[0])[0]
    return FastpathResult(t, "unimodular-simplex-dilate",
                          zonotope(v0, [(U[0], t)]))


def _match_box(R):
    lo, hi = R.bounding_box
    d = R.ambient_dim
    corners = set(itertools.product(*[(lo[k], hi[k]) for k in range(d)]))
    if set(R.vertices) != corners:
        return None
    alphas = [hi[k] - lo[k] for k in range(d)]
    terms = [(tuple(int(i == k) for i in range(d)), a)
             for k, a in enumerate(alphas) if a > 0]
    return FastpathResult(sum(alphas), "coordinate-box", zonotope(lo, terms))


def _unit(d, k):
    return tuple(int(i == k) for i in range(d))


def _match_degree_one_pyramid(P):
    d = P.ambient_dim
    if d < 2:
        return None
    want = {(0,) * d,
            tuple(2 * x for x in _unit(d, 0)),
            tuple(2 * x for x in _unit(d, 1))}
    want |= {_unit(d, k) for k in range(2, d)}
    if set(P.vertices) != want:
        return None
    return FastpathResult(2, "degree-one-pyramid",
                          zonotope((0,) * d, [(_unit(d, 0), 2)]))


def _match_lawrence(P):
    d = P.ambient_dim
    vset = set(P.vertices)
    if (0,) * d not in vset:
        return None
    for n in range(d, 1, -1):
        apexes = {_unit(d, k) for k in range(n, d)}
        if not apexes <= vset:
            continue
        rest = vset - apexes - {(0,) * d}
        if any(any(v[k] for k in range(n, d)) for v in rest):
            continue
        base = {_unit(d, k) for k in range(n - 1)}
        if not base <= rest:
            continue
        tops = rest - base
        h = {}
        hn = None
        for v in tops:
            lead = [k for k in range(n - 1) if v[k]]
            if len(lead) == 1 and v[lead[0]] == 1 and v[n - 1] >= 1 \
                    and sum(map(abs, v)) == 1 + v[n - 1]:
                h[lead[0]] = v[n - 1]
            elif sum(map(abs, v)) == v[n - 1] >= 1 and not lead:
                hn = v[n - 1]
            else:
                break
        else:
            if hn is None or len(h) != n - 1:
                continue
            heights = [h[k] for k in range(n - 1)] + [hn]
            if any(a <= 0 for a in heights):
                continue
            if any(heights[i] > heights[i + 1] for i in range(n - 1)):
                continue
            if n >= 2 and heights[-2] == heights[-1]:
                value = hn + 1
                witness = zonotope((0,) * d, [(_unit(d, n - 2), 1),
                                              (_unit(d, n - 1), hn)])
            else:
                value = hn
                witness = zonotope((0,) * d, [(_unit(d, n - 1), hn)])
            return FastpathResult(value, "lawrence-prism", witness)
    return None


def _match_triangle(P, R, to_ambient):
    if R.dim != 2 or len(R.vertices) != 3:
        return None
    from .polytope import lattice_width, normalized_volume
    w, u = lattice_width(R)
    s = 2 * normalized_volume(R) / w
    value = floor_frac(s)
    v = primitivize((-u[1], u[0]))[0]
    run, anchor = _best_run_along(list(R.lattice_points), v)
    assert run == value, "triangle diameter must match floor(2V/w)"
    return FastpathResult(value, "triangle",
                          to_ambient(zonotope(anchor, [(v, value)])))


def length_fastpath(P: LatticePolytope) -> Optional[FastpathResult]:
    """Closed-form Minkowski length for recognized families, else None.

    Covers dilates of unimodular simplices (any position), coordinate boxes,
    the degree-one normal forms (iterated pyramid over twice the unimodular
    triangle, and Lawrence prisms), segments, and arbitrary lattice triangles.
    """
    if P.dim == 0:
        return FastpathResult(0, "point", zonotope(P.vertices[0], []))
    R, to_ambient = _reduction(P)
    if P.dim == 1:
        lo = min(v[0] for v in R.vertices)
        hi = max(v[0] for v in R.vertices)
        z = to_ambient(zonotope((lo,), [((1,), hi - lo)]))
        return FastpathResult(hi - lo, "segment", z)
    for match in (_match_degree_one_pyramid, _match_lawrence):
        out = match(P)
        if out is not None:
            return out
    out = _match_simplex_dilate(R)
    if out is not None:
        return FastpathResult(out.value, out.reason, to_ambient(out.witness))
    out = _match_box(R)
    if out is not None:
        return FastpathResult(out.value, out.reason, to_ambient(out.witness))
    return _match_triangle(P, R, to_ambient)


# ---------------------------------------------------------------------------
# public entry points

def _reduction(P):
    """(full-dimensional reduced polytope, witness-to-ambient mapper)."""
    if P.dim == P.ambient_dim:
        return P, lambda z: z
    if P.dim == 0:
        def back0(z):
            return zonotope(P.vertices[0], [])
        return LatticePolytope([(0,)]), back0
    span = P.span
    R = P.reduced

    def back(z):
        anchor = span.from_coords(z.anchor)
        terms = [(as_int_vec(span.from_coords_linear(v)), w)
                 for v, w in z.terms]
        return zonotope(anchor, terms)

    return R, back


def minkowski_length(P: LatticePolytope, n: int, *,
                     fastpath: bool = True) -> tuple[int, Zonotope]:
    """Exact n-th Minkowski length of P with a witness zonotope.

    The witness is a lattice zonotope inside P of span dimension <= n whose
    weights sum to L_n. Certified search is limited to span dimension <= 3;
    closed forms apply in any dimension.
    """
    d = P.ambient_dim
    if not 1 <= n <= d:
        raise ValueError(f"profile index {n} outside 1..{d}")
    if P.dim == 0:
        return 0, zonotope(P.vertices[0], [])
    R, to_ambient = _reduction(P)
    n_eff = min(n, P.dim)
    if n_eff == 1:
        L, z = _segment_witness(list(R.lattice_points),
                                _catalog_from_points(list(R.lattice_points)))
        return L, to_ambient(z)
    if fastpath and n_eff == P.dim:
        out = length_fastpath(P)
        if out is not None:
            return out.value, out.witness
    if P.dim > 3:
        raise NotImplementedError(
            "certified search needs span dimension <= 3; "
            "use length_fastpath or brute_force_length")
    L, z = _search_full(R, n_eff)
    return L, to_ambient(z)


def minkowski_length_at_least(P: LatticePolytope, target: int,
                              n: Optional[int] = None) -> bool:
    """Decide L_n(P) >= target without computing the length exactly."""
    if target <= 0:
        return True
    if P.dim == 0:
        return False
    n_eff = P.dim if n is None else min(n, P.dim)
    if n_eff >= P.dim:
        out = length_fastpath(P)
        if out is not None:
            return out.value >= target
    R, _ = _reduction(P)
    if P.dim > 3:
        raise NotImplementedError("span dimension <= 3 required")
    L, _ = _search_full(R, n_eff, target=target)
    return L >= target


@dataclass(frozen=True)
class LengthProfile:
    """(L_1, .., L_d) with witnesses and the method used per entry."""
    values: tuple
    witnesses: tuple
    methods: tuple

    @property
    def full_length(self):
        return self.values[-1]


def length_profile(P: LatticePolytope, *, fastpath=True) -> LengthProfile:
    d = P.ambient_dim
    values, witnesses, methods = [], [], []
    for n in range(1, d + 1):
        if n > P.dim and values:
            values.append(values[-1])
            witnesses.append(witnesses[-1])
            methods.append(methods[-1])
            continue
        used_fastpath = fastpath and (
            n == 1 or (n >= P.dim and length_fastpath(P) is not None))
        L, z = minkowski_length(P, n, fastpath=fastpath)
        values.append(L)
        witnesses.append(z)
        methods.append("fastpath" if used_fastpath else "search")
    return LengthProfile(tuple(values), tuple(witnesses), tuple(methods))


def brute_force_length(P: LatticePolytope, n: int, *, cap: int = 60) -> int:
    """Independent oracle for L_n: exhaustive multiset enumeration.

    No distinct-direction cap, no anchor restriction (anchors scan the whole
    integral bounding box). Refuses polytopes with more than `cap` lattice
    points.
    """
    d = P.ambient_dim
    if not 1 <= n <= d:
        raise ValueError(f"profile index {n} outside 1..{d}")
    pts = list(P.lattice_points)
    if len(pts) > cap:
        raise CapExceeded(f"{len(pts)} lattice points exceed cap {cap}")
    if len(pts) <= 1:
        return 0
    pts_set = set(pts)
    lo, hi = P.bounding_box
    anchors = list(itertools.product(
        *[range(lo[k], hi[k] + 1) for k in range(d)]))
    dirs = sorted({primitivize(vsub(q, p))[0]
                   for p, q in itertools.combinations(pts, 2)})

    def fits(corners):
        for a in anchors:
            if all(vadd(c, a) in pts_set for c in corners):
                return True
        return False

    best = 0

    def extend(start, corners, depth, span):
        nonlocal best
        best = max(best, depth)
        for i in range(start, len(dirs)):
            v = dirs[i]
            new_span = span
            if mat_rank(span + [v]) > len(span):
                if len(span) >= n:
                    continue
                new_span = span + [v]
            new_corners = corners | {vadd(c, v) for c in corners}
            if fits(new_corners):
                extend(i, new_corners, depth + 1, new_span)

    extend(0, {(0,) * d}, 0, [])
    return best


# ---------------------------------------------------------------------------
# smallest maximal decompositions

def _zonotope_span_chart(Z):
    dirs = [v for v, _ in Z.terms]
    n = mat_rank(dirs)
    basis = saturation_basis(dirs, len(Z.anchor))
    binv_rows = invert([[dot(a, b) for b in basis] for a in basis])

    def to_coords(vec):
        rhs = [dot(b, vec) for b in basis]
        return tuple(
            sum(binv_rows[i][j] * rhs[j] for j in range(n)) for i in range(n))

    return n, basis, to_coords


def _parallelepiped_lattice_points(dirs_coords):
    """Lattice points of the half-open cell spanned by independent vectors."""
    n = len(dirs_coords)
    inv = invert(dirs_coords)
    corners = [tuple(sum(row[k] * t[k] for k in range(n)) for row in
               zip(*dirs_coords)) for t in itertools.product((0, 1), repeat=n)]
    los = [min(c[k] for c in corners) for k in range(n)]
    his = [max(c[k] for c in corners) for k in range(n)]
    out = []
    for x in itertools.product(*[range(int(los[k]), int(his[k]) + 1)
                                 for k in range(n)]):
        # coefficients t with x = sum_k t_k * dirs[k]: t = (D^T)^-1 x
        t = [sum(inv[i][j] * x[i] for i in range(n)) for j in range(n)]
        if all(0 <= tj < 1 for tj in t):
            out.append(x)
    return out


def _mod2_merge(Z):
    dirs = [v for v, w in Z.terms]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if all((a - b) % 2 == 0 for a, b in zip(dirs[i], dirs[j])):
                diag = vadd(dirs[i], dirs[j])
                new_terms = []
                for k, (v, w) in enumerate(Z.terms):
                    w2 = w - 1 if k in (i, j) else w
                    if w2 > 0:
                        new_terms.append((v, w2))
                new_terms.append((diag, Fraction(1)))
                return zonotope(Z.anchor, new_terms)
    return None


def _congruence_replace(Z):
    n, basis, to_coords = _zonotope_span_chart(Z)
    if n < 2:
        return None
    dirs = [v for v, _ in Z.terms]
    coords = [as_int_vec(to_coords(v)) for v in dirs]
    for subset in itertools.combinations(range(len(dirs)), n):
        sub = [coords[i] for i in subset]
        if mat_rank(sub) < n:
            continue
        cell = _parallelepiped_lattice_points(sub)
        seen = {}
        found = None
        for p in cell:
            key = tuple(x % n for x in p)
            if key in seen:
                found = (seen[key], p)
                break
            seen[key] = p
        if found is None:
            continue
        p, q = found
        # replace one unit of each chosen direction by the long segment
        diff_amb = tuple(sum((q[k] - p[k]) * basis[k][m] for k in range(n))
                         for m in range(len(Z.anchor)))
        shift_amb = tuple(sum(p[k] * basis[k][m] for k in range(n))
                          for m in range(len(Z.anchor)))
        new_terms = []
        for k, (v, w) in enumerate(Z.terms):
            w2 = w - 1 if k in subset else w
            if w2 > 0:
                new_terms.append((v, w2))
        new_terms.append((diff_amb, Fraction(1)))
        return zonotope(vadd(Z.anchor, shift_amb), new_terms)
    return None


def smallest_maximal_decomposition(P: LatticePolytope) -> Zonotope:
    """A maximal decomposition of P minimal under containment-up-to-
    translation, normalized so that no two directions agree mod 2 and no
    spanning cell of its directions holds congruent lattice points.

    These two replacement rules are exactly what force the distinct-direction
    bound 2^d - 1 and the n^d cell-volume bound; iteration terminates because
    every replacement strictly shrinks the zonotope.
    """
    d = P.ambient_dim
    L, Z = minkowski_length(P, d)
    if L < 1:
        raise ValueError("point-like polytope has no maximal decomposition")
    # every replacement strictly loses a lattice point of the zonotope
    for _ in range(len(P.lattice_points) + 2):
        replaced = _mod2_merge(Z)
        if replaced is None:
            replaced = _congruence_replace(Z)
        if replaced is None:
            break
        if replaced.weight_sum > L:
            raise AssertionError(
                "replacement exceeded the maximal length; search bug")
        assert replaced.weight_sum == L
        Z = replaced
    else:
        raise AssertionError("decomposition minimization failed to settle")
    return Z
