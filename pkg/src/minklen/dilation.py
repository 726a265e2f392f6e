"""Dilation series L_n(tP) and their eventual quasi-linear form.

Table entries are closed exactly whenever closed forms or a bound sandwich
settle them: superadditivity and scaled witnesses push from below, while
t * lambda and the 2D area/width cap push from above. Only entries the
sandwich leaves open go to the branch-and-bound search, seeded at the lower
bound so the search only has to confirm or beat it.

A fit extracts the residue constants c_r of L(tP) = k lambda floor(t/k) + c_r
from the table. A residue is proven stable once its (nondecreasing, bounded)
constant reaches floor(r lambda); otherwise the fit reports the empirical
horizon honestly.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lengths import (
    CapExceeded,
    _search_full,
    length_fastpath,
    minkowski_length,
    minkowski_length_at_least,
)
from .polytope import LatticePolytope, dilate, lattice_width, \
    normalized_volume
from .rational import (
    CertificationError,
    RationalLengthResult,
    rational_length_profile,
    witness_scale_factor,
)
from .vectors import floor_frac, frac

# closed-form families whose length scales linearly under dilation
_LINEAR_REASONS = {"point", "segment", "unimodular-simplex-dilate",
                   "coordinate-box", "degree-one-pyramid", "lawrence-prism"}


@dataclass(frozen=True)
class DilateEntry:
    t: int
    value: int
    source: str  # fastpath | search
    witness: Optional[dict] = None


@dataclass(frozen=True)
class DilateTable:
    polytope: LatticePolytope
    n: int
    entries: tuple
    truncated: bool = False

    @property
    def values(self):
        return tuple(e.value for e in self.entries)

    def value(self, t):
        return self.entries[t - 1].value

    def check_superadditive(self):
        vals = self.values
        for s in range(1, len(vals) + 1):
            for t in range(1, len(vals) + 1 - s):
                if vals[s + t - 1] < vals[s - 1] + vals[t - 1]:
                    return False
        return True


def _witness_digest(Z):
    from .vectors import format_fraction
    return {
        "anchor": [format_fraction(x) for x in Z.anchor],
        "terms": [{"dir": list(v), "weight": format_fraction(w)}
                  for v, w in Z.terms],
    }


def dilate_table(P: LatticePolytope, t_max: int, n: Optional[int] = None,
                 *, rational: Optional[RationalLengthResult] = None,
                 cap_lattice_points: int = 20000) -> DilateTable:
    """L_n(tP) for t = 1..t_max with per-entry provenance.

    `rational` (a certified profile) tightens the sandwich; entries whose
    dilate exceeds the lattice-point cap truncate the table rather than
    guessing.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    d = P.ambient_dim
    n = d if n is None else n
    if not 1 <= n <= d:
        raise ValueError(f"profile index {n} outside 1..{d}")
    full = n >= P.dim

    fp = length_fastpath(P) if full else None
    if fp is not None and fp.reason in _LINEAR_REASONS:
        entries = [DilateEntry(t, t * fp.value, "fastpath") for t in
                   range(1, t_max + 1)]
        return DilateTable(P, n, tuple(entries))
    if fp is not None and fp.reason == "triangle":
        from .rational import polygon_upper_bound
        R = P.reduced if P.dim < d else P
        s = polygon_upper_bound(R)  # = s(T), tight on triangles
        entries = [DilateEntry(t, floor_frac(s * t), "fastpath")
                   for t in range(1, t_max + 1)]
        return DilateTable(P, n, tuple(entries))

    lam = None
    wit_scale = None
    if rational is not None and rational.certification == "certified":
        lam = rational.lambdas[n - 1]
        wit_scale = witness_scale_factor(rational.witnesses[n - 1])
    cap2d = None
    if P.dim == 2:
        R = P.reduced if P.dim < d else P
        if R.ambient_dim == 2:
            w, _ = lattice_width(R)
            cap2d = 2 * normalized_volume(R) / w

    entries = []
    truncated = False
    for t in range(1, t_max + 1):
        tP = dilate(P, t)
        lower = 0
        for s in range(1, t):
            lower = max(lower, entries[s - 1].value + entries[t - s - 1].value)
        if lam is not None and wit_scale is not None and t % wit_scale == 0:
            lower = max(lower, int(lam * t))
        upper = None
        if lam is not None:
            upper = floor_frac(lam * t)
        if cap2d is not None:
            c = floor_frac(cap2d * t)
            upper = c if upper is None else min(upper, c)
        if upper is not None and lower == upper:
            entries.append(DilateEntry(t, lower, "fastpath"))
            continue
        if len(tP.lattice_points) > cap_lattice_points:
            truncated = True
            break
        value, witness = _exact_entry(tP, n, lower)
        if upper is not None and value > upper:
            raise CertificationError("table entry exceeded its upper bound")
        entries.append(DilateEntry(
            t, value, "search",
            _witness_digest(witness) if witness is not None else None))
    return DilateTable(P, n, tuple(entries), truncated)


def _exact_entry(tP, n, lower):
    """Exact L_n(tP) via search seeded at the known lower bound."""
    n_eff = min(n, tP.dim)
    if tP.dim == 0:
        return 0, None
    if n_eff == 1:
        L, Z = minkowski_length(tP, 1)
        return L, Z
    fp = length_fastpath(tP) if n_eff == tP.dim else None
    if fp is not None:
        return fp.value, fp.witness
    from .lengths import _reduction, _Search
    R, to_ambient = _reduction(tP)
    search = _Search(R, n_eff)
    if lower - 1 > search.bestL:
        search.bestL = lower - 1  # seed: the search only confirms or beats it
    L, Z = search.run()
    if L < lower:
        raise CertificationError("search undercut a sound lower bound")
    return L, to_ambient(Z)


@dataclass(frozen=True)
class QuasiLinearFunction:
    """f(t) = period * slope * floor(t / period) + constants[t mod period]."""
    period: int
    slope: Fraction
    constants: tuple
    stabilization_point: int
    status: str  # proven-stable | empirically-stable

    def __post_init__(self):
        if (self.slope * self.period).denominator != 1:
            raise ValueError("period * slope must be integral")
        if len(self.constants) != self.period:
            raise ValueError("need one constant per residue")

    def __call__(self, t):
        return evaluate(self, t)


def evaluate(f: QuasiLinearFunction, t: int) -> int:
    """Value of the quasi-linear form at a positive integer t."""
    k = f.period
    step = int(f.slope * k)
    return step * (t // k) + f.constants[t % k]


def fit_quasilinear(P: LatticePolytope, horizon: int,
                    n: Optional[int] = None, *,
                    rational: Optional[RationalLengthResult] = None,
                    table: Optional[DilateTable] = None,
                    period_value: Optional[int] = None,
                    **profile_kwargs) -> QuasiLinearFunction:
    """Extract the eventual quasi-linear form of t -> L_n(tP).

    Residue constants come from the dilate table up to `horizon`
    (at least twice the period). Stability is proven only by the ceiling
    argument: a nondecreasing residue sequence that reaches floor(r*lambda)
    can never move again. The reported period divides the length period.
    """
    from .rational import period as _period
    d = P.ambient_dim
    n = d if n is None else n
    if rational is None:
        rational = rational_length_profile(P, **profile_kwargs)
    if rational.certification != "certified":
        raise CertificationError("fit needs a certified rational length")
    lam = rational.lambdas[n - 1]
    if lam == 0:
        return QuasiLinearFunction(1, Fraction(0), (0,), 1, "proven-stable")
    k = period_value if period_value is not None else _period(
        P, rational, n=n)
    if horizon < 2 * k:
        raise ValueError(f"horizon {horizon} below twice the period {k}")
    if table is None or len(table.entries) < horizon or table.n != n:
        table = dilate_table(P, horizon, n, rational=rational)
    if table.truncated or len(table.entries) < horizon:
        raise CapExceeded("dilate table truncated below the fit horizon")
    vals = table.values

    step = lam * k
    assert step.denominator == 1
    constants = []
    stabilization = 1
    statuses = []
    for r in range(k):
        ts = [t for t in range(1, horizon + 1) if t % k == r]
        obs = [(t, vals[t - 1] - int(step) * (t // k)) for t in ts]
        seq = [c for _, c in obs]
        if any(b < a for a, b in zip(seq, seq[1:])):
            raise CertificationError("residue constants must not decrease")
        ceiling = floor_frac(lam * r) if r else 0
        if any(c > ceiling for c in seq):
            raise CertificationError("residue constant exceeded r * lambda")
        final = seq[-1]
        constants.append(final)
        # nondecreasing sequence: stable from its first occurrence of final
        first_stable = next(t for t, c in obs if c == final)
        stabilization = max(stabilization, first_stable)
        statuses.append("proven-stable" if final == ceiling
                        else "empirically-stable")
    if constants[0] != 0:
        raise CertificationError("the zero residue constant must vanish")
    status = ("proven-stable"
              if all(s == "proven-stable" for s in statuses)
              else "empirically-stable")

    # the eventual period may be a proper divisor of k
    best_k = k
    for cand in range(1, k):
        if k % cand:
            continue
        if (lam * cand).denominator != 1:
            continue
        ok = all(
            constants[(r + cand) % k] - constants[r]
            == cand * lam - (step if r + cand >= k else 0)
            for r in range(k))
        if ok:
            best_k = cand
            break
    if best_k != k:
        constants = constants[:best_k]
    return QuasiLinearFunction(best_k, lam, tuple(constants),
                               stabilization, status)
