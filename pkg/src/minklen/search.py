"""Randomized search harnesses for the open questions.

Three problems: the record gap between the rational and integer Minkowski
lengths; triangles/simplices whose length differs from their lattice
diameter; and dilation series whose small values disagree with their
eventual quasi-linear form. Runs are reproducible from the seed and emit
byte-stable record streams regardless of the worker count.
"""

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .corpus import wide_gap_square
from .dilation import dilate_table, evaluate, fit_quasilinear
from .lengths import CapExceeded, brute_force_length, minkowski_length
from .polytope import LatticePolytope
from .rational import CertificationError, period, rational_length_profile
from .vectors import format_fraction


@dataclass(frozen=True)
class SearchRecord:
    index: int
    vertices: tuple
    values: dict
    finding: bool
    skipped: bool = False

    def to_json(self) -> str:
        doc = {
            "index": self.index,
            "vertices": [list(v) for v in self.vertices],
            "finding": self.finding,
            "skipped": self.skipped,
        }
        doc.update(self.values)
        return json.dumps(doc, sort_keys=True)


def random_polygon(rng: random.Random, box: int, max_points: int = 8,
                   min_dim: int = 0) -> LatticePolytope:
    """Hull of up to max_points random integer points in [0, box]^2."""
    while True:
        k = rng.randint(3, max_points)
        pts = [(rng.randint(0, box), rng.randint(0, box)) for _ in range(k)]
        P = LatticePolytope(pts)
        if P.dim >= min_dim:
            return P


def random_simplex(rng: random.Random, box: int, dim: int) -> LatticePolytope:
    """Random full-dimensional lattice simplex in [0, box]^dim."""
    while True:
        pts = [tuple(rng.randint(0, box) for _ in range(dim))
               for _ in range(dim + 1)]
        P = LatticePolytope(pts)
        if P.dim == dim and len(P.vertices) == dim + 1:
            return P


def _ordered_map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_gap_search(seed: int, budget: int, *, box: int = 5,
                   threads: int = 1):
    """Stream records of lambda(P) - L(P) over random polygons.

    The known wide-gap example leads the stream so the running supremum
    starts at 8/5; a gap of at least 4 on a polygon contradicts a proven
    bound and is flagged as a bug signal.
    """
    rng = random.Random(seed)
    instances = [wide_gap_square()]
    instances += [random_polygon(rng, box) for _ in range(budget)]

    def work(P):
        try:
            res = rational_length_profile(P)
            if res.certification != "certified":
                return None
            L, _ = minkowski_length(P, P.ambient_dim)
            return res.value, L
        except (CapExceeded, NotImplementedError):
            return None

    results = _ordered_map(work, instances, threads)
    sup = Fraction(0)
    records = []
    for i, (P, out) in enumerate(zip(instances, results)):
        if out is None:
            records.append(SearchRecord(i, P.vertices, {}, False, True))
            continue
        lam, L = out
        gap = lam - L
        sup = max(sup, gap)
        records.append(SearchRecord(
            i, P.vertices,
            {"lambda": format_fraction(lam), "length": L,
             "gap": format_fraction(gap), "sup_gap": format_fraction(sup)},
            finding=bool(P.dim == 2 and gap >= 4)))
    return records


def run_simplex_diameter_search(seed: int, budget: int, *, box: int = 3,
                                dim: int = 3, threads: int = 1):
    """Compare L and the lattice diameter on random simplices; a strict
    difference is a reportable finding (not a bug)."""
    rng = random.Random(seed)
    instances = [random_simplex(rng, box, dim) for _ in range(budget)]

    def work(P):
        try:
            L, _ = minkowski_length(P, P.ambient_dim)
            ell, _ = minkowski_length(P, 1)
            return L, ell
        except (CapExceeded, NotImplementedError):
            return None

    results = _ordered_map(work, instances, threads)
    records = []
    for i, (P, out) in enumerate(zip(instances, results)):
        if out is None:
            records.append(SearchRecord(i, P.vertices, {}, False, True))
            continue
        L, ell = out
        records.append(SearchRecord(
            i, P.vertices, {"length": L, "lattice_diameter": ell},
            finding=bool(L != ell)))
    return records


def run_quasilinearity_search(seed: int, budget: int, *, box: int = 3,
                              threads: int = 1, period_cap: int = 12,
                              cap_lattice_points: int = 4000):
    """Fit the eventual quasi-linear form and flag any small t where the
    table disagrees with it (a candidate against quasi-linearity from 1)."""
    rng = random.Random(seed)
    instances = [random_polygon(rng, box, min_dim=1) for _ in range(budget)]

    def work(P):
        try:
            res = rational_length_profile(P)
            if res.certification != "certified":
                return None
            k = period(P, res)
            if k > period_cap:
                return None
            horizon = max(2 * k, 6)
            table = dilate_table(P, horizon, rational=res,
                                 cap_lattice_points=cap_lattice_points)
            if table.truncated:
                return None
            fit = fit_quasilinear(P, horizon, rational=res, table=table,
                                  period_value=k)
            mism = [t for t in range(1, horizon + 1)
                    if table.value(t) != evaluate(fit, t)]
            return k, fit, table, mism
        except (CapExceeded, NotImplementedError):
            return None

    results = _ordered_map(work, instances, threads)
    records = []
    for i, (P, out) in enumerate(zip(instances, results)):
        if out is None:
            records.append(SearchRecord(i, P.vertices, {}, False, True))
            continue
        k, fit, table, mism = out
        records.append(SearchRecord(
            i, P.vertices,
            {"period": k, "fitted_period": fit.period,
             "slope": format_fraction(fit.slope),
             "constants": list(fit.constants),
             "table": list(table.values),
             "early_mismatches": mism, "status": fit.status},
            finding=bool(mism)))
    return records


def run_oracle_comparison(seed: int, budget: int, *, box: int = 4,
                          max_lattice_points: int = 12, threads: int = 1):
    """Certified search vs the exhaustive oracle on small polygons."""
    rng = random.Random(seed)
    instances = []
    while len(instances) < budget:
        P = random_polygon(rng, box)
        if len(P.lattice_points) <= max_lattice_points:
            instances.append(P)

    def work(P):
        out = {}
        for n in (1, 2):
            L, _ = minkowski_length(P, n, fastpath=False)
            B = brute_force_length(P, n)
            out[n] = (L, B)
        return out

    results = _ordered_map(work, instances, threads)
    records = []
    for i, (P, out) in enumerate(zip(instances, results)):
        values = {f"length_{n}": out[n][0] for n in (1, 2)}
        values.update({f"oracle_{n}": out[n][1] for n in (1, 2)})
        records.append(SearchRecord(
            i, P.vertices, values,
            finding=any(out[n][0] != out[n][1] for n in (1, 2))))
    return records


PROBLEMS = {
    "gap": run_gap_search,
    "simplex-diameter": run_simplex_diameter_search,
    "quasilinearity": run_quasilinearity_search,
    "oracle": run_oracle_comparison,
}
