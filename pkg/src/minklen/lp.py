"""Exact rational linear programming.

A small dense two-phase simplex over Fraction arithmetic with Bland's rule,
sized for the tiny programs this library generates (membership tests,
directional lengths, zonotope fitting). Every optimal solve produces a dual
certificate and verifies it exactly; a failed certificate is a bug, not a
tolerance issue.

Variables are free unless flagged nonnegative. Infeasible and unbounded are
statuses, not errors.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .vectors import frac

LE, EQ, GE = "<=", "==", ">="


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    rows: tuple  # ((coeffs, rel, rhs), ...)
    objective: tuple
    sense: str = "max"
    nonneg: Optional[tuple] = None  # per-variable flags; None = all free

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"bad sense {self.sense!r}")
        if len(self.objective) != self.num_vars:
            raise ValueError("objective width != num_vars")
        for coeffs, rel, _ in self.rows:
            if len(coeffs) != self.num_vars:
                raise ValueError("row width != num_vars")
            if rel not in (LE, EQ, GE):
                raise ValueError(f"bad relation {rel!r}")
        if self.nonneg is not None and len(self.nonneg) != self.num_vars:
            raise ValueError("nonneg width != num_vars")


@dataclass(frozen=True)
class LpOutcome:
    status: str  # optimal | infeasible | unbounded
    optimum: Optional[Fraction] = None
    witness: Optional[tuple] = None
    dual: Optional[tuple] = None


def lp(num_vars, rows, objective, sense="max", nonneg=None) -> LinearProgram:
    """Convenience constructor normalizing all entries to Fractions."""
    rows = tuple(
        (tuple(frac(c) for c in coeffs), rel, frac(rhs))
        for coeffs, rel, rhs in rows
    )
    objective = tuple(frac(c) for c in objective)
    if nonneg is not None:
        nonneg = tuple(bool(f) for f in nonneg)
    return LinearProgram(num_vars, rows, objective, sense, nonneg)


class _Tableau:
    """Dense simplex tableau with a trailing identity block for duals."""

    def __init__(self, prog: LinearProgram):
        n = prog.num_vars
        nonneg = prog.nonneg or (False,) * n
        # column map: for each original var, (plus_col, minus_col or None)
        self.var_cols = []
        cols = 0
        for j in range(n):
            if nonneg[j]:
                self.var_cols.append((cols, None))
                cols += 1
            else:
                self.var_cols.append((cols, cols + 1))
                cols += 2
        self.n_struct = cols

        # normalize rows to equalities with rhs >= 0, remembering the overall
        # sign multiplier from the user's row to the internal row
        m = len(prog.rows)
        self.row_sign = []
        A = []
        b = []
        slack_cols = {}
        for i, (coeffs, rel, rhs) in enumerate(prog.rows):
            mu = 1
            c = list(coeffs)
            r = rhs
            if rel == GE:
                c = [-x for x in c]
                r = -r
                mu = -mu
            has_slack = rel != EQ
            if has_slack:
                slack_cols[i] = cols
                cols += 1
            if r < 0:
                c = [-x for x in c]
                r = -r
                mu = -mu
                slack_sign = -1
            else:
                slack_sign = 1
            self.row_sign.append(mu)
            A.append((c, slack_cols.get(i), slack_sign))
            b.append(r)
        self.n_real = cols  # structural + slacks
        self.m = m
        self.art0 = cols  # artificial/identity block starts here
        width = cols + m

        # expand rows into full tableau width
        self.A = []
        self.b = list(b)
        self.basis = []
        for i, (c, scol, ssign) in enumerate(A):
            row = [Fraction(0)] * width
            for j in range(n):
                pj, mj = self.var_cols[j]
                row[pj] += c[j]
                if mj is not None:
                    row[mj] -= c[j]
            if scol is not None:
                row[scol] = Fraction(ssign)
            row[self.art0 + i] = Fraction(1)
            self.A.append(row)
            # slack with +1 and rhs >= 0 can start basic; otherwise artificial
            if scol is not None and ssign == 1:
                self.basis.append(scol)
            else:
                self.basis.append(self.art0 + i)
        self.width = width
        self.prog = prog

    def _reduced_costs(self, cost):
        z = list(cost)
        val = Fraction(0)
        for i, k in enumerate(self.basis):
            ck = cost[k]
            if ck != 0:
                row = self.A[i]
                for j in range(self.width):
                    if row[j] != 0:
                        z[j] -= ck * row[j]
                val += ck * self.b[i]
        return z, val

    def _pivot(self, i, j):
        row = self.A[i]
        pv = row[j]
        if pv != 1:
            self.A[i] = row = [x / pv for x in row]
            self.b[i] /= pv
        for k in range(self.m):
            if k != i:
                f = self.A[k][j]
                if f != 0:
                    rk = self.A[k]
                    self.A[k] = [x - f * y for x, y in zip(rk, row)]
                    self.b[k] -= f * self.b[i]
        self.basis[i] = j

    def _run(self, cost, allowed):
        """Bland simplex maximizing cost over columns in `allowed`.

        Returns 'optimal' or 'unbounded'; the tableau is left at the final
        basis either way.
        """
        z, _ = self._reduced_costs(cost)
        while True:
            enter = next((j for j in range(self.width)
                          if allowed[j] and z[j] > 0), None)
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(self.m):
                a = self.A[i][enter]
                if a > 0:
                    ratio = self.b[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave is None:
                return "unbounded"
            self._pivot(leave, enter)
            z, _ = self._reduced_costs(cost)

    def objective_value(self, cost):
        return sum(cost[k] * self.b[i] for i, k in enumerate(self.basis))

    def primal_witness(self):
        vals = [Fraction(0)] * self.width
        for i, k in enumerate(self.basis):
            vals[k] = self.b[i]
        out = []
        for pj, mj in self.var_cols:
            x = vals[pj]
            if mj is not None:
                x -= vals[mj]
            out.append(x)
        return tuple(out)

    def dual_witness(self, cost):
        # reduced cost of identity column i equals -y_i for the normalized
        # rows; undo the row sign normalization
        z, _ = self._reduced_costs(cost)
        return tuple(-z[self.art0 + i] * self.row_sign[i]
                     for i in range(self.m))


def _verify_certificate(prog: LinearProgram, x, y, optimum):
    """Exact optimality check: primal feasible, dual feasible, equal value.

    The dual `y` certifies the maximization form (objective negated for
    min-sense programs); weak duality plus the exact value match proves
    optimality of both sides.
    """
    n = prog.num_vars
    nonneg = prog.nonneg or (False,) * n
    sgn = 1 if prog.sense == "max" else -1
    obj = [sgn * c for c in prog.objective]
    # primal feasibility
    for coeffs, rel, rhs in prog.rows:
        v = sum(c * xi for c, xi in zip(coeffs, x))
        ok = (v <= rhs) if rel == LE else (v >= rhs) if rel == GE else v == rhs
        if not ok:
            raise AssertionError("lp certificate: primal infeasibility")
    if any(nonneg[j] and x[j] < 0 for j in range(n)):
        raise AssertionError("lp certificate: sign violation")
    # dual feasibility for the maximization form
    for i, (_, rel, _) in enumerate(prog.rows):
        if rel == LE and y[i] < 0:
            raise AssertionError("lp certificate: dual sign")
        if rel == GE and y[i] > 0:
            raise AssertionError("lp certificate: dual sign")
    for j in range(n):
        col = sum(y[i] * prog.rows[i][0][j] for i in range(len(prog.rows)))
        if nonneg[j]:
            if col < obj[j]:
                raise AssertionError("lp certificate: dual infeasibility")
        elif col != obj[j]:
            raise AssertionError("lp certificate: stationarity")
    dual_val = sum(y[i] * prog.rows[i][2] for i in range(len(prog.rows)))
    if dual_val != sgn * optimum:
        raise AssertionError("lp certificate: duality gap")


def solve(prog: LinearProgram) -> LpOutcome:
    """Solve to exact optimality with a verified dual certificate.

    Deterministic: fixed column order and Bland's rule, so repeated runs
    produce identical witnesses.
    """
    t = _Tableau(prog)
    width = t.width

    # phase 1: drive artificials to zero
    if any(k >= t.art0 for k in t.basis):
        p1 = [Fraction(0)] * width
        for j in range(t.art0, width):
            p1[j] = Fraction(-1)
        allowed = [True] * width
        t._run(p1, allowed)
        if t.objective_value(p1) != 0:
            return LpOutcome(status="infeasible")
        # pivot remaining artificials out; all-zero rows are redundant and
        # stay parked on their artificial at level zero
        for i in range(t.m):
            if t.basis[i] >= t.art0:
                j = next((j for j in range(t.n_real)
                          if t.A[i][j] != 0), None)
                if j is not None:
                    t._pivot(i, j)

    sgn = 1 if prog.sense == "max" else -1
    cost = [Fraction(0)] * width
    for j in range(prog.num_vars):
        pj, mj = t.var_cols[j]
        cost[pj] += sgn * prog.objective[j]
        if mj is not None:
            cost[mj] -= sgn * prog.objective[j]
    allowed = [j < t.n_real for j in range(width)]
    status = t._run(cost, allowed)
    if status == "unbounded":
        return LpOutcome(status="unbounded")

    x = t.primal_witness()
    opt_internal = t.objective_value(cost)
    optimum = sgn * opt_internal
    y = t.dual_witness(cost)
    _verify_certificate(prog, x, y, optimum)
    return LpOutcome(status="optimal", optimum=optimum, witness=x, dual=y)


def feasible(prog: LinearProgram):
    """Feasibility with a witness: (True, point) or (False, None)."""
    probe = LinearProgram(
        prog.num_vars, prog.rows,
        tuple(Fraction(0) for _ in range(prog.num_vars)),
        "max", prog.nonneg)
    out = solve(probe)
    if out.status == "optimal":
        return True, out.witness
    return False, None
