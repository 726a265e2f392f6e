"""Small exact linear algebra: ranks, determinants, integer kernels,
saturated sublattice bases, and rational linear solves.

Everything operates on lists of tuples (row vectors) with int or Fraction
entries. Matrix sizes here are tiny (ambient dimension <= a handful), so
plain fraction-free or Fraction Gaussian elimination is plenty.
"""

from fractions import Fraction

from .vectors import frac


def mat_rank(rows) -> int:
    """Rank of a matrix given as an iterable of rows (exact)."""
    m = [[frac(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def det(rows) -> Fraction:
    """Determinant of a square matrix (exact)."""
    m = [[frac(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of non-square matrix")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        result *= pv
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return sign * result


def int_det(rows) -> int:
    d = det(rows)
    assert d.denominator == 1
    return d.numerator


def solve(rows, rhs):
    """Solve the square system rows * x = rhs exactly; None if singular."""
    n = len(rows)
    m = [[frac(x) for x in r] + [frac(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(m[i][n] for i in range(n))


def invert(rows):
    """Inverse of a square rational matrix as a list of row tuples."""
    n = len(rows)
    m = [[frac(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [tuple(m[i][n:]) for i in range(n)]


def kernel_basis(rows, ncols=None):
    """Basis of the saturated integer kernel {x in Z^n : M x = 0}.

    Column-style integer elimination tracking the transform; the returned
    vectors span the rational null space and generate its full intersection
    with Z^n.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    # work on columns: cols[j] is the j-th column of M, trans[j] the j-th
    # column of the accumulated unimodular transform V (M' = M V)
    cols = [[r[j] for r in rows] for j in range(ncols)]
    trans = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    nrows = len(rows)
    pivot_row = 0
    used = 0
    while pivot_row < nrows and used < ncols:
        # euclid the entries of row pivot_row across columns used..ncols-1
        while True:
            nz = [j for j in range(used, ncols) if cols[j][pivot_row] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][pivot_row]))
            if jmin != used:
                cols[used], cols[jmin] = cols[jmin], cols[used]
                trans[used], trans[jmin] = trans[jmin], trans[used]
            a = cols[used][pivot_row]
            done = True
            for j in range(used + 1, ncols):
                b = cols[j][pivot_row]
                if b != 0:
                    q = b // a
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[used])]
                    trans[j] = [x - q * y for x, y in zip(trans[j], trans[used])]
                    if cols[j][pivot_row] != 0:
                        done = False
            if done:
                break
        if any(cols[j][pivot_row] != 0 for j in range(used, ncols)):
            used += 1
        pivot_row += 1
    return [tuple(trans[j]) for j in range(used, ncols)]


def saturation_basis(rows, ncols=None):
    """Basis of span_Q(rows) intersected with Z^n (the saturated lattice).

    Computed as the kernel of the kernel: the integer kernel of any integer
    matrix is saturated, and x lies in the rational row span iff it is
    orthogonal to every null vector.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    perp = kernel_basis(rows, ncols)
    if not perp:
        # full row span: the standard basis works
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    return kernel_basis(perp, ncols)
