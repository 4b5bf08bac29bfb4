"""Exact rational linear algebra: ranks, nullspaces, affine hulls.

Everything operates on fractions.Fraction scalars, tuples for vectors,
and lists/tuples of tuples for matrices.  No floats are accepted; callers
that start from floating point must convert explicitly.
"""

from fractions import Fraction
from math import gcd


def rat(x):
    """Coerce an int, Fraction, or 'p/q' string to Fraction.  Floats are rejected."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted, convert explicitly")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("cannot interpret %r as a rational" % (x,))


def format_rational(q):
    """Render a Fraction as 'p' or 'p/q'."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rational(s):
    """Parse 'p' or 'p/q' into a Fraction."""
    return rat(s)


def vec(values):
    """Build a rational vector (tuple of Fraction)."""
    return tuple(rat(x) for x in values)


def mat(rows):
    """Build a rational matrix (tuple of equal-length tuples)."""
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def dot(u, v):
    if len(u) != len(v):
        raise ValueError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vec_add(u, v):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    c = Fraction(c)
    return tuple(c * a for a in u)


def is_zero_vector(u):
    return all(a == 0 for a in u)


def mat_vec(M, v):
    return tuple(dot(row, v) for row in M)


def transpose(M):
    return tuple(zip(*M)) if M else ()


def _integer_rows(M):
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    out = []
    for row in M:
        scale = 1
        for x in row:
            x = Fraction(x)
            scale = scale * x.denominator // gcd(scale, x.denominator)
        out.append([int(x * scale) for x in row])
    return out


def _bareiss_echelon(rows):
    """Fraction-free elimination on integer rows.

    Returns (echelon rows, pivot column indices).  All intermediate
    divisions are exact, which keeps entry growth polynomial.
    """
    if not rows:
        return [], []
    m, n = len(rows), len(rows[0])
    rows = [list(r) for r in rows]
    pivots = []
    prev = 1
    h = 0
    for col in range(n):
        if h >= m:
            break
        piv = None
        for i in range(h, m):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[h], rows[piv] = rows[piv], rows[h]
        p = rows[h][col]
        # every lower row is rescaled, even where the eliminated entry is
        # zero; the exact divisibility of later steps depends on it
        for i in range(h + 1, m):
            f = rows[i][col]
            for j in range(n):
                rows[i][j] = (p * rows[i][j] - f * rows[h][j]) // prev
        prev = p
        pivots.append(col)
        h += 1
    return rows[: len(pivots)], pivots


def rank(M):
    """Rank of a rational matrix via fraction-free elimination."""
    M = mat(M)
    if not M or not M[0]:
        return 0
    _, pivots = _bareiss_echelon(_integer_rows(M))
    return len(pivots)


def nullspace_basis(M, ncols=None):
    """Basis of {v : Mv = 0}, one vector per non-pivot column.

    An empty matrix (no rows) yields the standard basis of dimension
    ncols, which must then be supplied.
    """
    M = mat(M)
    if not M:
        if ncols is None:
            raise ValueError("ncols required for a matrix with no rows")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    n = len(M[0])
    if ncols is not None and ncols != n:
        raise ValueError("ncols disagrees with matrix width")
    ech, pivots = _bareiss_echelon(_integer_rows(M))
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        # back-substitute pivot variables from the bottom row up
        for k in range(len(pivots) - 1, -1, -1):
            col = pivots[k]
            row = ech[k]
            s = sum((Fraction(row[j]) * v[j] for j in range(col + 1, n)), Fraction(0))
            v[col] = -s / row[col]
        basis.append(tuple(v))
    return basis


def affine_hull(points):
    """Affine hull of a point set as (equations, dimension).

    Each equation is a pair (a, beta) meaning a . z == beta; the
    dimension is that of the hull (0 for a single point).
    """
    pts = [vec(p) for p in points]
    if not pts:
        raise ValueError("affine hull of an empty point set")
    n = len(pts[0])
    base = pts[0]
    directions = [vec_sub(p, base) for p in pts[1:]]
    directions = [d for d in directions if not is_zero_vector(d)]
    if not directions:
        normals = nullspace_basis([], ncols=n)
        dim = 0
    else:
        normals = nullspace_basis(directions)
        dim = rank(directions)
    equations = [(a, dot(a, base)) for a in normals]
    return equations, dim


def canonical_direction(v):
    """Scale a nonzero vector so its first nonzero entry is +1."""
    v = vec(v)
    for x in v:
        if x != 0:
            return tuple(y / x for y in v)
    raise ValueError("zero vector has no canonical direction")


def integer_direction(v):
    """Scale a vector to coprime integers, keeping its orientation."""
    v = vec(v)
    scale = 1
    for x in v:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)


def solve_square(M, b):
    """Solve Mx = b for square nonsingular M; None when singular."""
    M = mat(M)
    b = vec(b)
    n = len(M)
    if n == 0:
        return ()
    if len(M[0]) != n or len(b) != n:
        raise ValueError("shape mismatch")
    A = [list(row) + [b[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if A[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return tuple(A[i][n] for i in range(n))


def invert(M):
    """Inverse of a square nonsingular rational matrix; None when singular."""
    M = mat(M)
    n = len(M)
    if n == 0:
        return ()
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if A[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return tuple(tuple(A[i][n:]) for i in range(n))


def independent_rows(M):
    """Indices of a maximal linearly independent subset of rows, greedy order."""
    M = mat(M)
    chosen = []
    chosen_rows = []
    for i, row in enumerate(M):
        if is_zero_vector(row):
            continue
        if rank(chosen_rows + [row]) > len(chosen_rows):
            chosen.append(i)
            chosen_rows.append(row)
    return chosen
