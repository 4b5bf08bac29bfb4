"""Exact rational linear programming and vertex/facet enumeration.

The simplex solver runs two phases with Bland's rule, so it cannot cycle
and every reported optimum is exact.  Vertex enumeration runs the double
description method on the homogenization of the input system, which keeps
the work proportional to the actual face structure instead of the number
of basis subsets.
"""

from fractions import Fraction

from .numerics import (
    dot,
    independent_rows,
    integer_direction,
    invert,
    is_zero_vector,
    mat,
    nullspace_basis,
    rat,
    rank,
    vec,
)

LE, GE, EQ = "<=", ">=", "=="


class LpError(Exception):
    pass


class LpProblem:
    """maximize/minimize c . x subject to rows (a, rel, rhs) and bounds.

    bounds is a list of (lb, ub) pairs per variable, None meaning
    unbounded on that side.  Omitted bounds default to free variables.
    """

    def __init__(self, n, objective, rows, bounds=None, sense="max"):
        self.n = n
        self.objective = vec(objective)
        if len(self.objective) != n:
            raise ValueError("objective length mismatch")
        self.rows = []
        for a, rel, rhs in rows:
            a = vec(a)
            if len(a) != n:
                raise ValueError("row length mismatch")
            if rel not in (LE, GE, EQ):
                raise ValueError("unknown relation %r" % (rel,))
            self.rows.append((a, rel, rat(rhs)))
        if bounds is None:
            bounds = [(None, None)] * n
        if len(bounds) != n:
            raise ValueError("bounds length mismatch")
        self.bounds = [
            (None if lb is None else rat(lb), None if ub is None else rat(ub))
            for lb, ub in bounds
        ]
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        self.sense = sense


class LpResult:
    """status is 'optimal', 'infeasible', or 'unbounded'."""

    def __init__(self, status, x=None, value=None):
        self.status = status
        self.x = x
        self.value = value

    def __repr__(self):
        return "LpResult(%r, x=%r, value=%r)" % (self.status, self.x, self.value)


def _pivot(T, basis, r, c):
    piv = T[r][c]
    T[r] = [x / piv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            row, prow = T[i], T[r]
            T[i] = [x - f * y for x, y in zip(row, prow)]
    basis[r - 1] = c


def _run_simplex(T, basis, ncols):
    """Pivot until optimal or unbounded.  Row 0 holds reduced costs for a
    maximization; entering variable is the lowest index with a negative
    entry, leaving row breaks ratio ties on the lowest basic variable
    (Bland's rule).  Returns 'optimal' or 'unbounded'."""
    m = len(T) - 1
    while True:
        enter = None
        for j in range(ncols):
            if T[0][j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(1, m + 1):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i - 1] < basis[leave - 1]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, enter)


def solve_lp(problem):
    """Exact two-phase simplex.  Returns an LpResult."""
    n = problem.n
    sense_mult = Fraction(1) if problem.sense == "max" else Fraction(-1)

    # Map each original variable to nonnegative standard-form variables.
    # shift[j] holds (kind, data): ('lo', lb) x = lb + x', ('hi', ub)
    # x = ub - x', ('free', pos_idx, neg_idx) x = x+ - x-.
    col_of = []
    shift = []
    ncols = 0
    extra_rows = []
    for j, (lb, ub) in enumerate(problem.bounds):
        if lb is not None:
            col_of.append(ncols)
            shift.append(("lo", lb))
            ncols += 1
            if ub is not None:
                if ub < lb:
                    return LpResult("infeasible")
                coeff = [Fraction(0)] * n
                coeff[j] = Fraction(1)
                extra_rows.append((vec(coeff), LE, ub))
        elif ub is not None:
            col_of.append(ncols)
            shift.append(("hi", ub))
            ncols += 1
        else:
            col_of.append(ncols)
            shift.append(("free", ncols, ncols + 1))
            ncols += 2

    all_rows = list(problem.rows) + extra_rows

    def to_standard(a, rhs):
        out = [Fraction(0)] * ncols
        r = rhs
        for j in range(n):
            if a[j] == 0:
                continue
            kind = shift[j][0]
            if kind == "lo":
                out[col_of[j]] += a[j]
                r -= a[j] * shift[j][1]
            elif kind == "hi":
                out[col_of[j]] -= a[j]
                r -= a[j] * shift[j][1]
            else:
                out[shift[j][1]] += a[j]
                out[shift[j][2]] -= a[j]
        return out, r

    # Standard form rows with slack/surplus columns, rhs made nonnegative.
    std = []
    n_slack = sum(1 for _, rel, _ in all_rows if rel != EQ)
    total = ncols + n_slack
    slack_at = ncols
    for a, rel, rhs in all_rows:
        coeffs, r = to_standard(a, rhs)
        coeffs = coeffs + [Fraction(0)] * n_slack
        if rel == LE:
            coeffs[slack_at] = Fraction(1)
            slack_at += 1
        elif rel == GE:
            coeffs[slack_at] = Fraction(-1)
            slack_at += 1
        if r < 0:
            coeffs = [-x for x in coeffs]
            r = -r
        std.append((coeffs, r))

    m = len(std)
    # Basis: reuse a slack column with +1 coefficient when available,
    # otherwise add an artificial variable.
    basis = [None] * m
    n_art = 0
    art_col = {}
    for i, (coeffs, r) in enumerate(std):
        found = None
        for j in range(ncols, total):
            if coeffs[j] == 1 and all(std[k][0][j] == 0 for k in range(m) if k != i):
                # usable only if it can start basic, i.e. rhs stays feasible
                found = j
                break
        if found is not None and r >= 0:
            basis[i] = found
        else:
            art_col[i] = total + n_art
            n_art += 1

    width = total + n_art
    T = [[Fraction(0)] * (width + 1)]
    for i, (coeffs, r) in enumerate(std):
        row = list(coeffs) + [Fraction(0)] * n_art + [r]
        if i in art_col:
            row[art_col[i]] = Fraction(1)
            basis[i] = art_col[i]
        T.append(row)

    if n_art:
        # Phase 1: maximize -(sum of artificials); price out the basic ones.
        z = [Fraction(0)] * (width + 1)
        for i in range(m):
            if basis[i] >= total:
                z = [a - b for a, b in zip(z, T[i + 1])]
        for j in range(total, width):
            z[j] += 1
        T[0] = z
        if _run_simplex(T, basis, width) != "optimal" or T[0][-1] != 0:
            return LpResult("infeasible")
        # Drive leftover artificials out of the basis or drop their rows.
        drop = []
        for i in range(m):
            if basis[i] >= total:
                piv = None
                for j in range(total):
                    if T[i + 1][j] != 0:
                        piv = j
                        break
                if piv is None:
                    drop.append(i + 1)
                else:
                    _pivot(T, basis, i + 1, piv)
        for i in sorted(drop, reverse=True):
            del T[i]
            del basis[i - 1]
        m = len(T) - 1

    # Phase 2 objective over the standard-form columns.
    c_std = [Fraction(0)] * width
    for j in range(n):
        cj = sense_mult * problem.objective[j]
        if cj == 0:
            continue
        kind = shift[j][0]
        if kind == "lo":
            c_std[col_of[j]] += cj
        elif kind == "hi":
            c_std[col_of[j]] -= cj
        else:
            c_std[shift[j][1]] += cj
            c_std[shift[j][2]] -= cj
    z = [-c for c in c_std] + [Fraction(0)]
    for i in range(m):
        b = basis[i]
        if b < width and c_std[b] != 0:
            f = c_std[b]
            z = [a + f * b_ for a, b_ in zip(z, T[i + 1])]
    # Artificial columns must never re-enter.
    for j in range(total, width):
        z[j] = Fraction(1)
    T[0] = z

    status = _run_simplex(T, basis, total)
    if status == "unbounded":
        return LpResult("unbounded")

    xstd = [Fraction(0)] * width
    for i in range(m):
        xstd[basis[i]] = T[i + 1][-1]
    x = []
    for j in range(n):
        kind = shift[j][0]
        if kind == "lo":
            x.append(shift[j][1] + xstd[col_of[j]])
        elif kind == "hi":
            x.append(shift[j][1] - xstd[col_of[j]])
        else:
            x.append(xstd[shift[j][1]] - xstd[shift[j][2]])
    x = tuple(x)
    value = sum((problem.objective[j] * x[j] for j in range(n)), Fraction(0))
    return LpResult("optimal", x=x, value=value)


def lp_feasible(n, rows, bounds=None):
    """Feasibility check: True when the system has a point."""
    res = solve_lp(LpProblem(n, [0] * n, rows, bounds=bounds))
    return res.status == "optimal"


def tight_rows(rows, x):
    """Indices of rows satisfied with equality at x."""
    out = []
    for i, (a, rel, rhs) in enumerate(rows):
        if dot(a, x) == rhs:
            out.append(i)
    return out


def _dd_extreme_rays(G):
    """Extreme rays of {u : Gu <= 0} for G of full column rank.

    Double description with the combinatorial adjacency test.  Rays are
    returned as coprime integer tuples; the zero cone yields [].
    """
    G = mat(G)
    m = len(G)
    k = len(G[0]) if G else 0
    if k == 0:
        return []
    base_idx = independent_rows(G)
    if len(base_idx) < k:
        raise LpError("cone is not pointed")
    base = [G[i] for i in base_idx]
    inv = invert(base)
    if inv is None:
        raise LpError("initial basis is singular")
    # Columns of -inv(G_B) satisfy G_B r_j = -e_j <= 0.
    rays = []
    for j in range(k):
        r = integer_direction(tuple(-inv[i][j] for i in range(k)))
        rays.append(r)

    # masks track which processed rows are tight at each ray
    bit = {row_i: (1 << pos) for pos, row_i in enumerate(base_idx)}
    nextbit = k
    masks = []
    for j, r in enumerate(rays):
        mk = 0
        for row_i in base_idx:
            if dot(G[row_i], r) == 0:
                mk |= bit[row_i]
        masks.append(mk)

    remaining = [i for i in range(m) if i not in set(base_idx)]
    while remaining:
        # process the row violated by the most rays next; cutting deep
        # early keeps the intermediate ray count down
        row_i = None
        vals = None
        best = None
        for cand in remaining:
            g = G[cand]
            cvals = [dot(g, r) for r in rays]
            key = -sum(1 for v in cvals if v > 0)
            if best is None or key < best:
                best = key
                row_i = cand
                vals = cvals
        remaining.remove(row_i)
        bit[row_i] = 1 << nextbit
        nextbit += 1
        if all(v <= 0 for v in vals):
            for j, v in enumerate(vals):
                if v == 0:
                    masks[j] |= bit[row_i]
            continue
        neg = [j for j, v in enumerate(vals) if v < 0]
        zero = [j for j, v in enumerate(vals) if v == 0]
        pos = [j for j, v in enumerate(vals) if v > 0]
        new_rays = []
        new_masks = []
        for p in pos:
            for q in neg:
                meet = masks[p] & masks[q]
                adjacent = True
                for t in range(len(rays)):
                    if t != p and t != q and (masks[t] & meet) == meet:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                # vals[p] > 0 > vals[q]; positive combination killing row_i
                r = tuple(
                    vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])
                )
                r = integer_direction(r)
                new_rays.append(r)
                new_masks.append(meet | bit[row_i])
        keep_rays = [rays[j] for j in neg + zero]
        keep_masks = [
            masks[j] | (bit[row_i] if j in zero else 0) for j in neg + zero
        ]
        rays = keep_rays + new_rays
        masks = keep_masks + new_masks
    return rays


def enumerate_vertices(n, ineqs, eqs=(), bounds=None):
    """All vertices of {x : ineqs, eqs, bounds}, exactly.

    ineqs and eqs are (a, rhs) pairs meaning a . x <= rhs and a . x == rhs.
    Raises LpError when the feasible set is unbounded; an empty set gives [].
    """
    ineq_rows = [(vec(a), rat(b)) for a, b in ineqs]
    eq_rows = [(vec(a), rat(b)) for a, b in eqs]
    if bounds is not None:
        for j, (lb, ub) in enumerate(bounds):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            if lb is not None:
                ineq_rows.append((tuple(-x for x in e), -rat(lb)))
            if ub is not None:
                ineq_rows.append((tuple(e), rat(ub)))

    # Homogenize: y = (x, t), equalities a.x = b become [a | -b] y = 0,
    # inequalities become [a | -b] y <= 0, plus t >= 0.
    hom_eq = [tuple(a) + (-b,) for a, b in eq_rows]
    hom_ineq = [tuple(a) + (-b,) for a, b in ineq_rows]
    hom_ineq.append(tuple([Fraction(0)] * n + [Fraction(-1)]))

    if hom_eq:
        N = nullspace_basis(hom_eq)
    else:
        N = nullspace_basis([], ncols=n + 1)
    if not N:
        return []
    k = len(N)
    G = [tuple(dot(row, b) for b in N) for row in hom_ineq]
    G = [row for row in G if not is_zero_vector(row)]
    if not G or rank(G) < k:
        # Lineality present: the set is empty or contains a line.
        frows = [(a, LE, b) for a, b in ineq_rows] + [(a, EQ, b) for a, b in eq_rows]
        if lp_feasible(n, frows):
            raise LpError("feasible set is unbounded")
        return []

    rays = _dd_extreme_rays(G)
    vertices = []
    unbounded_dir = False
    for r in rays:
        y = [Fraction(0)] * (n + 1)
        for coef, basis_vec in zip(r, N):
            for i in range(n + 1):
                y[i] += coef * basis_vec[i]
        t = y[n]
        if t > 0:
            vertices.append(tuple(y[i] / t for i in range(n)))
        elif t < 0:
            raise LpError("homogenization produced a negative-t ray")
        else:
            if not is_zero_vector(y):
                unbounded_dir = True
    if vertices and unbounded_dir:
        raise LpError("feasible set is unbounded")
    if not vertices and unbounded_dir:
        return []
    seen = set()
    out = []
    for v in vertices:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def facets_of_hull(points):
    """Facet inequalities (a, rhs) of the convex hull of full-dimensional points.

    Every returned inequality satisfies a . p <= rhs for all input points
    and is tight on a facet.  Requires the points to affinely span their
    ambient space.
    """
    pts = [vec(p) for p in points]
    if not pts:
        raise ValueError("no points")
    r = len(pts[0])
    # Cone over (a, gamma) with p.a - gamma <= 0 per point; pointed iff
    # the points affinely span, and its extreme rays are the facets plus
    # the trivial ray (0, 1).
    G = [tuple(p) + (Fraction(-1),) for p in pts]
    if rank([tuple(p) + (Fraction(1),) for p in pts]) < r + 1:
        raise LpError("points are not full-dimensional")
    rays = _dd_extreme_rays(G)
    facets = []
    for ray in rays:
        a, gamma = ray[:r], ray[r]
        if is_zero_vector(a):
            continue
        facets.append((tuple(a), gamma))
    return facets
