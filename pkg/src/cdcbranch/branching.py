"""Branching schemes acting on the code space.

A scheme inspects a relaxation point zhat and either certifies it as a
code or splits the current code-space region into two disjoint pieces
that lose no codes.  Regions are tracked as explicit inequality lists so
every split can be audited.
"""

from fractions import Fraction

from .lp import EQ, GE, LE, facets_of_hull
from .numerics import dot, vec


class BranchError(Exception):
    pass


class CodeRelaxation:
    """A region of code space as rows (a, rel, rhs); rel is <=, >=, or ==."""

    def __init__(self, rows, interval=None):
        self.rows = []
        for a, rel, rhs in rows:
            if rel not in (LE, GE, EQ):
                raise BranchError("unknown relation %r" % (rel,))
            self.rows.append((vec(a), rel, Fraction(rhs)))
        self.interval = interval

    def contains(self, z):
        for a, rel, rhs in self.rows:
            v = dot(a, z)
            if rel == LE and v > rhs:
                return False
            if rel == GE and v < rhs:
                return False
            if rel == EQ and v != rhs:
                return False
        return True

    def with_cuts(self, cuts, interval=None):
        return CodeRelaxation(self.rows + list(cuts), interval=interval)

    def ineq_rows(self):
        """All rows in <= form."""
        out = []
        for a, rel, rhs in self.rows:
            if rel == LE:
                out.append((a, rhs))
            elif rel == GE:
                out.append((tuple(-x for x in a), -rhs))
            else:
                out.append((a, rhs))
                out.append((tuple(-x for x in a), -rhs))
        return out


class BranchOutcome:
    """Either a verification of zhat or a two-way split."""

    def __init__(self, verified, tag=None, children=None):
        self.verified = verified
        self.tag = tag
        self.children = children  # ((cuts1, state1), (cuts2, state2))

    @staticmethod
    def verify(tag="verified"):
        return BranchOutcome(True, tag=tag)

    @staticmethod
    def split(tag, cuts1, state1, cuts2, state2):
        return BranchOutcome(
            False, tag=tag, children=((cuts1, state1), (cuts2, state2))
        )


def psi(d, l, u):
    """Hull of the parabola codes (i, i*i), i = l..u, as explicit rows.

    Tangent rows cut below the curve, the chord row cuts above, and the
    two first-coordinate bounds close the region (they are implied for
    u >= l + 2 but necessary when u = l + 1).  l == u gives the single
    code via equalities.
    """
    if not 1 <= l <= u <= d:
        raise BranchError("need 1 <= l <= u <= d")
    rows = []
    if l == u:
        rows.append(((Fraction(1), Fraction(0)), EQ, Fraction(l)))
        rows.append(((Fraction(0), Fraction(1)), EQ, Fraction(l * l)))
    else:
        for i in range(l, u):
            # z2 - i*i >= (2i+1)(z1 - i)
            rows.append(
                ((Fraction(2 * i + 1), Fraction(-1)), LE, Fraction(i * (i + 1)))
            )
        # chord from (l, l*l) to (u, u*u)
        rows.append(((Fraction(-(l + u)), Fraction(1)), LE, Fraction(-l * u)))
        rows.append(((Fraction(1), Fraction(0)), GE, Fraction(l)))
        rows.append(((Fraction(1), Fraction(0)), LE, Fraction(u)))
    return CodeRelaxation(rows, interval=(l, u))


def _is_integral(z):
    return all(x.denominator == 1 for x in z)


def branch_variable(Q, H, zhat):
    """Split on the lowest fractional coordinate of zhat.

    Sound when the codes tile every integer point of their hull, so an
    integral zhat inside Q is itself a code.
    """
    zhat = vec(zhat)
    if not Q.contains(zhat):
        raise BranchError("zhat lies outside the current region")
    if _is_integral(zhat):
        return BranchOutcome.verify()
    r = len(zhat)
    for k in range(r):
        if zhat[k].denominator != 1:
            e = tuple(Fraction(int(i == k)) for i in range(r))
            lo = Fraction(zhat[k].numerator // zhat[k].denominator)
            cuts1 = [(e, LE, lo)]
            cuts2 = [(e, GE, lo + 1)]
            return BranchOutcome.split(
                "variable",
                cuts1,
                Q.with_cuts(cuts1),
                cuts2,
                Q.with_cuts(cuts2),
            )
    raise BranchError("unreachable")


def branch_moment(Q, d, zhat):
    """Split the parabola interval at floor(zhat1).

    Q must be a psi region; both children are psi regions again, so the
    tree only ever sees hulls of consecutive code runs.
    """
    zhat = vec(zhat)
    if Q.interval is None:
        raise BranchError("moment branching needs an interval-tracked region")
    if not Q.contains(zhat):
        raise BranchError("zhat lies outside the current region")
    l, u = Q.interval
    if zhat[0].denominator == 1 and zhat[1] == zhat[0] * zhat[0]:
        j = zhat[0]
        if not l <= j <= u:
            raise BranchError("code outside the tracked interval")
        return BranchOutcome.verify()
    m = zhat[0].numerator // zhat[0].denominator
    if not l <= m < u:
        raise BranchError("split point escaped the interval")
    left = psi(d, l, m)
    right = psi(d, m + 1, u)
    return BranchOutcome.split(
        "moment", left.rows, left, right.rows, right
    )


def _exotic_levels(H):
    levels = {}
    for h in H:
        levels.setdefault(h[1], []).append(h)
    for v in levels.values():
        v.sort(key=lambda h: h[0])
    return levels


def branch_exotic(Q, H, zhat):
    """Three-case split for codes stacked two per height level.

    Fractional first coordinate splits on it; a second coordinate between
    levels splits wide between them; otherwise zhat sits strictly between
    the two codes of its level and two hull-supported slanted cuts split
    the level's west and east codes apart.
    """
    zhat = vec(zhat)
    codes = list(H)
    if not Q.contains(zhat):
        raise BranchError("zhat lies outside the current region")
    if tuple(zhat) in set(codes):
        return BranchOutcome.verify()
    if zhat[0].denominator != 1:
        e1 = (Fraction(1), Fraction(0))
        lo = Fraction(zhat[0].numerator // zhat[0].denominator)
        cuts1 = [(e1, LE, lo)]
        cuts2 = [(e1, GE, lo + 1)]
        return BranchOutcome.split(
            "integer-split", cuts1, Q.with_cuts(cuts1), cuts2, Q.with_cuts(cuts2)
        )
    levels = _exotic_levels(codes)
    ys = sorted(levels)
    e2 = (Fraction(0), Fraction(1))
    if zhat[1] not in levels:
        below = [t for t in ys if t < zhat[1]]
        above = [t for t in ys if t > zhat[1]]
        if not below or not above:
            raise BranchError("zhat lies outside the code hull")
        cuts1 = [(e2, LE, below[-1])]
        cuts2 = [(e2, GE, above[0])]
        return BranchOutcome.split(
            "wide-split", cuts1, Q.with_cuts(cuts1), cuts2, Q.with_cuts(cuts2)
        )
    level = zhat[1]
    row = levels[level]
    if len(row) != 2:
        raise BranchError("level does not hold exactly two codes")
    h_w, h_e = row[0], row[-1]
    if not h_w[0] < zhat[0] < h_e[0]:
        raise BranchError("zhat lies outside the code hull")
    above = [t for t in ys if t > level]
    if not above:
        raise BranchError(
            "top level cannot reach this case, its codes are adjacent integers"
        )
    h_ne = levels[above[0]][-1]
    a = (h_ne[1] - h_w[1], -(h_ne[0] - h_w[0]))
    cut1 = (a, LE, dot(a, h_w))
    if dot(a, zhat) <= cut1[2]:
        raise BranchError("first cut fails to exclude zhat")
    below = [t for t in ys if t < level]
    if below:
        h_sw = levels[below[-1]][0]
        b = (h_sw[1] - h_e[1], -(h_sw[0] - h_e[0]))
        cut2 = (b, LE, dot(b, h_e))
        if dot(b, zhat) <= cut2[2]:
            raise BranchError("second cut fails to exclude zhat")
    else:
        # bottom level: reuse the first cut's normal, east side
        thr = dot(a, h_e)
        if thr <= dot(a, zhat):
            raise BranchError("degenerate cut fails to exclude zhat")
        cut2 = (a, GE, thr)
    return BranchOutcome.split(
        "corner-split",
        [cut1],
        Q.with_cuts([cut1]),
        [cut2],
        Q.with_cuts([cut2]),
    )


class VariableScheme:
    """Coordinate splitting; needs integer codes tiling their hull."""

    name = "variable"

    def compatible(self, encoding):
        from .encodings import EncodingError, is_hole_free

        try:
            ok = is_hole_free(encoding)
        except EncodingError as exc:
            return False, str(exc)
        if not ok:
            return False, "codes leave integer holes in their hull"
        return True, ""

    def root(self, encoding):
        return CodeRelaxation(
            [(a, LE, rhs) for a, rhs in facets_of_hull(list(encoding))]
        )

    def step(self, state, zhat, encoding):
        return branch_variable(state, encoding, zhat)


class MomentScheme:
    """Interval splitting along the parabola codes."""

    name = "moment"

    def compatible(self, encoding):
        from .encodings import moment_code

        if encoding != moment_code(len(encoding)):
            return False, "codes are not the parabola family"
        return True, ""

    def root(self, encoding):
        return psi(len(encoding), 1, len(encoding))

    def step(self, state, zhat, encoding):
        return branch_moment(state, len(encoding), zhat)


class ExoticScheme:
    """Three-case splitting for the two-per-level planar codes."""

    name = "exotic"

    def compatible(self, encoding):
        from .encodings import exotic_code

        d = len(encoding)
        if d % 4 != 0 or encoding != exotic_code(d):
            return False, "codes are not the two-per-level planar family"
        return True, ""

    def root(self, encoding):
        return CodeRelaxation(
            [(a, LE, rhs) for a, rhs in facets_of_hull(list(encoding))]
        )

    def step(self, state, zhat, encoding):
        return branch_exotic(state, encoding, zhat)


SCHEMES = {
    "variable": VariableScheme,
    "moment": MomentScheme,
    "exotic": ExoticScheme,
}


def make_scheme(name):
    if name not in SCHEMES:
        raise BranchError("unknown scheme %r" % (name,))
    return SCHEMES[name]()
