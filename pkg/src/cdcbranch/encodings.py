"""Code families used to label the alternatives of a disjunction.

Each constructor returns an Encoding whose codes are rational points in
convex position (a requirement for the geometric construction to apply).
Predicates for convex position and hole-freeness run exact rational LPs.
"""

from fractions import Fraction

from .lp import EQ, LE, LpProblem, solve_lp
from .numerics import format_rational, parse_rational, vec


class EncodingError(Exception):
    pass


class Encoding:
    """An ordered tuple of distinct rational codes in r dimensions."""

    def __init__(self, codes, kind="custom"):
        self.codes = tuple(vec(c) for c in codes)
        if not self.codes:
            raise EncodingError("an encoding needs at least one code")
        self.r = len(self.codes[0])
        if any(len(c) != self.r for c in self.codes):
            raise EncodingError("codes have mixed dimensions")
        if len(set(self.codes)) != len(self.codes):
            raise EncodingError("codes must be distinct")
        self.kind = kind

    @property
    def d(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __getitem__(self, i):
        return self.codes[i]

    def __len__(self):
        return len(self.codes)

    def __eq__(self, other):
        return isinstance(other, Encoding) and self.codes == other.codes

    def to_json(self):
        return {
            "kind": self.kind,
            "codes": [[format_rational(x) for x in c] for c in self.codes],
        }

    @staticmethod
    def from_json(obj):
        return Encoding(
            [[parse_rational(x) for x in c] for c in obj["codes"]],
            kind=obj.get("kind", "custom"),
        )


def gray_code(r, d=None):
    """Reflected binary codes on {0,1}^r; consecutive codes differ in one bit.

    With d given, only the first d codes are kept (d <= 2**r required).
    """
    if r < 1:
        raise EncodingError("r must be positive")
    rows = [(0,), (1,)]
    for _ in range(r - 1):
        rows = [row + (0,) for row in rows] + [row + (1,) for row in reversed(rows)]
    if d is not None:
        if not 1 <= d <= len(rows):
            raise EncodingError("d out of range for r=%d" % r)
        rows = rows[:d]
    return Encoding(rows, kind="gray")


def zigzag_code(r, d=None):
    """Codes walking unit steps along an integral zigzag through Z^r."""
    if r < 1:
        raise EncodingError("r must be positive")
    rows = [(0,), (1,)]
    for _ in range(r - 1):
        last = rows[-1]
        rows = [row + (0,) for row in rows] + [
            tuple(a + b for a, b in zip(row, last)) + (1,) for row in rows
        ]
    if d is not None:
        if not 1 <= d <= len(rows):
            raise EncodingError("d out of range for r=%d" % r)
        rows = rows[:d]
    return Encoding(rows, kind="zigzag")


def moment_code(d):
    """Codes (i, i*i) on the parabola, i = 1..d."""
    if d < 1:
        raise EncodingError("d must be positive")
    return Encoding([(i, i * i) for i in range(1, d + 1)], kind="moment")


def exotic_code(d):
    """A planar code family in convex position built in blocks of four.

    Requires d divisible by 4.  Consecutive codes alternate sides of the
    vertical axis while climbing, which is what the three-case branching
    scheme exploits.
    """
    if d < 4 or d % 4 != 0:
        raise EncodingError("d must be a positive multiple of 4")
    r = d // 4
    codes = []
    for k in range(1, r + 1):
        ya = Fraction((k - 1) * (k - 2 * r - 2), 2)
        yb = Fraction(-k * (k - 2 * r - 1), 2)
        codes.append((Fraction(k - r - 1), ya))
        codes.append((Fraction(r - k + 1), ya))
        codes.append((Fraction(r - k + 1), yb))
        codes.append((Fraction(k - r), yb))
    return Encoding(codes, kind="exotic")


def is_convex_position(encoding):
    """True when no code lies in the convex hull of the others."""
    H = list(encoding)
    d = len(H)
    r = encoding.r
    if d == 1:
        return True
    for i in range(d):
        others = [H[j] for j in range(d) if j != i]
        m = len(others)
        rows = []
        for k in range(r):
            rows.append(([others[j][k] for j in range(m)], EQ, H[i][k]))
        rows.append(([1] * m, EQ, 1))
        prob = LpProblem(m, [0] * m, rows, bounds=[(0, None)] * m)
        if solve_lp(prob).status == "optimal":
            return False
    return True


def _in_hull(H, point):
    d = len(H)
    r = len(point)
    rows = []
    for k in range(r):
        rows.append(([h[k] for h in H], EQ, point[k]))
    rows.append(([1] * d, EQ, 1))
    prob = LpProblem(d, [0] * d, rows, bounds=[(0, None)] * d)
    return solve_lp(prob).status == "optimal"


def is_hole_free(encoding):
    """True when every integer point of Conv(codes) is itself a code.

    Only defined for integer codes; rejects anything else.
    """
    H = list(encoding)
    for h in H:
        if any(x.denominator != 1 for x in h):
            raise EncodingError("hole-freeness is only defined for integer codes")
    r = encoding.r
    lo = [min(int(h[k]) for h in H) for k in range(r)]
    hi = [max(int(h[k]) for h in H) for k in range(r)]
    code_set = set(H)

    def boxes(k):
        if k == r:
            yield ()
            return
        for rest in boxes(k + 1):
            for v in range(lo[k], hi[k] + 1):
                yield (Fraction(v),) + rest

    for point in boxes(0):
        if point in code_set:
            continue
        if _in_hull(H, point):
            return False
    return True


def separation_certificates_exotic(r):
    """Per-code separating inequalities for the exotic family of size 4r.

    Returns one (c, b) per code with c . h > b at that code and
    c . h <= b at every other, verified before returning.  r >= 2.
    """
    if r < 2:
        raise EncodingError("certificates need r >= 2")
    H = list(exotic_code(4 * r))
    d = 4 * r
    cs = []
    for k in range(1, r + 1):
        cs.append((Fraction(-(2 * (r - k) + 3)), Fraction(-2)))
        cs.append((Fraction(2 * (r - k) + 3), Fraction(-2)))
        cs.append((Fraction(2 * (r - k) + 1), Fraction(2)))
        cs.append((Fraction(-(2 * (r - k) + 1)), Fraction(2)))
    certs = []
    for i in range(d):
        c = cs[i]
        # anchor the threshold at the neighbor four positions away
        j = i + 4 if i < 4 else i - 4
        b = c[0] * H[j][0] + c[1] * H[j][1]
        if not c[0] * H[i][0] + c[1] * H[i][1] > b:
            raise EncodingError("certificate fails to cut off its own code")
        for t in range(d):
            if t != i and c[0] * H[t][0] + c[1] * H[t][1] > b:
                raise EncodingError("certificate cuts off a foreign code")
        certs.append((c, b))
    return certs
