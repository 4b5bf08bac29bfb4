"""Builders for ideal formulations of combinatorial disjunctive constraints.

The general construction pairs each alternative with a code and, for every
hyperplane spanned by code differences across overlapping alternatives,
emits one two-sided row whose per-component coefficients are the extreme
code values over the alternatives containing that component.  Specialized
builders produce the same regions with closed-form row families.
"""

import itertools
import json
import warnings
from fractions import Fraction

from . import branching
from .cdc import CdcFamily, CdcError
from .encodings import Encoding, is_convex_position
from .lp import EQ, GE, LE, LpError, LpProblem, solve_lp
from .numerics import (
    affine_hull,
    canonical_direction,
    dot,
    format_rational,
    integer_direction,
    is_zero_vector,
    nullspace_basis,
    parse_rational,
    rank,
    vec,
    vec_sub,
)


class FormulationError(Exception):
    pass


class TwoSidedRow:
    """lower . lam <= direction . z <= upper . lam"""

    def __init__(self, direction, lower, upper):
        self.direction = vec(direction)
        self.lower = vec(lower)
        self.upper = vec(upper)
        if len(self.lower) != len(self.upper):
            raise FormulationError("lower and upper lengths differ")

    def __eq__(self, other):
        return (
            isinstance(other, TwoSidedRow)
            and self.direction == other.direction
            and self.lower == other.lower
            and self.upper == other.upper
        )


class AssembledSystem:
    """A flat inequality system over (lam, z) or (x, z) variables."""

    def __init__(self, nvars, ineqs, eqs, bounds, z_offset, r):
        self.nvars = nvars
        self.ineqs = ineqs  # (a, rhs) meaning a . vars <= rhs
        self.eqs = eqs  # (a, rhs) meaning a . vars == rhs
        self.bounds = bounds
        self.z_offset = z_offset
        self.r = r

    def with_cuts(self, cuts):
        """New system with z-space rows (a_z, rel, rhs) appended."""
        extra_ineqs = []
        extra_eqs = []
        for a_z, rel, rhs in cuts:
            a = [Fraction(0)] * self.nvars
            for k in range(self.r):
                a[self.z_offset + k] = Fraction(a_z[k])
            if rel == LE:
                extra_ineqs.append((tuple(a), Fraction(rhs)))
            elif rel == GE:
                extra_ineqs.append((tuple(-x for x in a), -Fraction(rhs)))
            elif rel == EQ:
                extra_eqs.append((tuple(a), Fraction(rhs)))
            else:
                raise FormulationError("unknown relation in cut")
        return AssembledSystem(
            self.nvars,
            self.ineqs + extra_ineqs,
            self.eqs + extra_eqs,
            self.bounds,
            self.z_offset,
            self.r,
        )

    def lp_rows(self):
        rows = [(a, LE, rhs) for a, rhs in self.ineqs]
        rows += [(a, EQ, rhs) for a, rhs in self.eqs]
        return rows


class LinearFormulation:
    """Rows over (lam, z) plus the affine hull of the codes.

    n counts lam components including a trailing artificial one when
    artificial is set; that component is fixed to zero.
    """

    def __init__(
        self,
        n,
        r,
        rows,
        hull_equations=(),
        has_simplex=True,
        z_bounds=None,
        artificial=False,
        family=None,
        codes=None,
        meta=None,
    ):
        self.n = n
        self.r = r
        self.rows = list(rows)
        for row in self.rows:
            if len(row.direction) != r or len(row.lower) != n:
                raise FormulationError("row shape disagrees with n, r")
        self.hull_equations = [(vec(a), Fraction(b)) for a, b in hull_equations]
        self.has_simplex = has_simplex
        self.z_bounds = z_bounds
        self.artificial = artificial
        self.family = family
        self.codes = codes
        self.meta = dict(meta or {})

    def one_sided(self):
        """All rows as (a, rhs) over (lam, z) meaning a . (lam, z) <= rhs,
        tagged with (row index, side)."""
        out = []
        for i, row in enumerate(self.rows):
            lo = tuple(row.lower) + tuple(-x for x in row.direction)
            out.append(((i, "lower"), lo, Fraction(0)))
            up = tuple(-x for x in row.upper) + tuple(row.direction)
            out.append(((i, "upper"), up, Fraction(0)))
        return out

    def assemble(self):
        nvars = self.n + self.r
        ineqs = [(a, rhs) for _, a, rhs in self.one_sided()]
        eqs = []
        for a, b in self.hull_equations:
            eqs.append((tuple([Fraction(0)] * self.n) + tuple(a), Fraction(b)))
        if self.has_simplex:
            eqs.append(
                (tuple([Fraction(1)] * self.n) + tuple([Fraction(0)] * self.r), Fraction(1))
            )
        bounds = [(Fraction(0), None)] * self.n
        if self.artificial:
            bounds[self.n - 1] = (Fraction(0), Fraction(0))
        zb = self.z_bounds or [(None, None)] * self.r
        bounds += list(zb)
        return AssembledSystem(nvars, ineqs, eqs, bounds, self.n, self.r)

    def to_json(self):
        return {
            "n": self.n,
            "r": self.r,
            "rows": [
                {
                    "direction": [format_rational(x) for x in row.direction],
                    "lower": [format_rational(x) for x in row.lower],
                    "upper": [format_rational(x) for x in row.upper],
                }
                for row in self.rows
            ],
            "hull_equations": [
                {
                    "a": [format_rational(x) for x in a],
                    "b": format_rational(b),
                }
                for a, b in self.hull_equations
            ],
            "has_simplex": self.has_simplex,
            "z_bounds": None
            if self.z_bounds is None
            else [
                [
                    None if lb is None else format_rational(lb),
                    None if ub is None else format_rational(ub),
                ]
                for lb, ub in self.z_bounds
            ],
            "artificial": self.artificial,
            "meta": self.meta,
        }

    @staticmethod
    def from_json(obj):
        rows = [
            TwoSidedRow(
                [parse_rational(x) for x in row["direction"]],
                [parse_rational(x) for x in row["lower"]],
                [parse_rational(x) for x in row["upper"]],
            )
            for row in obj["rows"]
        ]
        z_bounds = None
        if obj.get("z_bounds") is not None:
            z_bounds = [
                (
                    None if lb is None else parse_rational(lb),
                    None if ub is None else parse_rational(ub),
                )
                for lb, ub in obj["z_bounds"]
            ]
        return LinearFormulation(
            obj["n"],
            obj["r"],
            rows,
            hull_equations=[
                ([parse_rational(x) for x in e["a"]], parse_rational(e["b"]))
                for e in obj["hull_equations"]
            ],
            has_simplex=obj.get("has_simplex", True),
            z_bounds=z_bounds,
            artificial=obj.get("artificial", False),
            meta=obj.get("meta"),
        )

    def to_text(self):
        lines = []

        def term(coef, name):
            if coef == 0:
                return None
            c = format_rational(coef)
            if c == "1":
                return "+ %s" % name
            if c == "-1":
                return "- %s" % name
            if c.startswith("-"):
                return "- %s %s" % (c[1:], name)
            return "+ %s %s" % (c, name)

        def combo(coeffs, prefix):
            parts = [term(c, "%s%d" % (prefix, i + 1)) for i, c in enumerate(coeffs)]
            parts = [p for p in parts if p]
            if not parts:
                return "0"
            s = " ".join(parts)
            return s[2:] if s.startswith("+ ") else s

        for row in self.rows:
            lines.append(
                "%s <= %s <= %s"
                % (
                    combo(row.lower, "lam"),
                    combo(row.direction, "z"),
                    combo(row.upper, "lam"),
                )
            )
        for a, b in self.hull_equations:
            lines.append("%s == %s" % (combo(a, "z"), format_rational(b)))
        if self.has_simplex:
            lines.append("sum(lam) == 1, lam >= 0")
        if self.artificial:
            lines.append("lam%d == 0 (artificial)" % self.n)
        return "\n".join(lines) + "\n"


def canonical_inequality(a, rhs):
    """Scale a . x <= rhs by a positive factor to coprime integers."""
    full = tuple(a) + (rhs,)
    scaled = integer_direction(full)
    # integer_direction preserves orientation, so the scale was positive
    return scaled[:-1], scaled[-1]


def spanned_hyperplane_normals(C, ambient=None):
    """Normals of all hyperplanes of span(C) spanned by members of C.

    Normals are returned inside span(C), canonically scaled and deduped.
    A zero-dimensional span gives []; a one-dimensional span is rejected
    since no hyperplane family exists there.
    """
    dirs = []
    seen = set()
    for c in C:
        c = vec(c)
        if is_zero_vector(c):
            continue
        cd = canonical_direction(c)
        if cd not in seen:
            seen.add(cd)
            dirs.append(cd)
    if ambient is None:
        if not dirs:
            raise FormulationError("cannot infer ambient dimension from empty C")
        ambient = len(dirs[0])
    if not dirs:
        return []
    dim = rank(dirs)
    if dim == 0:
        return []
    if dim == 1:
        raise FormulationError(
            "code differences span a line, no hyperplane family exists"
        )
    # orthogonal complement of span(C): a normal must be orthogonal to it
    # to lie inside the span
    complement = nullspace_basis(dirs)
    normals = []
    seen_n = set()
    for subset in itertools.combinations(dirs, dim - 1):
        if rank(list(subset)) < dim - 1:
            continue
        system = list(subset) + list(complement)
        null = nullspace_basis(system, ncols=ambient)
        if len(null) != 1:
            continue
        b = canonical_direction(null[0])
        if b not in seen_n:
            seen_n.add(b)
            normals.append(b)
    return normals


def _rows_from_normals(family, codes, normals):
    rows = []
    H = list(codes)
    for b in normals:
        values = [dot(b, h) for h in H]
        lower = []
        upper = []
        for v in range(1, family.n + 1):
            members = family.members(v)
            vals = [values[s - 1] for s in members]
            lower.append(min(vals))
            upper.append(max(vals))
        rows.append(TwoSidedRow(b, lower, upper))
    return rows


def build_general(family, codes, meta=None):
    """The geometric construction for any family paired with convex-position
    codes, one code per alternative.

    When no two alternatives overlap transitively (the overlap graph is
    disconnected), an artificial component fixed to zero is appended to
    every alternative so the construction applies; the formulation then
    carries one extra lam variable.
    """
    if isinstance(codes, Encoding):
        enc = codes
    else:
        enc = Encoding(codes)
    if family.d != enc.d:
        raise FormulationError("need exactly one code per alternative")
    if not is_convex_position(enc):
        raise FormulationError("codes must be in convex position")

    from .cdc import edge_set

    edges, connected = edge_set(family)
    work = family
    artificial = False
    if not connected:
        augmented = [tuple(T) + (family.n + 1,) for T in family.sets]
        work = CdcFamily(family.n + 1, augmented)
        edges, connected = edge_set(work)
        artificial = True

    H = list(enc)
    C = [vec_sub(H[j - 1], H[i - 1]) for i, j in edges]
    C = [c for c in C if not is_zero_vector(c)]
    dim = rank(C) if C else 0
    if dim == 0:
        rows = []
    else:
        normals = spanned_hyperplane_normals(C, ambient=enc.r)
        rows = _rows_from_normals(work, H, normals)
    hull_eqs, _ = affine_hull(H)
    m = dict(meta or {})
    m.setdefault("builder", "general")
    m.setdefault("encoding", enc.kind)
    # family stays the caller's; the artificial component only widens rows
    return LinearFormulation(
        work.n,
        enc.r,
        rows,
        hull_equations=hull_eqs,
        artificial=artificial,
        family=family,
        codes=enc,
        meta=m,
    )


def build_2d(family, codes, meta=None):
    """Planar specialization: one row per direction of a code difference,
    taken over every pair of alternatives."""
    if isinstance(codes, Encoding):
        enc = codes
    else:
        enc = Encoding(codes)
    if enc.r != 2:
        raise FormulationError("planar builder needs 2-dimensional codes")
    if family.d != enc.d:
        raise FormulationError("need exactly one code per alternative")
    if not is_convex_position(enc):
        raise FormulationError("codes must be in convex position")
    H = list(enc)
    normals = []
    seen = set()
    for i, j in itertools.combinations(range(enc.d), 2):
        c = vec_sub(H[j], H[i])
        if is_zero_vector(c):
            continue
        b = canonical_direction((c[1], -c[0]))
        if b not in seen:
            seen.add(b)
            normals.append(b)
    rows = _rows_from_normals(family, H, normals)
    hull_eqs, _ = affine_hull(H)
    m = dict(meta or {})
    m.setdefault("builder", "2d")
    m.setdefault("encoding", enc.kind)
    return LinearFormulation(
        family.n,
        2,
        rows,
        hull_equations=hull_eqs,
        family=family,
        codes=enc,
        meta=m,
    )


def build_moment_curve(family, meta=None):
    """Parabola codes with the integer fan of directions (t, -1).

    Pairs alternative i with code (i, i*i); rows run over t = 3..2d-1,
    covering every direction through two codes.  d >= 2.
    """
    from .encodings import moment_code

    d = family.d
    if d < 2:
        raise FormulationError("need at least two alternatives")
    enc = moment_code(d)
    H = list(enc)
    rows = []
    for t in range(3, 2 * d):
        b = (Fraction(t), Fraction(-1))
        values = [s * (t - s) for s in range(1, d + 1)]
        lower = []
        upper = []
        for v in range(1, family.n + 1):
            vals = [values[s - 1] for s in family.members(v)]
            lower.append(min(vals))
            upper.append(max(vals))
        rows.append(TwoSidedRow(b, lower, upper))
    hull_eqs, _ = affine_hull(H)
    m = dict(meta or {})
    m.setdefault("builder", "moment")
    m.setdefault("encoding", "moment")
    return LinearFormulation(
        family.n,
        2,
        rows,
        hull_equations=hull_eqs,
        family=family,
        codes=enc,
        meta=m,
    )


def build_sos2_exotic(d, meta=None):
    """Closed-form two-row formulation of consecutive-pair constraints
    using the exotic codes; d must be a positive multiple of 4."""
    from .cdc import sos2_family
    from .encodings import exotic_code

    family = sos2_family(d)
    enc = exotic_code(d)
    H = list(enc)
    rows = []
    for k in range(2):
        lower = [H[0][k]]
        upper = [H[0][k]]
        for v in range(2, d + 1):
            a, b = H[v - 2][k], H[v - 1][k]
            lower.append(min(a, b))
            upper.append(max(a, b))
        lower.append(H[d - 1][k])
        upper.append(H[d - 1][k])
        direction = (Fraction(1), Fraction(0)) if k == 0 else (Fraction(0), Fraction(1))
        rows.append(TwoSidedRow(direction, lower, upper))
    hull_eqs, _ = affine_hull(H)
    m = dict(meta or {})
    m.setdefault("builder", "sos2_exotic")
    m.setdefault("encoding", "exotic")
    return LinearFormulation(
        family.n,
        2,
        rows,
        hull_equations=hull_eqs,
        family=family,
        codes=enc,
        meta=m,
    )


def build_annulus(d, kind, meta=None):
    """Closed-form formulations for the d-piece annulus cover.

    kind selects the code family: 'gray' (d a power of two), 'zigzag'
    (same), or 'exotic' (d a multiple of 4).  Components 2i-1 and 2i
    belong to pieces i and i+1 (wrapping), so their coefficients take
    extremes over that code pair.
    """
    from .encodings import exotic_code, gray_code, zigzag_code

    if d <= 4:
        raise FormulationError("d must exceed 4")
    n = 2 * d
    family = CdcFamily(
        n,
        [
            tuple(((2 * i + t - 5) % n) + 1 for t in range(1, 5))
            for i in range(1, d + 1)
        ],
    )

    if kind in ("gray", "zigzag"):
        r = (d - 1).bit_length()
        if 2 ** r != d:
            raise FormulationError("%s codes need d to be a power of two" % kind)
        enc = gray_code(r) if kind == "gray" else zigzag_code(r)
        if kind == "gray":
            normals = [
                tuple(Fraction(int(i == k)) for i in range(r)) for k in range(r)
            ]
        else:
            normals = [
                tuple(Fraction(int(i == k)) for i in range(r)) for k in range(r)
            ]
            for k in range(r):
                for l in range(k + 1, r):
                    b = [Fraction(0)] * r
                    b[k] = Fraction(1, 2 ** (l + 1))
                    b[l] = Fraction(-1, 2 ** (k + 1))
                    normals.append(tuple(b))
    elif kind == "exotic":
        if d % 4 != 0:
            raise FormulationError("exotic codes need d divisible by 4")
        enc = exotic_code(d)
        H = list(enc)
        w = (H[d - 1][1] - H[0][1], H[0][0] - H[d - 1][0])
        normals = [
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            vec(w),
        ]
    else:
        raise FormulationError("unknown annulus kind %r" % (kind,))

    H = list(enc)
    rows = []
    for b in normals:
        values = [dot(b, h) for h in H]
        lower = [Fraction(0)] * family.n
        upper = [Fraction(0)] * family.n
        for i in range(1, d + 1):
            nxt = i % d + 1
            lo = min(values[i - 1], values[nxt - 1])
            hi = max(values[i - 1], values[nxt - 1])
            for v in (2 * i - 1, 2 * i):
                lower[v - 1] = lo
                upper[v - 1] = hi
        rows.append(TwoSidedRow(b, lower, upper))
    hull_eqs, _ = affine_hull(H)
    m = dict(meta or {})
    m.setdefault("builder", "annulus_%s" % kind)
    m.setdefault("encoding", enc.kind)
    return LinearFormulation(
        family.n,
        enc.r,
        rows,
        hull_equations=hull_eqs,
        family=family,
        codes=enc,
        meta=m,
    )


def compute_bigm(pieces):
    """Tightest per-row relaxation bounds across foreign pieces.

    M[i][s] is the maximum of row s of piece i over every other piece.
    Unbounded maxima raise; empty foreign pieces are skipped with a
    warning (they never constrain the bound).
    """
    d = len(pieces)
    if d == 0:
        raise FormulationError("no pieces")
    M = []
    for i, piece in enumerate(pieces):
        row_bounds = []
        for s in range(len(piece.A)):
            best = None
            for k in range(d):
                if k == i:
                    continue
                other = pieces[k]
                prob = LpProblem(
                    other.m,
                    piece.A[s],
                    [(other.A[t], LE, other.b[t]) for t in range(len(other.A))],
                )
                res = solve_lp(prob)
                if res.status == "unbounded":
                    raise FormulationError(
                        "piece %d is unbounded along a foreign row" % (k + 1,)
                    )
                if res.status == "infeasible":
                    warnings.warn("piece %d is empty, skipped" % (k + 1,))
                    continue
                if best is None or res.value > best:
                    best = res.value
            if best is None and d > 1:
                raise FormulationError("every foreign piece is empty")
            row_bounds.append(best)
        M.append(row_bounds)
    return M


class BigMSystem:
    """A relaxation-based union formulation over (x, z).

    Each piece's rows are active exactly when z sits at that piece's code
    on the parabola; elsewhere they relax by the precomputed bound.
    """

    def __init__(self, pieces, M, rows, m, d):
        self.pieces = pieces
        self.M = M
        self.rows = rows  # (a_x, a_z, rhs) meaning a_x . x + a_z . z <= rhs
        self.m = m
        self.d = d
        self.r = 2

    def assemble(self):
        nvars = self.m + 2
        ineqs = []
        for a_x, a_z, rhs in self.rows:
            ineqs.append((tuple(a_x) + tuple(a_z), Fraction(rhs)))
        bounds = [(None, None)] * nvars
        return AssembledSystem(nvars, ineqs, [], bounds, self.m, 2)


def build_bigm_moment(pieces, M=None):
    """Assemble the relaxation system with parabola codes for d pieces.

    The activation weight at code (i, i*i) is i*i - 2*i*z1 + z2, which is
    zero at the code and a positive integer at every other code.
    """
    d = len(pieces)
    if d < 1:
        raise FormulationError("no pieces")
    if M is None:
        M = compute_bigm(pieces)
    m = pieces[0].m
    if any(p.m != m for p in pieces):
        raise FormulationError("pieces live in different spaces")
    rows = []
    for i in range(1, d + 1):
        piece = pieces[i - 1]
        for s in range(len(piece.A)):
            Mis = M[i - 1][s]
            if Mis is None:
                # single piece: no relaxation needed, row holds outright
                rows.append((piece.A[s], (Fraction(0), Fraction(0)), piece.b[s]))
                continue
            # a negative gap would tighten the row at foreign codes and
            # cut off their pieces, so it is clamped at zero
            gap = max(Mis - piece.b[s], Fraction(0))
            # A_s . x <= b_s + gap * (i*i - 2*i*z1 + z2)
            a_z = (Fraction(2 * i) * gap, -gap)
            rhs = piece.b[s] + gap * i * i
            rows.append((piece.A[s], a_z, rhs))
    for a_z, rel, rhs in branching.psi(d, 1, d).rows:
        if rel == LE:
            rows.append(((Fraction(0),) * m, a_z, rhs))
        elif rel == GE:
            rows.append(((Fraction(0),) * m, tuple(-x for x in a_z), -rhs))
        else:
            rows.append(((Fraction(0),) * m, a_z, rhs))
            rows.append(((Fraction(0),) * m, tuple(-x for x in a_z), -rhs))
    return BigMSystem(pieces, M, rows, m, d)


def export_formulation(form, fmt="json"):
    """Render a formulation as a JSON string or as human-readable text."""
    if fmt == "json":
        return json.dumps(form.to_json(), indent=2) + "\n"
    if fmt == "text":
        return form.to_text()
    raise FormulationError("unknown export format %r" % (fmt,))


def import_formulation(text):
    return LinearFormulation.from_json(json.loads(text))
