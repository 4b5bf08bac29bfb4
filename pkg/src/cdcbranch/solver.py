"""Exact branch-and-bound driven by code-space branching schemes.

Nodes carry a region of code space plus the cuts that carved it.  Node
selection is best bound with FIFO tie-breaking, all arithmetic is
rational, and an incumbent is only ever accepted when the relaxation
optimum lands exactly on a code, which a valid formulation guarantees to
be a true feasible point.
"""

import heapq
import time
from fractions import Fraction

from .branching import BranchError, make_scheme
from .formulation import BigMSystem, LinearFormulation
from .lp import LpError, LpProblem, enumerate_vertices, lp_feasible, solve_lp
from .numerics import format_rational, vec
from .oracle import VerificationReport


class SolveError(Exception):
    pass


class SolveReport:
    def __init__(
        self,
        status,
        value=None,
        lam=None,
        z=None,
        x=None,
        nodes=0,
        histogram=None,
        wall_micros=0,
        remaining_bound=None,
    ):
        self.status = status
        self.value = value
        self.lam = lam
        self.z = z
        self.x = x
        self.nodes = nodes
        self.histogram = dict(histogram or {})
        self.wall_micros = wall_micros
        self.remaining_bound = remaining_bound

    def to_json(self):
        def fmt(v):
            if v is None:
                return None
            if isinstance(v, tuple):
                return [format_rational(x) for x in v]
            return format_rational(v)

        return {
            "status": self.status,
            "value": fmt(self.value),
            "lam": fmt(self.lam),
            "z": fmt(self.z),
            "x": fmt(self.x),
            "nodes": self.nodes,
            "histogram": self.histogram,
            "wall_micros": self.wall_micros,
            "remaining_bound": fmt(self.remaining_bound),
        }


def solve(
    source,
    objective,
    scheme,
    encoding=None,
    sense="max",
    node_cap=10 ** 6,
    vertex_map=None,
    debug_checks=False,
):
    """Optimize a linear objective over the region a formulation encodes.

    source is a LinearFormulation (objective over the weight components)
    or a BigMSystem (objective over x).  Returns a SolveReport.
    """
    t0 = time.perf_counter_ns()
    if isinstance(scheme, str):
        scheme = make_scheme(scheme)
    if sense not in ("max", "min"):
        raise SolveError("sense must be 'max' or 'min'")

    if isinstance(source, LinearFormulation):
        encoding = encoding or source.codes
        if encoding is None:
            raise SolveError("an encoding is required")
        base = source.assemble()
        c = vec(objective)
        if len(c) == source.n - 1 and source.artificial:
            c = c + (Fraction(0),)
        if len(c) != source.n:
            raise SolveError("objective length mismatch")
        c_full = c + (Fraction(0),) * source.r
    elif isinstance(source, BigMSystem):
        from .encodings import moment_code

        encoding = encoding or moment_code(source.d)
        base = source.assemble()
        c = vec(objective)
        if len(c) != source.m:
            raise SolveError("objective length mismatch")
        c_full = c + (Fraction(0),) * 2
    else:
        raise SolveError("unknown source type %r" % type(source).__name__)

    ok, why = scheme.compatible(encoding)
    if not ok:
        raise SolveError("scheme %s incompatible: %s" % (scheme.name, why))

    mult = Fraction(1) if sense == "max" else Fraction(-1)
    c_int = tuple(mult * x for x in c_full)
    code_set = set(tuple(h) for h in encoding)

    root = scheme.root(encoding)
    counter = 0
    heap = [((0, Fraction(0), counter), (), root)]
    incumbent = None
    nodes = 0
    histogram = {}
    pruned_infeasible = 0
    pruned_bound = 0

    while heap and nodes < node_cap:
        key, cuts, state = heapq.heappop(heap)
        nodes += 1
        if key[0] == 1 and incumbent is not None and -key[1] <= incumbent[0]:
            pruned_bound += 1
            continue
        sys = base.with_cuts(list(cuts))
        res = solve_lp(
            LpProblem(sys.nvars, c_int, sys.lp_rows(), bounds=sys.bounds)
        )
        if res.status == "infeasible":
            pruned_infeasible += 1
            continue
        if res.status == "unbounded":
            raise SolveError("node relaxation is unbounded")
        val = res.value
        if incumbent is not None and val <= incumbent[0]:
            pruned_bound += 1
            continue
        zhat = res.x[base.z_offset : base.z_offset + base.r]
        if zhat in code_set:
            incumbent = (val, res.x)
            continue
        try:
            outcome = scheme.step(state, zhat, encoding)
        except BranchError as exc:
            raise SolveError("branching failed: %s" % exc)
        if outcome.verified:
            raise SolveError(
                "scheme certified a point off the code set; it does not "
                "match this instance"
            )
        if debug_checks:
            report = check_branch_soundness(
                scheme, encoding, state, zhat, outcome=outcome
            )
            if not report.ok:
                raise SolveError("unsound branch: %r" % report.failures)
        histogram[outcome.tag] = histogram.get(outcome.tag, 0) + 1
        for child_cuts, child_state in outcome.children:
            counter += 1
            heapq.heappush(
                heap,
                ((1, -val, counter), tuple(cuts) + tuple(child_cuts), child_state),
            )

    wall = (time.perf_counter_ns() - t0) // 1000
    histogram["pruned_infeasible"] = pruned_infeasible
    histogram["pruned_bound"] = pruned_bound

    remaining = None
    if heap:
        key = min(h[0] for h in heap)
        if key[0] == 1:
            remaining = mult * -key[1]

    if heap:
        status = "node_cap"
    elif incumbent is None:
        status = "infeasible"
    else:
        status = "optimal"

    if incumbent is None:
        return SolveReport(
            status,
            nodes=nodes,
            histogram=histogram,
            wall_micros=wall,
            remaining_bound=remaining,
        )

    val, point = incumbent
    z = point[base.z_offset : base.z_offset + base.r]
    lam = x = None
    if isinstance(source, LinearFormulation):
        lam = point[: source.n]
        if vertex_map is not None:
            m = vertex_map.m
            x = tuple(
                sum(
                    (lam[v] * vertex_map[v][k] for v in range(len(vertex_map))),
                    Fraction(0),
                )
                for k in range(m)
            )
    else:
        x = point[: source.m]
    return SolveReport(
        status,
        value=mult * val,
        lam=lam,
        z=z,
        x=x,
        nodes=nodes,
        histogram=histogram,
        wall_micros=wall,
        remaining_bound=remaining,
    )


def check_branch_soundness(scheme, encoding, Q, zhat, outcome=None):
    """Audit one branching step against the four split conditions.

    The split must exclude zhat from both children, keep the children
    inside the parent, lose no code, and keep the children disjoint.
    For interval schemes the children must additionally be exact hulls
    of their codes, which forces finite termination.
    """
    zhat = vec(zhat)
    if not Q.contains(zhat):
        raise BranchError("zhat must lie in the audited region")
    if outcome is None:
        outcome = scheme.step(Q, zhat, encoding)
    code_set = set(tuple(h) for h in encoding)
    if outcome.verified:
        ok = tuple(zhat) in code_set
        return VerificationReport(
            "branch",
            ok,
            [] if ok else [{"condition": "verify", "z": [str(v) for v in zhat]}],
            {"tag": outcome.tag},
        )

    (cuts1, q1), (cuts2, q2) = outcome.children
    failures = []
    r = len(zhat)

    # 1: zhat is gone from both children
    if q1.contains(zhat):
        failures.append({"condition": 1, "child": 1})
    if q2.contains(zhat):
        failures.append({"condition": 1, "child": 2})

    # 2: children stay inside the parent
    child_vertices = []
    for idx, q in ((1, q1), (2, q2)):
        try:
            verts = enumerate_vertices(r, q.ineq_rows())
        except LpError as exc:
            failures.append({"condition": 2, "child": idx, "error": str(exc)})
            child_vertices.append([])
            continue
        child_vertices.append(verts)
        for v in verts:
            if not Q.contains(v):
                failures.append(
                    {"condition": 2, "child": idx, "vertex": [str(t) for t in v]}
                )

    # 3: codes are preserved and never smuggled in
    for h in encoding:
        h = tuple(h)
        in_q = Q.contains(h)
        in1 = q1.contains(h)
        in2 = q2.contains(h)
        if in_q != (in1 or in2):
            failures.append({"condition": 3, "code": [str(t) for t in h]})

    # 4: children are disjoint
    if lp_feasible(r, q1.rows + q2.rows):
        failures.append({"condition": 4})

    if getattr(scheme, "name", "") == "moment":
        for idx, verts in ((1, child_vertices[0]), (2, child_vertices[1])):
            for v in verts:
                if tuple(v) not in code_set:
                    failures.append(
                        {
                            "condition": "hull",
                            "child": idx,
                            "vertex": [str(t) for t in v],
                        }
                    )

    return VerificationReport(
        "branch", not failures, failures, {"tag": outcome.tag}
    )
