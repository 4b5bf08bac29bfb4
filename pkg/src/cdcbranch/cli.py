"""Command-line front end: generate, build, solve, verify, bench.

Artifacts are JSON with rationals rendered as 'p/q' strings, so every
number survives a round trip exactly.  gen, build, solve, and verify
outputs are pure functions of the arguments; only the bench CSV records
wall-clock times.
"""

import argparse
import csv
import json
import random
import sys

from .branching import make_scheme
from .cdc import (
    annulus_instance,
    grid_triangulation_fixture,
    instance_from_json,
    instance_to_json,
    sos2_family,
)
from .encodings import exotic_code, gray_code, moment_code, zigzag_code
from .formulation import (
    build_2d,
    build_annulus,
    build_general,
    build_moment_curve,
    build_sos2_exotic,
    export_formulation,
)
from .numerics import format_rational, parse_rational
from .oracle import (
    brute_force_optimum,
    check_ideal,
    check_projection,
    check_valid,
    classify_rows,
)
from .solver import solve as bb_solve


class CliError(Exception):
    pass


def _load_instance(path):
    with open(path) as fh:
        obj = json.load(fh)
    family, vm, pieces = instance_from_json(obj)
    return obj, family, vm, pieces


def _encoding_for(name, d):
    if name == "gray":
        r = max(1, (d - 1).bit_length())
        return gray_code(r, d)
    if name == "zigzag":
        r = max(1, (d - 1).bit_length())
        return zigzag_code(r, d)
    if name == "moment":
        return moment_code(d)
    if name == "exotic":
        return exotic_code(d)
    raise CliError("unknown encoding %r" % (name,))


def _build(family, obj, encoding_name, builder):
    d = family.d
    enc = _encoding_for(encoding_name, d)
    if builder == "general":
        return build_general(family, enc)
    if builder == "2d":
        return build_2d(family, enc)
    if builder == "moment":
        if encoding_name != "moment":
            raise CliError("the moment builder pairs with the moment encoding")
        return build_moment_curve(family)
    if builder == "sos2-exotic":
        if family != sos2_family(d):
            raise CliError("the sos2-exotic builder needs a consecutive-pair family")
        if encoding_name != "exotic":
            raise CliError("the sos2-exotic builder pairs with the exotic encoding")
        return build_sos2_exotic(d)
    if builder == "annulus":
        if obj.get("meta", {}).get("family") != "annulus":
            raise CliError("the annulus builder needs an annulus instance")
        return build_annulus(d, encoding_name)
    raise CliError("unknown builder %r" % (builder,))


def _write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args):
    if args.family == "sos2":
        if args.d is None:
            raise CliError("--d is required for sos2")
        family = sos2_family(args.d)
        obj = instance_to_json(family)
        obj["meta"] = {"family": "sos2", "d": args.d}
    elif args.family == "annulus":
        if args.d is None:
            raise CliError("--d is required for annulus")
        family, vm = annulus_instance(args.inner, args.outer, args.d)
        obj = instance_to_json(family, vm)
        obj["meta"] = {
            "family": "annulus",
            "d": args.d,
            "inner": args.inner,
            "outer": args.outer,
        }
    elif args.family == "grid":
        family, vm = grid_triangulation_fixture()
        obj = instance_to_json(family, vm)
        obj["meta"] = {"family": "grid", "d": family.d}
    else:
        raise CliError("unknown family %r" % (args.family,))
    _write_json(args.output, obj)
    return 0


def cmd_build(args):
    obj, family, _, _ = _load_instance(args.instance)
    form = _build(family, obj, args.encoding, args.builder)
    _write_json(args.output, form.to_json())
    if args.text:
        text = export_formulation(form, "text")
        if args.text == "-":
            sys.stdout.write(text)
        else:
            with open(args.text, "w") as fh:
                fh.write(text)
    return 0


def _objective_for(args, family, vm):
    if args.objective:
        with open(args.objective) as fh:
            spec = json.load(fh)
        if "lam" in spec:
            return [parse_rational(x) for x in spec["lam"]], None
        if "x" in spec:
            if vm is None:
                raise CliError("an x objective needs instance vertices")
            from .oracle import objective_from_vertex_map

            c_x = [parse_rational(x) for x in spec["x"]]
            return list(objective_from_vertex_map(vm, c_x)), c_x
        raise CliError("objective file needs a 'lam' or 'x' entry")
    rng = random.Random(args.seed)
    return [rng.randint(-9, 9) for _ in range(family.n)], None


def cmd_solve(args):
    obj, family, vm, _ = _load_instance(args.instance)
    form = _build(family, obj, args.encoding, args.builder)
    scheme = make_scheme(args.scheme)
    ok, why = scheme.compatible(form.codes)
    if not ok:
        raise CliError("scheme %s incompatible: %s" % (args.scheme, why))
    c_lam, _ = _objective_for(args, family, vm)
    report = bb_solve(
        form,
        c_lam,
        scheme,
        sense=args.sense,
        node_cap=args.node_cap,
        vertex_map=vm,
        debug_checks=args.debug_checks,
    )
    out = report.to_json()
    # timing is measurement noise; dropping it keeps rerun artifacts identical
    out.pop("wall_micros", None)
    out["seed"] = args.seed
    out["objective"] = [format_rational(x) for x in c_lam]
    reference = brute_force_optimum(family, c_lam, sense=args.sense)
    out["brute_force_value"] = format_rational(reference[0])
    _write_json(args.output, out)
    if report.status != "optimal" or report.value != reference[0]:
        return 1
    return 0


def cmd_verify(args):
    obj, family, _, _ = _load_instance(args.instance)
    form = _build(family, obj, args.encoding, args.builder)
    valid = check_valid(form)
    ideal = check_ideal(form)
    proj = check_projection(form)
    classes = classify_rows(form)
    counts = {}
    for c in classes:
        counts[c["class"]] = counts.get(c["class"], 0) + 1
    out = {
        "valid": valid.to_json(),
        "ideal": ideal.to_json(),
        "projection": proj.to_json(),
        "row_classes": counts,
        "rows": 2 * len(form.rows),
    }
    _write_json(args.output, out)
    return 0 if (valid.ok and ideal.ok and proj.ok) else 1


def cmd_bench(args):
    families = args.families.split(",")
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else [None]
    encodings = args.encodings.split(",")
    schemes = args.schemes.split(",")
    rows_out = []
    for fam_name in families:
        for d in sizes:
            if fam_name == "sos2":
                if d is None:
                    continue
                family = sos2_family(d)
                obj = {"meta": {"family": "sos2"}}
            elif fam_name == "annulus":
                if d is None:
                    continue
                family, _ = annulus_instance(1, 3, d)
                obj = {"meta": {"family": "annulus"}}
            elif fam_name == "grid":
                family, _ = grid_triangulation_fixture()
                obj = {"meta": {"family": "grid"}}
                d = family.d
            else:
                raise CliError("unknown family %r" % (fam_name,))
            for enc_name in encodings:
                try:
                    form = _build(family, obj, enc_name, "general")
                except Exception:
                    continue
                for scheme_name in schemes:
                    scheme = make_scheme(scheme_name)
                    ok, _ = scheme.compatible(form.codes)
                    if not ok:
                        continue
                    for seed in range(args.seeds):
                        rng = random.Random(seed)
                        c = [rng.randint(-9, 9) for _ in range(family.n)]
                        report = bb_solve(form, c, scheme)
                        rows_out.append(
                            {
                                "family": fam_name,
                                "d": d,
                                "n": family.n,
                                "encoding": enc_name,
                                "scheme": scheme_name,
                                "rows": 2 * len(form.rows),
                                "nodes": report.nodes,
                                "value": format_rational(report.value),
                                "micros": report.wall_micros,
                            }
                        )
    fieldnames = [
        "family",
        "d",
        "n",
        "encoding",
        "scheme",
        "rows",
        "nodes",
        "value",
        "micros",
    ]
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows_out:
            writer.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="cdcbranch",
        description="Ideal formulations of combinatorial disjunctive "
        "constraints, with exact branch-and-bound",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", required=True, choices=["sos2", "annulus", "grid"])
    g.add_argument("--d", type=int)
    g.add_argument("--inner", default="1", help="annulus inner radius (rational)")
    g.add_argument("--outer", default="3", help="annulus outer radius (rational)")
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a formulation for an instance")
    b.add_argument("--instance", required=True)
    b.add_argument(
        "--encoding",
        required=True,
        choices=["gray", "zigzag", "moment", "exotic"],
    )
    b.add_argument(
        "--builder",
        default="general",
        choices=["general", "2d", "moment", "sos2-exotic", "annulus"],
    )
    b.add_argument("--text", help="also write a readable rendering here")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("solve", help="optimize over an instance")
    s.add_argument("--instance", required=True)
    s.add_argument(
        "--encoding",
        required=True,
        choices=["gray", "zigzag", "moment", "exotic"],
    )
    s.add_argument("--builder", default="general")
    s.add_argument(
        "--scheme", required=True, choices=["variable", "moment", "exotic"]
    )
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--objective", help="JSON file with a 'lam' or 'x' vector")
    s.add_argument("--sense", default="max", choices=["max", "min"])
    s.add_argument("--node-cap", type=int, default=10 ** 6)
    s.add_argument("--debug-checks", action="store_true")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the oracle checks on a formulation")
    v.add_argument("--instance", required=True)
    v.add_argument(
        "--encoding",
        required=True,
        choices=["gray", "zigzag", "moment", "exotic"],
    )
    v.add_argument("--builder", default="general")
    v.add_argument("-o", "--output", default="-")
    v.set_defaults(func=cmd_verify)

    be = sub.add_parser("bench", help="sweep instances and emit CSV")
    be.add_argument("--families", default="sos2")
    be.add_argument("--sizes", default="4,8")
    be.add_argument("--encodings", default="moment,exotic")
    be.add_argument("--schemes", default="moment,exotic")
    be.add_argument("--seeds", type=int, default=3)
    be.add_argument("-o", "--output", default="-")
    be.set_defaults(func=cmd_bench)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
