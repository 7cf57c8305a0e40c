"""Command-line front end.

Subcommands (grouped):

    ring info                 sizes, subsets, involution sanity
    group enumerate           breadth-first closure of the Bruhat generators
    group verify-relations    the presentation relations by exact arithmetic
    group normal-form A B C D canonical Bruhat word of a matrix literal
    lagrangians enumerate     the Lagrangian table (cached per ring)
    connection verify         connection properties a)-e)
    weil build                generator operator matrices (either method)
    weil compare              Bruhat vs geometric operators, delta, coboundary
    cocycle table             formula vs operational 2-cocycle on seeded pairs
    character table           characters of both constructions (small groups)

Exit status: 0 when every check passes, 1 on verification failure (the
report carries the witnesses), 2 on invalid configuration.  Reports go to
stdout or, with --out, to a file; writing a file also renders the
command's figures next to it unless --no-figures is given.

Ring element literals are comma-separated coefficient lists, constant
term first (e.g. "1,0,2" is 1 + 2x^2); over an extension field each
coefficient is a colon-separated list of prime-field digits.
"""

from __future__ import annotations

import argparse
import random
import sys

import numpy as np

from . import reporting
from .bundle import LagrangianBundle
from .fields import FiniteField
from .groups import (
    StarMatrix,
    bruhat_normal_form,
    enumerate_group,
    sample_element,
    verify_relations,
)
from .rings import DoublingRing, MatrixRing, TruncatedPolynomialRing
from .scalars import TOL
from .symplectic import SelfDualModule, lagrangian_table
from .weil import (
    BruhatWeilRepresentation,
    GeometricWeilRepresentation,
    character_inner_product,
    compare_representations,
    delta,
    omega,
    quadratic_gauss_sum,
    rep_character,
    verify_projective_law,
    w_comparison_constant,
)


class ConfigError(Exception):
    pass


def add_common_options(parser: argparse.ArgumentParser):
    parser.add_argument("--ring", choices=["truncated", "matrix", "doubling"],
                        default="truncated", help="coefficient ring variant")
    parser.add_argument("--p", type=int, default=3, help="odd prime of the base field")
    parser.add_argument("--e", type=int, default=1, help="extension degree (<= 3)")
    parser.add_argument("--modulus", type=str, default=None,
                        help="comma-separated modulus coefficients, low degree first")
    parser.add_argument("--m", type=int, default=3, help="truncation degree of x")
    parser.add_argument("--involution", choices=["negate-x", "identity"],
                        default="negate-x")
    parser.add_argument("--n", type=int, default=2, help="matrix size for matrix/doubling rings")
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=1e-8)
    parser.add_argument("--limit", type=int, default=200_000,
                        help="group enumeration guard")
    parser.add_argument("--mode", choices=["exhaustive", "sampled"], default=None,
                        help="verification mode (default: exhaustive for m=1, sampled otherwise)")
    parser.add_argument("--output", choices=["json", "csv", "text"], default="json")
    parser.add_argument("--out", type=str, default=None, help="write the report to this path")
    parser.add_argument("--cache-dir", type=str, default=None,
                        help="directory for the Lagrangian table cache")
    parser.add_argument("--no-figures", action="store_true",
                        help="do not render figures next to --out")


def build_field(args) -> FiniteField:
    modulus = None
    if args.modulus:
        modulus = [int(c) for c in args.modulus.split(",")]
    return FiniteField(args.p, args.e, modulus)


def build_ring(args):
    field = build_field(args)
    if args.ring == "truncated":
        involution = "negate_x" if args.involution == "negate-x" else "identity"
        return TruncatedPolynomialRing(field, args.m, involution)
    if args.ring == "matrix":
        return MatrixRing(field, args.n)
    return DoublingRing(MatrixRing(field, args.n))


def require_truncated(ring, what: str) -> TruncatedPolynomialRing:
    if not isinstance(ring, TruncatedPolynomialRing):
        raise ConfigError(f"{what} needs --ring truncated")
    return ring


def ring_config(args) -> dict:
    return {
        "ring": args.ring,
        "p": args.p,
        "e": args.e,
        "modulus": args.modulus,
        "m": args.m,
        "involution": args.involution,
        "n": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "tolerance": args.tolerance,
    }


def parse_ring_literal(ring, text: str):
    if not isinstance(ring, TruncatedPolynomialRing):
        raise ConfigError("matrix literals are supported for truncated rings only")
    coeffs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ":" in chunk:
            digits = [int(d) for d in chunk.split(":")]
            if len(digits) != ring.field.e:
                raise ConfigError(f"coefficient {chunk!r} has the wrong extension degree")
            coeffs.append(tuple(d % ring.field.p for d in digits))
        else:
            coeffs.append(ring.field.from_int(int(chunk)))
    if len(coeffs) > ring.m:
        raise ConfigError(f"literal {text!r} has more than m={ring.m} coefficients")
    coeffs += [ring.field.zero] * (ring.m - len(coeffs))
    return tuple(coeffs)


def default_mode(args, ring) -> str:
    if args.mode:
        return args.mode
    small = isinstance(ring, TruncatedPolynomialRing) and ring.m == 1
    return "exhaustive" if small else "sampled"


# -- subcommand implementations ------------------------------------------------


def cmd_ring_info(args) -> dict:
    ring = build_ring(args)
    rng = random.Random(args.seed)
    elements = ring.elements("all")
    picks = [rng.choice(elements) for _ in range(min(200, len(elements)))]
    worst_pairs = []
    involution_ok = all(ring.star(ring.star(a)) == a for a in elements)
    anti_ok = True
    for a in picks:
        b = rng.choice(elements)
        if ring.star(ring.mul(a, b)) != ring.mul(ring.star(b), ring.star(a)):
            anti_ok = False
            worst_pairs.append({"a": repr(a), "b": repr(b)})
    report = {
        "kind": "ring-info",
        "size": ring.size,
        "counts": {
            subset: len(ring.elements(subset))
            for subset in ("symmetric", "units", "symmetric_units", "central_symmetric_units")
        },
        "checks": [
            {"name": "star is an involution", "instances": len(elements),
             "max_deviation": 0.0 if involution_ok else 1.0, "passed": involution_ok},
            {"name": "star is an anti-homomorphism (sampled)", "instances": len(picks),
             "max_deviation": 0.0 if anti_ok else 1.0, "failures": worst_pairs,
             "passed": anti_ok},
        ],
        "passed": involution_ok and anti_ok,
    }
    if isinstance(ring, TruncatedPolynomialRing):
        report["gauss_sum_at_one"] = reporting.cnum(quadratic_gauss_sum(ring, ring.one))
        report["omega"] = reporting.cnum(omega(ring.field))
    return report


def cmd_group_enumerate(args) -> dict:
    ring = build_ring(args)
    elements = enumerate_group(ring, limit=args.limit)
    all_sl = all(g.is_sl() for g in elements)
    return {
        "kind": "group-enumerate",
        "order": len(elements),
        "checks": [
            {"name": "every element is in SL_*", "instances": len(elements),
             "max_deviation": 0.0 if all_sl else 1.0, "passed": all_sl},
        ],
        "passed": all_sl,
    }


def cmd_group_relations(args) -> dict:
    ring = build_ring(args)
    return verify_relations(ring, max_instances=args.samples, seed=args.seed)


def cmd_group_normal_form(args) -> dict:
    ring = build_ring(args)
    entries = [parse_ring_literal(ring, lit) for lit in args.entries]
    g = StarMatrix(ring, *entries)
    membership = g.membership()
    if membership != "SL":
        raise ConfigError(f"matrix is not in SL_* (membership: {membership})")
    word = bruhat_normal_form(g)
    return {
        "kind": "normal-form",
        "cell": word.cell,
        "w_length": word.w_count,
        "word": word.text(ring),
        "params": {
            "t": repr(word.t),
            "b1": repr(word.b1),
            "c1": repr(word.c1),
            "d1": repr(word.d1),
        },
        "checks": [
            {"name": "word re-multiplies to the input", "instances": 1,
             "max_deviation": 0.0, "passed": True},
        ],
        "passed": True,
    }


def cmd_lagrangians(args) -> dict:
    ring = require_truncated(build_ring(args), "lagrangians enumerate")
    module = SelfDualModule(ring)
    table = lagrangian_table(module, cache_dir=args.cache_dir)
    sizes_ok = all(L.size == module.n_points for L in table)
    inter = [
        [table.intersection_size(L1, L2) for L2 in table] for L1 in table
    ]
    rows = [
        {
            "id": L.id,
            "generators": [module.vector_str(v) for v in L.generators],
            "size": L.size,
        }
        for L in table
    ]
    return {
        "kind": "lagrangians",
        "count": len(table),
        "rows": rows,
        "intersection_matrix": inter,
        "checks": [
            {"name": "every Lagrangian has q^m elements", "instances": len(table),
             "max_deviation": 0.0 if sizes_ok else 1.0, "passed": sizes_ok},
        ],
        "passed": sizes_ok,
    }


def cmd_connection(args) -> dict:
    ring = require_truncated(build_ring(args), "connection verify")
    module = SelfDualModule(ring)
    table = lagrangian_table(module, cache_dir=args.cache_dir)
    bundle = LagrangianBundle(table)
    return bundle.verify_connection(
        mode=default_mode(args, ring),
        seed=args.seed,
        samples=args.samples,
        tol=args.tolerance,
    )


def _matrix_rows(label: str, generator: str, mat: np.ndarray) -> dict:
    return {
        "kind": "operator",
        "label": label,
        "generator": generator,
        "unitarity_deviation": float(
            np.max(np.abs(mat @ np.conj(mat.T) - np.eye(mat.shape[0])))
        ),
        "matrix_re": [[float(x) for x in row] for row in mat.real],
        "matrix_im": [[float(x) for x in row] for row in mat.imag],
    }


def cmd_weil_build(args) -> dict:
    ring = require_truncated(build_ring(args), "weil build")
    rows = []
    if args.method == "bruhat":
        rep = BruhatWeilRepresentation(ring)
        op_of = {"h": rep.op_h, "u": rep.op_u}
        w_mat = rep.op_w()
    else:
        module = SelfDualModule(ring)
        bundle = LagrangianBundle(lagrangian_table(module, cache_dir=args.cache_dir))
        geom = GeometricWeilRepresentation(bundle)
        op_of = {
            "h": lambda t: geom.sigma(StarMatrix.h(ring, t)),
            "u": lambda b: geom.sigma(StarMatrix.u(ring, b)),
        }
        w_mat = geom.sigma(StarMatrix.w(ring))
    for i, t in enumerate(ring.elements("units")):
        rows.append(_matrix_rows(f"h{i}", f"h({ring.poly_str(t)})", op_of["h"](t)))
    for i, b in enumerate(ring.elements("symmetric")):
        rows.append(_matrix_rows(f"u{i}", f"u({ring.poly_str(b)})", op_of["u"](b)))
    rows.append(_matrix_rows("w", "w", w_mat))
    worst = max(r["unitarity_deviation"] for r in rows)
    return {
        "kind": "weil-build",
        "method": args.method,
        "dimension": ring.size,
        "rows": rows,
        "checks": [
            {"name": "all generator operators unitary", "instances": len(rows),
             "max_deviation": worst, "passed": worst <= args.tolerance},
        ],
        "passed": worst <= args.tolerance,
    }


def cmd_weil_compare(args) -> dict:
    ring = require_truncated(build_ring(args), "weil compare")
    module = SelfDualModule(ring)
    bundle = LagrangianBundle(lagrangian_table(module, cache_dir=args.cache_dir))
    report = compare_representations(
        ring, bundle, samples=args.samples, seed=args.seed, tol=args.tolerance
    )
    law = verify_projective_law(
        GeometricWeilRepresentation(bundle),
        samples=max(50, args.samples // 10),
        seed=args.seed,
        tol=args.tolerance,
    )
    report["checks"].append(
        {
            "name": "projective law with formula cocycle",
            "instances": law["pairs"],
            "max_deviation": max(
                law["max_law_deviation"], law["max_formula_vs_operational"]
            ),
            "passed": law["passed"],
        }
    )
    report["passed"] = report["passed"] and law["passed"]
    return report


def cmd_cocycle_table(args) -> dict:
    ring = require_truncated(build_ring(args), "cocycle table")
    module = SelfDualModule(ring)
    bundle = LagrangianBundle(lagrangian_table(module, cache_dir=args.cache_dir))
    geom = GeometricWeilRepresentation(bundle)
    wc = w_comparison_constant(ring)
    rng = random.Random(args.seed)
    rows = []
    worst = 0.0
    for _ in range(args.samples):
        g = sample_element(ring, rng)
        h = sample_element(ring, rng)
        c_formula = geom.cocycle_formula(g, h)
        c_op, residual = geom.cocycle_operational(g, h)
        dg, dh, dgh = delta(ring, g, wc), delta(ring, h, wc), delta(ring, g * h, wc)
        worst = max(worst, abs(c_formula - c_op))
        rows.append(
            {
                "g_word": bruhat_normal_form(g).text(ring),
                "h_word": bruhat_normal_form(h).text(ring),
                "c_formula": reporting.cnum(c_formula),
                "c_operational": reporting.cnum(c_op),
                "delta_g": reporting.cnum(dg),
                "delta_h": reporting.cnum(dh),
                "delta_gh": reporting.cnum(dgh),
                "residual": residual,
            }
        )
    return {
        "kind": "cocycle-table",
        "rows": rows,
        "checks": [
            {"name": "formula vs operational cocycle", "instances": len(rows),
             "max_deviation": worst, "passed": worst <= args.tolerance},
        ],
        "passed": worst <= args.tolerance,
    }


def cmd_character_table(args) -> dict:
    ring = require_truncated(build_ring(args), "character table")
    if ring.size ** 3 > 5000:
        raise ConfigError(
            "character table needs an enumerable group; use m=1 with small q"
        )
    elements = enumerate_group(ring, limit=args.limit)
    rep = BruhatWeilRepresentation(ring)
    module = SelfDualModule(ring)
    bundle = LagrangianBundle(lagrangian_table(module, cache_dir=args.cache_dir))
    geom = GeometricWeilRepresentation(bundle)
    chi_b = rep_character(rep.op, elements)
    chi_g = rep_character(geom.sigma, elements)
    rows = [
        {
            "word": bruhat_normal_form(g).text(ring),
            "bruhat": reporting.cnum(chi_b[g]),
            "geometric": reporting.cnum(chi_g[g]),
        }
        for g in elements
    ]
    ip = character_inner_product(chi_b, chi_b)
    ip_int = abs(ip - round(ip.real)) <= args.tolerance and round(ip.real) >= 1
    return {
        "kind": "character-table",
        "order": len(elements),
        "rows": rows,
        "inner_product_bruhat": reporting.cnum(ip),
        "inner_product_geometric": reporting.cnum(character_inner_product(chi_g, chi_g)),
        "checks": [
            {"name": "<chi,chi> is a positive integer", "instances": 1,
             "max_deviation": float(abs(ip - round(ip.real))), "passed": ip_int},
        ],
        "passed": ip_int,
    }


# -- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weilstar",
        description="Star-group Weil representations over finite involutive rings: "
        "construction and exhaustive small-scale verification.",
    )
    top = parser.add_subparsers(dest="group", required=True)

    def sub(group_parser, name, fn, **kwargs):
        p = group_parser.add_parser(name, **kwargs)
        add_common_options(p)
        p.set_defaults(fn=fn)
        return p

    ring_p = top.add_parser("ring").add_subparsers(dest="action", required=True)
    sub(ring_p, "info", cmd_ring_info)

    group_p = top.add_parser("group").add_subparsers(dest="action", required=True)
    sub(group_p, "enumerate", cmd_group_enumerate)
    sub(group_p, "verify-relations", cmd_group_relations)
    nf = sub(group_p, "normal-form", cmd_group_normal_form)
    nf.add_argument("entries", nargs=4, metavar="ENTRY",
                    help="four ring-element literals, row major")

    lag_p = top.add_parser("lagrangians").add_subparsers(dest="action", required=True)
    sub(lag_p, "enumerate", cmd_lagrangians)

    conn_p = top.add_parser("connection").add_subparsers(dest="action", required=True)
    sub(conn_p, "verify", cmd_connection)

    weil_p = top.add_parser("weil").add_subparsers(dest="action", required=True)
    build = sub(weil_p, "build", cmd_weil_build)
    build.add_argument("--method", choices=["bruhat", "geometric"], required=True)
    sub(weil_p, "compare", cmd_weil_compare)

    coc_p = top.add_parser("cocycle").add_subparsers(dest="action", required=True)
    sub(coc_p, "table", cmd_cocycle_table)

    char_p = top.add_parser("character").add_subparsers(dest="action", required=True)
    sub(char_p, "table", cmd_character_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = f"{args.group}-{args.action}"
    try:
        body = args.fn(args)
    except (ConfigError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = reporting.base_report(command, ring_config(args))
    report.update(body)
    report["tolerance"] = args.tolerance
    text = reporting.emit(report, fmt=args.output, out=args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"report written to {args.out}")
        if not args.no_figures:
            for path in reporting.render_figures(report, args.out):
                print(f"figure written to {path}")
    return 0 if report.get("passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
