"""Command-line interface.

Subcommands: product, certify, search, check, classify.  Results go to
stdout (human table, or JSON with --json), diagnostics to stderr.  Every
output file embeds the run manifest.  Exit codes: 0 ok, 2 bad input or
flags, 3 degenerate body, 4 missing symmetry, 5 invalid certificate,
6 failed property checks.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__, bodies, certificates, geometry
from .bodies import difference_body, makai_floor, polar, volume_product
from .certificates import (
    EQ_TOL,
    certify_plane,
    certify_space,
    chain_lower_bound,
    check_section_projection_duality,
    detect_equality_3d,
    partition_3d,
    zang_margins,
)
from .errors import (
    CertificateInvalid,
    DegenerateInput,
    GeometryError,
    NotSymmetric,
)
from .geometry import load_body
from .oracle import mc_volume_polytope
from .search import SearchConfig, minimize_volume_product
from .symmetry import classify_low_vertex_symmetric, is_tetrahedrally_symmetric, orbit_decomposition, tetrahedral_group

EXIT_BAD_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_NOT_SYMMETRIC = 4
EXIT_CERT_INVALID = 5
EXIT_CHECKS_FAILED = 6


def _manifest(args, command):
    return {
        "command": command,
        "inputs": getattr(args, "body", None) or [],
        "seed": getattr(args, "seed", None),
        "tol_geom": geometry.TOL_GEOM,
        "tol_cert": certificates.TOL_CERT,
        "output": getattr(args, "out", None),
        "version": __version__,
    }


def _apply_tolerances(args):
    if args.tol_geom is not None:
        for mod in (geometry, bodies, certificates):
            if hasattr(mod, "TOL_GEOM"):
                mod.TOL_GEOM = args.tol_geom
    if args.tol_cert is not None:
        certificates.TOL_CERT = args.tol_cert


def _load(path):
    try:
        return load_body(path)
    except DegenerateInput as exc:
        print(f"degenerate body in {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DEGENERATE) from exc
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"cannot read body file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT) from exc


def _sig12(x: float) -> str:
    return f"{x:.12g}"


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def cmd_product(args) -> int:
    rows = []
    for path in args.body:
        K = _load(path)
        D = difference_body(K)
        Lp = polar(D)
        product = K.volume * Lp.volume
        floor = makai_floor(K.dim)
        valid = None
        if args.csv:
            try:
                if K.dim == 2:
                    valid = certify_plane(K).valid
                elif is_tetrahedrally_symmetric(K, tol=certificates.TOL_CERT):
                    valid = certify_space(K).valid
            except (GeometryError, RuntimeError):
                valid = False
        rows.append(
            {
                "file": path,
                "dim": K.dim,
                "volume": K.volume,
                "diff_volume": D.volume,
                "polar_volume": Lp.volume,
                "product": product,
                "floor": floor,
                "margin": product - floor,
                "valid": valid,
            }
        )
    if args.json:
        payload = {"manifest": _manifest(args, "product"), "results": rows}
        print(json.dumps(payload, indent=1))
    else:
        for r in rows:
            print(f"{r['file']} (dim {r['dim']})")
            print(f"  |K|         = {_sig12(r['volume'])}")
            print(f"  |K-K|       = {_sig12(r['diff_volume'])}")
            print(f"  |(K-K)deg|  = {_sig12(r['polar_volume'])}")
            print(f"  product     = {_sig12(r['product'])}")
            print(f"  floor       = {_sig12(r['floor'])}   margin = {_sig12(r['margin'])}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["file", "dim", "volume", "product", "floor", "margin", "valid"])
            for r in rows:
                w.writerow(
                    [r["file"], r["dim"], repr(r["volume"]), repr(r["product"]),
                     repr(r["floor"]), repr(r["margin"]), r["valid"]]
                )
    if args.out:
        _write_json(args.out, {"manifest": _manifest(args, "product"), "results": rows})
    return 0


def _print_checks(checks):
    wide = max(len(c["name"]) for c in checks)
    for c in checks:
        status = "pass" if c["pass"] else "FAIL"
        print(f"  {c['name']:<{wide}}  lhs={c['lhs']: .12g}  rhs={c['rhs']: .12g}  [{status}]")


def cmd_certify(args) -> int:
    K = _load(args.body[0])
    mode = args.mode
    try:
        if mode == "2d":
            if K.dim != 2:
                print("--mode 2d needs a 2D body", file=sys.stderr)
                return EXIT_BAD_INPUT
            cert = certify_plane(K)
        else:
            if K.dim != 3:
                print("--mode 3d needs a 3D body", file=sys.stderr)
                return EXIT_BAD_INPUT
            cert = certify_space(K)
    except NotSymmetric as exc:
        print(f"not tetrahedrally symmetric: {exc}", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    except CertificateInvalid as exc:
        print(f"certificate invalid: {exc}", file=sys.stderr)
        cert = getattr(exc, "certificate", None)
        if cert is not None and args.out:
            _write_json(args.out, {"manifest": _manifest(args, "certify"),
                                   "certificate": cert.to_dict()})
        return EXIT_CERT_INVALID
    payload = {"manifest": _manifest(args, "certify"), "certificate": cert.to_dict()}
    if args.out:
        _write_json(args.out, payload)
    if args.json:
        print(json.dumps(payload, indent=1))
    else:
        d = cert.to_dict()
        print(f"{args.body[0]}: certificate {'VALID' if cert.valid else 'INVALID'}")
        if mode == "2d":
            print(f"  sectors S1,S2,S3 = {d['sector_areas']}")
        else:
            print(f"  case = {d['case']}  a = {_sig12(d['a'])}  b = {_sig12(d['b'])}")
        print(f"  certified bound = {_sig12(cert.certified_bound)}")
        print(f"  product         = {_sig12(cert.product)}")
        _print_checks(d["checks"])
    return 0


def cmd_search(args) -> int:
    cls, _, param = args.body_class.partition(":")
    try:
        config = SearchConfig(
            body_class={"polygon": "polygon", "tetra": "tetra"}[cls],
            class_param=int(param) if param else (8 if cls == "polygon" else 2),
            restarts=args.restarts,
            max_iters=args.iters,
            initial_step=args.step,
            cooling=args.cooling,
            seed=args.seed,
        )
    except (KeyError, ValueError) as exc:
        print(f"bad --class or search flags: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    report = minimize_volume_product(config, threads=args.threads)
    payload = {"manifest": _manifest(args, "search"), "report": report.to_dict()}
    if args.out:
        _write_json(args.out, payload)
    print(f"best product = {_sig12(report.best_product)}")
    print(f"floor        = {_sig12(config.floor)}  margin = {_sig12(report.best_product - config.floor)}")
    if args.json:
        print(json.dumps(payload, indent=1))
    return 0


def cmd_check(args) -> int:
    K = _load(args.body[0])
    seed = args.seed
    results = []

    margins = zang_margins(K, args.zang_dirs, seed)
    results.append(("zang_sampling", float(np.min(margins)) >= -certificates.TOL_CERT,
                    f"min margin {np.min(margins):.3e} over {args.zang_dirs} directions"))

    value, ratio = chain_lower_bound(K)
    binom = math.comb(2 * K.dim, K.dim)
    product = volume_product(K)
    results.append(("rogers_shephard", ratio <= binom + 1e-9,
                    f"|K-K|/|K| = {ratio:.9f} <= C(2n,n) = {binom}"))
    results.append(("chain_bound", value <= product + certificates.TOL_CERT,
                    f"chain value {value:.9f} <= product {product:.9f}"))

    est = mc_volume_polytope(K, n=args.mc_n, seed=seed)
    dev = abs(est.mean - K.volume)
    results.append(("oracle_volume", dev <= 3.0 * est.stderr + 1e-12,
                    f"exact {K.volume:.6f} vs MC {est.mean:.6f} +- {est.stderr:.6f}"))

    if K.dim == 3:
        rng = np.random.Generator(np.random.PCG64(seed))
        dirs = [np.array([0.0, 0.0, 1.0]), np.array([1.0, 1.0, 1.0])]
        dirs += list(rng.normal(size=(3, 3)))
        worst = 0.0
        for u in dirs:
            worst = max(worst, check_section_projection_duality(K, u))
        results.append(("section_projection_duality", worst <= 1e-6,
                        f"worst symmetric-difference area {worst:.3e}"))
        if is_tetrahedrally_symmetric(K, tol=certificates.TOL_CERT):
            Lp = polar(difference_body(K))
            V1, V2, _ = partition_3d(Lp)
            resid = abs(V1 + V2 - Lp.volume) / Lp.volume
            results.append(("partition_tiling", resid <= 1e-9,
                            f"relative tiling residual {resid:.3e}"))
        else:
            results.append(("partition_tiling", True, "skipped: not tetrahedrally symmetric"))

    ok = all(r[1] for r in results)
    if args.json:
        payload = {
            "manifest": _manifest(args, "check"),
            "checks": [{"name": n, "pass": p, "detail": d} for n, p, d in results],
            "all_pass": ok,
        }
        print(json.dumps(payload, indent=1))
    else:
        wide = max(len(n) for n, _, _ in results)
        for n, p, d in results:
            print(f"  {n:<{wide}}  [{'pass' if p else 'FAIL'}]  {d}")
    if not ok:
        failed = [n for n, p, _ in results if not p]
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECKS_FAILED
    return 0


def cmd_classify(args) -> int:
    K = _load(args.body[0])
    if K.dim != 3 or not is_tetrahedrally_symmetric(K, tol=certificates.TOL_CERT):
        print("body is not tetrahedrally symmetric", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    tag = classify_low_vertex_symmetric(K)
    g3 = next(M for M in tetrahedral_group()
              if np.allclose(M @ np.array([1.0, 2.0, 3.0]), [2.0, 3.0, 1.0]))
    orbits = orbit_decomposition(K.vertices, g3)
    if args.json:
        payload = {
            "manifest": _manifest(args, "classify"),
            "class": tag.value,
            "orbit_lengths": sorted(len(o) for o in orbits),
            "equality_case": detect_equality_3d(K, EQ_TOL) if tag is not None else None,
        }
        print(json.dumps(payload, indent=1))
    else:
        print(f"class: {tag.value}")
        print(f"orbit lengths under the 3-cycle: {sorted(len(o) for o in orbits)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="volprod",
        description="Volume products |K||(K-K)deg| of 2D/3D polytopes: "
                    "computation, inequality certificates, and minimizer search.",
    )
    ap.add_argument("--tol-geom", type=float, default=None, help="override geometric tolerance")
    ap.add_argument("--tol-cert", type=float, default=None, help="override certificate tolerance")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", help="volumes and the volume product of bodies")
    p.add_argument("body", nargs="+")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", default=None, help="write a batch summary CSV")
    p.add_argument("--out", default=None, help="write results JSON")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("certify", help="re-execute the lower-bound proof on a body")
    p.add_argument("body", nargs=1)
    p.add_argument("--mode", choices=["2d", "3d"], required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, help="write certificate JSON")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="minimize the volume product by annealing")
    p.add_argument("--class", dest="body_class", required=True,
                   help="polygon:N or tetra:K")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--cooling", type=float, default=0.93)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, help="write the search report JSON")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("check", help="run the property battery on a body")
    p.add_argument("body", nargs=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--zang-dirs", type=int, default=1000)
    p.add_argument("--mc-n", type=int, default=1_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="tetrahedron/octahedron/other classification")
    p.add_argument("body", nargs=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _apply_tolerances(args)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code
    except DegenerateInput as exc:
        print(f"degenerate body: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NotSymmetric as exc:
        print(f"not symmetric: {exc}", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    except CertificateInvalid as exc:
        print(f"certificate invalid: {exc}", file=sys.stderr)
        return EXIT_CERT_INVALID


if __name__ == "__main__":
    sys.exit(main())
