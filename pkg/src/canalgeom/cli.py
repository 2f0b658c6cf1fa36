"""Command-line front end: sample | curvature | verify | classify | catenoid.

Exit codes: 0 all checks pass, 1 check failure, 2 config error, 3 numeric
domain error.  Identical config + seed gives bitwise-identical outputs; grid
work may fan out over CANAL_THREADS workers but reductions stay in a fixed
serial order.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import canal, classify, config as cfg, curvature4, linalg, oracle
from .canal import canal_point, canal_partials_closed, make_probe, offset_coefficients
from .curve import frenet_apparatus
from .errors import ConfigError, GeometryError

SCHEMA_VERSION = 1
WEINGARTEN_STEP = 1e-4   # micro-lattice spacing for parameter derivatives


def _fmt(x):
    return f"{float(x):.17g}"


def _pmap(fn, items):
    """Order-preserving map, optionally fanned out over CANAL_THREADS."""
    workers = int(os.environ.get("CANAL_THREADS", "1") or "1")
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json_report(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# sample

def _wrap_flags(rc):
    patch = rc.patch
    wraps = []
    for i, (lo, hi) in enumerate(patch.param_box()):
        if i == 0:
            wraps.append(patch.curve.kind == "circle"
                         and abs((hi - lo) - (patch.curve.domain[1] - patch.curve.domain[0])) < 1e-9)
        else:
            wraps.append(abs((hi - lo) - cfg.TWO_PI) < 1e-9)
    return wraps


def cmd_sample(rc: cfg.RunConfig, out, fmt, slice_v3=None):
    patch = rc.patch
    if slice_v3 is not None:
        if patch.n != 4:
            raise ConfigError("--slice-v3 applies to n = 4 patches only")
        axes = cfg.grid_axes(patch, rc.grid, rc.fd_step)[:2]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = [m.ravel() for m in mesh]
        pts = np.stack(flat + [np.full_like(flat[0], float(slice_v3))], axis=-1)
    else:
        pts = cfg.grid_points(patch, rc.grid, rc.fd_step)
    coords = _pmap(lambda p: canal_point(patch, p), pts)
    if fmt == "obj":
        if patch.n != 3:
            raise ConfigError("OBJ export is only available for n = 3")
        text = _obj_mesh(rc, coords)
    else:
        header = ",".join([f"v{i}" for i in range(1, patch.n)]
                          + [f"x{i}" for i in range(1, patch.n + 1)])
        lines = [header]
        for p, x in zip(pts, coords):
            lines.append(",".join(_fmt(v) for v in list(p) + list(x)))
        text = "\n".join(lines) + "\n"
    _write_text(out, text)
    return 0


def _obj_mesh(rc, coords):
    n1, n2 = rc.grid
    wrap1, wrap2 = _wrap_flags(rc)
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in coords]
    idx = lambda i, j: (i % n1) * n2 + (j % n2) + 1
    imax = n1 if wrap1 else n1 - 1
    jmax = n2 if wrap2 else n2 - 1
    for i in range(imax):
        for j in range(jmax):
            a, b = idx(i, j), idx(i + 1, j)
            c, d = idx(i + 1, j + 1), idx(i, j + 1)
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# curvature

def _report_at(patch, pt):
    fren = frenet_apparatus(patch.curve, pt[0])
    prof = patch.profile.at(pt[0])
    return curvature4.curvature_report(fren, prof, pt[1], pt[2],
                                       location=tuple(pt))


def cmd_curvature(rc: cfg.RunConfig, out, fmt):
    patch = rc.patch
    if patch.n != 4:
        raise ConfigError("curvature reports require an E^4 patch")
    pts = cfg.grid_points(patch, rc.grid, rc.fd_step)
    reports = _pmap(lambda p: _report_at(patch, p), pts)
    lines = ["v1,v2,v3,K,H,kappa1,kappa2,kappa3,identity_residual"]
    for r in reports:
        lines.append(",".join(_fmt(v) for v in
                              list(r.location) + [r.K, r.H, *r.principal,
                                                  r.identity_residual]))
    ks = [r.K for r in reports]
    hs = [r.H for r in reports]
    summary = {
        "schema": SCHEMA_VERSION,
        "count": len(reports),
        "K": {"min": min(ks), "max": max(ks)},
        "H": {"min": min(hs), "max": max(hs)},
        "max_identity_residual": max(r.identity_residual for r in reports),
    }
    _write_text(out, "\n".join(lines) + "\n")
    sys.stdout.write(_json_report(summary))
    return 0


# ---------------------------------------------------------------------------
# verify

def _weingarten_lattice(patch, pair, base, nodes=7, step=WEINGARTEN_STEP):
    """Closed-form K and H on a micro-lattice in the pair plane around base."""
    axis_i, axis_j = int(pair[0]) - 1, int(pair[1]) - 1
    offs = (np.arange(nodes) - nodes // 2) * step
    kg = np.empty((nodes, nodes))
    hg = np.empty((nodes, nodes))
    for a, da in enumerate(offs):
        for b, db in enumerate(offs):
            p = list(base)
            p[axis_i] += da
            p[axis_j] += db
            fren = frenet_apparatus(patch.curve, p[0])
            prof = patch.profile.at(p[0])
            kg[a, b] = curvature4.gaussian_curvature(fren, prof, p[1], p[2])
            hg[a, b] = curvature4.mean_curvature(fren, prof, p[1], p[2])
    return kg, hg


def _weingarten_check(patch, pair, bases):
    worst = 0.0
    ok = True
    for base in bases:
        kg, hg = _weingarten_lattice(patch, pair, base)
        _, verdict, max_res = classify.weingarten_residual(
            kg, hg, pair, (WEINGARTEN_STEP, WEINGARTEN_STEP))
        worst = max(worst, max_res)
        ok = ok and verdict
    return ok, worst


def run_verification(rc: cfg.RunConfig, n_random=200):
    patch = rc.patch
    ts = rc.tolerance_scale
    rng = np.random.default_rng(rc.seed)
    steps = cfg.probe_steps(patch, rc.fd_step)
    pts = cfg.random_points(patch, n_random, rng, rc.fd_step)
    probe = make_probe(patch, mode="fd", fd_step=steps)
    k_fault = float(rc.inject.get("k_scale", 1.0))
    checks = []

    def add(name, residual, tol, informational=False, ok=None):
        ok = (residual <= tol) if ok is None else ok
        checks.append({"check": name, "max_residual": float(residual),
                       "tolerance": float(tol), "pass": bool(ok),
                       "informational": bool(informational)})

    # construction invariants
    res_sphere = res_norm = res_orth = 0.0
    for pt in pts:
        v1 = pt[0]
        prof = patch.profile.at(v1)
        alpha = patch.curve.eval(v1, 0)[0]
        x = canal_point(patch, pt)
        rho2 = prof[0] ** 2
        res_sphere = max(res_sphere, abs(np.dot(x - alpha, x - alpha) - rho2) / rho2)
        a = offset_coefficients(prof, pt[1:], patch.n)
        res_norm = max(res_norm, abs(sum(ai * ai for ai in a) - rho2))
        first, _ = oracle.fd_jet(probe, pt)
        for d in first:
            res_orth = max(res_orth, abs(np.dot(x - alpha, d)))
    add("sphere_membership", res_sphere, 1e-10 * ts)
    add("coefficient_normalization", res_norm, 1e-12 * ts)
    add("offset_orthogonality", res_orth, 1e-6 * ts)

    is_e4 = patch.n == 4
    if is_e4:
        # closed first partials vs finite differences
        res_part = 0.0
        for pt in pts:
            closed = canal_partials_closed(patch, pt)
            fd_first, _ = oracle.fd_jet(probe, pt)
            for cvec, dvec in zip(closed, fd_first):
                scale = max(1.0, float(np.linalg.norm(cvec)))
                res_part = max(res_part, float(np.linalg.norm(cvec - dvec)) / scale)
        add("closed_partials_fd", res_part, 1e-6 * ts)

        # det g factorization, identity, principal curvatures, oracle agreement
        res_detg = res_ident = res_princ = res_tr = 0.0
        res_k = res_h = 0.0
        for pt in pts:
            fren = frenet_apparatus(patch.curve, pt[0])
            prof = patch.profile.at(pt[0])
            g, det_fact, _ = curvature4.first_form(fren, prof, pt[1], pt[2])
            res_detg = max(res_detg, abs(linalg.det(g) - det_fact)
                           / max(abs(det_fact), 1e-30))
            big_k = k_fault * curvature4.gaussian_curvature(fren, prof, pt[1], pt[2])
            big_h = curvature4.mean_curvature(fren, prof, pt[1], pt[2])
            res_ident = max(res_ident, curvature4.identity_residual(
                big_k / k_fault, big_h, prof[0]))
            kap = curvature4.principal_curvatures(fren, prof, pt[1], pt[2])
            s = curvature4.shape_operator(fren, prof, pt[1], pt[2])
            res_princ = max(res_princ, max(
                abs(a - b) for a, b in zip(sorted(kap), linalg.eig_shape3(s))))
            res_tr = max(res_tr,
                         abs(np.trace(s) - 3.0 * big_h),
                         abs(linalg.det(s) - big_k / k_fault))
            of = oracle.oracle_forms(probe, pt,
                                     reference_normal=curvature4.unit_normal(
                                         fren, prof, pt[1], pt[2]))
            kscale = max(1.0, abs(of.K))
            hscale = max(1.0, abs(of.H))
            res_k = max(res_k, abs(big_k - of.K) / kscale)
            res_h = max(res_h, abs(big_h - of.H) / hscale)
        add("detg_factorization", res_detg, 1e-9 * ts)
        add("curvature_identity", res_ident, 1e-9 * ts)
        add("principal_curvatures", res_princ, 1e-8 * ts)
        add("shape_trace_det", res_tr, 1e-10 * ts)
        add("oracle_agreement_K", res_k, 1e-4 * ts)
        add("oracle_agreement_H", res_h, 1e-4 * ts)

        if patch.curve.analytic_order >= patch.n + 2:
            probe_t = make_probe(patch, mode="taylor", fd_step=steps)
            res_kt = res_ht = 0.0
            for pt in pts[: min(50, len(pts))]:
                fren = frenet_apparatus(patch.curve, pt[0])
                prof = patch.profile.at(pt[0])
                big_k = k_fault * curvature4.gaussian_curvature(fren, prof, pt[1], pt[2])
                big_h = curvature4.mean_curvature(fren, prof, pt[1], pt[2])
                of = oracle.oracle_forms(probe_t, pt,
                                         reference_normal=curvature4.unit_normal(
                                             fren, prof, pt[1], pt[2]))
                res_kt = max(res_kt, abs(big_k - of.K) / max(1.0, abs(of.K)))
                res_ht = max(res_ht, abs(big_h - of.H) / max(1.0, abs(of.H)))
            add("oracle_agreement_K_exact", res_kt, 1e-6 * ts)
            add("oracle_agreement_H_exact", res_ht, 1e-6 * ts)

        # Weingarten pairs on micro-lattices around a few admissible points
        bases = pts[: min(3, len(pts))]
        tubular = patch.profile.kind == "constant"
        ok, worst = _weingarten_check(patch, "23", bases)
        add("weingarten_23", worst, WEINGARTEN_STEP, ok=ok)
        for pair in ("12", "13"):
            ok, worst = _weingarten_check(patch, pair, bases)
            add(f"weingarten_{pair}", worst, WEINGARTEN_STEP, ok=ok,
                informational=not tubular)
        if tubular:
            lam = patch.profile.at(patch.param_box()[0][0] + 1e-3)[0]
            kg = np.array([k_fault * curvature4.gaussian_curvature(
                frenet_apparatus(patch.curve, p[0]),
                patch.profile.at(p[0]), p[1], p[2]) for p in pts])
            hg = np.array([curvature4.mean_curvature(
                frenet_apparatus(patch.curve, p[0]),
                patch.profile.at(p[0]), p[1], p[2]) for p in pts])
            add("linear_weingarten_closed",
                classify.linear_weingarten_check(lam, kg / k_fault, hg), 1e-9 * ts)
            ok_list, oh_list = [], []
            for p in pts[:50]:
                fren = frenet_apparatus(patch.curve, p[0])
                prof = patch.profile.at(p[0])
                of = oracle.oracle_forms(probe, p,
                                         reference_normal=curvature4.unit_normal(
                                             fren, prof, p[1], p[2]))
                ok_list.append(of.K)
                oh_list.append(of.H)
            add("linear_weingarten_oracle",
                classify.linear_weingarten_check(lam, np.array(ok_list),
                                                 np.array(oh_list)), 5e-4 * ts)

    overall = all(c["pass"] for c in checks if not c["informational"])
    return {"schema": SCHEMA_VERSION, "seed": rc.seed,
            "patch": {"curve": patch.curve.kind, "radius": patch.profile.kind,
                      "n": patch.n},
            "checks": checks, "pass": overall}


def cmd_verify(rc: cfg.RunConfig, out, fmt):
    report = run_verification(rc)
    _write_text(out, _json_report(report))
    return 0 if report["pass"] else 1


# ---------------------------------------------------------------------------
# classify

def cmd_classify(rc: cfg.RunConfig, out, fmt):
    patch = rc.patch
    if patch.n != 4:
        raise ConfigError("classification requires an E^4 patch")
    rng = np.random.default_rng(rc.seed)
    grid = cfg.grid_points(patch, rc.grid, rc.fd_step)
    verdict = classify.ClassificationVerdict()
    verdict.flat = classify.classify_flat(patch, grid)
    verdict.minimal = classify.classify_minimal(patch, grid)
    bases = cfg.random_points(patch, 3, rng, rc.fd_step)
    for pair in ("12", "13", "23"):
        ok, worst = _weingarten_check(patch, pair, bases)
        verdict.weingarten_pairs[pair] = {"weingarten": ok, "max_residual": worst}
    if patch.profile.kind == "constant":
        lam = patch.profile.at(grid[0][0])[0]
        ks, hs = [], []
        for p in grid:
            fren = frenet_apparatus(patch.curve, p[0])
            prof = patch.profile.at(p[0])
            ks.append(curvature4.gaussian_curvature(fren, prof, p[1], p[2]))
            hs.append(curvature4.mean_curvature(fren, prof, p[1], p[2]))
        verdict.linear_weingarten = {
            "a": -3.0 * lam, "b": lam ** 3, "c": 2.0,
            "max_residual": classify.linear_weingarten_check(
                lam, np.array(ks), np.array(hs)),
        }
    doc = {"schema": SCHEMA_VERSION, "verdict": verdict.to_dict()}
    _write_text(out, _json_report(doc))
    return 0


# ---------------------------------------------------------------------------
# catenoid

def cmd_catenoid(args, out):
    prof = classify.solve_catenoid(args.a, args.rho0,
                                   (0.0, args.span), args.step)
    lines = ["v1,rho,drho,d2rho,d3rho"]
    for row in zip(prof.v1, prof.rho, prof.drho, prof.d2rho, prof.d3rho):
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(out, "\n".join(lines) + "\n")
    if args.check_h:
        patch = cfg.parse_patch({
            "curve": {"kind": "line", "point": [0.0] * 4,
                      "direction": [1.0, 0.0, 0.0, 0.0],
                      "domain": [0.0, args.span]},
            "radius": {"kind": "catenoid", "a": args.a, "rho0": args.rho0,
                       "span": [0.0, args.span], "step": args.step},
            "n": 4,
        })
        worst = 0.0
        for p in cfg.grid_points(patch, (10, 10, 10)):
            fren = frenet_apparatus(patch.curve, p[0])
            worst = max(worst, abs(curvature4.mean_curvature(
                fren, patch.profile.at(p[0]), p[1], p[2])))
        sys.stdout.write(_json_report(
            {"schema": SCHEMA_VERSION, "max_abs_H": worst,
             "pass": worst <= classify.MINIMAL_H_TOL}))
        return 0 if worst <= classify.MINIMAL_H_TOL else 1
    return 0


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    ap = argparse.ArgumentParser(prog="canalgeom",
                                 description="Canal hypersurface toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("sample", "curvature", "verify", "classify"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default="-")
        p.add_argument("--format", default=None, choices=["csv", "json", "obj"])
        p.add_argument("--grid", default=None, help="per-axis node counts, e.g. 20x20x20")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--fd-step", type=float, default=None)
        p.add_argument("--tolerance-scale", type=float, default=None)
        if name == "sample":
            p.add_argument("--slice-v3", type=float, default=None,
                           help="fix v3 and sample a 2-surface slice (n = 4)")
    p = sub.add_parser("catenoid")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--rho0", type=float, default=None)
    p.add_argument("--span", type=float, default=2.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--out", default="-")
    p.add_argument("--check-h", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "catenoid":
            return cmd_catenoid(args, args.out)
        rc = cfg.load_run_config(args.config)
        if args.grid:
            rc.grid = tuple(int(x) for x in args.grid.lower().split("x"))
        if args.seed is not None:
            rc.seed = args.seed
        if args.fd_step is not None:
            rc.fd_step = args.fd_step
        if args.tolerance_scale is not None:
            rc.tolerance_scale = args.tolerance_scale
        fmt = args.format or ("obj" if rc.patch.n == 3 and args.command == "sample"
                              else "csv")
        if args.command == "sample":
            return cmd_sample(rc, args.out, fmt, slice_v3=args.slice_v3)
        dispatch = {"curvature": cmd_curvature, "verify": cmd_verify,
                    "classify": cmd_classify}
        return dispatch[args.command](rc, args.out, fmt)
    except ConfigError as exc:
        sys.stderr.write(_json_report({"error": "config", "message": str(exc)}))
        return 2
    except GeometryError as exc:
        sys.stderr.write(_json_report({"error": "numeric", "message": str(exc)}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
