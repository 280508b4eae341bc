"""Command-line front end.

Exit codes: 0 ok, 1 not Runge (or a failed verification suite), 2 bad
input, 3 domains not nested, 4 not approximable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .corpus import CorpusConfig
from .domain import load_spec, normalize_box, rasterize
from .errors import NotRunge, RungePairsError, SpecParseError
from .homology import analyze, betti_report, h3_presentation
from .planar import H1Class, cycle_from_class
from .runge import (Circle, best_polynomial, error_curve, obstruction_lower_bound, pole_push,
                    quaternionic_approx, runge_decide)
from .stem import ComplexRational, RationalStem

DEFAULT_RESOLUTION = 129


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out_dir: Path | None, name: str):
    text = _dumps(obj)
    sys.stdout.write(text)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / name).write_text(text, encoding="utf-8")


def _parse_box(text):
    if text is None:
        return None
    try:
        return normalize_box([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise SpecParseError(f"bad --box {text!r}: {exc}") from exc


def _grid(path, args):
    spec, opts = load_spec(path)
    res = args.resolution or opts.get("resolution") or DEFAULT_RESOLUTION
    box = _parse_box(args.box) or (normalize_box(opts["box"]) if "box" in opts else None)
    return spec, rasterize(spec, box, res)


def _out_dir(args) -> Path | None:
    return Path(args.out_dir) if args.out_dir else None


# -- commands ----------------------------------------------------------------

def cmd_topology(args) -> int:
    _, G = _grid(args.spec, args)
    an = analyze(G)
    atlas = an.atlas
    summary = {
        "resolution": list(G.resolution), "box": list(G.box),
        "components": atlas.n_components,
        "bounded": len(atlas.bounded_ids), "unbounded": len(atlas.unbounded_ids),
        "bounded_components": [{"id": c, "cells": int(np.sum(atlas.labels == c)),
                                "representative": [atlas.rep_point(c).real, atlas.rep_point(c).imag],
                                "conjugate": int(atlas.conj[c]), "meets_real_axis": atlas.meets_real_row(c)}
                               for c in atlas.bounded_ids],
        "intervals": len(an.regions.intervals),
        "real_intervals": [[G.center(G.real_row, a).real, G.center(G.real_row, b).real]
                           for a, b in an.regions.intervals],
        "inside_cells": int(G.inside.sum()),
    }
    out = _out_dir(args)
    _emit(summary, out, "topology.json")
    if out is not None:
        from .plotting import plot_atlas, plot_mask
        plot_mask(G, out / "domain.svg")
        cyc = None
        if atlas.bounded_ids:
            cyc = cycle_from_class(G, atlas, H1Class(tuple((c, 1) for c in atlas.bounded_ids)))
        plot_atlas(atlas, out / "topology.svg", cycle=cyc)
        (out / "domain.txt").write_text(G.to_text(), encoding="utf-8")
    return 0


def cmd_betti(args) -> int:
    _, G = _grid(args.spec, args)
    rep = betti_report(G).to_json()
    rep["h3"] = h3_presentation(G).to_json()
    rep["resolution"] = list(G.resolution)
    _emit(rep, _out_dir(args), "betti.json")
    return 0


def cmd_runge(args) -> int:
    _, D = _grid(args.spec_d, args)
    _, D1 = _grid(args.spec_d1, args)
    rep = runge_decide(D, D1)
    out = rep.to_json()
    out["betti"] = {"D": list(betti_report(D).betti.as_tuple()), "D1": list(betti_report(D1).betti.as_tuple())}
    o = _out_dir(args)
    _emit(out, o, "runge.json")
    if o is not None:
        from .plotting import plot_atlas, plot_pair
        plot_pair(D, D1, o / "pair.svg")
        plot_atlas(analyze(D).atlas, o / "atlas_D.svg", title="complement of D")
        plot_atlas(analyze(D1).atlas, o / "atlas_D1.svg", title="complement of D1")
    return 0 if rep.runge else 1


def cmd_verify(args) -> int:
    from .verify import SUITES, records_csv, run_suites
    res_list = tuple(int(v) for v in args.resolutions.split(","))
    cfg = CorpusConfig(seed=args.seed, count=args.count, resolutions=res_list)
    if args.count == 0:
        print("warning: empty corpus, corpus suites pass vacuously", file=sys.stderr)
    results, records = run_suites(cfg, inject_bug=args.inject_bug, jobs=args.jobs,
                                  roundtrip_domains=min(args.roundtrip, args.count),
                                  norm_samples=args.norm_samples)
    summary = {"config": cfg.to_json(), "inject_bug": args.inject_bug,
               "suites": {name: results[name].to_json() for name in SUITES},
               "passed": all(r.passed for r in results.values())}
    o = _out_dir(args)
    _emit(summary, o, "verify.json")
    if o is not None:
        (o / "records.csv").write_text(records_csv(records), encoding="utf-8")
    for name in SUITES:
        r = results[name]
        print(f"{name}: {'pass' if r.passed else 'FAIL'} ({r.checked} checked, {r.violations} violations)",
              file=sys.stderr)
    return 0 if summary["passed"] else 1


def _load_function(path):
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(obj, dict) and "terms" in obj:
        return RationalStem.from_json(obj)
    return ComplexRational.from_json(obj)


def _parse_contour(text, G, atlas, comp):
    if text and text.startswith("circle:"):
        try:
            cx, cy, r = (float(v) for v in text[len("circle:"):].split(","))
        except ValueError as exc:
            raise SpecParseError(f"bad --contour {text!r}") from exc
        return Circle(complex(cx, cy), r)
    return cycle_from_class(G, atlas, H1Class(((comp, 1),)))


def _curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "total_degree", "sup_error"])
    for eps, deg, err in rows:
        w.writerow([repr(float(eps)), deg, repr(float(err))])
    return buf.getvalue()


def cmd_approx(args) -> int:
    _, D = _grid(args.spec_d, args)
    _, D1 = _grid(args.spec_d1, args)
    Kspec, _ = load_spec(args.K)
    K = rasterize(Kspec, D.box, D.resolution).inside
    if np.any(K & ~D.inside):
        raise SpecParseError("compact set K is not contained in D")
    fn = _load_function(args.stem)
    o = _out_dir(args)
    rep = runge_decide(D, D1)
    if not rep.runge:
        atlas = analyze(D).atlas
        bad = rep.witnesses["v"]["components"]
        scalars = [r for r, _ in fn.terms] if isinstance(fn, RationalStem) else [fn]
        pts = D.centers()[K] if K.any() else D.centers()[D.inside]
        report = []
        for comp in bad:
            contour = _parse_contour(args.contour, D, atlas, comp)
            for t, r in enumerate(scalars):
                g = best_polynomial(r, pts, args.obstruction_degree)
                lb = obstruction_lower_bound(r, contour, g)
                report.append({"component": comp, "term": t, "candidate_degree": args.obstruction_degree,
                               "obstruction_lower_bound": lb})
        best = max((e["obstruction_lower_bound"] for e in report), default=0.0)
        _emit({"runge": False, "witnesses": rep.witnesses, "obstruction": report,
               "obstruction_max": best}, o, "approx.json")
        return NotRunge.exit_code
    if isinstance(fn, RationalStem):
        G, res = quaternionic_approx(fn, D, D1, K, args.eps, cap=args.max_order)
        approximant = G.to_json()
        rows = []
        for r, _ in fn.terms:
            rows += error_curve(r, D, D1, K, _eps_ladder(args.eps))
    else:
        g, res = pole_push(fn, D, D1, K, args.eps, cap=args.max_order)
        approximant = g.to_json()
        rows = error_curve(fn, D, D1, K, _eps_ladder(args.eps))
    result = res.to_json()
    _emit({"runge": True, "result": result, "approximant": approximant}, o, "approx.json")
    if o is not None:
        (o / "error_curve.csv").write_text(_curve_csv(rows), encoding="utf-8")
        from .plotting import plot_error_curve, plot_routes
        plot_error_curve(rows, o / "error_curve.svg")
        if res.plan is not None:
            plot_routes(D, K, res.plan, o / "routes.svg")
    return 0 if res.success else 4


def _eps_ladder(eps: float) -> list[float]:
    out = []
    e = 1e-1
    while e > eps * 1.0001:
        out.append(e)
        e /= 10
    out.append(eps)
    return out


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--resolution", type=int, default=None,
                        help=f"cells per side, odd (default {DEFAULT_RESOLUTION} or the value in the domain file)")
    common.add_argument("--box", default=None, help="xmin,xmax,ymax (symmetric about the real axis)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--out-dir", default=None, help="write JSON/CSV/SVG files here")
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="rungepairs",
                                description="Runge pairs of symmetric planar domains and their quaternionic hulls.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("topology", parents=[common], help="complement components and real trace")
    s.add_argument("spec")
    s.set_defaults(func=cmd_topology)

    s = sub.add_parser("betti", parents=[common], help="Betti numbers of the quaternionic domain")
    s.add_argument("spec")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("runge", parents=[common], help="decide whether D is Runge in D1")
    s.add_argument("spec_d")
    s.add_argument("spec_d1")
    s.set_defaults(func=cmd_runge)

    s = sub.add_parser("verify", parents=[common], help="run the property suites on a seeded corpus")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--resolutions", default="65,129,257")
    s.add_argument("--roundtrip", type=int, default=50, help="number of domains in the roundtrip suite")
    s.add_argument("--norm-samples", type=int, default=10_000)
    s.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("approx", parents=[common], help="approximate a rational stem by pole pushing")
    s.add_argument("spec_d")
    s.add_argument("spec_d1")
    s.add_argument("--stem", required=True, help="RationalStem or ComplexRational JSON")
    s.add_argument("--K", required=True, help="domain spec of the compact set (must lie in D)")
    s.add_argument("--eps", type=float, default=1e-6)
    s.add_argument("--max-order", type=int, default=1000)
    s.add_argument("--contour", default=None, help="'circle:cx,cy,r' (default: collar of the witness component)")
    s.add_argument("--obstruction-degree", type=int, default=50)
    s.set_defaults(func=cmd_approx)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RungePairsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
