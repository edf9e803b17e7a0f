"""Command-line front end: ``list``, ``analyze`` and ``verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from . import verification as V
from .classification import DEFAULT_TOL, PlaneSampler, classify_point
from .geometry import (
    CATALOG,
    CatalogError,
    Chart,
    DomainError,
    NumericError,
    parse_manifold_id,
    point_frame,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# charts exercised by ``verify``; controls must be detected, not passed
KAEHLER_CHARTS = ("flat:n=2", "cpn:n=2,c=4", "chn:n=1,c=-4", "chn:n=2,c=-4",
                  "s2xs2", "s2xs2:r1=1,r2=2")
SYMMETRIC_CHARTS = ("flat:n=2", "cpn:n=2,c=4", "chn:n=2,c=-4", "s2xs2", "s2xs2:r1=1,r2=2")
CHSC_CHARTS = ("flat:n=2", "cpn:n=2,c=4", "chn:n=2,c=-4")
BUMP, TWISTED = "cpn-bump", "cpn-twisted"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    manifold: Optional[str] = None
    points: Optional[list] = None
    random_points: int = 1
    seed: int = 0
    tol: Optional[float] = None
    samples: int = 500
    fmt: str = "text"
    suites: tuple = ()
    dims: tuple = (4, 6)


def _fmt_num(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def load_schema() -> dict:
    """The shipped JSON schema for ``analyze`` and ``verify`` documents."""
    text = resources.files("kaehlersym").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)


# ---------------------------------------------------------------------------
# list


def cmd_list(out=None) -> int:
    out = out or sys.stdout
    for name, entry in CATALOG.items():
        params = ", ".join(f"{k}: {v}" for k, v in entry["params"].items())
        defaults = ",".join(f"{k}={v}" for k, v in entry["defaults"].items())
        print(f"{name}", file=out)
        print(f"  params:   {params}", file=out)
        print(f"  defaults: {defaults}", file=out)
        print(f"  truth:    {entry['truth']}", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze

_SHORT = {"holds": "yes", "fails": "no", "undetermined": "?"}
_COLUMNS = ("flat", "csc", "chsc", "locally_symmetric", "semisymmetric",
            "deszcz_pseudosymmetric", "holomorphically_pseudosymmetric")
_HEADERS = ("flat", "csc", "chsc", "loc.sym", "semisym", "Deszcz-ps", "hol-ps")


def _points(chart: Chart, config: RunConfig) -> list:
    if config.points is not None:
        return [chart.check_point(p) for p in config.points]
    return chart.sample_points(config.random_points, np.random.default_rng(config.seed))


def analyze_documents(config: RunConfig) -> dict:
    chart = parse_manifold_id(config.manifold)
    tol = DEFAULT_TOL if config.tol is None else config.tol
    sampler = PlaneSampler(config.samples, config.seed)
    reports = []
    for idx, p in enumerate(_points(chart, config)):
        doc = classify_point(chart, p, sampler, tol).to_dict()
        doc.update(manifold=chart.id, index=idx, seed=config.seed)
        reports.append(doc)
    return {"command": "analyze", "manifold": chart.id, "seed": config.seed, "tol": tol,
            "samples": config.samples, "reports": reports}


def _analyze_table(doc: dict) -> str:
    lines = [f"manifold {doc['manifold']}  seed {doc['seed']}  tol {doc['tol']:g}  "
             f"samples {doc['samples']}"]
    head = ["#"] + list(_HEADERS) + ["c", "c~", "L", "f"]
    rows = []
    for r in doc["reports"]:
        fit = r["fitted"]
        rows.append([str(r["index"])] + [_SHORT[r["flags"][k]] for k in _COLUMNS]
                    + [_fmt_num(fit.get(k)) for k in ("c", "c_tilde", "L", "f")])
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(head)]
    lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    for r in doc["reports"]:
        for note in r["notes"]:
            lines.append(f"  [{r['index']}] {note}")
    return "\n".join(lines)


def cmd_analyze(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    doc = analyze_documents(config)
    print(_dump(doc) if config.fmt == "json" else _analyze_table(doc), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _chart_points(mid: str, config: RunConfig, salt: int) -> tuple[Chart, list]:
    chart = parse_manifold_id(mid)
    if config.points is not None and config.manifold is not None:
        return chart, [chart.check_point(p) for p in config.points]
    rng = np.random.default_rng([config.seed, salt])
    return chart, chart.sample_points(max(config.random_points, 1), rng)


def _tol(config, default):
    return default if config.tol is None else config.tol


def _rotation(chart_points, config):
    chart, ps = chart_points
    return V.verify_rotation_interpretation(chart, ps[0], tol=_tol(config, 1e-6), seed=config.seed)


def _plan(config: RunConfig) -> list:
    """``(suite_id, role, expected, thunk)`` entries in a fixed order."""
    s, n = config.seed, config.samples
    subjects = (lambda ids: [config.manifold]) if config.manifold else (lambda ids: list(ids))
    plan = []

    def add(sid, role, expected, fn):
        plan.append((sid, role, expected, fn))

    def pts(mid, salt):
        return _chart_points(mid, config, salt)

    for i, mid in enumerate(subjects(CHSC_CHARTS + ("s2xs2",))):
        add("ogiue", "control" if mid == "s2xs2" else "positive",
            "property=fails" if mid == "s2xs2" else "pass",
            lambda mid=mid, i=i: V.verify_ogiue(*pts(mid, i), n, _tol(config, 1e-9), s))
    for i, mid in enumerate(subjects(KAEHLER_CHARTS + (BUMP, TWISTED))):
        ctrl = mid.startswith(TWISTED)
        add("j-symmetries", "control" if ctrl else "positive", "fail" if ctrl else "pass",
            lambda mid=mid, i=i: V.verify_j_symmetries(*pts(mid, i), 2 * n,
                                                       _tol(config, 1e-9), s))
    for order, sid in ((6, "prop-auxalg"), (5, "prop-auxalg2")):
        for d in config.dims:
            add(sid, "positive", "pass",
                lambda d=d, order=order: V.verify_prop_auxalg(d, order, None, s))
        d0 = min(config.dims)
        add(sid, "control", "fail",
            lambda d0=d0, order=order: V.verify_prop_auxalg(d0, order, "c", s))
    for i, mid in enumerate(subjects(KAEHLER_CHARTS + (BUMP,))):
        add("chsc-equiv", "positive", "pass",
            lambda mid=mid, i=i: V.verify_chsc_equivalences(*pts(mid, i), n,
                                                            _tol(config, 1e-8), s))
    for i, mid in enumerate(subjects(("flat:n=2", "cpn:n=2,c=4", "s2xs2", BUMP))):
        add("rotation-interp", "positive", "pass",
            lambda mid=mid, i=i: _rotation(pts(mid, i), config))
    for i, mid in enumerate(subjects(SYMMETRIC_CHARTS + (BUMP,))):
        ctrl = mid.startswith(BUMP)
        exp = "property=fails" if ctrl else "property=holds"

        def run_locsym(mid=mid, i=i):
            chart = parse_manifold_id(mid)
            curves = V.random_curves(chart, max(config.random_points, 1),
                                     np.random.default_rng([s, i]))
            return V.verify_locsym_charac(chart, curves, n, _tol(config, 1e-7), s)

        add("locsym", "control" if ctrl else "positive", exp, run_locsym)
        add("semisym", "control" if ctrl else "positive", exp,
            lambda mid=mid, i=i: V.verify_semisym_charac(*pts(mid, i), n,
                                                         _tol(config, 1e-8), s))
    for i, mid in enumerate(subjects(KAEHLER_CHARTS + (BUMP,))):
        add("holps", "positive", "pass",
            lambda mid=mid, i=i: V.verify_holps_charac(*pts(mid, i), 2 * n,
                                                       _tol(config, 1e-9), s))

    def run_pi():
        frames = []
        for i, mid in enumerate(subjects(KAEHLER_CHARTS + (BUMP, TWISTED))):
            chart, ps = pts(mid, i)
            frames += [point_frame(chart, p).orthonormal() for p in ps]
        rng = np.random.default_rng([s, 99])
        frames += [V.random_hermitian_frame(d, rng) for d in (2, 4, 6) for _ in range(17)]
        return V.verify_pi_dot_pi(frames, _tol(config, 1e-12),
                                  config.manifold or "catalog+random")

    add("pi-dot-pi", "positive", "pass", run_pi)
    order = {sid: k for k, sid in enumerate(V.SUITE_IDS)}
    plan = [e for e in plan if e[0] in config.suites]
    return sorted(plan, key=lambda e: order[e[0]])


def expectation_met(result: V.SuiteResult, expected: str) -> bool:
    if expected == "pass":
        return result.passed
    if expected == "fail":
        return not result.passed
    want = expected.split("=", 1)[1]
    return result.passed and result.property == want


def verify_documents(config: RunConfig) -> dict:
    entries = []
    for sid, role, expected, fn in _plan(config):
        res = fn()
        doc = res.to_dict()
        doc.update(role=role, expected=expected, met=expectation_met(res, expected))
        entries.append(doc)
    return {"command": "verify", "seed": config.seed, "tol": config.tol,
            "samples": config.samples, "suites": entries,
            "all_met": all(e["met"] for e in entries)}


def _verify_table(doc: dict) -> str:
    lines = [f"seed {doc['seed']}  tol {'suite defaults' if doc['tol'] is None else doc['tol']}"]
    for e in doc["suites"]:
        prop = f"  property={e['property']}" if e["property"] else ""
        status = "OK " if e["met"] else "BAD"
        lines.append(f"{status} {e['suite']:<16} {e['subject']:<22} {e['role']:<8} "
                     f"cases={e['cases_run']:<3} max_residual={e['max_residual']:.3e} "
                     f"tol={e['tol']:.0e} pass={e['pass']}{prop} expected={e['expected']}")
    lines.append("all expectations met" if doc["all_met"] else "SOME EXPECTATIONS NOT MET")
    return "\n".join(lines)


def cmd_verify(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    doc = verify_documents(config)
    print(_dump(doc) if config.fmt == "json" else _verify_table(doc), file=out)
    return EXIT_OK if doc["all_met"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument handling


def _parse_points(text: str):
    """``"5"`` is a random count; ``"0.1,0,0,0;0.2,0,0,0"`` an explicit list."""
    try:
        count = int(text)
    except ValueError:
        pass
    else:
        if count < 1:
            raise UsageError("--points must be >= 1")
        return count, None
    try:
        pts = [np.array([float(v) for v in chunk.split(",")]) for chunk in text.split(";")]
    except ValueError:
        raise UsageError(f"cannot parse points {text!r}") from None
    return None, pts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kaehlersym",
        description="Curvature symmetry classification and verification suites for Kaehler charts.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="catalog ids, parameters and known classifications")

    def common(p):
        p.add_argument("--manifold", help="catalog id such as cpn:n=2,c=4")
        p.add_argument("--points", "--random-points", dest="points", default=None,
                       help="random point count N, or explicit 'x0,y0,...;x0,y0,...'")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--samples", type=int, default=500)
        p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")

    pa = sub.add_parser("analyze", help="classify a catalog chart at points")
    pa.add_argument("manifold_pos", nargs="?", metavar="MANIFOLD")
    common(pa)
    pv = sub.add_parser("verify", help="run verification suites")
    common(pv)
    pv.add_argument("--suite", default="all", help="suite id, comma list, or 'all'")
    pv.add_argument("--dim", type=int, action="append", default=None,
                    help="dimension for the rank suites (repeatable; default 4 and 6)")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(seed=args.seed, tol=args.tol, samples=args.samples, fmt=args.fmt)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    cfg.manifold = args.manifold
    if args.command == "analyze":
        if args.manifold_pos and args.manifold and args.manifold_pos != args.manifold:
            raise UsageError("conflicting manifold arguments")
        cfg.manifold = args.manifold_pos or args.manifold
        if not cfg.manifold:
            raise UsageError("analyze needs a manifold id")
    if args.points is not None:
        count, pts = _parse_points(args.points)
        cfg.random_points = count or 1
        cfg.points = pts
    elif args.command == "verify":
        cfg.random_points = 3
    if args.command == "verify":
        names = V.SUITE_IDS if args.suite == "all" else tuple(
            x.strip() for x in args.suite.split(","))
        unknown = [x for x in names if x not in V.SUITE_IDS]
        if unknown:
            raise UsageError(f"unknown suite id(s): {', '.join(unknown)}; "
                             f"known: {', '.join(V.SUITE_IDS)}")
        cfg.suites = tuple(names)
        if args.dim:
            if any(d < 2 or d % 2 for d in args.dim):
                raise UsageError("--dim must be an even integer >= 2")
            cfg.dims = tuple(sorted(set(args.dim)))
        if cfg.manifold:
            parse_manifold_id(cfg.manifold)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "list":
            return cmd_list()
        config = config_from_args(args)
        if args.command == "analyze":
            return cmd_analyze(config)
        return cmd_verify(config)
    except (UsageError, CatalogError, DomainError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
