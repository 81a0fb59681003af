"""Batch command-line front end.

Command groups:
  jack expand|eval|table    exact polynomial emission and evaluation
  series eval               certified truncated series values
  verify <identity>|all     identity verification with reports and figures
  cache build|inspect       persisted table management
  plot convergence          series convergence figure plus CSV twin

Exit codes: 0 on success or pass, 1 on verification failure, 2 on usage or
domain errors. Output for a fixed configuration and cache is deterministic;
floats are printed with fixed significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import plotting
from .acceptance import CRITERIA, run_suite, suite_passed
from .combinatorics import Params, compositions_up_to, spectral_vector, weight
from .errors import JackDunklError
from .hyperseries import eval_nonsym_series, eval_sym_series
from .jack import (
    CACHE_ENV,
    JackTable,
    cache_dir,
    cached_table,
    dprime,
    eval_one,
)
from .laplace import (
    default_spec,
    post_widder,
    verify_euler,
    verify_hyp_laplace,
    verify_kadell,
    verify_kernel_product,
    verify_macdonald_cherednik,
    verify_master,
)
from .plotting import fmt_float

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """Parsed run settings shared by the command handlers."""

    n: int
    k: str
    maxweight: int
    tol: float
    trunc: int
    cache_path: str | None
    fmt: str
    threads: int
    seed: int

    def params(self) -> Params:
        return Params(self.n, Fraction(self.k))


# ---------------------------------------------------------------------------
# argument parsing helpers


def _split(text: str):
    return [p for p in text.replace(";", ",").split(",") if p.strip()]


def _ints(text: str) -> tuple:
    try:
        return tuple(int(p) for p in _split(text))
    except ValueError as exc:
        raise JackDunklError(f"expected a comma list of integers: {text!r}") from exc


def _floats(text: str) -> tuple:
    try:
        return tuple(float(Fraction(p)) for p in _split(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise JackDunklError(f"expected a comma list of numbers: {text!r}") from exc


def _fractions(text: str) -> tuple:
    try:
        return tuple(Fraction(p) for p in _split(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise JackDunklError(f"expected a comma list of rationals: {text!r}") from exc


def _series_family(text: str):
    """Split a family tag like 1K1 or 2F1 into (p, q, symmetric)."""
    tag = text.strip().upper()
    if len(tag) == 3 and tag[0].isdigit() and tag[2].isdigit() and tag[1] in "FK":
        return int(tag[0]), int(tag[2]), tag[1] == "F"
    raise JackDunklError(
        f"series type must look like 0F0, 1K1, 2F1 (got {text!r}); "
        "K sums over compositions, F over partitions")


def _config(args) -> RunConfig:
    cache = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV)
    return RunConfig(
        n=getattr(args, "n", 1) or 1,
        k=getattr(args, "k", "0") or "0",
        maxweight=getattr(args, "maxweight", 8) or 8,
        tol=getattr(args, "tol", None),
        trunc=getattr(args, "trunc", None),
        cache_path=cache,
        fmt=getattr(args, "format", "pretty"),
        threads=getattr(args, "threads", 1) or 1,
        seed=getattr(args, "seed", 0) or 0,
    )


def _table(cfg: RunConfig, minweight: int) -> JackTable:
    if cfg.cache_path:
        return cached_table(cfg.params(), minweight, directory=cfg.cache_path)
    return JackTable(cfg.params(), maxweight=minweight)


# ---------------------------------------------------------------------------
# deterministic emission


def _jround(obj):
    """Round every float to the fixed significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, complex):
        return {"re": float(f"{obj.real:.12g}"), "im": float(f"{obj.imag:.12g}")}
    if isinstance(obj, dict):
        return {k: _jround(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jround(v) for v in obj]
    return obj


def _emit_json(doc) -> None:
    print(json.dumps(_jround(doc), sort_keys=True, indent=2))


def _emit_csv(header, rows) -> None:
    print(",".join(header))
    for row in rows:
        print(",".join(c if isinstance(c, str) else fmt_float(c) for c in row))


def poly_text(poly) -> str:
    """Human form of an exact polynomial, canonical term order."""
    terms = poly.sorted_terms()
    if not terms:
        return "0"
    pieces = []
    for e, c in terms:
        mono = "*".join(
            f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}"
            for i, a in enumerate(e) if a
        )
        if not mono:
            pieces.append(str(c))
        elif c == 1:
            pieces.append(mono)
        elif c == -1:
            pieces.append("-" + mono)
        else:
            pieces.append(f"{c}*{mono}")
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _poly_rows(poly):
    return [
        (",".join(str(v) for v in e), str(c)) for e, c in poly.sorted_terms()
    ]


def _poly_doc(poly):
    return [
        {"exponent": list(e), "coefficient": str(c)}
        for e, c in poly.sorted_terms()
    ]


# ---------------------------------------------------------------------------
# jack group


def cmd_jack_expand(args) -> int:
    cfg = _config(args)
    comp = _ints(args.eta)
    if len(comp) != cfg.n:
        raise JackDunklError(f"--eta needs {cfg.n} parts, got {len(comp)}")
    table = _table(cfg, max(weight(tuple(v + max(0, -min(comp)) for v in comp)), 1))
    poly = table.sym(comp) if args.sym else table.nonsym(comp)
    if cfg.fmt == "json":
        _emit_json({
            "n": cfg.n, "k": cfg.k, "eta": list(comp), "symmetric": args.sym,
            "polynomial": _poly_doc(poly),
        })
    elif cfg.fmt == "csv":
        _emit_csv(("exponent", "coefficient"), _poly_rows(poly))
    else:
        print(poly_text(poly))
    return 0


def cmd_jack_eval(args) -> int:
    cfg = _config(args)
    comp = _ints(args.eta)
    point = _fractions(args.point)
    if len(comp) != cfg.n or len(point) != cfg.n:
        raise JackDunklError(f"--eta and --point both need {cfg.n} entries")
    table = _table(cfg, max(weight(tuple(v + max(0, -min(comp)) for v in comp)), 1))
    poly = table.sym(comp) if args.sym else table.nonsym(comp)
    val = poly.eval_exact(point)
    if cfg.fmt == "json":
        _emit_json({
            "n": cfg.n, "k": cfg.k, "eta": list(comp), "symmetric": args.sym,
            "point": [str(v) for v in point],
            "value": str(val), "valueFloat": float(val),
        })
    elif cfg.fmt == "csv":
        _emit_csv(("value", "value_float"), [(str(val), float(val))])
    else:
        print(f"{val} = {fmt_float(float(val))}")
    return 0


def cmd_jack_table(args) -> int:
    cfg = _config(args)
    table = _table(cfg, cfg.maxweight)
    p = cfg.params()
    rows = []
    for comp in compositions_up_to(cfg.n, cfg.maxweight):
        spec = spectral_vector(p, comp)
        rows.append((
            ",".join(str(v) for v in comp),
            weight(comp),
            ",".join(str(v) for v in spec),
            str(eval_one(p, comp)),
            str(dprime(p, comp)),
            len(table.nonsym(comp).terms),
        ))
    header = ("eta", "weight", "spectral_vector", "value_at_ones",
              "hook_product", "terms")
    if cfg.fmt == "json":
        _emit_json([
            {"eta": r[0], "weight": r[1], "spectralVector": r[2],
             "valueAtOnes": r[3], "hookProduct": r[4], "terms": r[5]}
            for r in rows
        ])
    elif cfg.fmt == "csv":
        _emit_csv(header, [(f'"{r[0]}"', r[1], f'"{r[2]}"', r[3], r[4], r[5])
                           for r in rows])
    else:
        widths = [max(len(header[i]), max((len(str(r[i])) for r in rows),
                                          default=0)) for i in range(len(header))]
        print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    return 0


# ---------------------------------------------------------------------------
# series group


def _series_value(args, cfg: RunConfig):
    pcount, qcount, symmetric = _series_family(args.type)
    z = _floats(args.z)
    w = _floats(args.w) if args.w else (1.0,) * len(z)
    if len(w) != len(z):
        raise JackDunklError("--z and --w must have the same length")
    upper = _floats(args.upper) if args.upper else ()
    lower = _floats(args.lower) if args.lower else ()
    if len(upper) != pcount or len(lower) != qcount:
        raise JackDunklError(
            f"type {args.type} needs {pcount} upper and {qcount} lower "
            f"parameters, got {len(upper)} and {len(lower)}")
    params = Params(len(z), Fraction(args.k))
    ev = eval_sym_series if symmetric else eval_nonsym_series
    kw = {"rel_tol": cfg.tol if cfg.tol is not None else 1e-10}
    if cfg.trunc is not None:
        kw["max_weight"] = cfg.trunc
    if cfg.cache_path:
        kw["table"] = cached_table(params, 8, directory=cfg.cache_path)
    return params, ev(params, upper, lower, z, w, **kw), z, w, upper, lower


def cmd_series_eval(args) -> int:
    cfg = _config(args)
    params, sv, z, w, upper, lower = _series_value(args, cfg)
    doc = {
        "type": args.type.upper(), "n": params.n, "k": str(params.k),
        "upper": list(upper), "lower": list(lower),
        "z": list(z), "w": list(w),
        "value": sv.value, "truncationWeight": sv.truncation_weight,
        "tailBound": sv.tail,
    }
    if cfg.fmt == "json":
        _emit_json(doc)
    elif cfg.fmt == "csv":
        _emit_csv(("value", "truncation_weight", "tail_bound"),
                  [(sv.real_value, sv.truncation_weight, sv.tail)])
    else:
        print(f"value: {fmt_float(sv.real_value)}")
        print(f"truncation weight: {sv.truncation_weight}")
        print(f"certified tail bound: {fmt_float(sv.tail)}")
    if args.out_dir:
        stem = os.path.join(args.out_dir, f"series_{args.type.lower()}")
        png, csv_out = plotting.convergence_figure(
            sv, stem + ".png", title=f"{args.type.upper()} convergence")
        print(f"wrote {png} and {csv_out}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify group


def _report_convergence(builder, base_points, out_stem: str, title: str):
    """Re-run a verifier from coarser starting grids for the CSV twin."""
    points, errors, times = [], [], []
    for scale in (0.5, 0.75, 1.0):
        pts = max(8, int(round(base_points * scale)))
        rep = builder(pts)
        points.append(pts)
        errors.append(rep.rel_error)
        times.append(rep.runtime_ms)
    return plotting.resolution_figure(points, errors, times,
                                      out_stem + ".png", title=title)


def _emit_report(args, report, builder=None, base_points=None) -> int:
    cfg = _config(args)
    if cfg.fmt == "json":
        _emit_json(report.to_dict())
    elif cfg.fmt == "csv":
        _emit_csv(
            ("identity", "lhs", "rhs", "rel_error", "tolerance", "verdict",
             "runtime_ms"),
            [(report.identity_name, report.lhs, report.rhs, report.rel_error,
              report.tolerance, "pass" if report.passed else "FAIL",
              report.runtime_ms)],
        )
    else:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"identity: {report.identity_name}")
        print(f"verdict: {verdict}")
        print(f"lhs: {fmt_float(report.lhs)}")
        print(f"rhs: {fmt_float(report.rhs)}")
        print(f"relative error: {fmt_float(report.rel_error)} "
              f"(tolerance {fmt_float(report.tolerance)})")
        print(f"runtime: {fmt_float(report.runtime_ms)} ms")
        for key in sorted(report.certificate):
            print(f"certificate.{key}: {report.certificate[key]}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        stem = os.path.join(args.out_dir, report.identity_name)
        with open(stem + ".json", "w", encoding="utf-8") as fh:
            json.dump(_jround(report.to_dict()), fh, sort_keys=True, indent=2)
            fh.write("\n")
        wrote = [stem + ".json"]
        if builder is not None and base_points:
            png, csv_out = _report_convergence(
                builder, base_points, stem + "_convergence",
                f"{report.identity_name} self-consistency")
            wrote += [png, csv_out]
        print("wrote " + " and ".join(wrote), file=sys.stderr)
    return 0 if report.passed else 1


def _base_points(params: Params, z) -> int:
    return default_spec(params, np.asarray(z, dtype=complex)).points_per_axis


def cmd_verify_master(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    comp = _ints(args.eta)
    z = _floats(args.z)
    mu = float(Fraction(args.mu))

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, np.asarray(z, dtype=complex),
                                points=points,
                                poly_degree=weight(comp) + mu)
        return verify_master(p, comp, mu, z, spec=spec, symmetric=args.sym,
                             tol=cfg.tol)

    return _emit_report(args, build(), build, _base_points(p, z))


def cmd_verify_kadell(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    lam = _ints(args.lam)
    mu = float(Fraction(args.mu))
    nu = float(Fraction(args.nu))

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, points=points, cutoff=1.0)
        return verify_kadell(p, lam, mu, nu, spec=spec, tol=cfg.tol)

    return _emit_report(args, build(), build,
                        default_spec(p, cutoff=1.0).points_per_axis)


def cmd_verify_euler(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    upper = _floats(args.upper) if args.upper else ()
    lower = _floats(args.lower) if args.lower else ()
    mu_p = float(Fraction(args.mu))
    nu_p = float(Fraction(args.nu))
    w = _floats(args.w)

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, points=points, cutoff=1.0)
        return verify_euler(p, upper, lower, mu_p, nu_p, w, spec=spec,
                            tol=cfg.tol)

    return _emit_report(args, build(), build,
                        default_spec(p, cutoff=1.0).points_per_axis)


def cmd_verify_hyplaplace(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    upper = _floats(args.upper) if args.upper else ()
    lower = _floats(args.lower) if args.lower else ()
    mu_p = float(Fraction(args.mu))
    w = _floats(args.w)
    z = _floats(args.z)
    tol = cfg.tol if cfg.tol is not None else 1e-4

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, np.asarray(z, dtype=complex),
                                points=points, poly_degree=mu_p)
        return verify_hyp_laplace(p, upper, lower, mu_p, w, z, spec=spec,
                                  symmetric=args.sym, tol=tol)

    return _emit_report(args, build(), build, _base_points(p, z))


def cmd_verify_kernel_product(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    mu = float(Fraction(args.mu))
    z = _floats(args.z)
    w = _floats(args.w)
    tol = cfg.tol if cfg.tol is not None else 1e-4

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, np.asarray(1.0 / np.asarray(z),
                                              dtype=complex),
                                points=points, poly_degree=mu)
        return verify_kernel_product(p, mu, z, w, spec=spec, tol=tol)

    return _emit_report(args, build(), build,
                        default_spec(p, cutoff=1.0).points_per_axis)


def cmd_verify_cherednik(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    eta = _ints(args.eta)
    mu = float(Fraction(args.mu))
    z = _floats(args.z)
    tol = cfg.tol if cfg.tol is not None else 1e-4

    def build(points=None):
        spec = None
        if points is not None:
            spec = default_spec(p, np.asarray(z, dtype=complex),
                                points=points, poly_degree=weight(eta) + mu)
        return verify_macdonald_cherednik(p, eta, mu, z, spec=spec, tol=tol)

    return _emit_report(args, build(), build, _base_points(p, z))


def cmd_verify_postwidder(args) -> int:
    cfg = _config(args)
    p = cfg.params()
    xi = _floats(args.xi)
    if len(xi) != p.n:
        raise JackDunklError(f"--xi needs {p.n} entries")
    orders = _ints(args.orders)
    if not orders or any(v <= 0 for v in orders):
        raise JackDunklError("--orders needs positive integers")
    target = 1.0 / (1.0 + float(sum(xi)))

    def f(X):
        return 1.0 / (1.0 + np.sum(X, axis=1))

    estimates = [post_widder(p, f, xi, nu) for nu in orders]
    errors = [abs(v - target) for v in estimates]
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    final_rel = errors[-1] / abs(target)
    tol = cfg.tol if cfg.tol is not None else 0.05
    passed = decreasing and final_rel < tol
    doc = {
        "identityName": "postwidder-demo", "n": p.n, "k": str(p.k),
        "xi": list(xi), "orders": list(orders),
        "target": target, "estimates": estimates, "absErrors": errors,
        "finalRelError": final_rel, "decreasing": decreasing,
        "tolerance": tol, "pass": passed,
    }
    if cfg.fmt == "json":
        _emit_json(doc)
    elif cfg.fmt == "csv":
        _emit_csv(("order", "estimate", "abs_error"),
                  list(zip(orders, estimates, errors)))
    else:
        print("identity: postwidder-demo")
        print(f"verdict: {'PASS' if passed else 'FAIL'}")
        print(f"target f(xi): {fmt_float(target)}")
        for nu, v, e in zip(orders, estimates, errors):
            print(f"order {nu}: estimate {fmt_float(v)}, error {fmt_float(e)}")
        print(f"final relative error: {fmt_float(final_rel)} "
              f"(tolerance {fmt_float(tol)}, strictly decreasing: {decreasing})")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        stem = os.path.join(args.out_dir, "postwidder")
        with open(stem + ".json", "w", encoding="utf-8") as fh:
            json.dump(_jround(doc), fh, sort_keys=True, indent=2)
            fh.write("\n")
        png, csv_out = plotting.error_decay_figure(
            orders, estimates, target, stem + "_decay.png",
            title="inversion error decay", xlabel="order")
        print(f"wrote {stem}.json and {png} and {csv_out}", file=sys.stderr)
    return 0 if passed else 1


def cmd_verify_all(args) -> int:
    cfg = _config(args)
    only = _split(args.only) if args.only else None
    results = run_suite(only, seed=cfg.seed)
    total = ok = 0
    for key, rows in results:
        crit_pass = all(r.passed for r in rows)
        total += len(rows)
        ok += sum(r.passed for r in rows)
        ms = sum(r.runtime_ms for r in rows)
        print(f"[{'PASS' if crit_pass else 'FAIL'}] {key}: "
              f"{sum(r.passed for r in rows)}/{len(rows)} checks "
              f"[{ms:.0f} ms]")
        if args.verbose or not crit_pass:
            for r in rows:
                print("    " + r.line())
    passed = suite_passed(results)
    print(f"suite {args.suite}: {ok}/{total} checks passed")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        stem = os.path.join(args.out_dir, "suite")
        doc = [
            {"criterion": key,
             "checks": [{"name": r.name, "pass": r.passed, "detail": r.detail,
                         "runtimeMs": r.runtime_ms} for r in rows]}
            for key, rows in results
        ]
        with open(stem + ".json", "w", encoding="utf-8") as fh:
            json.dump(_jround(doc), fh, sort_keys=True, indent=2)
            fh.write("\n")
        png, csv_out = plotting.suite_figure(results, stem + ".png",
                                             title=f"suite {args.suite}")
        print(f"wrote {stem}.json and {png} and {csv_out}", file=sys.stderr)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# cache group


def cmd_cache_build(args) -> int:
    cfg = _config(args)
    directory = cfg.cache_path or cache_dir()
    table = cached_table(cfg.params(), cfg.maxweight, directory=directory)
    count = sum(1 for _ in compositions_up_to(cfg.n, table.maxweight))
    print(f"cache ready in {directory}: n={cfg.n} k={cfg.k} "
          f"maxweight={table.maxweight} ({count} polynomials)")
    return 0


def cmd_cache_inspect(args) -> int:
    import gzip

    import hashlib

    cfg = _config(args)
    directory = cfg.cache_path or cache_dir()
    if not os.path.isdir(directory):
        print(f"no cache directory at {directory}")
        return 0
    rows = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".json.gz"):
            continue
        path = os.path.join(directory, name)
        try:
            with gzip.open(path, "rt", encoding="utf-8") as fh:
                doc = json.load(fh)
            blob = json.dumps(doc["body"], sort_keys=True,
                              separators=(",", ":"))
            fresh = hashlib.sha256(blob.encode()).hexdigest()
            state = "ok" if fresh == doc.get("sha256") else "CORRUPT"
            entries = sum(len(level) for level in doc["body"]["levels"])
            rows.append((name, doc.get("n"), doc.get("k"),
                         doc.get("maxweight"), entries, state,
                         os.path.getsize(path)))
        except (OSError, ValueError, KeyError):
            rows.append((name, "?", "?", "?", "?", "UNREADABLE",
                         os.path.getsize(path)))
    header = ("file", "n", "k", "maxweight", "entries", "state", "bytes")
    if cfg.fmt == "json":
        _emit_json([dict(zip(header, r)) for r in rows])
    elif cfg.fmt == "csv":
        _emit_csv(header, rows)
    else:
        if not rows:
            print(f"cache directory {directory} holds no tables")
            return 0
        print(f"cache directory: {directory}")
        for r in rows:
            print(f"  {r[0]}: n={r[1]} k={r[2]} maxweight={r[3]} "
                  f"entries={r[4]} {r[5]} ({r[6]} bytes)")
    return 0


# ---------------------------------------------------------------------------
# plot group


def cmd_plot_convergence(args) -> int:
    cfg = _config(args)
    _params, sv, _z, _w, _upper, _lower = _series_value(args, cfg)
    stem = args.out
    if stem.endswith(".png"):
        stem = stem[:-4]
    png, csv_out = plotting.convergence_figure(
        sv, stem + ".png", title=f"{args.type.upper()} convergence")
    print(f"wrote {png} and {csv_out}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring


def _add_common(sp, *, n=True, k=True, fmt=True, cache=True, tol=False,
                maxweight=False, trunc=False, seed=False, out_dir=False):
    if n:
        sp.add_argument("--n", type=int, required=True, help="rank")
    if k:
        sp.add_argument("--k", default="0",
                        help="multiplicity as a rational, e.g. 1/2")
    if fmt:
        sp.add_argument("--format", choices=("json", "csv", "pretty"),
                        default="pretty", help="stdout rendering")
    if cache:
        sp.add_argument("--cache-dir", default=None,
                        help=f"table cache directory (default ${CACHE_ENV})")
    if tol:
        sp.add_argument("--tol", type=float, default=None,
                        help="tolerance override")
    if maxweight:
        sp.add_argument("--maxweight", type=int, default=8,
                        help="weight cap for tables")
    if trunc:
        sp.add_argument("--trunc", type=int, default=None,
                        help="series truncation degree cap")
    if seed:
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property draws")
    if out_dir:
        sp.add_argument("--out-dir", default=None,
                        help="write report JSON, CSV, and PNG files here")
    sp.add_argument("--threads", type=int, default=1,
                    help="reserved; evaluation is deterministic and serial")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jackdunkl",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    groups = ap.add_subparsers(dest="group", required=True)

    jack = groups.add_parser("jack", help="exact polynomial commands")
    jsub = jack.add_subparsers(dest="action", required=True)

    sp = jsub.add_parser("expand", help="print one polynomial")
    _add_common(sp)
    sp.add_argument("--eta", required=True,
                    help="composition, e.g. 0,1 (partition with --sym)")
    sp.add_argument("--sym", action="store_true",
                    help="symmetric polynomial for a partition")
    sp.set_defaults(fn=cmd_jack_expand)

    sp = jsub.add_parser("eval", help="evaluate one polynomial exactly")
    _add_common(sp)
    sp.add_argument("--eta", required=True, help="composition, e.g. 2,0")
    sp.add_argument("--point", required=True,
                    help="evaluation point of rationals, e.g. 1/2,1/3")
    sp.add_argument("--sym", action="store_true")
    sp.set_defaults(fn=cmd_jack_eval)

    sp = jsub.add_parser("table", help="summary of all stored polynomials")
    _add_common(sp, maxweight=True)
    sp.set_defaults(fn=cmd_jack_table)

    series = groups.add_parser("series", help="certified series values")
    ssub = series.add_subparsers(dest="action", required=True)
    sp = ssub.add_parser("eval", help="evaluate a hypergeometric-type series")
    _add_common(sp, n=False, tol=True, trunc=True)
    sp.add_argument("--type", required=True,
                    help="family tag: digits and F or K, e.g. 0F0, 1K1")
    sp.add_argument("--z", required=True, help="first argument vector")
    sp.add_argument("--w", default=None,
                    help="second argument vector (default all ones)")
    sp.add_argument("--upper", default=None, help="upper parameters")
    sp.add_argument("--lower", default=None, help="lower parameters")
    sp.add_argument("--out-dir", default=None,
                    help="also write the convergence PNG and CSV here")
    sp.set_defaults(fn=cmd_series_eval)

    verify = groups.add_parser("verify", help="identity verification")
    vsub = verify.add_subparsers(dest="action", required=True)

    sp = vsub.add_parser("master", help="transform identity")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--eta", required=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--sym", action="store_true")
    sp.set_defaults(fn=cmd_verify_master)

    sp = vsub.add_parser("kadell", help="beta-type integral")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--lam", required=True, help="partition")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--nu", required=True)
    sp.set_defaults(fn=cmd_verify_kadell)

    sp = vsub.add_parser("euler", help="hypergeometric beta integral")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--upper", default=None)
    sp.add_argument("--lower", default=None)
    sp.add_argument("--mu", required=True, help="density exponent")
    sp.add_argument("--nu", required=True, help="total exponent")
    sp.add_argument("--w", required=True)
    sp.set_defaults(fn=cmd_verify_euler)

    sp = vsub.add_parser("hyplaplace", help="series transform identity")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--upper", default=None)
    sp.add_argument("--lower", default=None)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--sym", action="store_true")
    sp.set_defaults(fn=cmd_verify_hyplaplace)

    sp = vsub.add_parser("kernel-product", help="kernel product identity")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", required=True)
    sp.set_defaults(fn=cmd_verify_kernel_product)

    sp = vsub.add_parser("cherednik", help="shifted-lattice identity")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--eta", required=True, help="lattice composition")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--z", required=True)
    sp.set_defaults(fn=cmd_verify_cherednik)

    sp = vsub.add_parser("postwidder", help="inversion formula demo")
    _add_common(sp, tol=True, out_dir=True)
    sp.add_argument("--xi", required=True, help="inversion point")
    sp.add_argument("--orders", default="5,10,20,40",
                    help="order sequence, e.g. 5,10,20,40")
    sp.set_defaults(fn=cmd_verify_postwidder)

    sp = vsub.add_parser("all", help="run the acceptance suite")
    _add_common(sp, n=False, k=False, seed=True, out_dir=True)
    sp.add_argument("--suite", choices=("desk",), default="desk",
                    help="suite name (desk: the full acceptance grid)")
    sp.add_argument("--only", default=None,
                    help="comma list of criteria keys to run")
    sp.add_argument("--verbose", action="store_true",
                    help="print every check line, not only failures")
    sp.set_defaults(fn=cmd_verify_all)

    cache = groups.add_parser("cache", help="persisted table management")
    csub = cache.add_subparsers(dest="action", required=True)
    sp = csub.add_parser("build", help="build and store one table")
    _add_common(sp, maxweight=True, fmt=False)
    sp.set_defaults(fn=cmd_cache_build)
    sp = csub.add_parser("inspect", help="list stored tables and checksums")
    _add_common(sp, n=False, k=False)
    sp.set_defaults(fn=cmd_cache_inspect)

    plot = groups.add_parser("plot", help="figure emission")
    psub = plot.add_subparsers(dest="action", required=True)
    sp = psub.add_parser("convergence", help="series convergence figure")
    _add_common(sp, n=False, tol=True, trunc=True, fmt=False)
    sp.add_argument("--type", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", default=None)
    sp.add_argument("--upper", default=None)
    sp.add_argument("--lower", default=None)
    sp.add_argument("--out", required=True, help="output path or stem")
    sp.set_defaults(fn=cmd_plot_convergence)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except JackDunklError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
