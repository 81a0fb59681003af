"""Figure rendering for convergence studies and verification summaries.

Every renderer writes a PNG and a CSV of the plotted numbers side by side,
so the graphical and the delimited view of a run always come from the same
data. The Agg backend is forced; nothing here opens a window.
"""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "fmt_float",
    "write_csv",
    "convergence_figure",
    "error_decay_figure",
    "residual_figure",
    "resolution_figure",
    "suite_figure",
]

# fixed significant digits keep repeated runs byte-identical
_SIGDIGITS = 12


def fmt_float(v) -> str:
    """Render a number with fixed significant digits; complex splits re/im."""
    if isinstance(v, complex):
        return f"{v.real:.{_SIGDIGITS}g}{v.imag:+.{_SIGDIGITS}g}j"
    return f"{float(v):.{_SIGDIGITS}g}"


def write_csv(path: str, header, rows) -> str:
    """Write rows of numbers/strings as CSV with deterministic formatting."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([
                c if isinstance(c, str) else fmt_float(c) for c in row
            ])
    return path


def _csv_twin(png_path: str, csv_path: str | None) -> str:
    if csv_path is not None:
        return csv_path
    stem, _ = os.path.splitext(png_path)
    return stem + ".csv"


def _save(fig, png_path: str) -> str:
    parent = os.path.dirname(os.path.abspath(png_path))
    os.makedirs(parent, exist_ok=True)
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return png_path


def convergence_figure(series_value, png_path: str, *, csv_path: str | None = None,
                       title: str | None = None) -> tuple:
    """Per-weight contribution decay of one truncated series evaluation.

    Plots |weight-m term| on a log scale together with the certified tail
    bound at the final truncation; the CSV twin holds weight, term real and
    imaginary parts, magnitude, and the running partial sum.
    """
    terms = [complex(t) for t in series_value.weight_terms]
    rows = []
    partial = 0j
    for m, t in enumerate(terms):
        partial += t
        rows.append((m, t.real, t.imag, abs(t), abs(partial)))
    csv_out = write_csv(
        _csv_twin(png_path, csv_path),
        ("weight", "term_re", "term_im", "term_abs", "partial_abs"),
        rows,
    )

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    weights = list(range(len(terms)))
    mags = [max(abs(t), 1e-300) for t in terms]
    ax.semilogy(weights, mags, marker="o", ms=3.5, lw=1.0, label="|weight-m term|")
    if series_value.tail > 0:
        ax.axhline(series_value.tail, color="crimson", lw=1.0, ls="--",
                   label="certified tail")
    ax.set_xlabel("weight m")
    ax.set_ylabel("contribution")
    ax.set_title(title or "series convergence")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _save(fig, png_path), csv_out


def error_decay_figure(orders, estimates, target: float, png_path: str, *,
                       csv_path: str | None = None,
                       title: str | None = None,
                       xlabel: str = "order") -> tuple:
    """Error of a sequence of estimates against a known target value.

    Used for the inversion-formula demo: absolute error on a log scale over
    the order parameter, CSV twin with estimate, absolute and relative error.
    """
    rows = []
    errs = []
    for o, v in zip(orders, estimates):
        v = float(v)
        ae = abs(v - target)
        re = ae / abs(target) if target else math.inf
        errs.append(max(ae, 1e-300))
        rows.append((o, v, ae, re))
    csv_out = write_csv(
        _csv_twin(png_path, csv_path),
        (xlabel, "estimate", "abs_error", "rel_error"),
        rows,
    )

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogy(list(orders), errs, marker="s", ms=4, lw=1.0, color="tab:blue")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("absolute error")
    ax.set_title(title or "error decay")
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    return _save(fig, png_path), csv_out


def resolution_figure(points, rel_errors, runtimes_ms, png_path: str, *,
                      csv_path: str | None = None,
                      title: str | None = None) -> tuple:
    """Achieved relative error of one verification over starting resolutions.

    Each row is an independent run of the adaptive ladder from a coarser or
    finer starting grid; stable errors across rows are the self-consistency
    evidence for the reported value.
    """
    rows = list(zip(points, rel_errors, runtimes_ms))
    csv_out = write_csv(
        _csv_twin(png_path, csv_path),
        ("start_points_per_axis", "rel_error", "runtime_ms"),
        rows,
    )

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    errs = [max(float(e), 1e-300) for e in rel_errors]
    ax.semilogy(list(points), errs, marker="o", ms=4, lw=1.0,
                color="tab:blue")
    ax.set_xlabel("starting points per chamber axis")
    ax.set_ylabel("relative error")
    ax.set_title(title or "resolution self-consistency")
    ax.grid(True, which="both", alpha=0.25)
    fig.tight_layout()
    return _save(fig, png_path), csv_out


def suite_figure(results, png_path: str, *, csv_path: str | None = None,
                 title: str | None = None) -> tuple:
    """Verdict and runtime overview of an acceptance-suite run.

    results holds (criterion key, CheckResult rows) pairs as produced by
    the suite driver; the CSV twin carries one row per check.
    """
    flat = [(key, row) for key, rows in results for row in rows]
    csv_out = write_csv(
        _csv_twin(png_path, csv_path),
        ("criterion", "check", "verdict", "runtime_ms", "detail"),
        [(key, r.name, "pass" if r.passed else "FAIL", r.runtime_ms, r.detail)
         for key, r in flat],
    )

    names = [f"{key}: {r.name}" for key, r in flat]
    times = [max(r.runtime_ms, 1e-2) for _, r in flat]
    colors = ["tab:green" if r.passed else "tab:red" for _, r in flat]
    height = max(2.8, 0.3 * len(flat) + 1.2)
    fig, ax = plt.subplots(figsize=(8.5, height))
    ypos = list(range(len(flat)))
    ax.barh(ypos, times, color=colors, alpha=0.8)
    ax.set_xscale("log")
    ax.set_yticks(ypos)
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("runtime (ms)")
    ax.set_title(title or "acceptance suite")
    ax.grid(True, axis="x", which="both", alpha=0.25)
    fig.tight_layout()
    return _save(fig, png_path), csv_out


def residual_figure(reports, png_path: str, *, csv_path: str | None = None,
                    title: str | None = None) -> tuple:
    """Relative errors of a batch of verification reports against tolerances.

    One horizontal bar per report (green pass, red fail) with the declared
    tolerance marked; the CSV twin lists name, both sides, error, tolerance,
    verdict, and runtime.
    """
    reports = list(reports)
    rows = [
        (r.identity_name, r.lhs, r.rhs, r.rel_error, r.tolerance,
         "pass" if r.passed else "FAIL", r.runtime_ms)
        for r in reports
    ]
    csv_out = write_csv(
        _csv_twin(png_path, csv_path),
        ("identity", "lhs", "rhs", "rel_error", "tolerance", "verdict",
         "runtime_ms"),
        rows,
    )

    names = [r.identity_name for r in reports]
    vals = [max(r.rel_error, 1e-300) for r in reports]
    tols = [r.tolerance for r in reports]
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    height = max(2.4, 0.42 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(7.2, height))
    ypos = list(range(len(reports)))
    ax.barh(ypos, vals, color=colors, alpha=0.8)
    ax.scatter(tols, ypos, marker="|", s=130, color="black", zorder=3,
               label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(ypos)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("relative error")
    ax.set_title(title or "verification residuals")
    ax.grid(True, axis="x", which="both", alpha=0.25)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    return _save(fig, png_path), csv_out
