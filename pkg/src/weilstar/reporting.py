"""Report serialization (JSON, CSV, text) and figure rendering.

Every CLI subcommand assembles a plain-dict report; this module turns it
into the requested delimited output and, when the report is written to a
file, renders the matplotlib figures that belong to that command next to
it (same stem, .png).  Reports are deterministic for a fixed config and
seed except for the ``generated_at`` stamp, which consumers are expected
to strip before comparing.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from pathlib import Path

SCHEMA_VERSION = 1


def cnum(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def base_report(command: str, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }


def _check_rows(report: dict) -> list[dict]:
    rows = []
    for c in report.get("checks", []):
        rows.append(
            {
                "name": c.get("name") or c.get("relation") or c.get("property"),
                "instances": c.get("instances", c.get("pairs", "")),
                "max_deviation": c.get("max_deviation", ""),
                "passed": c.get("passed", ""),
            }
        )
    return rows


def to_csv(report: dict) -> str:
    """Tabular view: explicit rows if the command produced any, otherwise
    one line per check."""
    rows = report.get("rows") or _check_rows(report)
    buf = io.StringIO()
    if not rows:
        buf.write("key,value\n")
        for k, v in report.items():
            if isinstance(v, (str, int, float, bool)):
                buf.write(f"{k},{v}\n")
        return buf.getvalue()
    flat_rows = [_flatten(r) for r in rows]
    fields: list[str] = []
    for r in flat_rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for r in flat_rows:
        writer.writerow(r)
    return buf.getvalue()


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, prefix=f"{key}_"))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def to_text(report: dict) -> str:
    lines = [f"{report.get('command', 'report')}: "
             f"{'PASS' if report.get('passed', True) else 'FAIL'}"]
    for c in report.get("checks", []):
        name = c.get("name") or c.get("relation") or c.get("property")
        status = "pass" if c.get("passed") else "FAIL"
        dev = c.get("max_deviation")
        extra = f" (max dev {dev:.3e})" if isinstance(dev, float) else ""
        lines.append(f"  [{status}] {name}{extra}")
    for key in (
        "order",
        "count",
        "coboundary_orientation",
        "w_constant_is_omega",
        "cell",
        "word",
    ):
        if key in report:
            lines.append(f"  {key}: {report[key]}")
    if report.get("rows"):
        lines.append(f"  rows: {len(report['rows'])}")
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str = "json", out: str | None = None) -> str:
    if fmt == "json":
        text = json.dumps(report, indent=2, default=_json_default) + "\n"
    elif fmt == "csv":
        text = to_csv(report)
    elif fmt == "text":
        text = to_text(report)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if out is not None:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    return text


def _json_default(obj):
    if isinstance(obj, complex):
        return cnum(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    return repr(obj)


# -- figures -------------------------------------------------------------------


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_figures(report: dict, out: str) -> list[str]:
    """Write the figures belonging to a report next to its output file."""
    stem = Path(out).with_suffix("")
    command = report.get("command", "")
    written: list[str] = []

    def save(fig, suffix):
        path = f"{stem}_{suffix}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        written.append(path)

    plt = None
    if report.get("checks"):
        plt = _plt()
        names = []
        devs = []
        colors = []
        for c in report["checks"]:
            names.append(c.get("name") or c.get("relation") or c.get("property"))
            dev = c.get("max_deviation")
            devs.append(max(dev, 1e-18) if isinstance(dev, float) else 1e-18)
            colors.append("tab:green" if c.get("passed") else "tab:red")
        fig, ax = plt.subplots(figsize=(7, 0.5 + 0.4 * len(names)))
        ax.barh(range(len(names)), devs, color=colors)
        ax.set_yticks(range(len(names)), names, fontsize=8)
        ax.set_xscale("log")
        ax.set_xlabel("max deviation")
        ax.axvline(report.get("tolerance", 1e-8), color="k", ls="--", lw=0.8)
        ax.invert_yaxis()
        save(fig, "deviations")
        plt.close(fig)

    if command == "cocycle-table" and report.get("rows"):
        plt = plt or _plt()
        fig, ax = plt.subplots(figsize=(5, 5))
        xs = [r["c_formula"]["re"] for r in report["rows"]]
        ys = [r["c_formula"]["im"] for r in report["rows"]]
        ax.scatter(xs, ys, s=18, alpha=0.6, label="formula")
        xs = [r["c_operational"]["re"] for r in report["rows"]]
        ys = [r["c_operational"]["im"] for r in report["rows"]]
        ax.scatter(xs, ys, s=4, color="k", label="operational")
        circle = plt.Circle((0, 0), 1.0, fill=False, color="gray", lw=0.8)
        ax.add_patch(circle)
        ax.set_aspect("equal")
        ax.set_xlabel("Re c(g,h)")
        ax.set_ylabel("Im c(g,h)")
        ax.legend(fontsize=8)
        save(fig, "values")
        plt.close(fig)

    if command == "character-table" and report.get("rows"):
        plt = plt or _plt()
        fig, ax = plt.subplots(figsize=(5, 5))
        for key, marker in (("bruhat", "o"), ("geometric", "x")):
            pts = [r[key] for r in report["rows"] if key in r]
            ax.scatter(
                [p["re"] for p in pts],
                [p["im"] for p in pts],
                s=24,
                marker=marker,
                alpha=0.7,
                label=key,
            )
        ax.set_xlabel("Re chi(g)")
        ax.set_ylabel("Im chi(g)")
        ax.legend(fontsize=8)
        save(fig, "characters")
        plt.close(fig)

    if command == "lagrangians-enumerate" and "intersection_matrix" in report:
        plt = plt or _plt()
        mat = report["intersection_matrix"]
        fig, ax = plt.subplots(figsize=(5, 4.4))
        im = ax.imshow(mat, cmap="viridis")
        fig.colorbar(im, ax=ax, label="|L_i n L_j|")
        ax.set_xlabel("Lagrangian id")
        ax.set_ylabel("Lagrangian id")
        save(fig, "intersections")
        plt.close(fig)

    if command == "weil-build" and report.get("rows"):
        plt = plt or _plt()
        for row in report["rows"]:
            if row.get("kind") != "operator" or "matrix_re" not in row:
                continue
            mat = _abs_matrix(row["matrix_re"], row["matrix_im"])
            fig, ax = plt.subplots(figsize=(4.6, 4))
            im = ax.imshow(mat, cmap="magma")
            fig.colorbar(im, ax=ax, label="|entry|")
            ax.set_title(row["generator"], fontsize=9)
            save(fig, f"op_{row['label']}")
            plt.close(fig)

    return written


def _abs_matrix(re_rows, im_rows):
    return [
        [(re * re + im * im) ** 0.5 for re, im in zip(rr, ri)]
        for rr, ri in zip(re_rows, im_rows)
    ]
