"""Render publication figures from limitlab artifact files.

Renderers never recompute science: every number shown is read from an
artifact file, and a sidecar JSON next to each image echoes the source
config hashes plus any annotated values so the provenance is checkable.

Usage: render --kind <kind> --in <files...> --out <figure.png>

Kinds: limitset, delta-fit, sv-decay, jw-extrapolation, threshold-vs-delta.
Exit codes: 0 ok, 1 schema/data mismatch, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

KIND_EXPERIMENTS = {
    "limitset": {"limitset"},
    "delta-fit": {"delta"},
    "sv-decay": {"summability"},
    "jw-extrapolation": {"summability"},
    "threshold-vs-delta": {"summability", "delta"},
}


class ArtifactError(ValueError):
    """Raised when an input file does not match the expected schema."""


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KIND_EXPERIMENTS:
            raise ArtifactError(f"unknown figure kind {self.kind!r}; "
                                f"choose from {sorted(KIND_EXPERIMENTS)}")


@dataclass
class Table:
    path: str
    meta: dict
    columns: list
    rows: list

    def column(self, name, convert=float):
        if name not in self.columns:
            raise ArtifactError(f"{self.path}: missing column {name!r} "
                                f"(have {self.columns})")
        i = self.columns.index(name)
        return [convert(r[i]) for r in self.rows]


def read_artifact(path: str):
    """Parse a limitlab CSV or JSON artifact, validating the metadata header."""
    if path.endswith(".json"):
        with open(path) as f:
            doc = json.load(f)
        meta = doc.get("meta")
        if not meta or "config_hash" not in meta or "experiment" not in meta:
            raise ArtifactError(f"{path}: missing limitlab metadata block")
        return doc
    with open(path) as f:
        lines = f.read().splitlines()
    if len(lines) < 4 or not lines[0].startswith("# limitlab"):
        raise ArtifactError(f"{path}: missing limitlab metadata header")
    meta = {"tool_version": lines[0].split()[-1]}
    for line in lines[1:3]:
        if not line.startswith("# "):
            raise ArtifactError(f"{path}: malformed metadata header line {line!r}")
        _, key, value = line.split(maxsplit=2)
        meta[key] = value
    columns = lines[3].split(",")
    rows = [line.split(",") for line in lines[4:] if line]
    return Table(path, meta, columns, rows)


def _meta_of(art):
    return art["meta"] if isinstance(art, dict) else art.meta


def _check_kind(spec: FigureSpec, artifacts):
    allowed = KIND_EXPERIMENTS[spec.kind]
    for art in artifacts:
        meta = _meta_of(art)
        exp = meta["experiment"].split(":")[0]
        if exp not in allowed:
            raise ArtifactError(
                f"{getattr(art, 'path', 'input')}: experiment {meta['experiment']!r} "
                f"does not feed figure kind {spec.kind!r} (expects {sorted(allowed)})"
            )


def render_limitset(spec, artifacts, ax):
    table = artifacts[0]
    xs = table.column("x")
    ys = table.column("y")
    ax.scatter(xs, ys, s=0.5, c="black", linewidths=0)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"limit set ({len(xs)} points)")
    return {}


def render_delta_fit(spec, artifacts, ax):
    table = next(a for a in artifacts if isinstance(a, Table))
    report = next(a for a in artifacts if isinstance(a, dict))
    radii = table.column("radius")
    counts = table.column("count")
    delta = report["delta_hat"]
    ax.semilogy(radii, counts, "o", ms=4, label="N(R)")
    r = np.asarray(radii)
    anchor = counts[len(counts) // 2]
    ax.semilogy(r, anchor * np.exp(delta * (r - r[len(r) // 2])), "-",
                label="fitted slope")
    ax.annotate(f"delta_hat = {delta!r}", xy=(0.05, 0.9), xycoords="axes fraction")
    ax.set_xlabel("R")
    ax.set_ylabel("orbit count N(R)")
    ax.legend()
    return {"delta_hat": delta}


def render_sv_decay(spec, artifacts, ax):
    table = artifacts[0]
    ns = table.column("N")
    idx = table.column("index")
    vals = table.column("value")
    for n in sorted(set(ns)):
        xs = [i + 1 for i, nn in zip(idx, ns) if nn == n]
        ys = [v for v, nn in zip(vals, ns) if nn == n and v > 0]
        ax.loglog(xs[: len(ys)], ys, label=f"N = {int(n)}")
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    ax.set_title("commutator singular-value decay")
    ax.legend()
    return {"curves": len(set(ns))}


def render_jw_extrapolation(spec, artifacts, ax):
    table = artifacts[0]
    ps = table.column("p")
    hs = table.column("h")
    partials = table.column("partial_integral")
    for p in sorted(set(ps)):
        xs = [h for h, pp in zip(hs, ps) if pp == p]
        ys = [v for v, pp in zip(partials, ps) if pp == p]
        ax.semilogx(xs, ys, "o-", label=f"p = {p:g}")
    ax.invert_xaxis()
    ax.set_xlabel("band exclusion h")
    ax.set_ylabel("partial integral")
    ax.set_title("Janson-Wolff h-extrapolation")
    ax.legend(fontsize=7)
    return {}


def render_threshold_vs_delta(spec, artifacts, ax):
    thresholds = []
    deltas = []
    for art in artifacts:
        if not isinstance(art, dict):
            raise ArtifactError("threshold-vs-delta consumes JSON reports only")
        exp = art["meta"]["experiment"]
        if exp == "summability":
            thresholds.append(art["p_star"])
        elif exp == "delta":
            deltas.append(art["delta_hat"])
    if len(thresholds) != len(deltas):
        raise ArtifactError(
            f"need matching report pairs, got {len(thresholds)} thresholds "
            f"and {len(deltas)} delta reports"
        )
    ax.scatter(deltas, thresholds, c="firebrick")
    lo = min(deltas + thresholds) - 0.1
    hi = max(deltas + thresholds) + 0.1
    ax.plot([lo, hi], [lo, hi], "k--", lw=0.8, label="p* = delta")
    ax.set_xlabel("critical exponent delta_hat")
    ax.set_ylabel("summability threshold p*")
    ax.legend()
    return {"pairs": len(deltas)}


RENDERERS = {
    "limitset": render_limitset,
    "delta-fit": render_delta_fit,
    "sv-decay": render_sv_decay,
    "jw-extrapolation": render_jw_extrapolation,
    "threshold-vs-delta": render_threshold_vs_delta,
}


def render(spec: FigureSpec) -> str:
    """Render the figure and write the provenance sidecar; returns the image path."""
    artifacts = [read_artifact(p) for p in spec.inputs]
    if not artifacts:
        raise ArtifactError("no input artifacts")
    _check_kind(spec, artifacts)
    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=130)
    annotations = RENDERERS[spec.kind](spec, artifacts, ax)
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    sidecar = {
        "kind": spec.kind,
        "inputs": [
            {"path": os.path.basename(p), "config_hash": _meta_of(a)["config_hash"],
             "experiment": _meta_of(a)["experiment"]}
            for p, a in zip(spec.inputs, artifacts)
        ],
        "annotations": annotations,
    }
    with open(spec.output + ".json", "w") as f:
        json.dump(sidecar, f, indent=2, sort_keys=True)
        f.write("\n")
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a limitlab artifact into a figure."
    )
    parser.add_argument("--kind", required=True, choices=sorted(KIND_EXPERIMENTS))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(args.kind, args.inputs, args.out)
        render(spec)
    except ArtifactError as e:
        print(f"render: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"render: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
