"""Batch front door: build groups from JSON configs, run experiments, emit artifacts.

Every output file carries a metadata header (tool version + config hash) and
all floating-point output is formatted to 17 significant digits, so a rerun
with the same config and seed is byte-identical.

Exit codes: 0 ok, 1 numeric failure, 2 usage / invalid config.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

EXPERIMENTS = ("group", "limitset", "delta", "psmeasure", "kms",
               "kcycle", "summability", "conjugacy")
KCYCLE_KINDS = ("cantor", "circle", "sphere")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def fmt(x) -> str:
    """Deterministic 17-significant-digit rendering."""
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return f"{float(x):.17g}"


def _round_trip(obj):
    """Convert to plain JSON types with deterministic float rendering."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _round_trip(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_trip(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(fmt(obj))
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(fmt(obj.real)), "im": float(fmt(obj.imag))}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round_trip(v) for v in obj.tolist()]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    return str(obj)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _check_keys(d: dict, allowed: set, path: str):
    for k in d:
        if k not in allowed:
            raise ConfigError(f"unknown key {path}.{k!r}; allowed: {sorted(allowed)}")


def load_config(path: str) -> dict:
    try:
        with open(path) as f:
            config = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    _check_keys(config, {"experiment", "seed", "group", "params", "comment"}, "config")
    for key in ("experiment", "seed"):
        if key not in config:
            raise ConfigError(f"{path}: missing required field {key!r}")
    if not isinstance(config["seed"], int):
        raise ConfigError(f"{path}: field 'seed' must be an integer")
    exp = config["experiment"]
    kind = exp.split(":")[0]
    if kind not in EXPERIMENTS:
        raise ConfigError(f"{path}: unknown experiment {exp!r}; choose from {EXPERIMENTS}")
    return config


def build_group(spec: dict):
    from .groups import cyclic_group, punctured_torus_group, schottky_group

    _check_keys(spec, {"kind", "dimension", "circles", "trace_a", "trace_b",
                       "translation_length", "arcs"}, "config.group")
    kind = spec.get("kind")
    if kind == "free-schottky":
        import numpy as np

        dimension = int(spec.get("dimension", 2))
        pairs = []
        if "arcs" in spec:
            # arcs on S^1 by (center angle, halfwidth); circles orthogonal to S^1
            for (m1, w1), (m2, w2) in spec["arcs"]:
                pairs.append(
                    ((complex(np.exp(1j * m1) / np.cos(w1)), float(np.tan(w1))),
                     (complex(np.exp(1j * m2) / np.cos(w2)), float(np.tan(w2))))
                )
            dimension = 1
        else:
            for (c1, r1), (c2, r2) in spec["circles"]:
                pairs.append(((complex(c1[0], c1[1]), float(r1)),
                              (complex(c2[0], c2[1]), float(r2))))
        return schottky_group(pairs, dimension=dimension)
    if kind == "punctured-torus":
        ta = spec["trace_a"]
        tb = spec.get("trace_b", ta)
        to_c = lambda v: complex(v[0], v[1]) if isinstance(v, list) else complex(v)
        return punctured_torus_group(to_c(ta), to_c(tb))
    if kind == "cyclic":
        return cyclic_group(float(spec.get("translation_length", 2.0)),
                            int(spec.get("dimension", 1)))
    raise ConfigError(f"unknown group kind {kind!r}")


class Artifacts:
    """Deterministic writers with the metadata header convention."""

    def __init__(self, out_dir: str, meta: dict):
        self.out_dir = out_dir
        self.meta = meta
        os.makedirs(out_dir, exist_ok=True)
        self.written = []

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_csv(self, name: str, header: list, rows) -> str:
        lines = [f"# limitlab {self.meta['tool_version']}",
                 f"# config_hash {self.meta['config_hash']}",
                 f"# experiment {self.meta['experiment']}",
                 ",".join(header)]
        for row in rows:
            lines.append(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row))
        p = self.path(name)
        with open(p, "w") as f:
            f.write("\n".join(lines) + "\n")
        self.written.append(p)
        return p

    def write_json(self, name: str, payload: dict) -> str:
        doc = {"meta": self.meta, **_round_trip(payload)}
        p = self.path(name)
        with open(p, "w") as f:
            json.dump(doc, f, indent=2, sort_keys=True)
            f.write("\n")
        self.written.append(p)
        return p

    def write_pgm(self, name: str, image) -> str:
        import numpy as np

        img = np.asarray(image)
        h, w = img.shape
        p = self.path(name)
        header = (f"P5\n# limitlab {self.meta['tool_version']} "
                  f"config_hash {self.meta['config_hash']}\n{w} {h}\n255\n")
        with open(p, "wb") as f:
            f.write(header.encode())
            f.write(img.astype(np.uint8).tobytes())
        self.written.append(p)
        return p


def _cloud_to_plane(cloud):
    import numpy as np

    from .mobius import sphere_to_stereo

    if cloud.dimension == 1:
        return cloud.points
    zs = np.array([sphere_to_stereo(p) for p in cloud.points])
    keep = np.isfinite(zs)
    zs = zs[keep]
    return np.column_stack([zs.real, zs.imag])


def _raster(points, size: int = 512, bound: float | None = None):
    import numpy as np

    pts = np.asarray(points)
    if bound is None:
        bound = float(np.quantile(np.abs(pts), 0.995)) * 1.1
    ij = np.clip(((pts + bound) / (2 * bound) * (size - 1)).astype(int), 0, size - 1)
    img = np.zeros((size, size))
    np.add.at(img, (size - 1 - ij[:, 1], ij[:, 0]), 1.0)
    img = np.log1p(img)
    if img.max() > 0:
        img = img / img.max() * 255.0
    return img


def run_group(config, art):
    from .geometry import minkowski_gram
    import numpy as np

    group = build_group(config["group"])
    gens = group.generators()
    checks = []
    for i, g in enumerate(gens):
        eta = minkowski_gram(g.n)
        form = float(np.max(np.abs(g.matrix.T @ eta @ g.matrix - eta)))
        checks.append({"generator": i, "form_defect": form,
                       "det": float(np.linalg.det(g.matrix))})
    art.write_json("group_summary.json", {
        "kind": group.kind, "rank": group.rank, "dimension": group.dimension,
        "generator_checks": checks, "meta_flags": {k: v for k, v in group.meta.items()
                                                   if isinstance(v, (bool, int, float, str))},
    })
    return 0


def run_limitset(config, art):
    from .groups import BoundaryCloud, codes_to_word, orbit_arrays, points_to_directions

    params = config.get("params", {})
    _check_keys(params, {"L", "raster_size"}, "config.params")
    group = build_group(config["group"])
    max_len = int(params.get("L", 8))
    disp, depth, points, codes = orbit_arrays(group, max_len, want_points=True, want_codes=True)
    top = depth == max_len
    dirs = points_to_directions(points[top])
    words = [codes_to_word(row) for row in codes[top]]
    rows = []
    for word, d, pt in zip(words, disp[top], dirs):
        rows.append([word, fmt(d)] + [fmt(c) for c in pt])
    coord_names = ["x", "y", "z"][: dirs.shape[1]]
    art.write_csv("limitset.csv", ["word", "displacement"] + coord_names, rows)
    cloud = BoundaryCloud(dirs, tuple(words), group.dimension)
    plane = _cloud_to_plane(cloud)
    art.write_pgm("limitset.pgm", _raster(plane, int(params.get("raster_size", 512))))
    return 0


def run_delta(config, art):
    from .groups import box_dimension, default_box_scales, estimate_delta, limit_set_sample

    params = config.get("params", {})
    _check_keys(params, {"L_max", "box_check", "box_L"}, "config.params")
    group = build_group(config["group"])
    max_len = int(params.get("L_max", 10))
    est = estimate_delta(group, max_len)
    payload = {
        "delta_hat": est.value, "residual": est.residual, "L_max": est.max_len,
        "fit_window": list(est.fit_window),
    }
    if params.get("box_check", False):
        cloud = limit_set_sample(group, int(params.get("box_L", 8)), with_words=False)
        pts = _cloud_to_plane(cloud)
        payload["box_dimension"] = box_dimension(pts, default_box_scales(pts))
    art.write_json("delta_report.json", payload)
    art.write_csv("delta_counts.csv", ["radius", "count"],
                  [[fmt(r), str(int(c))] for r, c in zip(est.radii, est.counts)])
    return 0


def _measure_setup(config):
    import numpy as np

    from .geometry import InteriorPoint
    from .measures import group_delta, ps_measure

    params = config.get("params", {})
    group = build_group(config["group"])
    delta_hat = group_delta(group, int(params.get("delta_L", 10)))
    eps = float(params.get("s_offset", 0.05))
    s = delta_hat + eps
    n = group.dimension
    x0 = InteriorPoint.from_ball(params.get("x0_ball", [0.08, 0.03, 0.0][: n + 1]))
    eye = params.get("x_ball")
    x = InteriorPoint.origin(n) if eye is None else InteriorPoint.from_ball(eye)
    return group, delta_hat, s, x, x0, params


def run_psmeasure(config, art):
    import numpy as np

    from .measures import lipschitz_bump, ps_measure, transport_defect

    group, delta_hat, s, x, x0, params = _measure_setup(config)
    _check_keys(params, {"L", "L_compare", "s_offset", "delta_L", "x0_ball", "x_ball",
                         "bump_width", "export_atoms"}, "config.params")
    max_len = int(params.get("L", 12))
    fs = _standard_test_functions(group, float(params.get("bump_width", 0.6)))
    report = {"delta_hat": delta_hat, "s": s, "defects": []}
    for L in sorted({int(params.get("L_compare", 8)), max_len}):
        mu = ps_measure(group, x, x0, s, L, delta_hat=delta_hat)
        for k in range(2 * group.rank):
            from .groups import LETTERS

            g = LETTERS[k]
            report["defects"].append({"L": L, "s": s, "g": g,
                                      "defect": transport_defect(mu, g, fs)})
    art.write_json("transport_report.json", report)
    if params.get("export_atoms", False):
        from .groups import codes_to_word, orbit_arrays

        mu = ps_measure(group, x, x0, s, max_len, delta_hat=delta_hat)
        _, _, _, codes = orbit_arrays(group, max_len, x0, want_codes=True)
        words = [""] + [codes_to_word(row) for row in codes]
        rows = [[w] + [fmt(c) for c in d] + [fmt(wt)]
                for w, d, wt in zip(words, mu.directions, mu.weights)]
        coord_names = ["x", "y", "z"][: mu.directions.shape[1]]
        art.write_csv("ps_atoms.csv", ["word"] + coord_names + ["weight"], rows)
    return 0


def _standard_test_functions(group, width: float):
    """Constant plus bumps at the gap midpoints between the limit-set clusters.

    Bumps centered on the attracting fixed points expose the e^{eps D}
    prelimit mismatch of the epsilon-above-critical truncation, which no
    word-ball enlargement removes; the gap bumps measure mass transport
    through the bulk instead.
    """
    import numpy as np

    from .measures import lipschitz_bump

    fs = [lambda d: np.ones(len(np.atleast_2d(d)))]
    if group.dimension == 1 and group.kind == "free-schottky":
        arcs = []
        for pair in group.pairings:
            for circ in pair:
                arcs.append(np.angle(complex(circ.center)))
        arcs = np.sort(np.mod(arcs, 2 * np.pi))
        mids = np.concatenate([(arcs[:-1] + arcs[1:]) / 2, [(arcs[-1] + arcs[0] + 2 * np.pi) / 2]])
        for t in mids:
            fs.append(lipschitz_bump(np.array([np.cos(t), np.sin(t)]), width))
    else:
        for t in np.linspace(0.3, 2 * np.pi + 0.3, 6, endpoint=False):
            v = np.array([np.cos(t), np.sin(t), 0.4][: group.dimension + 1])
            fs.append(lipschitz_bump(v, width))
    return fs


def run_kms(config, art):
    import numpy as np

    from . import crossed as cp
    from .groups import LETTERS
    from .measures import ps_measure, transport_defect

    from .groups import invert_word

    group, delta_hat, s, x, x0, params = _measure_setup(config)
    _check_keys(params, {"L", "L_compare", "s_offset", "delta_L", "x0_ball", "x_ball",
                         "t_values", "generator"}, "config.params")
    max_len = int(params.get("L", 12))
    t_values = params.get("t_values", [0.0, 0.1])
    gen = params.get("generator", "a")
    fs = _standard_test_functions(group, 0.6)
    f = cp.single(group, gen)
    fp = cp.single(group, invert_word(gen))
    report = {"delta_hat": delta_hat, "s": s, "rows": [], "equivariance": []}
    const_el = cp.CrossedProductElement(group, {"": 1.0})
    for L in sorted({int(params.get("L_compare", 8)), max_len}):
        mu = ps_measure(group, x, x0, s, L, delta_hat=delta_hat)
        tr = max(transport_defect(mu, gen, fs), transport_defect(mu, fp.support[0], fs))
        mass = abs(cp.tau(cp.unit(group), mu))
        for t in t_values:
            defect = cp.kms_defect(f, fp, float(t), delta_hat, mu)
            report["rows"].append({"L": L, "s": s, "t": float(t), "delta_hat": delta_hat,
                                   "defect": defect, "relative_defect": defect / mass,
                                   "transport_defect": tr})
        eq = cp.equivariance_defect(const_el, gen, mu)
        report["equivariance"].append({"L": L, "s": s, "g": gen, "delta_hat": delta_hat,
                                       "defect": eq,
                                       "relative_defect": eq / abs(cp.tau(const_el, mu)),
                                       "transport_defect": tr})
    art.write_json("kms_report.json", report)
    return 0


def run_kcycle(config, art, variant: str):
    import numpy as np

    params = config.get("params", {})
    if variant == "cantor":
        from .groups import estimate_delta
        from .kcycles import cantor_cycle, gap_power_sums
        from .kcycles.cantor import endpoint_differences

        _check_keys(params, {"level", "scan_levels", "delta_L"}, "config.params")
        group = build_group(config["group"])
        level = int(params.get("level", 5))
        cyc = cantor_cycle(group, level)
        delta_hat = estimate_delta(group, int(params.get("delta_L", 10))).value
        a = lambda th: np.cos(th)
        diffs = endpoint_differences(cyc, a)
        scan = gap_power_sums(group, a, [delta_hat - 0.3, delta_hat + 0.3],
                              params.get("scan_levels", [4, 6, 8, 10]))
        art.write_json("cantor_report.json", {
            "level": level, "intervals": cyc.dim // 2, "delta_hat": delta_hat,
            "invariant_defects": cyc.invariant_defects(),
            "power_sums": {fmt(p): v for p, v in scan.items()},
        })
        art.write_csv("cantor_singular_values.csv", ["interval", "difference"],
                      [[str(i), fmt(v)] for i, v in enumerate(np.sort(diffs)[::-1])])
        return 0
    if variant == "circle":
        from .kcycles import circle_module, hardy_projections, multiplication_operator
        from .kcycles.circle import mode_norm_quadrature

        _check_keys(params, {"N"}, "config.params")
        n_max = int(params.get("N", 16))
        cyc = circle_module(n_max)
        ep, em = hardy_projections(n_max)
        shift = multiplication_operator(lambda th: np.exp(1j * th), n_max)
        comm = ep.matrix @ shift.matrix - shift.matrix @ ep.matrix
        sv = np.linalg.svd(comm, compute_uv=False)
        art.write_json("circle_report.json", {
            "N": n_max,
            "t_spectrum_counts": {"plus": int(np.sum(np.diag(cyc.operator) > 0)),
                                  "minus": int(np.sum(np.diag(cyc.operator) < 0))},
            "mode_norm_defect": max(abs(mode_norm_quadrature(k) - 2 * np.pi / abs(k))
                                    for k in (1, 2, 3, n_max)),
            "projection_defects": {
                "idempotent": float(np.max(np.abs(ep.matrix @ ep.matrix - ep.matrix))),
                "orthogonal": float(np.max(np.abs(ep.matrix @ em.matrix))),
            },
            "shift_commutator_rank": int(np.sum(sv > 1e-12)),
        })
        art.write_csv("circle_shift_sv.csv", ["index", "singular_value"],
                      [[str(i), fmt(v)] for i, v in enumerate(sv)])
        return 0
    if variant == "sphere":
        from .kcycles import moebius_pullback, sphere_signature_operator
        from .kcycles.sphere import (boost_isometry, interior_commutator_defect,
                                     rotation_isometry)

        _check_keys(params, {"l_values", "boost", "rotation"}, "config.params")
        l_values = params.get("l_values", [8, 16])
        boost = boost_isometry(float(params.get("boost", 0.3)))
        rot = rotation_isometry(1, float(params.get("rotation", 0.61)))
        rows = []
        for lm in l_values:
            cyc = sphere_signature_operator(int(lm))
            p_rot = moebius_pullback(int(lm), rot)
            p_boost = moebius_pullback(int(lm), boost)
            rows.append({
                "l_max": int(lm),
                "invariants": cyc.invariant_defects(),
                "rotation_commutator": float(np.max(np.abs(
                    cyc.operator @ p_rot.matrix - p_rot.matrix @ cyc.operator))),
                "boost_interior_defect": interior_commutator_defect(cyc, p_boost),
            })
        art.write_json("sphere_report.json", {"rows": rows})
        return 0
    raise ConfigError(f"unknown kcycle variant {variant!r}; choose from {KCYCLE_KINDS}")


def _symbol_from_config(config):
    import numpy as np

    from .kcycles import pushforward_symbols, weierstrass_symbol
    from .kcycles.symbols import SymbolFunction, smooth_symbol

    spec = config.get("params", {}).get("symbol", {"kind": "smooth"})
    kind = spec.get("kind", "smooth")
    if kind == "constant":
        return SymbolFunction(lambda th: np.full(len(th), 1.0 + 0.0j), "smooth",
                              {"kind": "constant"})
    if kind == "smooth":
        return smooth_symbol({1: 1.0, 2: 0.35, -3: 0.2})
    if kind == "weierstrass":
        return weierstrass_symbol(float(spec.get("alpha", 0.5)), int(spec.get("scales", 10)))
    if kind == "quasifuchsian":
        from .groups import boundary_conjugacy, punctured_torus_group

        ta = spec.get("trace_a", [3.0, 0.1])
        source = punctured_torus_group(3.0)
        target = punctured_torus_group(complex(ta[0], ta[1]))
        phi = boundary_conjugacy(source, target, int(spec.get("conjugacy_L", 6)))
        return pushforward_symbols(phi, lambda z: np.real(z) + 0.5 * np.imag(z))
    raise ConfigError(f"unknown symbol kind {kind!r}")


def run_summability(config, art):
    import numpy as np

    from .kcycles import janson_wolff_integral, summability_threshold
    from .kcycles.schatten import commutator_singular_values

    params = config.get("params", {})
    _check_keys(params, {"N_values", "p_grid", "jw_grid", "symbol"}, "config.params")
    symbol = _symbol_from_config(config)
    n_values = params.get("N_values", [32, 64, 128])
    p_grid = params.get("p_grid", [0.7, 0.85, 0.95, 1.05, 1.2, 1.5, 2.0, 2.5])
    jw_grid = int(params.get("jw_grid", 2048))
    report = summability_threshold(symbol, n_values, p_grid, jw_grid)
    rows = []
    jw_rows = []
    for p in report.p_grid:
        jw = janson_wolff_integral(symbol, float(p), jw_grid)
        for h, partial in zip(jw.h_values, jw.partials):
            jw_rows.append([fmt(p), fmt(h), fmt(partial),
                            "divergent" if jw.divergent else "finite"])
        for i, n in enumerate(report.n_values):
            norms = report.schatten_norms.get(float(p))
            rows.append([fmt(n), fmt(p), fmt(norms[i] if norms else 0.0),
                         fmt(jw.value), "divergent" if jw.divergent else "finite"])
    art.write_csv("summability_scan.csv", ["N", "p", "schatten_norm", "jw_integral", "flags"],
                  rows)
    art.write_csv("jw_scan.csv", ["p", "h", "partial_integral", "flags"], jw_rows)
    sv_rows = []
    for n in n_values:
        sv = commutator_singular_values(symbol, int(n))
        for i, v in enumerate(sv[: min(len(sv), 256)]):
            sv_rows.append([fmt(n), str(i), fmt(v)])
    art.write_csv("singular_values.csv", ["N", "index", "value"], sv_rows)
    art.write_json("summability_report.json", {
        "p_star": report.p_star, "p_schatten": report.p_schatten, "p_jw": report.p_jw,
        "flags": list(report.flags), "symbol": symbol.smoothness,
        "N_values": [int(n) for n in report.n_values],
        "p_grid": [float(p) for p in report.p_grid],
        "jw_grid": jw_grid,
        "provenance": {k: str(v) for k, v in symbol.provenance.items()},
    })
    return 0


def run_conjugacy(config, art):
    import numpy as np

    from .groups import (boundary_conjugacy, conjugacy_equivariance_defect,
                         conjugacy_fixed_point_defect, punctured_torus_group)

    params = config.get("params", {})
    _check_keys(params, {"L", "trace_a", "trace_b"}, "config.params")
    source = punctured_torus_group(3.0)
    ta = params.get("trace_a", [3.0, 0.1])
    target = punctured_torus_group(complex(ta[0], ta[1]))
    phi = boundary_conjugacy(source, target, int(params.get("L", 6)))
    art.write_csv("conjugacy_samples.csv", ["angle", "target_re", "target_im", "word"],
                  [[fmt(a), fmt(t.real), fmt(t.imag), w]
                   for a, t, w in zip(phi.source_angles, phi.target_points, phi.words)])
    art.write_json("conjugacy_report.json", {
        "samples": len(phi.source_angles),
        "skipped_non_hyperbolic_words": phi.skipped_words,
        "equivariance_defect": conjugacy_equivariance_defect(phi),
        "fixed_point_defect": conjugacy_fixed_point_defect(phi),
        "declared_tolerance": phi.equivariance_tol,
    })
    return 0


def list_experiments() -> str:
    return (
        "experiments:\n"
        "  group        construct and validate a group from config\n"
        "  limitset     sample the limit set; CSV cloud + PGM raster\n"
        "  delta        critical-exponent counting fit (+ box-dimension check)\n"
        "  psmeasure    Patterson-Sullivan measure and transport defects\n"
        "  kms          KMS-condition defect report\n"
        "  kcycle:cantor | kcycle:circle | kcycle:sphere\n"
        "               concrete K-cycle diagnostics\n"
        "  summability  Schatten / Janson-Wolff threshold estimation\n"
        "  conjugacy    boundary conjugacy by fixed-point matching\n"
    )


def main(argv=None) -> int:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog="limitlab",
        description="Numerics for limit sets: measures, crossed products, K-cycles.",
        epilog=list_experiments(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"limitlab {__version__}")
    sub = parser.add_subparsers(dest="command")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        if name == "kcycle":
            p.add_argument("variant", choices=KCYCLE_KINDS)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--workers", type=int, default=0,
                       help="bound BLAS threads (0 = leave unchanged)")
        p.add_argument("--verbose", action="store_true")

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print(list_experiments(), file=sys.stderr, end="")
        return 2

    if args.workers:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.workers)

    try:
        config = load_config(args.config)
        declared = config["experiment"].split(":")[0]
        if declared != args.command:
            raise ConfigError(
                f"config declares experiment {config['experiment']!r} but the "
                f"subcommand is {args.command!r}"
            )
    except ConfigError as e:
        print(f"limitlab: {e}", file=sys.stderr)
        return 2

    meta = {"tool_version": __version__, "config_hash": config_hash(config),
            "experiment": config["experiment"]}
    art = Artifacts(args.out, meta)
    try:
        if args.command == "group":
            rc = run_group(config, art)
        elif args.command == "limitset":
            rc = run_limitset(config, art)
        elif args.command == "delta":
            rc = run_delta(config, art)
        elif args.command == "psmeasure":
            rc = run_psmeasure(config, art)
        elif args.command == "kms":
            rc = run_kms(config, art)
        elif args.command == "kcycle":
            exp = config["experiment"]
            variant = exp.split(":", 1)[1] if ":" in exp else args.variant
            if variant != args.variant:
                raise ConfigError(
                    f"config kcycle variant {variant!r} does not match {args.variant!r}"
                )
            rc = run_kcycle(config, art, args.variant)
        elif args.command == "summability":
            rc = run_summability(config, art)
        else:
            rc = run_conjugacy(config, art)
    except ConfigError as e:
        print(f"limitlab: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"limitlab: numeric failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.verbose:
        for p in art.written:
            print(p)
    return rc


if __name__ == "__main__":
    sys.exit(main())
