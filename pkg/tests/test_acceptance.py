"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
lines; tolerances are pinned here, not configurable.
"""

import json
import os

import numpy as np
import pytest

from limitlab import crossed as cp
from limitlab.geometry import (
    BoundaryPoint,
    InteriorPoint,
    apply,
    busemann_cocycle,
    busemann_many,
    geodesic_toward,
    hyp_distance,
    random_isometry,
)
from limitlab.groups import (
    boundary_conjugacy,
    box_dimension,
    cyclic_group,
    default_box_scales,
    enumerate_ball,
    estimate_delta,
    limit_set_sample,
)
from limitlab.kcycles import (
    cantor_cycle,
    circle_module,
    gap_power_sums,
    hardy_projections,
    hilbert_pairing,
    janson_wolff_integral,
    moebius_pullback,
    multiplication_operator,
    pushforward_symbols,
    sphere_signature_operator,
    summability_threshold,
    weierstrass_symbol,
)
from limitlab.kcycles.cantor import commutator_with_symbol, endpoint_differences
from limitlab.kcycles.circle import mode_norm_quadrature, weighted_t_pairing
from limitlab.kcycles.sphere import (
    boost_isometry,
    interior_commutator_defect,
    rotation_isometry,
)
from limitlab.kcycles.symbols import smooth_symbol
from limitlab.measures import group_delta, lipschitz_bump, ps_measure, transport_defect
from limitlab.mobius import sphere_to_stereo

from conftest import fuchsian_schottky, ortho_circle
from limitlab.groups import schottky_group


def criterion(num, label, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {label} -- {detail}")
    assert ok, f"criterion {num} failed: {detail}"


# ---------------------------------------------------------------- criterion 1

def test_criterion_1_busemann_suite():
    rng = np.random.default_rng(2024)
    n = 2
    worst_anti = worst_cocycle = worst_equiv = 0.0
    for _ in range(1000):
        u = rng.normal(size=(3, n + 1))
        u *= (rng.uniform(0.05, 0.85, size=3) / np.linalg.norm(u, axis=1))[:, None]
        x, xp, xpp = (InteriorPoint.from_ball(v) for v in u)
        xi = BoundaryPoint(rng.normal(size=n + 1))
        g = random_isometry(n, rng)
        d = busemann_cocycle(x, xp, xi)
        worst_anti = max(worst_anti, abs(d + busemann_cocycle(xp, x, xi)))
        worst_cocycle = max(
            worst_cocycle, abs(d + busemann_cocycle(xp, xpp, xi) - busemann_cocycle(x, xpp, xi))
        )
        worst_equiv = max(
            worst_equiv, abs(busemann_cocycle(apply(g, x), apply(g, xp), apply(g, xi)) - d)
        )
    # closed form vs the defining limit at t = 20
    o = InteriorPoint.origin(n)
    worst_limit = 0.0
    for _ in range(25):
        u = rng.normal(size=(2, n + 1))
        u *= (rng.uniform(0.05, 0.6, size=2) / np.linalg.norm(u, axis=1))[:, None]
        x, xp = (InteriorPoint.from_ball(v) for v in u)
        xi = BoundaryPoint(rng.normal(size=n + 1))
        probe = geodesic_toward(o, xi, 20.0)
        approx = hyp_distance(x, probe) - hyp_distance(xp, probe)
        worst_limit = max(worst_limit, abs(approx - busemann_cocycle(x, xp, xi)))
    ok = worst_anti < 1e-10 and worst_cocycle < 1e-10 and worst_equiv < 1e-10 and worst_limit < 1e-6
    criterion(1, "Busemann suite",
              ok,
              f"antisym {worst_anti:.2e}, cocycle {worst_cocycle:.2e}, "
              f"equivariance {worst_equiv:.2e} (tol 1e-10); limit oracle {worst_limit:.2e} (tol 1e-6)")


# ---------------------------------------------------------------- criterion 2

def test_criterion_2_group_suite(schottky_n2, torus_fuchsian):
    ball = enumerate_ball(schottky_n2, 3)
    lens = np.array([len(w) for w in ball.words])
    counts_ok = (np.sum(lens == 1), np.sum(lens == 2), np.sum(lens == 3)) == (4, 12, 36)

    cyc = estimate_delta(cyclic_group(2.0), 40)
    torus = estimate_delta(torus_fuchsian, 14)

    schot = estimate_delta(schottky_n2, 10)
    cloud = limit_set_sample(schottky_n2, 8, with_words=False)
    zs = np.array([sphere_to_stereo(p) for p in cloud.points])
    pts = np.column_stack([zs.real, zs.imag])
    bd = box_dimension(pts, default_box_scales(pts))

    ok = (counts_ok and cyc.value <= 0.05 and abs(torus.value - 1.0) <= 0.05
          and abs(schot.value - bd) <= 0.1)
    criterion(2, "group suite", ok,
              f"counts {'exact' if counts_ok else 'WRONG'}; cyclic {cyc.value:.4f} (<=0.05); "
              f"torus delta {torus.value:.4f} (1.0 +- 0.05 at L=14); "
              f"schottky {schot.value:.4f} vs box {bd:.4f} (|diff| <= 0.1)")


# ---------------------------------------------------------------- criterion 3

@pytest.fixture(scope="module")
def ps_setup(schottky_n1, measure_basepoints):
    x, x0 = measure_basepoints
    dh = group_delta(schottky_n1, 10)
    s = dh + 0.05
    fs = [lambda d: np.ones(len(np.atleast_2d(d)))]
    for t in np.pi / 4 + np.arange(4) * np.pi / 2:
        fs.append(lipschitz_bump(np.array([np.cos(t), np.sin(t)]), 0.6))
    mus = {L: ps_measure(schottky_n1, x, x0, s, L, delta_hat=dh) for L in (8, 12)}
    return schottky_n1, dh, s, x, x0, fs, mus


def test_criterion_3_patterson_sullivan(ps_setup):
    group, dh, s, x, x0, fs, mus = ps_setup
    defects = {L: [transport_defect(mu, g, fs) for g in "aAbB"] for L, mu in mus.items()}
    from limitlab.measures import translate_basepoint

    xp = InteriorPoint.from_ball([0.3, 0.2])
    mu = mus[12]
    back = translate_basepoint(translate_basepoint(mu, xp), x)
    round_trip = float(np.max(np.abs(back.weights - mu.weights) /
                              np.maximum(mu.weights, 1e-300)))
    ok = (max(defects[12]) <= 0.05
          and all(d12 < d8 for d12, d8 in zip(defects[12], defects[8]))
          and round_trip < 1e-10)
    criterion(3, "Patterson-Sullivan suite", ok,
              f"transport max {max(defects[12]):.4f} at L=12 (<= 0.05), "
              f"decrease from L=8 {'yes' if all(a < b for a, b in zip(defects[12], defects[8])) else 'NO'}; "
              f"basepoint round-trip {round_trip:.2e} (tol 1e-10)")


# ---------------------------------------------------------------- criterion 4

def test_criterion_4_crossed_product_identities(torus_fuchsian):
    rng = np.random.default_rng(5)

    def coeff(_):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)

        def f(dirs):
            d = np.atleast_2d(dirs)
            z = d[:, 0] + 1j * d[:, 1]
            return c[0] + c[1] * z + c[2] * np.conj(z) ** 2

        return f

    group = torus_fuchsian
    ball = enumerate_ball(group, 3)
    t_dirs = rng.normal(size=(40, 3))
    t_dirs /= np.linalg.norm(t_dirs, axis=1)[:, None]
    x = InteriorPoint.from_ball([0.05, 0.02, 0.01])

    worst_inv = worst_law = worst_cov = worst_hom = 0.0
    for _ in range(4):
        f = cp.CrossedProductElement(group, {"": coeff(0), "a": coeff(1), "B": coeff(2)})
        g = cp.CrossedProductElement(group, {"b": coeff(3), "": coeff(4)})
        ss = cp.cp_star(cp.cp_star(f))
        worst_inv = max(worst_inv, max(
            float(np.max(np.abs(ss.evaluate(w, t_dirs) - f.evaluate(w, t_dirs))))
            for w in f.support))
        once = cp.automorphism(f, 1.1, x)
        twice = cp.automorphism(cp.automorphism(f, 0.4, x), 0.7, x)
        worst_law = max(worst_law, max(
            float(np.max(np.abs(once.evaluate(w, t_dirs) - twice.evaluate(w, t_dirs))))
            for w in f.support))
        xi = BoundaryPoint(rng.normal(size=3))
        worst_cov = max(worst_cov, cp.covariance_defect(f, 0.8, xi, ball, x))
        a_m = cp.represent(f, xi, ball).matrix
        b_m = cp.represent(g, xi, ball).matrix
        ab_m = cp.represent(cp.cp_mul(f, g), xi, ball).matrix
        idx = [i for i, w in enumerate(ball.words) if len(w) <= 1]
        worst_hom = max(worst_hom, float(np.max(np.abs((ab_m - a_m @ b_m)[np.ix_(idx, idx)]))))
    ok = max(worst_inv, worst_law, worst_cov, worst_hom) <= 1e-10
    criterion(4, "crossed-product exact identities", ok,
              f"involution {worst_inv:.2e}, flow group law {worst_law:.2e}, "
              f"covariance {worst_cov:.2e}, homomorphism {worst_hom:.2e} (tol 1e-10)")


# ---------------------------------------------------------------- criterion 5

def test_criterion_5_kms_suite(ps_setup):
    group, dh, s, x, x0, fs, mus = ps_setup
    f, fp = cp.single(group, "a"), cp.single(group, "A")
    rel = {}
    for L, mu in mus.items():
        rel[L] = cp.kms_defect(f, fp, 0.05, dh, mu) / abs(cp.tau(cp.unit(group), mu))
    wrong = cp.kms_defect(f, fp, 0.05, dh + 0.5, mus[12]) / mus[12].total_mass

    g_el = cp.CrossedProductElement(group, {"": lambda d: np.full(len(np.atleast_2d(d)), 1.7 + 0j)})
    eq_rel = {}
    for L, mu in mus.items():
        eq_rel[L] = cp.equivariance_defect(g_el, "a", mu) / abs(cp.tau(g_el, mu))
    ok = (rel[12] <= 0.05 and rel[12] < rel[8] and wrong > rel[12]
          and eq_rel[12] <= 0.05 and eq_rel[12] < eq_rel[8])
    criterion(5, "KMS suite", ok,
              f"kms defect {rel[12]:.4f} at L=12 (<= 0.05, was {rel[8]:.4f} at L=8); "
              f"wrong exponent {wrong:.3f} (worse); equivariance {eq_rel[12]:.4f} (<= 0.05)")


# ---------------------------------------------------------------- criterion 6

def test_criterion_6_cantor_kcycle():
    group = schottky_group(
        [(ortho_circle(0.0, 0.72), ortho_circle(np.pi / 2, 0.72)),
         (ortho_circle(np.pi, 0.72), ortho_circle(3 * np.pi / 2, 0.72))],
        dimension=1,
    )
    cyc = cantor_cycle(group, 5)
    d = cyc.invariant_defects()
    algebra_exact = d["f_squared"] == 0.0 and d["anticommutator"] == 0.0

    a = lambda th: np.cos(th)
    comm = commutator_with_symbol(cyc, a)
    sv = np.sort(np.linalg.svd(comm, compute_uv=False))[::-1]
    expected = np.sort(np.repeat(endpoint_differences(cyc, a), 2))[::-1]
    sv_defect = float(np.max(np.abs(sv - expected)))

    dh = estimate_delta(group, 10).value
    scan = gap_power_sums(group, a, [dh - 0.3, dh + 0.3], levels=[4, 6, 8, 10])
    low, high = scan[dh - 0.3], scan[dh + 0.3]
    grows = all(b > a_ * 1.1 for a_, b in zip(low, low[1:]))
    stable = abs(high[-1] - high[-2]) / high[-2] < 0.02
    ok = algebra_exact and sv_defect < 1e-12 and grows and stable
    criterion(6, "Cantor K-cycle", ok,
              f"F^2=I and anticommutation exact: {algebra_exact}; "
              f"singular values = endpoint differences to {sv_defect:.2e} (tol 1e-12); "
              f"scan separates delta +- 0.3 (grow {grows}, stable {stable}, delta {dh:.3f})")


# ---------------------------------------------------------------- criterion 7

def test_criterion_7_circle_module():
    cyc = circle_module(16)
    diag = np.diag(cyc.operator)
    spectrum_exact = (np.sum(diag == 1.0) == 16 and np.sum(diag == -1.0) == 16
                      and cyc.invariant_defects()["f_squared"] == 0.0)
    norm_defect = max(abs(mode_norm_quadrature(k) - 2 * np.pi / abs(k))
                      for k in (1, 2, 5, 16))
    c1 = {2: 1.3 + 0.2j, -1: 0.4j}
    c2 = {2: 0.5, 3: 1.0}
    pair_defect = abs(hilbert_pairing(c1, c2, 0.0) - hilbert_pairing(c1, c2, 7.3 - 2.0j))
    pair_model = abs(hilbert_pairing(c1, c2, 0.0) - weighted_t_pairing(c1, c2))

    ep, _ = hardy_projections(16)
    shift = multiplication_operator(lambda th: np.exp(1j * th), 16)
    comm = ep.matrix @ shift.matrix - shift.matrix @ ep.matrix
    ks = np.array(ep.labels)
    interior = np.abs(ks) <= 15
    sv = np.linalg.svd(comm[np.ix_(interior, interior)], compute_uv=False)
    rank_one = int(np.sum(sv > 1e-12)) == 1

    ok = spectrum_exact and norm_defect < 1e-10 and pair_defect < 1e-12 and rank_one
    criterion(7, "circle module", ok,
              f"T spectrum exact: {spectrum_exact}; mode norms 2pi/|k| to {norm_defect:.2e} "
              f"(tol 1e-10); pairing primitive-independence {pair_defect:.2e} (tol 1e-12, "
              f"model match {pair_model:.2e}); [E+, shift] interior rank one: {rank_one}")


# ---------------------------------------------------------------- criterion 8

def test_criterion_8_summability(torus_fuchsian, torus_deformed):
    p_grid = [0.7, 0.85, 0.95, 1.05, 1.2, 1.5, 2.0, 2.5]
    smooth = smooth_symbol({1: 1.0, 2: 0.35, -3: 0.2})
    rep_s = summability_threshold(smooth, [32, 64, 128], p_grid)
    smooth_ok = abs(rep_s.p_star - 1.0) <= 0.15 and abs(rep_s.p_jw - 1.0) <= 0.15

    w = weierstrass_symbol(0.5, 10)
    rep_w = summability_threshold(w, [128, 256, 512, 1024],
                                  [1.4, 1.7, 1.85, 2.0, 2.15, 2.3, 2.6, 3.0],
                                  n_grid_jw=4096)
    weier_ok = abs(rep_w.p_star - 2.0) <= 0.3 and abs(rep_w.p_jw - 2.0) <= 0.3 \
        and not rep_w.stable[2.0]

    jw = janson_wolff_integral(lambda th: np.exp(1j * th), 2.0)
    jw_ok = abs(jw.value - (2 * np.pi) ** 2) / (2 * np.pi) ** 2 <= 0.005

    phi = boundary_conjugacy(torus_fuchsian, torus_deformed, 6)
    sym = pushforward_symbols(phi, lambda z: np.real(z) + 0.5 * np.imag(z))
    rep_q = summability_threshold(sym, [32, 64, 128], p_grid)
    dq = estimate_delta(torus_deformed, 14).value
    qf_ok = abs(rep_q.p_star - dq) <= 0.15 and rep_q.p_star >= 1.0 and dq >= 1.0

    ok = smooth_ok and weier_ok and jw_ok and qf_ok
    criterion(8, "summability", ok,
              f"smooth p*={rep_s.p_star:.3f} jw={rep_s.p_jw:.3f} (1.0 +- 0.15); "
              f"weierstrass p*={rep_w.p_star:.3f} jw={rep_w.p_jw:.3f} (2.0 +- 0.3); "
              f"JW(e^it, p=2)={jw.value:.3f} vs {(2 * np.pi) ** 2:.3f} (0.5%); "
              f"quasiFuchsian p*={rep_q.p_star:.3f} vs delta={dq:.4f} "
              f"(|diff| <= 0.15, both >= 1) [experimental]")


# ---------------------------------------------------------------- criterion 9

def test_criterion_9_sphere_operator():
    cyc32 = sphere_signature_operator(32)
    d = cyc32.invariant_defects()
    algebra_exact = d["f_squared"] == 0.0 and d["anticommutator"] == 0.0

    rot = rotation_isometry(1, 0.61)
    p_rot = moebius_pullback(16, rot)
    cyc16 = sphere_signature_operator(16)
    rot_comm = float(np.max(np.abs(cyc16.operator @ p_rot.matrix - p_rot.matrix @ cyc16.operator)))

    boost = boost_isometry(0.3)
    defects = {}
    for lm in (8, 16, 32):
        cyc = sphere_signature_operator(lm)
        defects[lm] = interior_commutator_defect(cyc, moebius_pullback(lm, boost))
    decreasing = defects[8] > defects[16] > defects[32]
    ok = algebra_exact and rot_comm <= 1e-8 and decreasing and defects[32] <= 0.05
    criterion(9, "sphere operator", ok,
              f"algebra exact at l_max=32: {algebra_exact}; rotation commutator "
              f"{rot_comm:.2e} (tol 1e-8); boost defects "
              f"{defects[8]:.2e} > {defects[16]:.2e} > {defects[32]:.2e} "
              f"(strictly decreasing, <= 0.05 at 32)")


# --------------------------------------------------------------- criterion 10

def test_criterion_10_cli_determinism(tmp_path):
    config_dir = os.path.join(os.path.dirname(__file__), "..", "configs")
    from limitlab.cli import main as cli_main

    mismatches = []
    for name in sorted(os.listdir(config_dir)):
        if not name.endswith(".json"):
            continue
        with open(os.path.join(config_dir, name)) as f:
            exp = json.load(f)["experiment"]
        parts = exp.split(":")
        args = [parts[0]] + (parts[1:] if parts[0] == "kcycle" else [])
        outs = []
        for run_id in ("a", "b"):
            out = tmp_path / f"{name}-{run_id}"
            rc = cli_main(args + ["--config", os.path.join(config_dir, name), "--out", str(out)])
            assert rc == 0, f"{name} exited {rc}"
            outs.append(out)
        for fn in sorted(os.listdir(outs[0])):
            b1 = open(os.path.join(outs[0], fn), "rb").read()
            b2 = open(os.path.join(outs[1], fn), "rb").read()
            if b1 != b2:
                mismatches.append(f"{name}/{fn}")
    ok = not mismatches
    criterion(10, "CLI determinism", ok,
              "byte-identical reruns for every demo config" if ok
              else f"mismatched: {mismatches}")
