"""Acceptance checks, one test per criterion, each reporting a PASS/FAIL line."""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq

from cavspin.cavity_budget import CavityGeometry, cooperativity_geometric, ising_budget, squeezing_exponent
from cavspin.cv_gaussian import (
    entanglement_entropy,
    epr_criterion,
    local_ops,
    nullifier_variances,
    prepare_graph_state,
    prescription_from_adjacency,
)
from cavspin.dynamics import dicke_stability_matrix, dicke_threshold, dissipative_oat, mean_field_dicke
from cavspin.floquet_graphs import (
    ModulationSpectrum,
    Tone,
    builder_mobius,
    builder_tree,
    coarse_grain_tree,
    corr_to_geometry,
    coupling_table,
    couplings_to_spectrum,
    gaussian_quench,
    magnon_dispersion,
    spectrum_to_couplings,
)
from cavspin.hamiltonians import excitation_number, h_tavis_cummings, h_xy_raman
from cavspin.metrology import EchoProtocol, echo_gain_scan, echo_protocol, oat_optimum, oat_optimum_scan
from cavspin.qnd import herald_w_faraday, parity_herald, vacuum_rabi_spectrum
from cavspin.spin_algebra import coherent_spin_state, make_spin_space, rotation_operator, spin_operators

from oracles import (
    dicke_critical_coupling,
    dicke_ladder,
    fock_coherent,
    kron_all,
    oat_closed_form,
    poisson_even_sum,
    qubit_collective,
    qubit_css,
    two_site_quench_cxx12,
)

ROOT = Path(__file__).resolve().parents[1]


def dense(A):
    return A.toarray() if hasattr(A, "toarray") else np.asarray(A)


def test_criterion_01_spin_algebra(report):
    t0 = time.perf_counter()
    worst = 0.0
    for twoS in range(0, 51):
        S = twoS / 2
        sp_ = make_spin_space(S)
        o = spin_operators(sp_, sparse=False)
        ops = [o.x, o.y, o.z]
        for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            worst = max(worst, np.max(np.abs(ops[a] @ ops[b] - ops[b] @ ops[a] - 1j * ops[c])))
        C = o.x @ o.x + o.y @ o.y + o.z @ o.z
        worst = max(worst, np.max(np.abs(C - S * (S + 1) * np.eye(twoS + 1))) / max(1.0, S * (S + 1)))
        R = dense(rotation_operator(sp_, [0.6, 0.0, 0.8], 1.1))
        worst = max(worst, np.max(np.abs(R @ R.conj().T - np.eye(twoS + 1))))
        # rotation acts as the SO(3) rotation on the spin vector
        n = np.array([0.6, 0.0, 0.8])
        rot = sla.expm(1.1 * np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]]))
        if S > 0:
            Sz_rot = R.conj().T @ o.z @ R
            ref = rot[2, 0] * o.x + rot[2, 1] * o.y + rot[2, 2] * o.z
            worst = max(worst, np.max(np.abs(Sz_rot - ref)) / S)
    dt = time.perf_counter() - t0
    report(1, "su(2), Casimir, rotations for 2S = 0..50", worst < 1e-10, f"max residual {worst:.2e} ({dt:.2f} s)")


def test_criterion_02_jc_tc_spectra(report):
    t0 = time.perf_counter()
    g = 1.0
    s1 = vacuum_rabi_spectrum(g, 1, g / 10, g / 10).splitting
    s16 = vacuum_rabi_spectrum(g, 16, g / 10, g / 10).splitting
    comm = 0.0
    for S in (0.5, 2, 8):
        H, E = dense(h_tavis_cummings(0.7, 0.3, S, 6)), dense(excitation_number(S, 6))
        comm = max(comm, np.max(np.abs(H @ E - E @ H)))
    dt = time.perf_counter() - t0
    ok = abs(s1 / 2 - 1) < 0.01 and abs(s16 / 8 - 1) < 0.01 and comm < 1e-10 and dt < 5
    report(2, "vacuum Rabi splitting and excitation conservation", ok,
           f"2g -> {s1:.5f}, 8g -> {s16:.5f}, [H,N_exc] {comm:.1e} ({dt:.2f} s)")


def test_criterion_03_cooperativity(report):
    eta = cooperativity_geometric(CavityGeometry(1e4, 15e-6, 780e-9))
    report(3, "geometric cooperativity", abs(eta - 5.23) <= 0.01 and eta > 1, f"eta = {eta:.5f}")


def test_criterion_04_parity_qnd(report):
    t0 = time.perf_counter()
    err = max(abs(parity_herald(a)["even"].probability - poisson_even_sum(a)) for a in (0.5, 1.0, 2.0, 3.0))
    out = parity_herald(2.0, n_max=40)
    cat = fock_coherent(2j, 40) + fock_coherent(-2j, 40)
    fid = abs(np.vdot(cat / np.linalg.norm(cat), out["even"].state)) ** 2
    dt = time.perf_counter() - t0
    report(4, "photon-parity herald", err < 1e-9 and fid > 1 - 1e-8 and dt < 5,
           f"max |P_even - series| {err:.1e}, cat fidelity 1 - {1 - fid:.1e} ({dt:.2f} s)")


def test_criterion_05_measurement_limits(report):
    t0 = time.perf_counter()
    X = np.geomspace(1e2, 1e6, 9)
    e0, _ = squeezing_exponent(X, r=0.0)
    e1, _ = squeezing_exponent(X, r=1.0)
    dt = time.perf_counter() - t0
    report(5, "measurement squeezing exponents", abs(e0 + 1) <= 0.05 and abs(e1 + 0.5) <= 0.05 and dt < 10,
           f"cycling {e0:.4f}, Raman {e1:.4f} ({dt:.2f} s)")


def test_criterion_06_oat_optimum(report):
    t0 = time.perf_counter()
    res = oat_optimum_scan((20, 40, 80, 160, 320))
    dt = time.perf_counter() - t0
    report(6, "OAT optimum scaling", abs(res.exponent + 2 / 3) <= 0.1 and dt < 60,
           f"exponent {res.exponent:.4f}, xi2_min {np.round(res.xi2_min, 4).tolist()} ({dt:.1f} s)")


def test_criterion_07_dissipative_oat(report):
    t0 = time.perf_counter()
    N, t = 100, np.array([0.0, 1.0])
    vm_u, vp_u, _ = oat_closed_form(N, 1.0, 1.0)
    d1 = dissipative_oat(1.0, 1.0, N / 2, t)
    small = dissipative_oat(1.0, 1e8, N / 2, t)
    diff = max(abs(small.V_min[-1] - vm_u), abs(small.V_max[-1] - vp_u))
    dt = time.perf_counter() - t0
    ok = d1.V_max[-1] > vp_u and d1.V_min[-1] > vm_u and diff < 1e-6 and dt < 30
    report(7, "dissipative twisting", ok,
           f"d=1: Vmax {d1.V_max[-1]:.3f} > {vp_u:.3f}, Vmin {d1.V_min[-1]:.3f} > {vm_u:.3f}; "
           f"gamma->0 deviation {diff:.1e} ({dt:.1f} s)")


def test_criterion_08_ising_budget(report):
    t0 = time.perf_counter()
    r_ratio, d_ratio = [], []
    for eta in (10.0, 100.0, 1000.0):
        a, b = ising_budget(1.0, 1.0, 1.0, 1.0, eta), ising_budget(1.0, 1.0, 1.0, 1.0, 4 * eta)
        r_ratio.append(b.ratio_opt / a.ratio_opt)
        d_ratio.append(b.delta_opt / a.delta_opt)
    dt = time.perf_counter() - t0
    ok = all(abs(x / 2 - 1) <= 0.05 for x in r_ratio) and all(abs(x / 2 - 1) <= 0.10 for x in d_ratio) and dt < 5
    report(8, "Ising interaction-to-decay optimum", ok,
           f"ratio(4eta)/ratio(eta) {np.round(r_ratio, 4).tolist()}, "
           f"delta_opt ratio {np.round(d_ratio, 4).tolist()} ({dt:.2f} s)")


def test_criterion_09_raman_xy(report):
    worst = 0.0
    for S in (2, 10):
        chi = 0.9
        Sx, Sy, Sz = dicke_ladder(S)
        ref = 2 * chi / (2 * S) * (S * (S + 1) * np.eye(2 * S + 1) - Sz @ Sz)
        worst = max(worst, np.max(np.abs(dense(h_xy_raman(chi, chi, S)) - ref)))
    report(9, "Raman XY identity", worst < 1e-12, f"max deviation {worst:.1e}")


def test_criterion_10_echo(report):
    t0 = time.perf_counter()
    res = echo_protocol(EchoProtocol(40, 1.0, 3.0))
    css = coherent_spin_state(make_spin_space(20), np.pi / 2, 0.0)
    fid = abs(np.vdot(css, res.final_state)) ** 2
    gains = np.array([echo_gain_scan(N).gain_best for N in (20, 40, 80)])
    spread = (gains / np.sqrt([20, 40, 80])).max() / (gains / np.sqrt([20, 40, 80])).min()
    scan40 = echo_gain_scan(40)
    xi_oat = oat_optimum(40)[1]
    dt = time.perf_counter() - t0
    ok = fid > 1 - 1e-9 and spread < 2 and scan40.xi2_best < xi_oat and dt < 60
    report(10, "time-reversal echo", ok,
           f"phi=0 fidelity 1 - {1 - fid:.1e}, G {np.round(gains, 3).tolist()}, G/sqrt(N) spread {spread:.3f}, "
           f"xi2_echo {scan40.xi2_best:.4f} < OAT {xi_oat:.4f} ({dt:.1f} s)")


def test_criterion_11_w_herald(report):
    t0 = time.perf_counter()
    res = herald_w_faraday(4, 0.01)
    Fz = np.diag(qubit_collective(4, "z")).real
    out = np.sin(0.01 * Fz) * qubit_css(4, np.pi / 2, 0.0)
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    W = sum(kron_all([minus if j == k else plus for j in range(4)]) for k in range(4)) / 2
    ref = abs(np.vdot(W, out)) ** 2 / np.vdot(out, out).real
    dt = time.perf_counter() - t0
    report(11, "W-state herald", res.fidelity > 0.99 and abs(res.fidelity - ref) < 1e-12 and dt < 1,
           f"fidelity {res.fidelity:.10f} (qubit Kraus oracle {ref:.10f}, {dt:.3f} s)")


def test_criterion_12_floquet_graphs(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    round_trip = 0.0
    for _ in range(20):
        rs = rng.choice(np.arange(1, 10), size=rng.integers(1, 6), replace=False)
        table = {int(r): float(rng.choice([-1, 1]) * rng.uniform(0.1, 2)) for r in rs}
        back = coupling_table(spectrum_to_couplings(couplings_to_spectrum(table, 10.0), 20))
        assert set(back) == set(table)
        round_trip = max(round_trip, max(abs(back[r] - table[r]) for r in table))
    # open chain of 18 sites: rails r = 1 plus the closing rail at the largest distance, rungs r = 9
    tones = ModulationSpectrum(100.0, [Tone(1, 1.0), Tone(9, 1.0, np.pi), Tone(17, 1.0)])
    J = spectrum_to_couplings(tones, 18).J
    lad = builder_mobius(18, 1.0, -1.0).J
    iu = np.triu_indices(18, 1)
    rails, rungs = int(np.sum(lad[iu] > 0)), int(np.sum(lad[iu] < 0))
    mobius_ok = np.array_equal(J, lad) and rails == 18 and rungs == 9 and np.all((lad != 0).sum(1) == 3)
    k, E = magnon_dispersion({1: 0.8}, 24)
    disp = np.max(np.abs(E - 2 * 0.8 * np.cos(k)))
    dt = time.perf_counter() - t0
    ok = round_trip == 0 and mobius_ok and disp < 1e-12 and dt < 1
    report(12, "Floquet coupling graphs", ok,
           f"round trip {round_trip:.1e}, Mobius {rails} FM rails + {rungs} AFM rungs from r=(1, 9, 17), "
           f"dispersion error {disp:.1e} ({dt:.3f} s)")


def test_criterion_13_quench_geometry(report):
    t0 = time.perf_counter()
    j, q = 0.8, 1.0
    t = np.linspace(0, 5, 11)
    tr = gaussian_quench(np.array([[0, j], [j, 0]]), q, t)
    rate_ref = math.sqrt(abs(q * (q - 2 * j)))
    rate_err = abs(tr.growth_rate - rate_ref)
    traj = np.array([two_site_quench_cxx12(j, q, x) for x in t])
    traj_err = np.max(np.abs(tr.C_xx[:, 0, 1] - traj) / np.maximum(1, np.abs(traj)))
    tree_tr = gaussian_quench(builder_tree(0.5, 16), 1.0, [0.2])
    tree = coarse_grain_tree(tree_tr.C_xx[-1])
    first = [abs(tree.members[a][0] - tree.members[b][0]) for a, b, _, _ in tree.merges[:8]]
    i = np.arange(12)
    g = corr_to_geometry(np.exp(-((i[:, None] - i[None, :]) ** 2) / 4.0))
    line_ratio = g.eigenvalues[1] / g.eigenvalues[0]
    sym = max(tr.symplectic_error, tree_tr.symplectic_error)
    dt = time.perf_counter() - t0
    ok = sym < 1e-8 and rate_err < 1e-6 and traj_err < 1e-8 and all(d == 8 for d in first) \
        and line_ratio < 1e-6 and dt < 30
    report(13, "Gaussian quench and geometry", ok,
           f"symplectic {sym:.1e}, rate {tr.growth_rate:.8f} vs {rate_ref:.8f}, first merges |i-j| {first}, "
           f"MDS lambda2/lambda1 {line_ratio:.1e} ({dt:.2f} s)")


def test_criterion_14_cv_graph_states(report):
    t0 = time.perf_counter()
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    p = prescription_from_adjacency(A)
    angles_ok = np.array_equal(np.sort(p.eigenvalues), [-1.0, 1.0]) and \
        np.allclose(np.sort(p.angles), [-np.pi / 4, np.pi / 4], rtol=0, atol=1e-15)
    vsum_err, raw = 0.0, []
    for r in (0.25, 0.5, 1.0, 2.0):
        state = prepare_graph_state(A, r)
        raw.append(epr_criterion(state, 0, 1).V_sum)
        # the graph-state nullifiers p1 - x2, p2 - x1 become EPR combinations after x -> p, p -> -x on site 1
        v = epr_criterion(local_ops(state, [0], "rotate", np.pi / 2), 0, 1).V_sum
        vsum_err = max(vsum_err, abs(v - 2 * np.exp(-2 * r)))
    C4 = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]], dtype=float)
    rs = np.linspace(0, 3, 31)
    nul = np.array([nullifier_variances(prepare_graph_state(C4, r), C4) for r in rs])
    mono = bool(np.all(np.diff(nul, axis=0) < 0))
    ent = 0.0
    for sub in ([0], [0, 1], [0, 2], [1, 2, 3]):
        s = prepare_graph_state(C4, 1.3)
        rest = [k for k in range(4) if k not in sub]
        ent = max(ent, abs(entanglement_entropy(s, sub) - entanglement_entropy(s, rest)))
    dt = time.perf_counter() - t0
    ok = angles_ok and vsum_err < 1e-10 and mono and ent < 1e-8 and dt < 5
    report(14, "CV graph states", ok,
           f"angles {np.round(p.angles, 6).tolist()}, |V_sum - 2e^(-2r)| {vsum_err:.1e} "
           f"(nullifier frame V_sum {np.round(raw, 4).tolist()}), C4 nullifiers monotone {mono}, "
           f"|S_A - S_B| {ent:.1e} ({dt:.2f} s)")


def test_criterion_15_dicke_mean_field(report):
    t0 = time.perf_counter()
    worst, z2 = 0.0, True
    for w0, wc, S in [(1.0, 1.0, 5.0), (0.5, 2.0, 20.0), (2.0, 0.7, 1.5)]:
        Gb = dicke_threshold(w0, wc, S)
        # independent zero-eigenvalue criterion: root of the smallest stability eigenvalue
        lam = lambda G: np.linalg.eigvalsh(dicke_stability_matrix(w0, wc, G, S))[0]  # noqa: E731
        Gz = brentq(lam, 1e-9, 10 * dicke_critical_coupling(w0, wc, S), xtol=1e-15)
        worst = max(worst, abs(Gb - Gz) / Gz)
        curve = mean_field_dicke(w0, wc, Gz * np.array([1.2, 1.5, 2.0]), S)
        z2 &= bool(np.all(curve.alpha_plus > 1e-3) and np.allclose(curve.alpha_minus, -curve.alpha_plus, atol=1e-12))
    dt = time.perf_counter() - t0
    report(15, "Dicke mean-field threshold", worst < 1e-3 and z2 and dt < 10,
           f"max relative threshold mismatch {worst:.1e}, Z2 pair above threshold {z2} ({dt:.2f} s)")


def _run_cli(cfg, out):
    t0 = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "cavspin.cli", "run", str(cfg), "--out", str(out)],
                       capture_output=True, text=True)
    return p.returncode, time.perf_counter() - t0, p.stderr


def _snapshot(d):
    return {f.name: f.read_bytes() for f in sorted(d.iterdir()) if f.name != "timing.json"}


def test_criterion_16_cli_determinism(report, tmp_path):
    configs = sorted((ROOT / "configs").glob("*.ini"))
    failures, slowest = [], (0.0, "")
    for cfg in configs:
        a, b = tmp_path / cfg.stem / "a", tmp_path / cfg.stem / "b"
        ca, ta, ea = _run_cli(cfg, a)
        cb, tb, eb = _run_cli(cfg, b)
        slowest = max(slowest, (max(ta, tb), cfg.stem))
        if ca or cb:
            failures.append(f"{cfg.stem} exit {ca}/{cb} {ea or eb}")
        elif _snapshot(a) != _snapshot(b):
            failures.append(f"{cfg.stem} outputs differ")
        elif max(ta, tb) >= 60:
            failures.append(f"{cfg.stem} took {max(ta, tb):.1f} s")
    report(16, "CLI determinism and runtime", not failures and len(configs) == 15,
           f"{len(configs)} configs run twice, byte-identical; slowest {slowest[1]} {slowest[0]:.1f} s"
           if not failures else "; ".join(failures))
