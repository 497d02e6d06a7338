"""Named batch scenarios used by the command-line front end.

Each scenario takes a flat parameter dict plus a seed and returns scalar
results and named curves (column names plus rows).  Default parameters are
desk-scale and finish in seconds.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import ConfigError


@dataclass
class Curve:
    columns: list
    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.shape[1] != len(self.columns):
            raise ValueError("curve rows do not match the column list")


@dataclass
class Outcome:
    scalars: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)   # file stem -> Curve


@dataclass
class Scenario:
    name: str
    summary: str
    run: Callable
    defaults: dict
    required: frozenset = frozenset()
    uses_seed: bool = False

    @property
    def optional(self):
        return frozenset(self.defaults)

    def resolve(self, params):
        merged = dict(self.defaults)
        merged.update(params)
        return merged


REGISTRY = {}


def scenario(name, summary, defaults, required=(), uses_seed=False):
    def deco(fn):
        REGISTRY[name] = Scenario(name, summary, fn, dict(defaults), frozenset(required), uses_seed)
        return fn
    return deco


def known_keys():
    return {name: (s.required, s.optional) for name, s in REGISTRY.items()}


# ---------------------------------------------------------------- param helpers


def _num(p, key, lo=None, integer=False, strict=False):
    v = p[key]
    ok = isinstance(v, (int, float)) and not isinstance(v, bool)
    if integer:
        ok = ok and float(v).is_integer() and math.isfinite(v)
    if not ok:
        raise ConfigError(f"{key} must be {'an integer' if integer else 'a number'}, got {v!r}", key=key)
    if lo is not None and (v <= lo if strict else v < lo):
        raise ConfigError(f"{key} must be {'>' if strict else '>='} {lo}, got {v!r}", key=key)
    return int(v) if integer else float(v)


def _nums(p, key, lo=None, integer=False, strict=False):
    v = p[key]
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{key} must be a non-empty list", key=key)
    return [_num({key: x}, key, lo, integer, strict) for x in v]


def _choice(p, key, options):
    v = p[key]
    if v not in options:
        raise ConfigError(f"{key} must be one of {sorted(options)}, got {v!r}", key=key)
    return v


# ---------------------------------------------------------------- scenarios


@scenario("budget", "cavity cooperativity, phase ceiling, Ising and squeezing budgets",
          {"finesse": 1e4, "waist": 15e-6, "wavelength": 780e-9, "length": 0.0,
           "Gamma": 2 * math.pi * 6.07e6, "n_bar": 1.0, "N": 1000, "r": 1.0,
           "Neta_min": 1e2, "Neta_max": 1e6, "n_points": 9})
def run_budget(p, seed):
    from .cavity_budget import (CavityGeometry, cooperativity_geometric, ising_budget,
                                phase_shift_ceiling, rates_from_geometry, squeezing_exponent,
                                squeezing_limits)
    geom = CavityGeometry(_num(p, "finesse", 0, strict=True), _num(p, "waist", 0, strict=True),
                          _num(p, "wavelength", 0, strict=True),
                          _num(p, "length", 0) or None)
    eta = cooperativity_geometric(geom)
    out = Outcome({"eta": eta})
    if geom.length is not None:
        rates = rates_from_geometry(geom, _num(p, "Gamma", 0, strict=True))
        out.scalars.update(kappa=rates.kappa, g=rates.g)
    ceil = phase_shift_ceiling(eta, _num(p, "n_bar", 0, strict=True))
    ib = ising_budget(1.0, 1.0, 1.0, 1.0, eta)
    N = _num(p, "N", 1, integer=True)
    r = _num(p, "r", 0)
    meas = squeezing_limits(N, eta, r=0.0, cycling=True)
    raman = squeezing_limits(N, eta, r=r)
    out.scalars.update(phi_max=ceil.phi_max, phi_max_scan=ceil.phi_max_scan,
                       ising_ratio_opt=ib.ratio_opt, ising_delta_opt_over_kappa=ib.delta_opt,
                       xi2_cycling=meas.xi2_opt, xi2_raman=raman.xi2_opt)
    n = _num(p, "n_points", 2, integer=True)
    X = np.logspace(np.log10(_num(p, "Neta_min", 0, strict=True)), np.log10(_num(p, "Neta_max", 0, strict=True)), n)
    s0, v0 = squeezing_exponent(X, 0.0)
    s1, v1 = squeezing_exponent(X, r)
    out.scalars.update(exponent_cycling=s0, exponent_raman=s1)
    out.curves["squeezing_vs_Neta"] = Curve(["Neta", "xi2_cycling", "xi2_raman"], np.column_stack([X, v0, v1]))
    return out


@scenario("jc_spectrum", "vacuum Rabi splitting versus atom number",
          {"g": 1.0, "N_list": [1, 4, 16], "kappa": 0.1, "Gamma": 0.1, "n_max": 3})
def run_jc_spectrum(p, seed):
    from .hamiltonians import excitation_number, h_tavis_cummings
    from .qnd import vacuum_rabi_spectrum
    g = _num(p, "g", 0)
    Ns = _nums(p, "N_list", 1, integer=True)
    kappa, Gamma = _num(p, "kappa", 0, strict=True), _num(p, "Gamma", 0, strict=True)
    span = 3 * max(g * math.sqrt(max(Ns)), kappa, Gamma)
    omega = np.linspace(-span, span, 6001)
    cols, data, out = ["omega"], [omega], Outcome()
    for N in Ns:
        spec = vacuum_rabi_spectrum(g, N, kappa, Gamma, omega=omega)
        out.scalars[f"splitting_N{N}"] = spec.splitting
        out.scalars[f"splitting_over_2g_sqrtN_N{N}"] = spec.splitting / (2 * g * math.sqrt(N)) if g else 0.0
        cols.append(f"T_N{N}")
        data.append(spec.T)
    n_max = _num(p, "n_max", 1, integer=True)
    worst = 0.0
    for N in Ns:
        H = h_tavis_cummings(g, 0.0, N / 2, n_max)
        E = excitation_number(N / 2, n_max)
        C = H @ E - E @ H
        C = C.toarray() if hasattr(C, "toarray") else C
        worst = max(worst, float(np.max(np.abs(C))) if C.size else 0.0)
    out.scalars["excitation_commutator_max"] = worst
    out.curves["transmission"] = Curve(cols, np.column_stack(data))
    return out


@scenario("oat", "one-axis twisting squeezing versus time (optionally dissipative)",
          {"chi": 1.0, "t_max": 2.0, "n_t": 101, "d": math.inf}, required=("N",))
def run_oat(p, seed):
    from .dynamics import dissipative_oat
    from .metrology import kitagawa_ueda_moments, oat_state
    from .spin_algebra import squeezing_ellipse
    N = _num(p, "N", 2, integer=True)
    chi, t_max = _num(p, "chi"), _num(p, "t_max", 0, strict=True)
    d = _num(p, "d", 0, strict=True)
    t = np.linspace(0.0, t_max, _num(p, "n_t", 2, integer=True))
    if math.isinf(d):
        vmin, vmax, xi2 = [], [], []
        for tk in t:
            ell = squeezing_ellipse(oat_state(N, chi, tk))
            vmin.append(ell.V_min)
            vmax.append(ell.V_max)
            xi2.append(N * ell.V_min / np.dot(ell.mean_spin, ell.mean_spin))
        vmin, vmax, xi2 = map(np.array, (vmin, vmax, xi2))
        ku = kitagawa_ueda_moments(N, chi, t)
        ku_err = float(max(np.max(np.abs(vmin - ku[0])), np.max(np.abs(vmax - ku[1]))))
    else:
        tr = dissipative_oat(chi, d, N / 2, t)
        vmin, vmax, xi2 = tr.V_min, tr.V_max, tr.xi2
        ku_err = float("nan")
    k = int(np.argmin(xi2))
    out = Outcome({"xi2_min": float(xi2[k]), "t_at_min": float(t[k]), "Vmax_final": float(vmax[-1]),
                   "Vmin_final": float(vmin[-1]), "closed_form_max_error": ku_err})
    out.curves["xi2_vs_t"] = Curve(["t", "xi2", "Vmin", "Vmax"], np.column_stack([t, xi2, vmin, vmax]))
    return out


@scenario("qnd_squeeze", "measurement-based squeezing versus probe time with contrast loss",
          {"N": 1000, "eta": 1.0, "r": 0.0, "tau_min": 1e-4, "tau_max": 1.0, "n_tau": 121})
def run_qnd_squeeze(p, seed):
    from .cavity_budget import squeezing_limits
    from .qnd import conditional_squeeze_gaussian
    N = _num(p, "N", 1, integer=True)
    eta, r = _num(p, "eta", 0, strict=True), _num(p, "r", 0)
    tau = np.logspace(np.log10(_num(p, "tau_min", 0, strict=True)), np.log10(_num(p, "tau_max", 0, strict=True)),
                      _num(p, "n_tau", 2, integer=True))
    rows = []
    for tk in tau:
        s2 = 1.0 / (N * eta * tk)
        c = conditional_squeeze_gaussian(N, s2, contrast_loss=tk, raman=r)
        rows.append((tk, s2, c.xi2))
    rows = np.array(rows)
    lim = squeezing_limits(N, eta, r=r)
    k = int(np.argmin(rows[:, 2]))
    out = Outcome({"xi2_min_scan": float(rows[k, 2]), "tau_at_min": float(rows[k, 0]),
                   "xi2_limit": lim.xi2_opt, "tau_limit": lim.t_opt, "local_exponent": lim.exponent})
    out.curves["xi2_vs_tau"] = Curve(["tau", "sigma2_M", "xi2"], rows)
    return out


@scenario("parity_cat", "photon-parity herald and cat-state fidelity",
          {"alpha_list": [0.5, 1.0, 2.0, 3.0], "phi1": math.pi})
def run_parity_cat(p, seed):
    from .qnd import parity_herald, poisson_even_probability
    alphas = _nums(p, "alpha_list", 0)
    phi1 = _num(p, "phi1")
    rows, worst = [], 0.0
    for a in alphas:
        res = parity_herald(a, phi1)
        closed = poisson_even_probability(a)
        worst = max(worst, abs(res["even"].probability - closed))
        fe = res["even"].fidelity if res["even"].fidelity is not None else float("nan")
        fo = res["odd"].fidelity if res["odd"].fidelity is not None else float("nan")
        rows.append((a, res["even"].probability, closed, fe, fo))
    out = Outcome({"max_parity_error": worst})
    out.curves["parity"] = Curve(["alpha", "P_even", "P_even_closed", "fid_even", "fid_odd"], rows)
    return out


@scenario("fock_collapse", "progressive photon-number collapse from sequential probe atoms",
          {"alpha": 2.0, "phi1": math.pi / 4, "n_atoms": 60}, uses_seed=True)
def run_fock_collapse(p, seed):
    from .qnd import progressive_collapse
    tr = progressive_collapse(_num(p, "alpha", 0), _num(p, "phi1", 0, strict=True),
                              _num(p, "n_atoms", 1, integer=True), seed=seed)
    k = np.arange(tr.posteriors.shape[0])
    out = Outcome({"hidden_n": tr.hidden_n, "final_concentration": float(tr.class_concentration[-1]),
                   "final_entropy": float(tr.entropy[-1]), "period": tr.period})
    out.curves["collapse"] = Curve(["atoms", "entropy", "concentration"],
                                   np.column_stack([k, tr.entropy, tr.class_concentration]))
    n = np.arange(tr.posteriors.shape[1])
    out.curves["posterior_final"] = Curve(["n", "probability"], np.column_stack([n, tr.posteriors[-1]]))
    return out


@scenario("w_state", "W-state herald from a Faraday-rotated photon",
          {"N": 4, "phi_list": [0.001, 0.003, 0.01, 0.03, 0.1]})
def run_w_state(p, seed):
    from .qnd import herald_w_faraday
    N = _num(p, "N", 2, integer=True)
    rows = []
    for phi in _nums(p, "phi_list", 0, strict=True):
        res = herald_w_faraday(N, phi)
        rows.append((phi, res.probability, res.fidelity, res.extras["bimodality"]))
    rows = np.array(rows)
    out = Outcome({"fidelity_at_smallest_phi": float(rows[np.argmin(rows[:, 0]), 2])})
    out.curves["w_herald"] = Curve(["phi", "probability", "fidelity", "bimodality"], rows)
    return out


@scenario("paint", "heralded painting of Dicke and kitten states by shaped drives",
          {"N_list": [4, 8, 16, 32], "kappa": 0.0, "omega1": 1.0, "n_samples": 256})
def run_paint(p, seed):
    from .qnd import PulseShape, kitten_state, paint
    from .spin_algebra import coherent_spin_state, dicke_state, make_spin_space
    kappa, omega1 = _num(p, "kappa", 0), _num(p, "omega1", 0, strict=True)
    ns = _num(p, "n_samples", 2, integer=True)
    rows = []
    for N in _nums(p, "N_list", 2, integer=True):
        space = make_spin_space(N / 2)
        css = coherent_spin_state(space, np.pi / 2, 0.0)
        T = 2 * np.pi / omega1
        circ = PulseShape.circle(T, ns) if kappa == 0 else PulseShape.exp_circle(T, -kappa / 2, ns)
        m0 = 0 if N % 2 == 0 else 0.5
        fc = paint(css, circ, omega1, kappa, dicke_state(space, m0))
        kit = PulseShape.two_pulse(np.pi / omega1)
        fk = paint(css, kit, omega1, kappa, kitten_state(space, 0.0, np.pi))
        rows.append((N, fc.probability, fc.fidelity, fk.probability, fk.fidelity,
                     fc.fidelity / max(abs(np.vdot(dicke_state(space, m0), css)) ** 2, 1e-300)))
    rows = np.array(rows)
    out = Outcome({"min_dicke_fidelity": float(rows[:, 2].min()), "min_kitten_fidelity": float(rows[:, 4].min())})
    out.curves["paint"] = Curve(["N", "p_circle", "fid_dicke", "p_two_pulse", "fid_kitten", "dicke_gain_over_css"], rows)
    return out


@scenario("echo", "time-reversal echo gain versus forward twisting time",
          {"N": 40, "chi": 1.0, "n_grid": 121, "t_max": 0.0})
def run_echo(p, seed):
    from .metrology import EchoProtocol, echo_gain_scan, echo_protocol, oat_optimum
    from .spin_algebra import coherent_spin_state, make_spin_space
    N = _num(p, "N", 4, integer=True)
    chi = _num(p, "chi", 0, strict=True)
    t_max = _num(p, "t_max", 0) or None
    scan = echo_gain_scan(N, chi, t_max, _num(p, "n_grid", 3, integer=True))
    zero = echo_protocol(EchoProtocol(N, chi, scan.t_best, phi=0.0))
    css = coherent_spin_state(make_spin_space(N / 2), np.pi / 2, 0.0)
    _, xi2_oat = oat_optimum(N, chi)
    out = Outcome({"t_best": scan.t_best, "gain_best": scan.gain_best, "gain_over_sqrtN": scan.gain_best / math.sqrt(N),
                   "xi2_echo": scan.xi2_best, "xi2_oat_optimum": xi2_oat,
                   "zero_phase_fidelity": float(abs(np.vdot(css, zero.final_state)) ** 2)})
    out.curves["gain_vs_t"] = Curve(["t", "gain"], np.column_stack([scan.t, scan.gain]))
    return out


@scenario("allan", "projection-noise Allan deviation with and without squeezing",
          {"N": 1000, "xi2": 0.1, "omega": 2 * math.pi * 429e12, "T": 1e-3, "T_cycle": 2e-3,
           "tau_min": 1.0, "tau_max": 1e4, "n_tau": 41})
def run_allan(p, seed):
    from .metrology import allan_deviation
    N = _num(p, "N", 1, integer=True)
    xi2 = _num(p, "xi2", 0, strict=True)
    args = (N, _num(p, "omega", 0, strict=True), _num(p, "T", 0, strict=True), _num(p, "T_cycle", 0, strict=True))
    tau = np.logspace(np.log10(_num(p, "tau_min", 0, strict=True)), np.log10(_num(p, "tau_max", 0, strict=True)),
                      _num(p, "n_tau", 2, integer=True))
    css = allan_deviation(1.0, *args, tau)
    sq = allan_deviation(math.sqrt(xi2), *args, tau)
    out = Outcome({"sigma_css_1s": float(allan_deviation(1.0, *args, 1.0)),
                   "sigma_squeezed_1s": float(allan_deviation(math.sqrt(xi2), *args, 1.0)),
                   "gain_dB": float(-10 * math.log10(xi2))})
    out.curves["allan"] = Curve(["tau", "sigma_css", "sigma_squeezed"], np.column_stack([tau, css, sq]))
    return out


def _build_graph(p, seed):
    from .floquet_graphs import builder_mobius, builder_sachdev_ye, builder_tree
    kind = _choice(p, "builder", {"mobius", "tree", "sachdev_ye"})
    M = _num(p, "M", 2, integer=True)
    if kind == "mobius":
        return builder_mobius(M, _num(p, "J_rail"), _num(p, "J_rung"))
    if kind == "tree":
        return builder_tree(_num(p, "s"), M, _choice(p, "boundary", {"open", "periodic"}))
    return builder_sachdev_ye(M, _num(p, "variance", 0, strict=True), seed)


@scenario("floquet_graph", "coupling graph from drive tones, with round trip and dispersion",
          {"builder": "mobius", "M": 18, "J_rail": 1.0, "J_rung": -1.0, "s": 0.5, "boundary": "open",
           "variance": 1.0, "omega_B": 100.0}, uses_seed=True)
def run_floquet_graph(p, seed):
    from .floquet_graphs import (coupling_table, couplings_to_spectrum, magnon_dispersion,
                                 spectrum_to_couplings)
    cm = _build_graph(p, seed)
    M = cm.M
    iu = np.triu_indices(M, 1)
    out = Outcome({"M": M, "n_bonds": int(np.count_nonzero(cm.J[iu])),
                   "n_positive": int(np.sum(cm.J[iu] > 0)), "n_negative": int(np.sum(cm.J[iu] < 0))})
    rows = [(i, j, cm.J[i, j]) for i in range(M) for j in range(M)]
    out.curves["couplings"] = Curve(["i", "j", "value"], rows)
    if p["builder"] != "sachdev_ye":
        table = coupling_table(cm)
        spec = couplings_to_spectrum(table, _num(p, "omega_B", 0, strict=True))
        back = spectrum_to_couplings(spec, M, cm.boundary)
        out.scalars["round_trip_error"] = float(np.max(np.abs(back.J - cm.J)))
        out.scalars["rwa_ok"] = bool(back.rwa_ok)
        out.curves["tones"] = Curve(["r", "amp", "phase"], [(t.r, t.amp, t.phase) for t in spec.tones])
        if cm.boundary == "periodic":
            k, E = magnon_dispersion(table, M)
            out.curves["dispersion"] = Curve(["k", "E"], np.column_stack([k, np.real(E)]))
    return out


@scenario("quench_geometry", "Gaussian quench correlations, MDS geometry and coarse-grained tree",
          {"builder": "tree", "M": 16, "s": 0.5, "boundary": "open", "J_rail": 1.0, "J_rung": -1.0,
           "variance": 1.0, "q": 1.0, "t": 0.2}, uses_seed=True)
def run_quench_geometry(p, seed):
    from .floquet_graphs import bit_reversed_order, coarse_grain_tree, corr_to_geometry, gaussian_quench
    cm = _build_graph(p, seed)
    tr = gaussian_quench(cm, _num(p, "q"), [0.0, _num(p, "t", 0, strict=True)])
    C = tr.C_xx[-1]
    geo = corr_to_geometry(C)
    tree = coarse_grain_tree(C)
    a, b, _, _ = tree.merges[0]
    first = abs(tree.members[a][0] - tree.members[b][0])
    M = cm.M
    out = Outcome({"symplectic_error": tr.symplectic_error, "unstable": tr.unstable, "growth_rate": tr.growth_rate,
                   "first_merge_distance": first, "mds_stress": geo.stress})
    if M & (M - 1) == 0:
        out.scalars["leaf_order_is_bit_reversed"] = tree.leaf_order() == bit_reversed_order(M)
    out.curves["correlations"] = Curve(["i", "j", "C_xx"], [(i, j, C[i, j]) for i in range(M) for j in range(M)])
    out.curves["embedding"] = Curve(["site", "x1", "x2", "x3"], np.column_stack([np.arange(M), geo.embedding]))
    out.curves["merges"] = Curve(["a", "b", "strength", "new"], tree.merges)
    out.curves["mds_eigenvalues"] = Curve(["k", "eigenvalue"], np.column_stack([np.arange(3), geo.eigenvalues]))
    return out


@scenario("graph_state", "continuous-variable graph state: nullifiers, EPR witness, entropy",
          {"graph": "square", "M": 4, "r_max": 3.0, "n_r": 31})
def run_graph_state(p, seed):
    from .cv_gaussian import (entanglement_entropy, epr_criterion, local_ops, nullifier_variances,
                              prepare_graph_state, prescription_from_adjacency)
    kind = _choice(p, "graph", {"epr", "square", "chain", "ring"})
    M = 2 if kind == "epr" else (4 if kind == "square" else _num(p, "M", 2, integer=True))
    A = np.zeros((M, M))
    for i in range(M - 1):
        A[i, i + 1] = A[i + 1, i] = 1.0
    if kind in ("square", "ring") and M > 2:
        A[0, M - 1] = A[M - 1, 0] = 1.0
    pres = prescription_from_adjacency(A)
    r = np.linspace(0.0, _num(p, "r_max", 0), _num(p, "n_r", 2, integer=True))
    rows = []
    for rk in r:
        st = prepare_graph_state(A, rk, pres)
        nv = nullifier_variances(st, A)
        rot = local_ops(st, [1], "rotate", np.pi / 2)
        rows.append([rk, nv.max(), epr_criterion(rot, 0, 1).V_sum, entanglement_entropy(st, [0])] + list(nv))
    rows = np.array(rows)
    half = list(range(M // 2))
    st = prepare_graph_state(A, r[-1], pres)
    out = Outcome({"max_nullifier_final": float(rows[-1, 1]),
                   "nullifiers_monotone": bool(np.all(np.diff(rows[:, 1]) <= 1e-12)),
                   "entropy_half": entanglement_entropy(st, half),
                   "entropy_complement": entanglement_entropy(st, [k for k in range(M) if k not in half]),
                   "physicality": st.physicality()})
    for k, (lam, ang) in enumerate(zip(pres.eigenvalues, pres.angles)):
        out.scalars[f"angle_{k}"] = float(ang)
        out.scalars[f"eigenvalue_{k}"] = float(lam)
    cols = ["r", "max_nullifier", "V_sum_rotated_01", "S_site0"] + [f"nullifier_{k}" for k in range(M)]
    out.curves["nullifiers_vs_r"] = Curve(cols, rows)
    labels = range(2 * M)
    out.curves["covariance"] = Curve(["row", "col", "value"], [(a, b, st.sigma[a, b]) for a in labels for b in labels])
    return out


@scenario("dicke_meanfield", "Dicke superradiant mean field, both symmetry-broken branches",
          {"omega0": 1.0, "omega_c": 1.0, "S": 5.0, "G_max_over_Gc": 2.0, "n_G": 81})
def run_dicke_meanfield(p, seed):
    from .dynamics import dicke_stability_matrix, dicke_threshold, mean_field_dicke
    w0, wc = _num(p, "omega0", 0, strict=True), _num(p, "omega_c", 0, strict=True)
    S = _num(p, "S", 0, strict=True)
    Gc = math.sqrt(w0 * wc / (8 * S))
    G = np.linspace(0.0, _num(p, "G_max_over_Gc", 0, strict=True) * Gc, _num(p, "n_G", 2, integer=True))
    curve = mean_field_dicke(w0, wc, G, S)
    Gb = dicke_threshold(w0, wc, S)
    out = Outcome({"G_c_bisection": Gb, "G_c_stability": Gc, "relative_difference": abs(Gb - Gc) / Gc,
                   "min_eig_at_Gc": float(np.linalg.eigvalsh(dicke_stability_matrix(w0, wc, Gc, S))[0]),
                   "max_branch_asymmetry": float(np.max(np.abs(curve.alpha_plus + curve.alpha_minus)))})
    out.curves["order_parameter"] = Curve(["G", "alpha_plus", "alpha_minus"],
                                          np.column_stack([G, curve.alpha_plus, curve.alpha_minus]))
    return out


@scenario("sy_build", "random all-to-all couplings and their spectrum",
          {"M": 32, "variance": 1.0}, uses_seed=True)
def run_sy_build(p, seed):
    from .floquet_graphs import builder_sachdev_ye
    M = _num(p, "M", 2, integer=True)
    var = _num(p, "variance", 0, strict=True)
    cm = builder_sachdev_ye(M, var, seed)
    iu = np.triu_indices(M, 1)
    ev = np.linalg.eigvalsh(cm.J)
    out = Outcome({"sample_variance_times_M": float(np.var(cm.J[iu]) * M), "target_variance": var,
                   "spectral_radius": float(np.max(np.abs(ev)))})
    out.curves["couplings"] = Curve(["i", "j", "value"], [(i, j, cm.J[i, j]) for i in range(M) for j in range(M)])
    out.curves["eigenvalues"] = Curve(["k", "eigenvalue"], np.column_stack([np.arange(M), ev]))
    return out
