import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from cavspin.hamiltonians import (
    dicke_parity,
    excitation_number,
    fock_tail_population,
    h_dicke,
    h_dispersive,
    h_driven_ising,
    h_faraday,
    h_jaynes_cummings,
    h_oat,
    h_tavis_cummings,
    h_xxz,
    h_xy_raman,
    ising_coupling,
    photon_number,
    collective_sz,
)
from cavspin.spin_algebra import coherent_spin_state, make_spin_space, spin_operators

from oracles import PAULI, kron_all, qubit_collective


def D(op):
    return op.toarray() if hasattr(op, "toarray") else np.asarray(op)


def comm(A, B):
    A, B = D(A), D(B)
    return np.max(np.abs(A @ B - B @ A))


def herm_err(H):
    H = D(H)
    return np.max(np.abs(H - H.conj().T))


def test_jc_coupling_elements():
    g, n_max = 0.7, 6
    H = D(h_jaynes_cummings(g, 0.0, n_max))
    dim_f = n_max + 1
    # |e, n> is spin index 0, |g, n+1> is spin index 1
    for n in range(n_max):
        e_n, g_n1 = n, dim_f + n + 1
        assert abs(H[g_n1, e_n] - g * np.sqrt(n + 1)) < 1e-14
        block = H[np.ix_([e_n, g_n1], [e_n, g_n1])]
        w = np.linalg.eigvalsh(block)
        assert abs((w[1] - w[0]) - 2 * g * np.sqrt(n + 1)) < 1e-12


def test_jc_is_tc_at_spin_half():
    assert np.array_equal(D(h_jaynes_cummings(0.4, 0.3, 5)), D(h_tavis_cummings(0.4, 0.3, 0.5, 5)))


def test_jc_uncoupled_is_diagonal():
    H = D(h_jaynes_cummings(0.0, 1.3, 4))
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


def test_jc_avoided_crossing_minimum_at_resonance():
    g = 0.5
    deltas = np.linspace(-2, 2, 401)
    gaps = []
    for d in deltas:
        H = D(h_jaynes_cummings(g, d, 2))
        # single-excitation sector: |e,0> (index 0) and |g,1> (index 4)
        w = np.linalg.eigvalsh(H[np.ix_([0, 4], [0, 4])])
        gaps.append(w[1] - w[0])
    k = int(np.argmin(gaps))
    assert abs(deltas[k]) < 1e-12
    assert abs(gaps[k] - 2 * g) < 1e-12


def test_tc_single_excitation_splitting():
    g, S = 0.3, 5.0
    H = D(h_tavis_cummings(g, 0.0, S, 3))
    E = D(excitation_number(S, 3))
    idx = np.where(np.abs(np.diag(E) - 1) < 1e-12)[0]
    w = np.linalg.eigvalsh(H[np.ix_(idx, idx)])
    assert abs((w[-1] - w[0]) - 2 * g * np.sqrt(2 * S)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 20), st.integers(1, 8), st.floats(-2, 2), st.floats(-2, 2))
def test_tc_conserves_excitations(twoS, n_max, g, delta):
    H = h_tavis_cummings(g, delta, twoS / 2, n_max)
    assert comm(H, excitation_number(twoS / 2, n_max)) < 1e-12
    assert herm_err(H) < 1e-12


def test_dispersive_commutes_and_phase():
    n_max, omega1 = 5, 0.37
    Hs = h_dispersive(omega1, n_max)
    Hc = h_dispersive(omega1, n_max, S=2)
    assert comm(Hs, photon_number(0.5, n_max)) < 1e-12
    assert comm(Hs, collective_sz(0.5, n_max)) < 1e-12
    assert comm(Hc, collective_sz(2, n_max)) < 1e-12
    T, n = 1.7, 3
    U = sla.expm(-1j * D(Hs) * T)
    e_n, g_n = n, n_max + 1 + n
    rel = np.angle(U[g_n, g_n] / U[e_n, e_n])
    expected = (2 * n * omega1 * T + np.pi) % (2 * np.pi) - np.pi
    assert abs(rel - expected) < 1e-12
    assert np.count_nonzero(D(h_dispersive(0.0, n_max))) == 0


def test_oat_spectrum():
    S = 5
    m = make_spin_space(S).m_values()
    assert np.allclose(np.diag(D(h_oat(1.3, S))), 1.3 * m**2 / 10)
    assert np.allclose(np.sort(np.diag(D(h_oat(1.0, 1))).real), [0, 0.5, 0.5])


def test_oat_squeezes_at_short_time():
    from cavspin.spin_algebra import squeezing_ellipse
    S = 10
    H = np.diag(D(h_oat(1.0, S))).real
    psi = np.exp(-1j * H * 0.3) * coherent_spin_state(make_spin_space(S), np.pi / 2, 0)
    assert squeezing_ellipse(psi).V_min < 20 / 4


def test_driven_ising_coupling():
    n0, om, kappa = 2.0, 0.5, 1.0
    ds = np.linspace(0.01, 10, 2001)
    Js = [ising_coupling(n0, om, kappa, d * kappa / 2) for d in ds]
    assert abs(ds[int(np.argmax(Js))] - 1) < 0.01
    assert abs(ising_coupling(n0, om, kappa, kappa / 2) - 2 * n0 * om**2 / kappa) < 1e-14
    for d in (20, 50, 200):
        delta = d * kappa / 2
        assert abs(ising_coupling(n0, om, kappa, delta) / (2 * n0 * om**2 / delta) - 1) < 0.01
    assert ising_coupling(n0, om, kappa, -3.0) == -ising_coupling(n0, om, kappa, 3.0)
    with pytest.raises(ValueError):
        ising_coupling(n0, om, 0.0, 1.0)
    res = h_driven_ising(n0, om, kappa, 0.7, 3)
    m = make_spin_space(3).m_values()
    assert np.allclose(np.diag(D(res.H_eff)).real, res.field * m + res.J * m**2)


@pytest.mark.parametrize("S", [2, 10])
def test_raman_xy_identity(S):
    chi = 0.8
    N = 2 * S
    H = D(h_xy_raman(chi, chi, S))
    o = spin_operators(make_spin_space(S), sparse=False)
    ref = 2 * chi / N * (S * (S + 1) * np.eye(2 * S + 1) - o.z @ o.z)
    assert np.max(np.abs(H - ref)) < 1e-12
    assert np.count_nonzero(D(h_xy_raman(0, 0, S))) == 0


@pytest.mark.parametrize("N", [4, 10, 20])
def test_raman_xy_moments_match_oat(N):
    S, chi, t = N / 2, 1.0, 0.9
    sp_ = make_spin_space(S)
    psi0 = coherent_spin_state(sp_, np.pi / 2, 0)
    Hxy = D(h_xy_raman(chi, chi, S))
    Hoat = D(h_oat(-2 * chi, S))  # -(2 chi/N) Sz^2 up to a constant
    a = sla.expm(-1j * Hxy * t) @ psi0
    b = sla.expm(-1j * Hoat * t) @ psi0
    assert abs(abs(np.vdot(a, b)) - 1) < 1e-10


def test_xxz_isotropic_symmetry():
    H = h_xxz(1.0, 1.0, S=3)
    o = spin_operators(make_spin_space(3))
    for op in (o.x, o.y, o.z):
        assert comm(H, op) < 1e-12


def test_xxz_uniform_weights_match_collective():
    N = 4
    Hw = D(h_xxz(0.7, -0.4, weights=[1.0] * N))
    Fx, Fy, Fz = (qubit_collective(N, a) for a in "xyz")
    ref = 0.7 * (Fx @ Fx + Fy @ Fy) - 0.4 * Fz @ Fz
    assert np.max(np.abs(Hw - ref)) < 1e-12


def test_xxz_weighted_against_qubit_oracle():
    c = [1.0, -0.5, 0.25]
    I = np.eye(2)
    F = {a: sum(c[k] * kron_all([PAULI[a] / 2 if j == k else I for j in range(3)]) for k in range(3))
         for a in "xyz"}
    ref = 1.3 * (F["x"] @ F["x"] + F["y"] @ F["y"]) + 0.2 * F["z"] @ F["z"]
    assert np.max(np.abs(D(h_xxz(1.3, 0.2, weights=c)) - ref)) < 1e-12


def test_xxz_field_variant():
    H0 = D(h_xxz(1.0, 0.0, fields=[0.0, 0.0]))
    assert np.max(np.abs(H0 - D(h_xxz(1.0, 0.0, weights=[1, 1])))) < 1e-14
    # fields h_j = j omega_B: the flip-flop pair |ud>,|du> is detuned by r omega_B
    omega_B = 5.0
    H = D(h_xxz(0.1, 0.0, fields=[0.0, omega_B]))
    ud, du = 1, 2  # basis |uu>,|ud>,|du>,|dd>
    assert abs((H[du, du] - H[ud, ud]).real - omega_B) < 1e-12
    with pytest.raises(ValueError):
        h_xxz(1.0, 0.0, weights=[1, 1], fields=[0.0])
    with pytest.raises(ValueError):
        h_xxz(1.0, 0.0, spins=[0.5] * 13, fields=[0.0] * 13)


def test_dicke_parity_symmetry_and_decoupled_spectrum():
    S, n_max = 2, 6
    H = h_dicke(1.0, 1.3, 0.4, S, n_max)
    assert comm(H, dicke_parity(S, n_max)) < 1e-10
    assert herm_err(H) < 1e-12
    H0 = D(h_dicke(1.0, 1.3, 0.0, S, n_max))
    m = make_spin_space(S).m_values()
    n = np.arange(n_max + 1)
    ref = (1.0 * m[:, None] + 1.3 * n[None, :]).ravel()
    assert np.allclose(np.diag(H0).real, ref)


def test_faraday_commutes_and_rotates():
    S, n_max, om = 2, 2, 0.45
    H = D(h_faraday(om, S, n_max))
    spin = make_spin_space(S)
    nf = n_max + 1
    assert herm_err(H) < 1e-14
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0  # commutes with all number operators
    # one sigma+ photon: spin evolves under om Sz
    t = 0.8
    psi = coherent_spin_state(spin, np.pi / 2, 0)
    photon = np.zeros(nf * nf)
    photon[1 * nf + 0] = 1
    full = np.kron(psi, photon)
    out = np.exp(-1j * np.diag(H) * t) * full
    spin_part = out.reshape(spin.dim, nf * nf)[:, nf]
    target = coherent_spin_state(spin, np.pi / 2, om * t)
    assert abs(abs(np.vdot(target, spin_part)) - 1) < 1e-12
    assert np.count_nonzero(D(h_faraday(0.0, S, n_max))) == 0


def test_fock_tail_diagnostic():
    n_max = 4
    state = np.zeros(2 * (n_max + 1))
    state[n_max] = 0.6
    state[0] = 0.8
    assert abs(fock_tail_population(state, n_max) - 0.36) < 1e-15
