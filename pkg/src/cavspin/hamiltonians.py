"""Hamiltonian constructors (hbar = 1, all couplings in angular-frequency units).

Joint atom-cavity operators live on ``SpinSpace(S) (x) FockSpace(n_max)``
with the spin as the slow index.
"""

from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .spin_algebra import (
    CompositeSpace,
    FockSpace,
    as_operator,
    fock_annihilation,
    make_spin_space,
    spin_operators,
)

# per-site (distinguishable) representations are capped at this total dimension
MAX_SITE_DIM = 4096


def _spin_cavity(S, n_max):
    space = CompositeSpace((make_spin_space(S), FockSpace(n_max)))
    ops = spin_operators(space.factors[0], sparse=True)
    a = space.embed(fock_annihilation(space.factors[1], sparse=True), 1)
    a = sp.csr_array(a)
    Sx, Sy, Sz, Sp, Sm = (sp.csr_array(space.embed(o, 0)) for o in ops)
    return space, a, Sz, Sp, Sm, Sx


def h_tavis_cummings(g, delta, S, n_max):
    """g (a^dag S- + a S+) + delta Sz on spin-S (x) Fock(n_max)."""
    space, a, Sz, Sp, Sm, _ = _spin_cavity(S, n_max)
    H = g * (a.conj().T @ Sm + a @ Sp) + delta * Sz
    return as_operator(H)


def h_jaynes_cummings(g, delta, n_max):
    """Single two-level atom: the S = 1/2 Tavis-Cummings Hamiltonian."""
    return h_tavis_cummings(g, delta, 0.5, n_max)


def excitation_number(S, n_max):
    """a^dag a + Sz + S, the quantity conserved by the Tavis-Cummings model."""
    space, a, Sz, *_ = _spin_cavity(S, n_max)
    return as_operator(a.conj().T @ a + Sz + S * sp.identity(space.dim, format="csr"))


def photon_number(S, n_max):
    space, a, *_ = _spin_cavity(S, n_max)
    return as_operator(a.conj().T @ a)


def collective_sz(S, n_max):
    _, _, Sz, *_ = _spin_cavity(S, n_max)
    return as_operator(Sz)


def h_dispersive(omega1, n_max, S=None):
    """Dispersive atom-cavity coupling.

    ``S=None`` gives the single-atom form ``omega1 a^dag a sigma_z`` (Pauli
    sigma_z, eigenvalues +-1); otherwise the collective form
    ``omega1 a^dag a S_z``.
    """
    spin = 0.5 if S is None else S
    space, a, Sz, *_ = _spin_cavity(spin, n_max)
    zop = 2 * Sz if S is None else Sz
    return as_operator(omega1 * (a.conj().T @ a) @ zop)


def h_oat(chi, S):
    """One-axis twisting chi Sz^2 / N with N = 2S."""
    space = make_spin_space(S)
    if space.S < 0.5:
        raise ValueError("one-axis twisting needs S >= 1/2")
    m = space.m_values()
    return as_operator(sp.diags((chi * m**2 / space.N).astype(complex), 0, format="csr"))


class DrivenIsing(NamedTuple):
    H_eff: object
    J: float
    field: float
    d: float


def ising_coupling(n0, omega1, kappa, delta):
    """J = (4 n0 Omega1^2 / kappa) d / (1 + d^2) with d = 2 delta / kappa."""
    if kappa <= 0:
        raise ValueError("cavity linewidth kappa must be positive")
    d = 2 * delta / kappa
    return 4 * n0 * omega1**2 / kappa * d / (1 + d * d)


def h_driven_ising(n0, omega1, kappa, delta, S) -> DrivenIsing:
    """Effective Hamiltonian n0 Omega1 Sz + J Sz^2 of a detuned driven cavity.

    The linear field and J are returned separately so callers can echo the
    field away.  delta > 0 (drive blue of the cavity) gives J > 0.
    """
    J = ising_coupling(n0, omega1, kappa, delta)
    space = make_spin_space(S)
    m = space.m_values()
    field = n0 * omega1
    H = sp.diags((field * m + J * m**2).astype(complex), 0, format="csr")
    return DrivenIsing(as_operator(H), J, field, 2 * delta / kappa)


def h_xy_raman(chi_plus, chi_minus, S):
    """(chi_- S+ S- + chi_+ S- S+) / N."""
    space = make_spin_space(S)
    o = spin_operators(space, sparse=True)
    H = (chi_minus * (o.plus @ o.minus) + chi_plus * (o.minus @ o.plus)) / space.N
    return as_operator(H)


def raman_couplings(g, omega, delta_cav, delta_plus, delta_minus, N):
    """chi_pm = N G^2 / delta_pm with the two-photon Rabi frequency G = g Omega / (2 Delta)."""
    G = g * omega / (2 * delta_cav)
    return N * G**2 / delta_plus, N * G**2 / delta_minus


def _site_spin_ops(spins):
    """Per-site spin operators on the tensor product of sites with lengths ``spins``."""
    spaces = [make_spin_space(f) for f in spins]
    total = int(np.prod([s.dim for s in spaces]))
    if total > MAX_SITE_DIM:
        raise ValueError(f"per-site Hilbert space dimension {total} exceeds {MAX_SITE_DIM}")
    comp = CompositeSpace(tuple(spaces))
    site_ops = []
    for k, s in enumerate(spaces):
        o = spin_operators(s, sparse=True)
        site_ops.append([sp.csr_array(comp.embed(op, k)) for op in (o.x, o.y, o.z)])
    return comp, site_ops


def h_xxz(J_xy, J_z, S=None, *, weights=None, spins=None, fields=None):
    """Collective XXZ Hamiltonian J_xy (Fx^2 + Fy^2) + J_z Fz^2.

    * uniform: pass ``S``; F is the collective spin-S operator.
    * weighted: pass ``weights`` c_j and per-site ``spins`` f_j;
      F_alpha = sum_j c_j f_j^alpha on the per-site tensor space.
    * inhomogeneous field: pass ``fields`` h_j (and optionally ``spins``,
      default spin-1/2); adds sum_j h_j f_j^z to the uniform-weight form.
    """
    if weights is None and fields is None:
        if S is None:
            raise ValueError("uniform XXZ needs the collective spin length S")
        o = spin_operators(make_spin_space(S), sparse=True)
        return as_operator(J_xy * (o.x @ o.x + o.y @ o.y) + J_z * (o.z @ o.z))

    n_sites = len(weights) if weights is not None else len(fields)
    if spins is None:
        spins = [0.5] * n_sites
    if weights is None:
        weights = [1.0] * n_sites
    if len(spins) != n_sites or len(weights) != n_sites or (fields is not None and len(fields) != n_sites):
        raise ValueError("weights, spins and fields must all have one entry per site")
    comp, site_ops = _site_spin_ops(spins)
    F = [sum(c * ops[a] for c, ops in zip(weights, site_ops)) for a in range(3)]
    H = J_xy * (F[0] @ F[0] + F[1] @ F[1]) + J_z * (F[2] @ F[2])
    if fields is not None:
        H = H + sum(h * ops[2] for h, ops in zip(fields, site_ops))
    return as_operator(H)


def h_dicke(omega0, omega_c, G, S, n_max):
    """omega0 Sz + omega_c a^dag a + G (a^dag + a)(S+ + S-)."""
    space, a, Sz, Sp, Sm, _ = _spin_cavity(S, n_max)
    ad = a.conj().T
    H = omega0 * Sz + omega_c * (ad @ a) + G * (ad + a) @ (Sp + Sm)
    return as_operator(H)


def dicke_parity(S, n_max):
    """exp(i pi (a^dag a + Sz + S)), a diagonal +-1 operator."""
    space = make_spin_space(S)
    n = np.arange(n_max + 1)
    exc = (space.S + space.m_values())[:, None] + n[None, :]
    diag = np.where(np.round(exc).astype(int) % 2 == 0, 1.0, -1.0).ravel()
    return as_operator(sp.diags(diag.astype(complex), 0, format="csr"))


def h_faraday(omega1, S, n_max):
    """omega1 (a+^dag a+ - a-^dag a-) Sz on spin (x) Fock (x) Fock."""
    spin = make_spin_space(S)
    space = CompositeSpace((spin, FockSpace(n_max), FockSpace(n_max)))
    Sz = sp.csr_array(space.embed(spin_operators(spin, sparse=True).z, 0))
    a = fock_annihilation(FockSpace(n_max), sparse=True)
    ap = sp.csr_array(space.embed(a, 1))
    am = sp.csr_array(space.embed(a, 2))
    H = omega1 * (ap.conj().T @ ap - am.conj().T @ am) @ Sz
    return as_operator(H)


def fock_tail_population(state, n_max):
    """Population in the highest Fock level of a spin (x) Fock state.

    Diagnostic for truncation: callers should keep this below ~1e-6.
    """
    state = np.asarray(state)
    dim_f = n_max + 1
    if state.ndim == 1:
        probs = np.abs(state) ** 2
    else:
        probs = np.real(np.diag(state))
    return float(probs.reshape(-1, dim_f)[:, -1].sum())
