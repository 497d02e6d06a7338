"""Metrological figures of merit: Wineland squeezing, QFI, Allan deviation, echo gain."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._numerics import golden_section, grid_then_golden, loglog_slope
from .spin_algebra import (
    _axis_vector,
    coherent_spin_state,
    make_spin_space,
    rotation_operator,
    spin_moments,
    spin_of_dim,
    spin_operators,
    squeezing_ellipse,
)


def wineland_xi2(state, N=None) -> float:
    """N V_min / |<S>|^2 with V_min the minimal transverse variance."""
    state = np.asarray(state)
    if N is None:
        N = spin_of_dim(state.shape[0]).N
    mean, _ = spin_moments(state)
    if np.linalg.norm(mean) <= 1e-9 * N:
        raise ValueError("mean spin vanishes; Wineland parameter undefined")
    ell = squeezing_ellipse(state)
    return float(N * ell.V_min / np.dot(mean, mean))


class QFI(NamedTuple):
    I: float
    xi2_I: float
    axis: np.ndarray


def qfi_pure(state, axis="optimal") -> QFI:
    """Quantum Fisher information 4 Var(n.S) of a pure state for rotations about n.

    ``axis="optimal"`` picks the eigenvector of the spin covariance with the
    largest eigenvalue.
    """
    state = np.asarray(state)
    if state.ndim != 1:
        raise ValueError("qfi_pure takes a pure state vector")
    N = spin_of_dim(state.shape[0]).N
    _, cov = spin_moments(state)
    if isinstance(axis, str) and axis == "optimal":
        w, v = np.linalg.eigh(cov)
        n, var = v[:, -1], w[-1]
    else:
        n = _axis_vector(axis)
        var = n @ cov @ n
    I = 4 * float(var)
    return QFI(I, N / I if I > 0 else np.inf, n)


def allan_deviation(xi, N, omega, T, T_cycle, tau):
    """Quantum-projection-limited fractional frequency instability.

    sigma(tau) = xi / (sqrt(N) omega T) * sqrt(T_cycle / tau)
    """
    if min(xi, N, omega, T, T_cycle) <= 0:
        raise ValueError("all parameters must be positive")
    if T_cycle < T:
        raise ValueError("cycle time cannot be shorter than the Ramsey time")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau <= 0):
        raise ValueError("averaging times must be positive")
    return xi / (np.sqrt(N) * omega * T) * np.sqrt(T_cycle / tau)


def oat_state(N, chi, t):
    """Coherent state along +x evolved under chi Sz^2 / N (exact, diagonal)."""
    space = make_spin_space(N / 2)
    psi0 = coherent_spin_state(space, np.pi / 2, 0.0)
    m = space.m_values()
    return np.exp(-1j * chi * t * m * m / space.N) * psi0


@dataclass
class EchoProtocol:
    N: int
    chi: float
    t_fwd: float
    axis: object = "auto"
    phi: float = 0.0
    t_rev: float = None

    def __post_init__(self):
        if self.t_fwd < 0 or (self.t_rev is not None and self.t_rev < 0):
            raise ValueError("echo times must be non-negative")
        if self.t_rev is None:
            self.t_rev = self.t_fwd


@dataclass
class EchoResult:
    final_state: np.ndarray
    gain: float
    dphi_min: float
    xi2_echo: float
    axis: np.ndarray
    readout: np.ndarray
    gain_richardson: float
    gain_analytic: float


def _echo_pieces(p: EchoProtocol):
    space = make_spin_space(p.N / 2)
    m = space.m_values()
    psi0 = coherent_spin_state(space, np.pi / 2, 0.0)
    fwd = np.exp(-1j * p.chi * p.t_fwd * m * m / space.N)
    rev = np.exp(1j * p.chi * p.t_rev * m * m / space.N)
    return space, psi0, fwd, rev


def echo_final_state(p: EchoProtocol, axis_vec, phi):
    space, psi0, fwd, rev = _echo_pieces(p)
    R = rotation_operator(space, axis_vec, phi)
    return rev * (R @ (fwd * psi0))


def echo_jacobian(p: EchoProtocol):
    """d<S_a>_final / d phi for readout a in (y, z) and rotation axes (x, y, z).

    Evaluated analytically as ``i <psi_t| [n.S, U O U^dag] |psi_t>`` with
    ``U`` the reverse evolution, to serve as a cross-check on the
    finite-difference gain.
    """
    space, psi0, fwd, rev = _echo_pieces(p)
    ops = spin_operators(space, sparse=False)
    S = [ops.x, ops.y, ops.z]
    psi_t = fwd * psi0
    Jac = np.zeros((2, 3))
    for a, O in enumerate((ops.y, ops.z)):
        Ot = rev.conj()[:, None] * O * rev[None, :]  # U^dag O U with U = diag(rev)
        for b in range(3):
            comm = S[b] @ Ot - Ot @ S[b]
            # R = exp(-i phi n.S): d/dphi <R^dag Ot R> = i <[n.S, Ot]>
            Jac[a, b] = (1j * np.vdot(psi_t, comm @ psi_t)).real
    return Jac


def _readout(state, space, direction):
    ops = spin_operators(space, sparse=False)
    O = direction[0] * ops.y + direction[1] * ops.z
    return np.vdot(state, O @ state).real


def echo_protocol(p: EchoProtocol, h=1e-4) -> EchoResult:
    """Twist, rotate by phi, untwist; gain from a symmetric finite difference.

    With ``axis="auto"`` the rotation axis (restricted to the plane
    orthogonal to the initial +x spin) and the transverse readout direction
    are the top singular pair of the analytic response Jacobian.
    """
    space, psi0, fwd, rev = _echo_pieces(p)
    Jac = echo_jacobian(p)
    if isinstance(p.axis, str) and p.axis == "auto":
        U, s, Vt = np.linalg.svd(Jac[:, 1:])
        axis = np.array([0.0, Vt[0, 0], Vt[0, 1]])
        readout = U[:, 0]
    else:
        axis = _axis_vector(p.axis)
        resp = Jac @ axis
        nr = np.linalg.norm(resp)
        readout = resp / nr if nr > 0 else np.array([1.0, 0.0])
    analytic = float(readout @ Jac @ axis)

    def signal(phi):
        return _readout(echo_final_state(p, axis, phi), space, readout)

    d_h = (signal(h) - signal(-h)) / (2 * h)
    d_h2 = (signal(h / 2) - signal(-h / 2)) / h
    richardson = (4 * d_h2 - d_h) / 3
    N = space.N
    slope = abs(d_h)
    gain = slope / (N / 2)
    final = echo_final_state(p, axis, p.phi)
    # at phi = 0 the echo returns the CSS exactly, whose transverse noise is N/4
    ops = spin_operators(space, sparse=False)
    O = readout[0] * ops.y + readout[1] * ops.z
    psi_ref = echo_final_state(p, axis, 0.0)
    var = np.vdot(psi_ref, O @ (O @ psi_ref)).real - np.vdot(psi_ref, O @ psi_ref).real ** 2
    dphi = np.sqrt(var) / slope if slope > 0 else np.inf
    return EchoResult(final, gain, dphi, N * dphi**2, axis, readout,
                      abs(richardson) / (N / 2), abs(analytic) / (N / 2))


class EchoScan(NamedTuple):
    t: np.ndarray
    gain: np.ndarray
    t_best: float
    gain_best: float
    xi2_best: float


def echo_gain_scan(N, chi=1.0, t_max=None, n_grid=121) -> EchoScan:
    """Peak echo gain over the forward time (analytic Jacobian, refined by golden section)."""
    if t_max is None:
        t_max = 2.0 * np.sqrt(N) / chi

    def neg_gain(t):
        Jac = echo_jacobian(EchoProtocol(N, chi, t))
        return -np.linalg.svd(Jac[:, 1:], compute_uv=False)[0] / (N / 2)

    t = np.linspace(0, t_max, n_grid)
    gains = -np.array([neg_gain(x) for x in t])
    t_best, g_best = grid_then_golden(neg_gain, t, rtol=1e-8)
    res = echo_protocol(EchoProtocol(N, chi, t_best))
    return EchoScan(t, gains, t_best, res.gain, res.xi2_echo)


class OATOptimum(NamedTuple):
    N: np.ndarray
    t_opt: np.ndarray
    xi2_min: np.ndarray
    exponent: float


def oat_xi2(N, chi, t):
    return wineland_xi2(oat_state(N, chi, t), N)


def oat_optimum(N, chi=1.0):
    """Minimal Wineland parameter of unitary one-axis twisting and the time it occurs."""
    if N < 4:
        raise ValueError("need N >= 4")
    # Gaussian estimate mu_opt ~ 24^(1/6) (N/2)^(-2/3) with mu = 2 chi t / N brackets the search
    t_est = 24 ** (1 / 6) * (N / 2) ** (-2 / 3) * N / (2 * chi)
    grid = np.linspace(0.1 * t_est, 4 * t_est, 60)
    t_opt, xi2 = grid_then_golden(lambda t: oat_xi2(N, chi, t), grid, rtol=1e-7)
    return t_opt, xi2


def oat_optimum_scan(N_list=(20, 40, 80, 160, 320), chi=1.0) -> OATOptimum:
    N_arr = np.asarray(N_list)
    res = [oat_optimum(int(N), chi) for N in N_arr]
    t_opt = np.array([r[0] for r in res])
    xi2 = np.array([r[1] for r in res])
    return OATOptimum(N_arr, t_opt, xi2, loglog_slope(N_arr, xi2))


def kitagawa_ueda_moments(N, chi, t):
    """Closed-form (V_min, V_max, <Sx>) of chi Sz^2 / N twisting from the +x CSS."""
    mu = 2 * chi * t / N
    A = 1 - np.cos(mu) ** (N - 2)
    B = 4 * np.sin(mu / 2) * np.cos(mu / 2) ** (N - 2)
    root = np.sqrt(A * A + B * B)
    base = N / 4
    return (base * (1 + (N - 1) / 4 * (A - root)), base * (1 + (N - 1) / 4 * (A + root)),
            N / 2 * np.cos(mu / 2) ** (N - 1))
