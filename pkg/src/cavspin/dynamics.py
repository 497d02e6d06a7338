"""Time-evolution engines.

* :func:`evolve_unitary` - eigendecomposition (small) or restarted Lanczos
  Krylov propagation (large) of ``exp(-iHt)``.
* :func:`evolve_lindblad` - Dormand-Prince 5(4) integration of the Lindblad
  master equation.
* :func:`dissipative_oat` - one-axis twisting with collective measurement
  dephasing.
* :func:`mean_field_trajectories` - classical spin trajectories with optional
  truncated-Wigner sampling of the initial state.
* :func:`mean_field_dicke` - Dicke-model mean-field order parameter.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq

from ._numerics import ALG_TOL
from .spin_algebra import (
    coherent_spin_state,
    expect,
    make_spin_space,
    squeezing_ellipse,
    spin_operators,
)

EIGH_MAX = 512
LINDBLAD_STORE_MAX = 128


@dataclass
class EvolutionResult:
    times: np.ndarray
    states: list = None
    expectations: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


class KrylovError(RuntimeError):
    pass


class IntegrationError(RuntimeError):
    pass


def _time_grid(t, n_snapshots):
    if np.ndim(t) == 0:
        if t < 0:
            raise ValueError("evolution time must be non-negative")
        return np.linspace(0.0, float(t), max(int(n_snapshots), 1)) if n_snapshots > 1 else np.array([float(t)])
    times = np.asarray(t, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("snapshot times must be non-negative and non-decreasing")
    return times


def _hermiticity_error(H):
    d = H - H.conj().T
    return abs(d).max() if sp.issparse(d) else np.max(np.abs(d))


def lanczos_expm(H, psi, dt, m_max=40, tol=1e-12):
    """Approximate ``exp(-i H dt) psi`` in a Krylov space of dimension <= m_max.

    Returns ``(phi, err_estimate)``; the estimate is the standard
    ``beta_m |[exp(-i T dt)]_{m,0}|`` a-posteriori bound.
    """
    n = psi.shape[0]
    beta0 = np.linalg.norm(psi)
    if beta0 == 0:
        return psi.copy(), 0.0
    V = np.zeros((m_max + 1, n), dtype=complex)
    alpha = np.zeros(m_max)
    beta = np.zeros(m_max)
    V[0] = psi / beta0
    m_used = m_max
    for j in range(m_max):
        w = H @ V[j]
        alpha[j] = np.vdot(V[j], w).real
        w = w - alpha[j] * V[j] - (beta[j - 1] * V[j - 1] if j > 0 else 0)
        # full reorthogonalization keeps the basis clean at this size
        w -= V[: j + 1].T @ (V[: j + 1].conj() @ w)
        beta[j] = np.linalg.norm(w)
        if beta[j] < 1e-14:
            m_used = j + 1
            break
        V[j + 1] = w / beta[j]
    m = m_used
    T = np.diag(alpha[:m]) + np.diag(beta[: m - 1], 1) + np.diag(beta[: m - 1], -1)
    ev, U = np.linalg.eigh(T)
    coeffs = U @ (np.exp(-1j * ev * dt) * U[0].conj())
    err = beta[m - 1] * abs(coeffs[m - 1]) * beta0 if m == m_max else 0.0
    return beta0 * (V[:m].T @ coeffs), float(err)


def _krylov_propagate(H, psi, dt, tol, m_max=40):
    """Substep ``exp(-iH dt) psi`` with adaptive restarts until each piece converges."""
    t_done, h = 0.0, dt
    steps, worst = 0, 0.0
    while t_done < dt - 1e-15 * max(dt, 1.0):
        h = min(h, dt - t_done)
        new, err = lanczos_expm(H, psi, h, m_max=m_max)
        if err > tol and h > dt * 1e-8:
            h /= 2
            continue
        if err > tol:
            raise KrylovError(f"Krylov propagation did not converge (residual {err:.3e})")
        psi = new
        t_done += h
        steps += 1
        worst = max(worst, err)
        h *= 1.5
    return psi, steps, worst


def evolve_unitary(H, state, t, n_snapshots=2, krylov_tol=1e-12):
    """Snapshots of ``exp(-i H tau) |psi>`` (or ``U rho U^dag``).

    ``t`` may be a final time (with ``n_snapshots`` equally spaced points
    including 0) or an explicit array of times.
    """
    if _hermiticity_error(H) > ALG_TOL:
        raise ValueError("Hamiltonian is not Hermitian")
    times = _time_grid(t, n_snapshots)
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    diagnostics = {"method": "eigh" if dim <= EIGH_MAX else "krylov"}
    states = []
    if dim <= EIGH_MAX:
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        if np.count_nonzero(Hd - np.diag(np.diag(Hd))) == 0:
            w, v = np.real(np.diag(Hd)), None
        else:
            w, v = np.linalg.eigh(Hd)
        if state.ndim == 1:
            c0 = state if v is None else v.conj().T @ state
            for tau in times:
                c = np.exp(-1j * w * tau) * c0
                states.append(c if v is None else v @ c)
        else:
            r0 = state if v is None else v.conj().T @ state @ v
            for tau in times:
                ph = np.exp(-1j * w * tau)
                r = ph[:, None] * r0 * ph.conj()[None, :]
                states.append(r if v is None else v @ r @ v.conj().T)
    else:
        if state.ndim != 1:
            raise ValueError("Krylov propagation supports pure states only")
        psi, t_prev, total_steps, worst = state.copy(), 0.0, 0, 0.0
        for tau in times:
            if tau > t_prev:
                psi, n, err = _krylov_propagate(H, psi, tau - t_prev, krylov_tol)
                total_steps += n
                worst = max(worst, err)
            states.append(psi.copy())
            t_prev = tau
        diagnostics.update(krylov_steps=total_steps, max_local_error=worst)
    norm0 = np.linalg.norm(state) if state.ndim == 1 else np.trace(state).real
    if state.ndim == 1:
        drift = max(abs(np.linalg.norm(s) - norm0) for s in states)
    else:
        drift = max(abs(np.trace(s).real - norm0) for s in states)
    diagnostics["norm_drift"] = float(drift)
    return EvolutionResult(times, states, {}, diagnostics)


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_DP_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def _lindblad_rhs(H, collapse):
    H = H.toarray() if sp.issparse(H) else np.asarray(H, dtype=complex)
    Ls = [np.sqrt(rate) * (L.toarray() if sp.issparse(L) else np.asarray(L, dtype=complex))
          for L, rate in collapse]
    Heff = H - 0.5j * sum((L.conj().T @ L for L in Ls), np.zeros_like(H))
    Ldag = [L.conj().T for L in Ls]
    # diagonal generators reduce to elementwise products
    diag = all(np.count_nonzero(M - np.diag(np.diag(M))) == 0 for M in [H, *Ls])
    if diag:
        h = np.diag(Heff)
        ls = [np.diag(L) for L in Ls]
        gen = -1j * (h[:, None] - h.conj()[None, :])
        for lv in ls:
            gen = gen + lv[:, None] * lv.conj()[None, :]
        return lambda rho: gen * rho

    def rhs(rho):
        out = -1j * (Heff @ rho - rho @ Heff.conj().T)
        for L, Ld in zip(Ls, Ldag):
            out += L @ rho @ Ld
        return out

    return rhs


def evolve_lindblad(H, collapse_ops, rho, t, n_snapshots=2, rtol=1e-8, atol=1e-10,
                    observables=None, store_states=None, max_halvings=60):
    """Integrate ``drho/dt = -i[H, rho] + sum_k (L rho L^dag - {L^dag L, rho}/2)``.

    ``collapse_ops`` is a list of ``(L, rate)`` pairs; each enters as
    ``sqrt(rate) L``.  ``observables`` maps names to operators whose
    expectation values are recorded at every snapshot.  Full density matrices
    are stored only up to dimension 128 unless ``store_states`` says otherwise.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    dim = rho.shape[0]
    if store_states is None:
        store_states = dim <= LINDBLAD_STORE_MAX
    times = _time_grid(t, n_snapshots)
    f = _lindblad_rhs(H, collapse_ops)
    observables = observables or {}
    obs_dense = {k: (v.toarray() if sp.issparse(v) else np.asarray(v)) for k, v in observables.items()}

    states, tracks = [], {k: [] for k in observables}
    max_trace_drift = 0.0
    max_err = 0.0
    n_steps = n_rejected = 0
    t_now = times[0] if len(times) else 0.0
    h = None
    k1 = f(rho)

    def record(r):
        nonlocal max_trace_drift
        max_trace_drift = max(max_trace_drift, abs(np.trace(r).real - 1.0))
        if store_states:
            states.append(r.copy())
        for k, O in obs_dense.items():
            tracks[k].append(np.einsum("ij,ji->", O, r).real)

    t_start = t_now
    for target in times:
        while target - t_now > 1e-14 * max(1.0, abs(target)):
            if h is None:
                scale = np.max(np.abs(k1)) + 1e-300
                h = min(0.01 / scale, target - t_now) if scale > 0 else target - t_now
            h = min(h, target - t_now)
            halvings = 0
            while True:
                ks = [k1]
                for i in range(1, 7):
                    yi = rho + h * sum(a * kk for a, kk in zip(_DP_A[i], ks))
                    ks.append(f(yi))
                y5 = rho + h * sum(b * kk for b, kk in zip(_DP_B5, ks) if b != 0)
                y4 = rho + h * sum(b * kk for b, kk in zip(_DP_B4, ks) if b != 0)
                scale = atol + rtol * np.maximum(np.abs(rho), np.abs(y5))
                err = np.max(np.abs(y5 - y4) / scale)
                if err <= 1.0:
                    break
                n_rejected += 1
                halvings += 1
                if halvings > max_halvings:
                    raise IntegrationError(f"Lindblad step failed to meet tolerance at t={t_now:.6g}")
                h *= max(0.2, 0.9 * err ** (-0.2))
            rho = (y5 + y5.conj().T) / 2
            t_now += h
            n_steps += 1
            max_err = max(max_err, err)
            k1 = f(rho)
            h *= min(5.0, 0.9 * max(err, 1e-10) ** (-0.2))
        record(rho)
    diagnostics = {"steps": n_steps, "rejected": n_rejected, "max_error_ratio": float(max_err),
                   "trace_drift": float(max_trace_drift), "t0": float(t_start)}
    return EvolutionResult(times, states if store_states else None,
                           {k: np.array(v) for k, v in tracks.items()}, diagnostics)


@dataclass
class OATTrack:
    times: np.ndarray
    V_min: np.ndarray
    V_max: np.ndarray
    xi2: np.ndarray
    mean_spin: np.ndarray
    gamma: float
    result: EvolutionResult


def dissipative_oat(chi, d, S, t_grid, rtol=1e-9, atol=1e-12):
    """One-axis twisting with collective dephasing from the cavity output.

    ``H = (chi/N) Sz^2`` and ``L = sqrt(gamma) Sz`` with
    ``gamma = (chi/N)(2/d)``; ``d = inf`` gives unitary twisting.  The
    initial state is the coherent spin state along +x.
    """
    if d == 0:
        raise ValueError("d = 0 (resonant drive) is a pure measurement channel, not twisting")
    space = make_spin_space(S)
    N = space.N
    ops = spin_operators(space)
    H = chi / N * (ops.z @ ops.z)
    gamma = 0.0 if np.isinf(d) else chi / N * 2.0 / d
    collapse = [(ops.z, gamma)] if gamma != 0 else []
    psi0 = coherent_spin_state(space, np.pi / 2, 0.0)
    res = evolve_lindblad(H, collapse, np.outer(psi0, psi0.conj()), np.asarray(t_grid, dtype=float),
                          rtol=rtol, atol=atol, store_states=True)
    vmin, vmax, xi2, means = [], [], [], []
    for rho in res.states:
        ell = squeezing_ellipse(rho)
        vmin.append(ell.V_min)
        vmax.append(ell.V_max)
        xi2.append(N * ell.V_min / np.dot(ell.mean_spin, ell.mean_spin))
        means.append(ell.mean_spin)
    return OATTrack(res.times, np.array(vmin), np.array(vmax), np.array(xi2), np.array(means), gamma, res)


# ---------------------------------------------------------------- trajectories


@dataclass
class TrajectoryEnsemble:
    n_traj: int
    seed: int
    times: np.ndarray
    mean: np.ndarray          # (T, M, 3) trajectory-averaged spins
    C_xx: np.ndarray          # (T, M, M) connected <x_i x_j> - <x_i><x_j>
    tracks: np.ndarray = None  # (n_traj, T, M, 3) when requested
    diagnostics: dict = field(default_factory=dict)


def _spin_field(s, J, h, model, anisotropy):
    """Effective field B = -dH/ds for H = sum_{i<j} J_ij [...] + sum_i h_i z_i."""
    x, y, z = s[..., 0], s[..., 1], s[..., 2]
    B = np.empty_like(s)
    if model == "Ising":
        B[..., 0] = 0.0
        B[..., 1] = 0.0
        B[..., 2] = -(z @ J) - h
    else:
        B[..., 0] = -(x @ J)
        B[..., 1] = -(y @ J)
        B[..., 2] = -anisotropy * (z @ J) - h
    return B


def _initial_spins(spec, M, lengths):
    """Unit directions per site from an initial CSS spec ``(theta, phi)`` or per-site arrays."""
    theta, phi = spec
    theta = np.broadcast_to(np.asarray(theta, dtype=float), (M,))
    phi = np.broadcast_to(np.asarray(phi, dtype=float), (M,))
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    return n * lengths[:, None], n


def _rk4_run(s0, J, h, model, anisotropy, times, dt_max, keep_tracks):
    def rhs(s):
        return np.cross(s, _spin_field(s, J, h, model, anisotropy))

    s = s0.copy()
    out_mean, out_cxx, out_tracks = [], [], []
    t_now = times[0]
    n_steps = 0

    def record(s):
        out_mean.append(s.mean(axis=0))
        x = s[..., 0]
        xm = x.mean(axis=0)
        out_cxx.append((x.T @ x) / x.shape[0] - np.outer(xm, xm))
        if keep_tracks:
            out_tracks.append(s.copy())

    for target in times:
        span = target - t_now
        if span > 0:
            n = int(np.ceil(span / dt_max))
            dt = span / n
            for _ in range(n):
                k1 = rhs(s)
                k2 = rhs(s + 0.5 * dt * k1)
                k3 = rhs(s + 0.5 * dt * k2)
                k4 = rhs(s + dt * k3)
                s = s + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            n_steps += n
            t_now = target
        record(s)
    tracks = np.stack(out_tracks, axis=1) if keep_tracks else None
    return s, np.array(out_mean), np.array(out_cxx), tracks, n_steps


def mean_field_trajectories(J, fields, model="XY", initial=(np.pi / 2, 0.0), n_traj=1, seed=0,
                            t_grid=(0.0, 1.0), spin_length=0.5, anisotropy=None,
                            keep_tracks=False, norm_tol=1e-6):
    """Classical spin dynamics ``ds_i/dt = s_i x B_i`` with ``B_i = -dH/ds_i``.

    ``H = sum_{i<j} J_ij (x_i x_j + y_i y_j + Delta z_i z_j) + sum_i h_i z_i``
    where Delta is 0 for ``"XY"``, ``anisotropy`` for ``"XXZ"``; ``"Ising"``
    keeps only the zz term.  With ``n_traj > 1`` each trajectory starts from
    truncated-Wigner noise (transverse Gaussian, variance s/2 per component)
    drawn from the sub-stream ``SeedSequence([seed, k])``.
    """
    J = np.asarray(J, dtype=float)
    M = J.shape[0]
    if J.shape != (M, M) or np.max(np.abs(J - J.T)) > 1e-12:
        raise ValueError("coupling matrix must be square and symmetric")
    if model not in ("XY", "Ising", "XXZ"):
        raise ValueError(f"unknown model {model!r}")
    if model == "XXZ" and anisotropy is None:
        raise ValueError("XXZ model needs an anisotropy J_z/J_xy")
    aniso = 0.0 if model == "XY" else (1.0 if model == "Ising" else float(anisotropy))
    lengths = np.broadcast_to(np.asarray(spin_length, dtype=float), (M,)).copy()
    if np.any(lengths <= 0):
        raise ValueError("spin lengths must be positive")
    h = np.broadcast_to(np.asarray(fields, dtype=float), (M,)).copy()
    if n_traj < 1:
        raise ValueError("need at least one trajectory")
    times = np.asarray(t_grid, dtype=float)

    mean_dir, n = _initial_spins(initial, M, lengths)
    s0 = np.repeat(mean_dir[None], n_traj, axis=0)
    if n_traj > 1:
        ref = np.where(np.abs(n[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
        e1 = np.cross(ref, n)
        e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
        e2 = np.cross(n, e1)
        for k in range(n_traj):
            rng = np.random.default_rng(np.random.SeedSequence([int(seed), k]))
            noise = rng.normal(size=(M, 2)) * np.sqrt(lengths / 2)[:, None]
            s0[k] += noise[:, :1] * e1 + noise[:, 1:] * e2

    scale = np.max(np.abs(J).sum(axis=1) * lengths.max() * (1 + abs(aniso))) + np.max(np.abs(h)) + 1e-12
    dt_max = 0.02 / scale
    norms0 = np.linalg.norm(s0, axis=-1)
    for _ in range(6):
        s_end, mean, cxx, tracks, steps = _rk4_run(s0, J, h, model, aniso, times, dt_max, keep_tracks)
        drift = np.max(np.abs(np.linalg.norm(s_end, axis=-1) - norms0) / norms0)
        if drift < norm_tol:
            break
        dt_max /= 2
    return TrajectoryEnsemble(n_traj, seed, times, mean, cxx, tracks,
                              {"steps": steps, "dt": dt_max, "norm_drift": float(drift)})


def transverse_magnetization(ens: TrajectoryEnsemble):
    """|sum_i <s_perp,i>| / sum_i |s_i(0)| versus time."""
    tot = ens.mean[..., :2].sum(axis=1)
    norm0 = np.linalg.norm(ens.mean[0], axis=-1).sum()
    return np.linalg.norm(tot, axis=-1) / norm0


def xy_protection_threshold(fields, J_lo=0.0, J_hi=None, t_final=None, n_times=200,
                            threshold=0.5, rtol=1e-3, spin_length=0.5):
    """Bisect the all-to-all coupling at which transverse coherence survives.

    Uses pure mean field (one trajectory) for the all-to-all ferromagnetic XY
    model ``J_ij = -J/M`` with local fields ``fields``, starting from all
    spins along +x.  Coherence is "protected" when the late-time average of
    the transverse magnetization exceeds ``threshold``.
    """
    h = np.asarray(fields, dtype=float)
    M = h.size
    spread = np.ptp(h) if M > 1 else 1.0
    if t_final is None:
        t_final = 60.0 / max(spread, 1e-12)
    times = np.linspace(0, t_final, n_times)

    def protected(J):
        Jm = -J / M * (np.ones((M, M)) - np.eye(M))
        ens = mean_field_trajectories(Jm, h, "XY", (np.pi / 2, 0.0), 1, 0, times, spin_length)
        mag = transverse_magnetization(ens)
        return mag[n_times // 2:].mean() > threshold

    if J_hi is None:
        J_hi = spread
        while not protected(J_hi):
            J_hi *= 2
    if protected(J_lo):
        return J_lo
    while (J_hi - J_lo) > rtol * J_hi:
        mid = 0.5 * (J_lo + J_hi)
        if protected(mid):
            J_hi = mid
        else:
            J_lo = mid
    return 0.5 * (J_lo + J_hi)


# ---------------------------------------------------------------- Dicke mean field


def _dicke_map(alpha, omega0, omega_c, G, S):
    """One fixed-point update: spin anti-aligned with its field, field slaved to S_x."""
    bx = 4 * G * alpha
    sx = -S * bx / np.hypot(bx, omega0)
    return -2 * G * sx / omega_c


@dataclass
class DickeCurve:
    G: np.ndarray
    alpha_plus: np.ndarray
    alpha_minus: np.ndarray
    order_parameter: np.ndarray
    threshold: float
    iterations: np.ndarray


def dicke_fixed_point(omega0, omega_c, G, S, alpha0, damping=0.5, tol=1e-12, max_iter=20000):
    """Damped iteration alpha <- (1-eta) alpha + eta f(alpha) from ``alpha0``.

    At the critical point convergence is only algebraic; if the iteration
    stalls, the fixed point on the side of ``alpha0`` is polished by Brent's
    method on ``f(alpha) - alpha``.
    """
    alpha = float(alpha0)
    for k in range(max_iter):
        new = (1 - damping) * alpha + damping * _dicke_map(alpha, omega0, omega_c, G, S)
        if abs(new - alpha) <= tol * max(1.0, abs(new)):
            return new, k + 1
        alpha = new
    sign = 1.0 if alpha0 >= 0 else -1.0
    h = lambda a: _dicke_map(sign * a, omega0, omega_c, G, S) * sign - a  # noqa: E731
    a_max = 2 * G * S / omega_c
    lo = abs(alpha)
    if lo > 0 and h(lo) > 0 and h(a_max) <= 0:
        return sign * brentq(h, lo, a_max, xtol=1e-15, rtol=4 * np.finfo(float).eps), max_iter
    tiny = 1e-150
    if lo > 0 and h(lo) < 0:
        if h(tiny) > 0:
            return sign * brentq(h, tiny, lo, xtol=1e-300, rtol=4 * np.finfo(float).eps), max_iter
        return 0.0, max_iter  # normal phase, reached only algebraically at the critical point
    raise RuntimeError(f"Dicke mean-field iteration did not converge at G={G}")


def _normal_phase_unstable(omega0, omega_c, G, S, seed=1e-8, n_iter=200, damping=0.5):
    a = seed
    for _ in range(n_iter):
        a = (1 - damping) * a + damping * _dicke_map(a, omega0, omega_c, G, S)
    return abs(a) > seed


def dicke_threshold(omega0, omega_c, S, rtol=1e-4):
    """Critical coupling by bisection on whether a tiny seed field grows under the iteration."""
    if omega0 <= 0 or omega_c <= 0:
        raise ValueError("omega0 and omega_c must be positive")
    lo, hi = 0.0, np.sqrt(omega0 * omega_c) / max(S, 0.5)
    while not _normal_phase_unstable(omega0, omega_c, hi, S):
        lo, hi = hi, 2 * hi
    while hi - lo > rtol * hi * 0.5:
        mid = 0.5 * (lo + hi)
        if _normal_phase_unstable(omega0, omega_c, mid, S):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def mean_field_dicke(omega0, omega_c, G_grid, S, damping=0.5, tol=1e-12):
    """Order parameter |<a>| over a grid of couplings, both Z2 branches."""
    if omega0 <= 0 or omega_c <= 0:
        raise ValueError("omega0 and omega_c must be positive")
    G_grid = np.asarray(G_grid, dtype=float)
    seed = 0.1 * np.sqrt(S)
    ap, am, its = [], [], []
    for G in G_grid:
        a_p, n_p = dicke_fixed_point(omega0, omega_c, G, S, seed, damping, tol)
        a_m, n_m = dicke_fixed_point(omega0, omega_c, G, S, -seed, damping, tol)
        ap.append(a_p)
        am.append(a_m)
        its.append(max(n_p, n_m))
    ap, am = np.array(ap), np.array(am)
    return DickeCurve(G_grid, ap, am, np.abs(ap), dicke_threshold(omega0, omega_c, S), np.array(its))


def dicke_stability_matrix(omega0, omega_c, G, S):
    """Quadratic form of the normal phase in (x_cavity, x_spin) after Holstein-Primakoff."""
    c = 2 * G * np.sqrt(2 * S)
    return np.array([[omega_c, c], [c, omega0]])


def expectation_track(result: EvolutionResult, op):
    return np.array([expect(op, s).real for s in result.states])
