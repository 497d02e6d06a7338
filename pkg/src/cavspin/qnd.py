"""Quantum non-demolition measurement and heralding protocols."""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ._numerics import golden_section
from .spin_algebra import (
    coherent_spin_state,
    dicke_state,
    make_spin_space,
    rotate,
    spin_operators,
)


@dataclass
class HeraldedOutcome:
    label: str
    probability: float
    state: np.ndarray
    fidelity: float = None
    extras: dict = field(default_factory=dict)


def _fidelity(a, b):
    return float(abs(np.vdot(a, b)) ** 2 / (np.vdot(a, a).real * np.vdot(b, b).real))


def coherent_amplitudes(alpha, n_max):
    """Fock amplitudes of |alpha> up to n_max (not renormalized)."""
    n = np.arange(n_max + 1)
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def default_cutoff(alpha):
    a = abs(alpha)
    return int(np.ceil(a * a + 6 * a + 10))


def parity_herald(alpha, phi1=np.pi, n_max=None):
    """Ramsey parity measurement of a coherent field with one dispersively coupled atom.

    The atom starts in |+x>, the pair evolves under
    ``exp(-i phi1 a^dag a sigma_z / 2)`` and the atom is read out in the x
    basis.  Returns ``{"even": ..., "odd": ...}`` for the +x / -x outcomes;
    at ``phi1 = pi`` these are the photon-parity branches.
    """
    if n_max is None:
        n_max = default_cutoff(alpha)
    c = coherent_amplitudes(alpha, n_max)
    tail = 1.0 - np.sum(np.abs(c) ** 2)
    if tail > 1e-8:
        raise ValueError(f"Fock cutoff {n_max} leaves {tail:.2e} of the coherent state outside")
    c = c / np.linalg.norm(c)
    n = np.arange(n_max + 1)
    # |e> picks up exp(-i phi n/2), |g> exp(+i phi n/2); project on (|e> +- |g>)/sqrt2
    up, dn = np.exp(-0.5j * phi1 * n), np.exp(0.5j * phi1 * n)
    parity = np.where(n % 2 == 0, 1.0, -1.0)
    targets = {
        "even": coherent_amplitudes(1j * alpha, n_max) + coherent_amplitudes(-1j * alpha, n_max),
        "odd": coherent_amplitudes(-1j * alpha, n_max) - coherent_amplitudes(1j * alpha, n_max),
    }
    out = {}
    for label, sign in (("even", 1), ("odd", -1)):
        field_amp = c * (up + sign * dn) / 2
        p = float(np.sum(np.abs(field_amp) ** 2))
        if p > 0:
            state = field_amp / np.sqrt(p)
            fid = _fidelity(targets[label], state) if np.linalg.norm(targets[label]) > 1e-300 else None
            mean_parity = float(np.sum(parity * np.abs(state) ** 2))
        else:
            state, fid, mean_parity = np.zeros_like(field_amp), None, np.nan
        out[label] = HeraldedOutcome(label, p, state, fid, {"parity": mean_parity})
    return out


def poisson_even_probability(alpha):
    """Closed form sum over even n of the Poisson weights."""
    return (1 + np.exp(-2 * abs(alpha) ** 2)) / 2


@dataclass
class CollapseTrack:
    hidden_n: int
    outcomes: np.ndarray
    phases: np.ndarray
    posteriors: np.ndarray      # (n_atoms + 1, n_max + 1)
    entropy: np.ndarray         # nats
    class_concentration: np.ndarray
    period: float


def _entropy(p):
    q = p[p > 0]
    return float(-np.sum(q * np.log(q)))


def resolvable_concentration(posterior, phi1):
    """Largest posterior mass on a set of photon numbers the phase cannot tell apart.

    Photon numbers n and n + 2 pi / phi1 give identical atomic signals, so
    the posterior is aggregated over residue classes before taking the max.
    """
    period = 2 * np.pi / phi1
    n = np.arange(posterior.shape[-1])
    if abs(period - round(period)) > 1e-9:
        return float(posterior.max())
    cls = n % int(round(period))
    return float(max(posterior[cls == k].sum() for k in np.unique(cls)))


def progressive_collapse(alpha, phi1, n_atoms, bases=(0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4),
                         seed=0, n_max=None):
    """Sequential Bayesian photon counting with dispersively coupled probe atoms.

    Each atom picks up the phase ``phi1 * n`` and is read out along the
    equatorial direction ``bases[k % len(bases)]``, so
    ``P(+ | n) = (1 + cos(phi1 n - phase)) / 2``.  The hidden photon number
    is drawn once from the Poisson prior.
    """
    if not 0 < phi1 <= np.pi:
        raise ValueError("phi1 must lie in (0, pi]")
    if n_max is None:
        n_max = default_cutoff(alpha)
    rng = np.random.default_rng(seed)
    prior = np.abs(coherent_amplitudes(alpha, n_max)) ** 2
    prior /= prior.sum()
    hidden = int(rng.choice(n_max + 1, p=prior))
    n = np.arange(n_max + 1)
    post = prior.copy()
    posts, outs, phases = [post.copy()], [], []
    for k in range(n_atoms):
        ph = bases[k % len(bases)]
        p_plus = (1 + np.cos(phi1 * n - ph)) / 2
        plus = rng.random() < p_plus[hidden]
        like = p_plus if plus else 1 - p_plus
        post = post * like
        post /= post.sum()
        posts.append(post.copy())
        outs.append(1 if plus else -1)
        phases.append(ph)
    posts = np.array(posts)
    return CollapseTrack(hidden, np.array(outs, dtype=int), np.array(phases), posts,
                         np.array([_entropy(p) for p in posts]),
                         np.array([resolvable_concentration(p, phi1) for p in posts]),
                         2 * np.pi / phi1)


@dataclass
class ConditionalSqueeze:
    xi2: float
    var_z: float          # conditional Var(Sz), absolute units
    var_y: float          # backaction-broadened Var(Sy)
    mean_x: float
    gain: float           # conditional mean shift per unit measured Sz


def conditional_squeeze_gaussian(N, sigma2_M, contrast_loss=0.0, raman=0.0):
    """Gaussian posterior of Sz after a QND measurement with normalized noise sigma2_M.

    ``contrast_loss`` is Gamma_sc t (spin length shrinks as exp(-Gamma_sc t))
    and ``raman`` the branching factor r adding ``r Gamma_sc t`` to the
    normalized variance.  A measured value M shifts the conditional mean by
    ``gain * M``.
    """
    if not sigma2_M > 0:
        raise ValueError("measurement variance must be positive")
    css = N / 4
    if np.isinf(sigma2_M):
        frac, gain, back = 1.0, 0.0, 1.0
    else:
        frac = sigma2_M / (1 + sigma2_M)
        gain = 1 / (1 + sigma2_M)
        back = 1 + 1 / sigma2_M
    noise = raman * contrast_loss
    var_z = css * (frac + noise)
    var_y = css * (back + noise)
    mean_x = N / 2 * np.exp(-contrast_loss)
    return ConditionalSqueeze(N * var_z / mean_x**2, var_z, var_y, mean_x, gain)


def ashman_d(values, weights):
    """Ashman's D between the negative and positive lobes of a 1-D distribution."""
    values, weights = np.asarray(values, float), np.asarray(weights, float)
    stats = []
    for mask in (values < 0, values > 0):
        w = weights[mask]
        if w.sum() <= 0:
            return 0.0
        mu = np.sum(w * values[mask]) / w.sum()
        var = np.sum(w * (values[mask] - mu) ** 2) / w.sum()
        stats.append((mu, var))
    (m1, v1), (m2, v2) = stats
    if v1 + v2 == 0:
        return np.inf
    return float(np.sqrt(2) * abs(m1 - m2) / np.sqrt(v1 + v2))


def w_state_x(space):
    """Single collective excitation on top of the +x polarized state."""
    return rotate(dicke_state(space, space.S - 1), "y", np.pi / 2)


def herald_w_faraday(N, phi):
    """Photon detected in the dark polarization port after Faraday rotation.

    The dark-port Kraus operator is ``(e^{-i phi Sz} - e^{i phi Sz}) / 2
    = -i sin(phi Sz)`` acting on the coherent state along +x.
    """
    if N < 2 or not phi > 0:
        raise ValueError("need N >= 2 and phi > 0")
    space = make_spin_space(N / 2)
    if phi * space.S > np.pi / 2:
        warnings.warn("phi * S exceeds pi/2: sin(phi Sz) aliases across Dicke levels", stacklevel=2)
    psi = coherent_spin_state(space, np.pi / 2, 0.0)
    m = space.m_values()
    out = -1j * np.sin(phi * m) * psi
    p = float(np.vdot(out, out).real)
    state = out / np.sqrt(p)
    probs = np.abs(state) ** 2
    extras = {
        "mean_sz": float(np.sum(m * probs)),
        "sz_distribution": probs,
        "bimodality": ashman_d(m, probs),
        "overlap_initial": float(abs(np.vdot(psi, state)) ** 2),
    }
    return HeraldedOutcome("click", p, state, _fidelity(w_state_x(space), state), extras)


@dataclass
class PulseShape:
    times: np.ndarray
    amplitudes: np.ndarray
    t_end: float = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.times.size == 0 or self.times.shape != self.amplitudes.shape:
            raise ValueError("pulse needs matching, non-empty time and amplitude samples")
        if np.any(np.diff(self.times) < 0):
            raise ValueError("pulse sample times must be non-decreasing")
        if np.sum(np.abs(self.amplitudes)) == 0:
            raise ValueError("pulse has zero total weight")
        if self.t_end is None:
            self.t_end = float(self.times[-1])

    @classmethod
    def two_pulse(cls, dt, t0=0.0):
        return cls([t0, t0 + dt], [1.0, 1.0])

    @classmethod
    def circle(cls, T, n_samples=256):
        t = np.arange(n_samples) * T / n_samples
        return cls(t, np.ones(n_samples), T)

    @classmethod
    def exp_circle(cls, T, rate, n_samples=256):
        """Circle with amplitude exp(rate t).

        With detection at the end of the window, ``rate = -kappa/2`` exactly
        cancels the cavity-escape weight, so every point of the circle
        contributes equally (an envelope growing in dwell time).
        """
        t = np.arange(n_samples) * T / n_samples
        return cls(t, np.exp(rate * t), T)

    def reversed(self):
        """Time-reversed, phase-conjugated pulse (t -> -t)."""
        return PulseShape(-self.times[::-1], self.amplitudes[::-1].conj(), -self.times[0])


def paint_kraus(pulse: PulseShape, omega1, kappa, m_values):
    """Diagonal (Dicke-basis) Kraus operator of a detected photon, unit l1 weight."""
    w = pulse.amplitudes * np.exp(-kappa * (pulse.t_end - pulse.times) / 2)
    w = w / np.sum(np.abs(pulse.amplitudes))
    return np.exp(-1j * omega1 * np.outer(m_values, pulse.times)) @ w


def paint(initial, pulse: PulseShape, omega1, kappa, target=None):
    """Heralded painting of a spin state by a shaped weak drive.

    ``K = sum_k f_k exp(-kappa (t_K - t_k)/2) exp(-i omega1 t_k Sz)`` with the
    photon detected at the end of the pulse window ``t_K``.
    """
    psi = np.asarray(initial, dtype=complex)
    space = make_spin_space((psi.size - 1) / 2)
    out = paint_kraus(pulse, omega1, kappa, space.m_values()) * psi
    p = float(np.vdot(out, out).real)
    if p == 0:
        return HeraldedOutcome("click", 0.0, out, 0.0 if target is not None else None)
    state = out / np.sqrt(p)
    fid = _fidelity(np.asarray(target), state) if target is not None else None
    return HeraldedOutcome("click", p, state, fid)


def kitten_state(space, phi_a, phi_b, theta=np.pi / 2):
    """Normalized even superposition of two equatorial coherent states."""
    v = coherent_spin_state(space, theta, phi_a) + coherent_spin_state(space, theta, phi_b)
    return v / np.linalg.norm(v)


def transmission(omega, g, N, kappa, Gamma, omega_c=0.0, omega_a=0.0):
    """Weak-probe intensity transmission of the cavity with N collectively coupled atoms."""
    w = np.asarray(omega, dtype=float)
    atom = N * g * g / (1j * (omega_a - w) + Gamma / 2)
    amp = (kappa / 2) / (1j * (omega_c - w) + kappa / 2 + atom)
    return np.abs(amp) ** 2


@dataclass
class RabiSpectrum:
    omega: np.ndarray
    T: np.ndarray
    peaks: np.ndarray
    splitting: float


def vacuum_rabi_spectrum(g, N, kappa, Gamma, omega=None, omega_c=0.0, omega_a=0.0):
    """Transmission spectrum and refined peak positions.

    Peaks are grid local maxima refined by golden section on the closed form;
    the splitting is the separation of the two strongest peaks (0 for a
    single peak).
    """
    gN = g * np.sqrt(N)
    if omega is None:
        span = 3 * max(gN, kappa, Gamma)
        omega = np.linspace(-span, span, 6001) + omega_c
    omega = np.asarray(omega, dtype=float)
    T = transmission(omega, g, N, kappa, Gamma, omega_c, omega_a)
    idx = [i for i in range(1, len(T) - 1) if T[i] >= T[i - 1] and T[i] > T[i + 1]]
    peaks = []
    for i in idx:
        x, negT = golden_section(lambda w: -transmission(w, g, N, kappa, Gamma, omega_c, omega_a),
                                 omega[i - 1], omega[i + 1], rtol=1e-12, atol=1e-15)
        peaks.append((x, -negT))
    peaks.sort(key=lambda p: -p[1])
    top = sorted(p[0] for p in peaks[:2])
    splitting = float(top[1] - top[0]) if len(top) == 2 else 0.0
    return RabiSpectrum(omega, T, np.array(top), splitting)


def painting_phase_scale(eta, N):
    """Single-photon phase scale sqrt(eta / N) at the optimal detuning (no prefactor)."""
    return np.sqrt(eta / N)
