"""Closed-form cavity figures of merit and coherence limits.

Rates are angular frequencies (s^-1 when SI inputs are used); the returned
dimensionless quantities (eta, d, Q, phase shifts, xi^2) are invariant under a
common rescaling of all rates.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._numerics import golden_section, grid_then_golden, loglog_slope

C_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class CavityGeometry:
    finesse: float
    waist: float
    wavelength: float
    length: float = None

    def __post_init__(self):
        for name in ("finesse", "waist", "wavelength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.length is not None and not self.length > 0:
            raise ValueError("length must be positive")
        if self.wavelength >= self.waist:
            raise ValueError("waist must exceed the wavelength (paraxial mode)")


def cooperativity_geometric(geom: CavityGeometry) -> float:
    """eta = 24 F / (pi k^2 w0^2) with k = 2 pi / lambda."""
    k = 2 * np.pi / geom.wavelength
    return 24 * geom.finesse / (np.pi * k**2 * geom.waist**2)


class CavityRates(NamedTuple):
    kappa: float
    g: float
    eta: float


def rates_from_geometry(geom: CavityGeometry, Gamma) -> CavityRates:
    """Energy decay rate kappa = pi c / (F L) and the coupling g implied by eta.

    ``Gamma`` is the atomic linewidth (angular units).
    """
    if geom.length is None:
        raise ValueError("cavity length is required to derive rates")
    eta = cooperativity_geometric(geom)
    kappa = np.pi * C_LIGHT / (geom.finesse * geom.length)
    g = np.sqrt(eta * kappa * Gamma) / 2
    return CavityRates(kappa, g, eta)


@dataclass
class CavityBudget:
    """Parameter bundle with derived rates.  Unset fields stay ``None``."""

    g: float = None
    kappa: float = None
    Gamma: float = None
    Delta: float = None
    delta: float = None
    eta: float = None
    n_bar: float = None
    N: int = None

    def __post_init__(self):
        for name in ("g", "kappa", "Gamma", "eta", "n_bar", "N"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.g is not None and self.kappa and self.Gamma:
            eta = 4 * self.g**2 / (self.kappa * self.Gamma)
            if self.eta is not None and abs(self.eta - eta) > 1e-12 * max(1.0, eta):
                raise ValueError("eta is inconsistent with 4 g^2 / (kappa Gamma)")
            self.eta = eta

    @property
    def Gamma_cav(self):
        return 4 * self.g**2 / self.kappa

    @property
    def kappa_tilde(self):
        return self.kappa + (self.g / self.Delta) ** 2 * self.Gamma

    @property
    def d(self):
        return 2 * self.delta / self.kappa


class PhaseCeiling(NamedTuple):
    phi_max: float
    Delta_opt: float
    phi_max_scan: float
    Delta_opt_scan: float


def single_photon_phase(Delta, eta, n_bar, kappa=1.0, Gamma=1.0):
    """2 g^2 / (Delta n kappa_tilde), the loss-limited single-photon phase shift."""
    g2 = eta * kappa * Gamma / 4
    kt = kappa + g2 / np.asarray(Delta, dtype=float) ** 2 * Gamma
    return 2 * g2 / (np.asarray(Delta, dtype=float) * n_bar * kt)


def phase_shift_ceiling(eta, n_bar, kappa=1.0, Gamma=1.0, n_grid=4001) -> PhaseCeiling:
    """Largest single-photon phase compatible with losing < 1 of n_bar photons.

    The closed-form optimum is compared against a log-spaced detuning scan
    refined by golden section.
    """
    if min(eta, n_bar, kappa, Gamma) <= 0:
        raise ValueError("eta, n_bar, kappa and Gamma must be positive")
    g = np.sqrt(eta * kappa * Gamma) / 2
    Delta_opt = g * np.sqrt(Gamma / kappa)
    phi_max = np.sqrt(eta) / (2 * n_bar)

    grid = np.linspace(np.log(Delta_opt) - 6, np.log(Delta_opt) + 6, n_grid)
    x, neg = grid_then_golden(lambda u: -single_photon_phase(np.exp(u), eta, n_bar, kappa, Gamma),
                              grid, rtol=1e-10)
    return PhaseCeiling(phi_max, Delta_opt, -neg, float(np.exp(x)))


class IsingBudget(NamedTuple):
    J: float
    gamma: float
    Gamma_sc: float
    ratio: float
    d: float
    delta_opt: float
    ratio_opt: float
    ratio_opt_analytic: float


def _ising_ratio(d, eta):
    # J / (gamma + Gamma_sc) with J/Gamma_sc = eta d/(1+d^2) and gamma/J = 2/d
    return 1.0 / (2.0 / d + (1 + d * d) / (eta * d))


def ising_budget(n0, omega1, kappa, delta, eta, Gamma_sc=None) -> IsingBudget:
    """Interaction and decoherence rates of the driven-cavity Ising coupling.

    ``J = (4 n0 Omega1^2 / kappa) d / (1 + d^2)``, collective dephasing
    ``gamma = J kappa / delta`` and free-space scattering
    ``Gamma_sc = 4 n0 Omega1^2 / (eta kappa)`` (the value for which
    ``J -> eta Gamma_sc kappa / (2 delta)`` at large detuning).  The optimum
    detuning is located by a scan over ``d`` at fixed ``n0, Omega1``.
    """
    if kappa <= 0 or delta <= 0 or eta <= 0:
        raise ValueError("kappa, delta and eta must be positive")
    d = 2 * delta / kappa
    J = 4 * n0 * omega1**2 / kappa * d / (1 + d * d)
    gamma = J * kappa / delta
    if Gamma_sc is None:
        Gamma_sc = 4 * n0 * omega1**2 / (eta * kappa)
    ratio = J / (gamma + Gamma_sc)

    grid = np.linspace(-4.0, np.log(1e4 * np.sqrt(eta) + 10), 801)
    u, neg = grid_then_golden(lambda u: -_ising_ratio(np.exp(u), eta), grid, rtol=1e-10)
    d_opt = float(np.exp(u))
    analytic = eta / (2 * np.sqrt(2 * eta + 1))
    return IsingBudget(J, gamma, Gamma_sc, ratio, d, kappa * d_opt / 2, -neg, analytic)


class TwistingEllipse(NamedTuple):
    sigma2_sq: float
    sigma2_anti: float
    tilt: float


def twisting_geometry(Q, d) -> TwistingEllipse:
    """Gaussian ellipse of a twisted, dephased coherent spin state (CSS = 1).

    Linearizing around the mean spin, twisting shears the (z, y) plane by Q
    and collective dephasing adds 2Q/d to Var(y), so the normalized
    covariance is ``[[1, Q], [Q, 1 + Q^2 + 2Q/d]]``.  Returns its
    eigenvalues and the angle of the squeezed axis from z.  At large Q the
    squeezed variance behaves as ``1/Q^2 + 2/(Q d)``.
    """
    if Q < 0 or d <= 0:
        raise ValueError("need Q >= 0 and d > 0")
    extra = 0.0 if np.isinf(d) else 2 * Q / d
    a, b, c = 1.0, Q, 1.0 + Q * Q + extra
    half_tr, det = (a + c) / 2, a * c - b * b
    root = np.hypot((c - a) / 2, b)
    anti = half_tr + root
    sq = det / anti  # avoids cancellation in half_tr - root
    tilt = 0.5 * np.arctan2(2 * b, c - a)
    return TwistingEllipse(float(sq), float(anti), float(tilt))


class SqueezingLimit(NamedTuple):
    xi2_opt: float
    t_opt: float          # in units of 1/Gamma_sc
    exponent: float       # d log xi2_opt / d log(N eta) over a decade
    d_opt: float          # twisting mode only


def _measurement_xi2(tau, X, r, c):
    return (c / (X * tau) + r * tau) * np.exp(2 * tau)


def _twisting_xi2(tau, d, X, r):
    Q = X * tau * d / (1 + d * d)
    return (twisting_geometry(Q, d).sigma2_sq + r * tau) * np.exp(2 * tau)


def _optimize_tau(f, X):
    # optimum sits between ~1/X (noise floor) and ~1 (contrast loss)
    grid = np.linspace(np.log(1e-3 / X), np.log(10.0), 400)
    u, val = grid_then_golden(lambda u: f(np.exp(u)), grid, rtol=1e-9)
    return float(np.exp(u)), float(val)


def _limit_at(X, r, mode, c):
    if mode == "measurement":
        tau, xi2 = _optimize_tau(lambda t: _measurement_xi2(t, X, r, c), X)
        return xi2, tau, np.nan

    def best_over_tau(ud):
        return _optimize_tau(lambda t: c * _twisting_xi2(t, np.exp(ud), X, r), X)

    ud, _ = golden_section(lambda ud: best_over_tau(ud)[1], np.log(1e-2), np.log(10 * np.sqrt(X) + 10), rtol=1e-8)
    tau, xi2 = best_over_tau(ud)
    return xi2, tau, float(np.exp(ud))


def squeezing_limits(N, eta, r=0.0, mode="measurement", cycling=False, c=1.0) -> SqueezingLimit:
    """Optimal squeezing allowed by the collective cooperativity N eta.

    ``measurement``: ``xi^2(t) = [c/(N eta Gamma_sc t) + r Gamma_sc t] exp(2 Gamma_sc t)``.
    ``twisting``: the same contrast and Raman factors applied to the
    twisting ellipse with ``Q = N eta Gamma_sc t d/(1+d^2)``, optimized over d too.
    ``cycling=True`` means no Raman branch (r forced to 0).
    """
    if N <= 0 or eta <= 0 or r < 0:
        raise ValueError("need N, eta > 0 and r >= 0")
    if mode not in ("measurement", "twisting"):
        raise ValueError(f"unknown mode {mode!r}")
    r_eff = 0.0 if cycling else float(r)
    X = N * eta
    xi2, tau, d_opt = _limit_at(X, r_eff, mode, c)
    Xs = X * np.array([10**-0.5, 10**0.5])
    vals = [_limit_at(x, r_eff, mode, c)[0] for x in Xs]
    return SqueezingLimit(xi2, tau, loglog_slope(Xs, vals), d_opt)


def squeezing_exponent(X_values, r=0.0, mode="measurement", c=1.0):
    """Fitted log-log slope of xi^2_opt against N eta over ``X_values``."""
    X_values = np.asarray(X_values, dtype=float)
    vals = [_limit_at(x, r, mode, c)[0] for x in X_values]
    return loglog_slope(X_values, vals), np.array(vals)
