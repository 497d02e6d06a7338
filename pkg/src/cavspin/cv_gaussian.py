"""Gaussian continuous-variable states of M bosonic modes.

Quadratures are ordered ``(x_1..x_M, p_1..p_M)`` with ``[x, p] = i`` so the
vacuum has ``Var(x) = Var(p) = 1/2``.
"""

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._numerics import POS_TOL


def symplectic_form(M):
    I, Z = np.eye(M), np.zeros((M, M))
    return np.block([[Z, I], [-I, Z]])


@dataclass
class CovarianceState:
    mean: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        n = self.sigma.shape[0]
        if self.sigma.shape != (n, n) or n % 2 or self.mean.shape != (n,):
            raise ValueError("covariance must be 2M x 2M with a 2M mean vector")
        if np.max(np.abs(self.sigma - self.sigma.T)) > 1e-12:
            raise ValueError("covariance matrix is not symmetric")

    @property
    def M(self):
        return self.sigma.shape[0] // 2

    def physicality(self):
        """Smallest eigenvalue of Sigma + i Omega / 2 (>= 0 for a physical state)."""
        return float(np.linalg.eigvalsh(self.sigma + 0.5j * symplectic_form(self.M)).min())

    def transformed(self, S):
        sig = S @ self.sigma @ S.T
        return CovarianceState(S @ self.mean, (sig + sig.T) / 2)


def vacuum_state(M) -> CovarianceState:
    if M < 1:
        raise ValueError("need at least one mode")
    return CovarianceState(np.zeros(2 * M), np.eye(2 * M) / 2)


def symplectic_eigenvalues(sigma):
    M = sigma.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(M) @ sigma))
    return np.sort(ev)[::2]


def collective_squeezer(M, v, phi, r):
    """Symplectic matrix squeezing cos(phi) X_v + sin(phi) P_v by exp(-r).

    X_v = v.x and P_v = v.p for a real unit vector v; the orthogonal
    quadrature is stretched by exp(r) and all modes orthogonal to v are
    untouched.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (M,) or abs(np.linalg.norm(v) - 1) > 1e-10:
        raise ValueError("mode vector must be a real unit vector of length M")
    c, s = np.cos(phi), np.sin(phi)
    R = np.array([[c, s], [-s, c]])
    S1 = R.T @ np.diag([np.exp(-r), np.exp(r)]) @ R
    return np.eye(2 * M) + np.kron(S1 - np.eye(2), np.outer(v, v))


def squeeze_collective_mode(state: CovarianceState, v, phi, r) -> CovarianceState:
    return state.transformed(collective_squeezer(state.M, v, phi, r))


def local_rotation(M, sites, theta):
    """Phase-space rotation (x, p) -> (x cos + p sin, -x sin + p cos) on ``sites``."""
    S = np.eye(2 * M)
    c, s = np.cos(theta), np.sin(theta)
    for j in np.atleast_1d(sites):
        if not 0 <= j < M:
            raise ValueError(f"site {j} out of range")
        S[j, j], S[j, M + j], S[M + j, j], S[M + j, M + j] = c, s, -s, c
    return S


def local_ops(state: CovarianceState, sites, op="flip", theta=None) -> CovarianceState:
    """``op="rotate"`` with angle ``theta`` or ``op="flip"`` (theta = pi)."""
    if op == "flip":
        theta = np.pi
    elif op != "rotate" or theta is None:
        raise ValueError("op must be 'flip' or 'rotate' with an angle")
    return state.transformed(local_rotation(state.M, sites, theta))


class Prescription(NamedTuple):
    modes: np.ndarray      # columns are orthonormal mode vectors
    eigenvalues: np.ndarray
    angles: np.ndarray     # arctan(lambda)


def prescription_from_adjacency(A) -> Prescription:
    """Adjacency eigenmodes and the quadrature angles phi_mu = arctan(lambda_mu)."""
    A = np.asarray(A, dtype=float)
    if A.shape[0] != A.shape[1] or np.max(np.abs(A - A.T), initial=0) > 1e-12:
        raise ValueError("adjacency matrix must be square and symmetric")
    if np.max(np.abs(np.diag(A)), initial=0) > 1e-12:
        raise ValueError("adjacency matrix must have zero diagonal")
    lam, V = np.linalg.eigh(A)
    return Prescription(V, lam, np.arctan(lam))


def prepare_graph_state(A, r, prescription: Prescription = None) -> CovarianceState:
    """Squeeze every adjacency eigenmode by r in its nullifier quadrature.

    Mode mu is squeezed along ``P_mu - lambda_mu X_mu``, i.e. at quadrature
    angle ``phi_mu + pi/2`` in the ``cos X + sin P`` parametrization, so the
    graph nullifiers ``p_i - sum_j A_ij x_j`` shrink as exp(-r).
    """
    if r < 0:
        raise ValueError("squeezing strength must be non-negative")
    pres = prescription or prescription_from_adjacency(A)
    M = pres.modes.shape[0]
    state = vacuum_state(M)
    for mu in range(M):
        state = squeeze_collective_mode(state, pres.modes[:, mu], pres.angles[mu] + np.pi / 2, r)
    return state


def nullifier_variances(state: CovarianceState, A) -> np.ndarray:
    """Var(p_i - sum_j A_ij x_j) for every site i."""
    A = np.asarray(A, dtype=float)
    M = state.M
    if A.shape != (M, M):
        raise ValueError("adjacency and state sizes differ")
    W = np.hstack([-A, np.eye(M)])  # row i picks p_i - sum_j A_ij x_j
    return np.einsum("ia,ab,ib->i", W, state.sigma, W)


class EPR(NamedTuple):
    V_sum: float
    entangled: bool


def epr_criterion(state: CovarianceState, i, j) -> EPR:
    """Var(x_i - x_j) + Var(p_i + p_j); below 2 (two vacuum units) certifies entanglement."""
    if i == j:
        raise ValueError("need two distinct sites")
    M = state.M
    u = np.zeros(2 * M)
    u[i], u[j] = 1, -1
    w = np.zeros(2 * M)
    w[M + i], w[M + j] = 1, 1
    V = float(u @ state.sigma @ u + w @ state.sigma @ w)
    return EPR(V, V < 2.0)


def reduced_covariance(state: CovarianceState, subset):
    idx = np.asarray(subset, dtype=int)
    full = np.concatenate([idx, idx + state.M])
    return state.sigma[np.ix_(full, full)]


def _entropy_from_nu(nu):
    nu = np.maximum(np.asarray(nu, dtype=float), 0.5)
    a, b = nu + 0.5, nu - 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        tb = np.where(b > 0, b * np.log(np.where(b > 0, b, 1.0)), 0.0)
    return float(np.sum(a * np.log(a) - tb))


def entanglement_entropy(state: CovarianceState, subset, purity_tol=1e-6) -> float:
    """Von Neumann entropy (nats) of the modes in ``subset`` for a pure global state."""
    nu_all = symplectic_eigenvalues(state.sigma)
    if np.max(np.abs(nu_all - 0.5)) > purity_tol:
        raise ValueError("global state is mixed; subsystem entropy is not an entanglement measure")
    if len(subset) == 0:
        return 0.0
    return _entropy_from_nu(symplectic_eigenvalues(reduced_covariance(state, subset)))


def is_physical(state: CovarianceState, tol=POS_TOL):
    return state.physicality() >= -tol


def quadrature_labels(M):
    return [f"x{k}" for k in range(M)] + [f"p{k}" for k in range(M)]


def covariance_to_csv(state: CovarianceState) -> str:
    labels = quadrature_labels(state.M)
    lines = ["row,col,value"]
    for a, la in enumerate(labels):
        for b, lb in enumerate(labels):
            lines.append(f"{la},{lb},{state.sigma[a, b]:.12g}")
    return "\n".join(lines) + "\n"


def covariance_to_json(state: CovarianceState) -> str:
    return json.dumps({"ordering": quadrature_labels(state.M), "mean": state.mean.tolist(),
                       "sigma": state.sigma.tolist()}, sort_keys=True)


def covariance_from_json(text) -> CovarianceState:
    d = json.loads(text)
    return CovarianceState(d["mean"], d["sigma"])
