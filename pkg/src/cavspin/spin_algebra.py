"""Collective spin-S algebra in the Dicke basis.

Basis ordering is ``|S, m>`` with ``m = S, S-1, ..., -S`` so the north-pole state
is the first basis vector.  Operators are dense ``ndarray`` up to
``DENSE_MAX`` and ``scipy.sparse`` CSR beyond.

States are plain arrays: a 1-D complex vector is a pure state and a 2-D
array is a density matrix.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from ._numerics import ALG_TOL, POS_TOL, grid_then_golden

DENSE_MAX = 512


@dataclass(frozen=True)
class SpinSpace:
    S: float

    @property
    def dim(self) -> int:
        return int(round(2 * self.S)) + 1

    @property
    def N(self) -> int:
        """Number of spin-1/2 constituents of the maximal-spin sector."""
        return int(round(2 * self.S))

    def m_values(self) -> np.ndarray:
        return self.S - np.arange(self.dim)


@dataclass(frozen=True)
class FockSpace:
    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"Fock cutoff must be an integer >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class CompositeSpace:
    """Tensor product of factors; the leftmost factor is the slowest index."""

    factors: tuple

    @property
    def dim(self) -> int:
        return int(np.prod([f.dim for f in self.factors]))

    def embed(self, op, index: int):
        """Lift an operator on factor ``index`` to the full space."""
        out = None
        for k, f in enumerate(self.factors):
            piece = sp.csr_array(op) if k == index else sp.identity(f.dim, format="csr")
            out = piece if out is None else sp.kron(out, piece, format="csr")
        return as_operator(out)


def make_spin_space(S) -> SpinSpace:
    twoS = 2 * S
    if S < 0 or abs(twoS - round(twoS)) > 1e-12:
        raise ValueError(f"spin length must be a non-negative half-integer, got {S}")
    return SpinSpace(round(twoS) / 2)


def as_operator(mat, sparse=None):
    """Return ``mat`` dense when small, CSR when large (or as forced)."""
    n = mat.shape[0]
    if sparse is None:
        sparse = n > DENSE_MAX
    if sparse:
        return sp.csr_array(mat)
    if sp.issparse(mat):
        return mat.toarray()
    return np.asarray(mat)


class SpinOps(NamedTuple):
    x: object
    y: object
    z: object
    plus: object
    minus: object


def spin_operators(space: SpinSpace, sparse=None) -> SpinOps:
    S = space.S
    m = space.m_values()
    # S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>; |m+1> sits one index up
    up = np.sqrt(np.maximum(S * (S + 1) - m[1:] * (m[1:] + 1), 0.0))
    plus = sp.diags(up.astype(complex), 1, shape=(space.dim, space.dim), format="csr")
    minus = plus.conj().T.tocsr()
    z = sp.diags(m.astype(complex), 0, format="csr")
    x = (plus + minus) / 2
    y = (plus - minus) / 2j
    return SpinOps(*(as_operator(o, sparse) for o in (x, y, z, plus, minus)))


def fock_annihilation(space: FockSpace, sparse=None):
    n = np.arange(1, space.dim)
    a = sp.diags(np.sqrt(n).astype(complex), 1, shape=(space.dim, space.dim), format="csr")
    return as_operator(a, sparse)


def spin_of_dim(dim: int) -> SpinSpace:
    return make_spin_space((dim - 1) / 2)


def coherent_spin_state(space: SpinSpace, theta, phi=0.0) -> np.ndarray:
    """exp(-i phi Sz) exp(-i theta Sy) |S, S>, built from the Wigner d-matrix column."""
    S, m = space.S, space.m_values()
    k = S - m  # number of flipped constituents
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    logbinom = gammaln(2 * S + 1) - gammaln(k + 1) - gammaln(2 * S - k + 1)
    with np.errstate(divide="ignore"):
        mag = np.exp(0.5 * logbinom) * np.sign(c) ** (S + m) * np.abs(c) ** (S + m) * s**k
    psi = mag.astype(complex) * np.exp(-1j * phi * m)
    return psi / np.linalg.norm(psi)


def dicke_state(space: SpinSpace, m) -> np.ndarray:
    if abs(m) > space.S + 1e-12 or abs((space.S - m) - round(space.S - m)) > 1e-12:
        raise ValueError(f"m={m} is not a valid projection for S={space.S}")
    psi = np.zeros(space.dim, dtype=complex)
    psi[int(round(space.S - m))] = 1.0
    return psi


def _axis_vector(axis):
    if isinstance(axis, str):
        try:
            return np.eye(3)[{"x": 0, "y": 1, "z": 2}[axis]]
        except KeyError:
            raise ValueError(f"unknown axis {axis!r}") from None
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > ALG_TOL:
        raise ValueError("rotation axis must be a unit 3-vector")
    return n


def rotation_operator(space: SpinSpace, axis, angle) -> np.ndarray:
    """exp(-i angle n.S) as a dense matrix."""
    n = _axis_vector(axis)
    ops = spin_operators(space, sparse=False)
    if n[0] == 0 and n[1] == 0:
        return np.diag(np.exp(-1j * angle * n[2] * space.m_values()))
    gen = n[0] * ops.x + n[1] * ops.y + n[2] * ops.z
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def rotate(state, axis, angle):
    """Rotate a collective-spin state by ``angle`` about ``axis``."""
    state = np.asarray(state)
    U = rotation_operator(spin_of_dim(state.shape[0]), axis, angle)
    if state.ndim == 1:
        return U @ state
    return U @ state @ U.conj().T


def expect(op, state):
    state = np.asarray(state)
    if state.ndim == 1:
        return np.vdot(state, op @ state)
    if sp.issparse(op):
        return (op @ state).trace()
    return np.einsum("ij,ji->", op, state)


def check_state(state, tol=ALG_TOL):
    """Raise ``ValueError`` if ``state`` violates the normalization/positivity contract."""
    state = np.asarray(state)
    if state.ndim == 1:
        if abs(np.linalg.norm(state) - 1) > tol:
            raise ValueError("pure state is not normalized")
        return
    if abs(np.trace(state) - 1) > tol:
        raise ValueError("density matrix trace differs from 1")
    if np.max(np.abs(state - state.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if np.linalg.eigvalsh((state + state.conj().T) / 2).min() < -POS_TOL:
        raise ValueError("density matrix has negative eigenvalues")


class Moments(NamedTuple):
    expectations: np.ndarray
    variances: np.ndarray
    covariances: np.ndarray


def moments(state, ops) -> Moments:
    """Means and symmetrized covariances ``(<AB + BA>/2 - <A><B>)`` of ``ops``."""
    state = np.asarray(state)
    for op in ops:
        if op.shape[0] != state.shape[0]:
            raise ValueError("operator and state dimensions differ")
    mean = np.array([expect(o, state) for o in ops])
    k = len(ops)
    cov = np.empty((k, k), dtype=complex)
    if state.ndim == 1:
        applied = [o @ state for o in ops]
        for i in range(k):
            for j in range(i, k):
                sym = np.vdot(applied[i], applied[j]).real  # Re<A B> = <{A,B}>/2 for Hermitian A,B
                if not _is_hermitian(ops[i]) or not _is_hermitian(ops[j]):
                    sym = (np.vdot(ops[i].conj().T @ state, applied[j])
                           + np.vdot(ops[j].conj().T @ state, applied[i])) / 2
                cov[i, j] = cov[j, i] = sym - mean[i] * mean[j]
    else:
        for i in range(k):
            for j in range(i, k):
                prod = ops[i] @ ops[j]
                sym = (expect(prod, state) + expect(ops[j] @ ops[i], state)) / 2
                cov[i, j] = cov[j, i] = sym - mean[i] * mean[j]
    if all(_is_hermitian(o) for o in ops):
        mean, cov = mean.real, cov.real
    return Moments(mean, np.diag(cov).copy(), cov)


def _is_hermitian(op):
    diff = op - op.conj().T
    m = abs(diff).max() if sp.issparse(diff) else np.max(np.abs(diff))
    return m < ALG_TOL


def spin_moments(state):
    """Mean spin vector and 3x3 symmetrized covariance of (Sx, Sy, Sz)."""
    state = np.asarray(state)
    ops = spin_operators(spin_of_dim(state.shape[0]))
    mo = moments(state, [ops.x, ops.y, ops.z])
    return mo.expectations, mo.covariances


def perpendicular_frame(mean_spin):
    """Orthonormal pair ``(e1, e2)`` spanning the plane orthogonal to ``mean_spin``."""
    n = np.asarray(mean_spin, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise ValueError("mean spin vanishes; the transverse frame is undefined")
    n = n / norm
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, n)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1, e2


class Ellipse(NamedTuple):
    theta: np.ndarray
    V: np.ndarray
    V_min: float
    V_max: float
    theta_min: float
    frame: tuple
    mean_spin: np.ndarray


def squeezing_ellipse(state, n_grid=181, mean_tol=1e-12) -> Ellipse:
    """Variance of the transverse spin component as a function of angle.

    ``V(theta) = Var(cos(theta) S_perp1 + sin(theta) S_perp2)`` in the plane
    orthogonal to the mean spin.  The minimum found on the grid is refined by
    golden-section search.
    """
    mean, cov = spin_moments(state)
    if np.linalg.norm(mean) <= mean_tol:
        raise ValueError("mean spin vanishes; the transverse frame is undefined")
    e1, e2 = perpendicular_frame(mean)
    E = np.stack([e1, e2])
    C = E @ cov @ E.T

    def V(t):
        c, s = np.cos(t), np.sin(t)
        return c * c * C[0, 0] + s * s * C[1, 1] + 2 * c * s * C[0, 1]

    theta = np.linspace(0, np.pi, n_grid)
    Vt = V(theta)
    t_min, v_min = grid_then_golden(V, theta)
    t_max, neg_vmax = grid_then_golden(lambda t: -V(t), theta)
    return Ellipse(theta, Vt, float(v_min), float(-neg_vmax), float(t_min % np.pi), (e1, e2), mean)
