"""Programmable coupling graphs, Gaussian quenches and correlation geometry.

Couplings are stored as signed matrices exactly as supplied: a positive
table entry marks a ferromagnetic bond in the coupling-table convention
used by the drive-tone maps, and builders never flip signs.
"""

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

SYM_TOL = 1e-12


@dataclass(frozen=True)
class Tone:
    r: int
    amp: float
    phase: float = 0.0


@dataclass
class ModulationSpectrum:
    omega_B: float
    tones: list = field(default_factory=list)

    def __post_init__(self):
        if not self.omega_B > 0:
            raise ValueError("field-gradient frequency omega_B must be positive")
        rs = [t.r for t in self.tones]
        if len(rs) != len(set(rs)):
            raise ValueError("duplicate tone distances")
        for t in self.tones:
            if int(t.r) != t.r or t.r < 1 or t.amp < 0:
                raise ValueError(f"invalid tone {t}")

    def to_json(self) -> str:
        return json.dumps({"omega_B": self.omega_B,
                           "tones": [{"r": t.r, "amp": t.amp, "phase": t.phase} for t in self.tones]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["omega_B"], [Tone(int(t["r"]), t["amp"], t["phase"]) for t in d["tones"]])


@dataclass
class CouplingMatrix:
    J: np.ndarray
    boundary: str = "open"
    rwa_ok: bool = True

    def __post_init__(self):
        self.J = np.asarray(self.J)
        check_coupling(self.J)
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def M(self):
        return self.J.shape[0]


def check_coupling(J):
    J = np.asarray(J)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise ValueError("coupling matrix must be square")
    if np.max(np.abs(J - J.conj().T), initial=0.0) > SYM_TOL:
        raise ValueError("coupling matrix must be symmetric / Hermitian")
    if np.max(np.abs(np.diag(J)), initial=0.0) > SYM_TOL:
        raise ValueError("coupling matrix must have zero diagonal")


def site_distance(M, boundary):
    i = np.arange(M)
    d = np.abs(i[:, None] - i[None, :])
    if boundary == "periodic":
        d = np.minimum(d, M - d)
    elif boundary != "open":
        raise ValueError(f"unknown boundary {boundary!r}")
    return d


def _table_matrix(table, M, boundary, complex_ok=False):
    dist = site_distance(M, boundary)
    J = np.zeros((M, M), dtype=complex)
    for r, val in table.items():
        J[dist == r] = val
    np.fill_diagonal(J, 0)
    return J if complex_ok else J.real


def spectrum_to_couplings(spec: ModulationSpectrum, M, boundary="open") -> CouplingMatrix:
    """J_ij = Re[A_r exp(i phi_r)] for |i - j| = r, zero elsewhere."""
    limit = M - 1 if boundary == "open" else M // 2
    for t in spec.tones:
        if t.r > limit:
            raise ValueError(f"tone distance {t.r} does not fit a {boundary} chain of {M} sites")
    table = {t.r: t.amp * np.exp(1j * t.phase) for t in spec.tones}
    J = _table_matrix(table, M, boundary)
    rwa = all(t.amp <= spec.omega_B / 10 for t in spec.tones)
    return CouplingMatrix(J, boundary, rwa)


def couplings_to_spectrum(table, omega_B) -> ModulationSpectrum:
    """One tone per non-zero distance; the sign (or complex phase) goes into the tone phase."""
    tones = []
    for r in sorted(table):
        v = complex(table[r])
        if v == 0:
            continue
        phase = float(np.angle(v)) % (2 * np.pi)
        tones.append(Tone(int(r), abs(v), phase))
    return ModulationSpectrum(omega_B, tones)


def coupling_table(cm: CouplingMatrix):
    """Recover J(r) from a translation-invariant coupling matrix (first row)."""
    row = cm.J[0]
    limit = cm.M - 1 if cm.boundary == "open" else cm.M // 2
    return {r: row[r].item() for r in range(1, limit + 1) if row[r] != 0}


def builder_mobius(M=18, J_rail=1.0, J_rung=-1.0) -> CouplingMatrix:
    """Ring of M sites (rails) with chords across the diameter (rungs)."""
    if M % 2 or M < 4:
        raise ValueError("Mobius ladder needs an even number of sites >= 4")
    return CouplingMatrix(_table_matrix({1: J_rail, M // 2: J_rung}, M, "periodic"), "periodic")


def mobius_tone_distances(M=18):
    """Open-chain distances whose tones build the ladder: rails, rungs, closing bond."""
    return (1, M // 2, M - 1)


def builder_tree(s, M, boundary="open") -> CouplingMatrix:
    """J_ij = |i - j|^s whenever |i - j| is a power of two."""
    if M < 2:
        raise ValueError("need at least two sites")
    dist = site_distance(M, boundary)
    pow2 = (dist > 0) & ((dist & (dist - 1)) == 0)
    J = np.where(pow2, np.where(dist > 0, dist, 1).astype(float) ** s, 0.0)
    return CouplingMatrix(J, boundary)


class SeparableCoupling(NamedTuple):
    coupling: CouplingMatrix
    rank: int
    singular_values: np.ndarray


def builder_separable(profiles) -> SeparableCoupling:
    """J_ij = Re sum_mu conj(G_mu,i) G_mu,j with the diagonal removed.

    The reported rank is that of the full (diagonal-included) sum, i.e. the
    number of independent mode profiles.
    """
    G = np.atleast_2d(np.asarray(profiles))
    full = np.real(G.conj().T @ G)
    sv = np.linalg.svd(full, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * sv.max())) if sv.size and sv.max() > 0 else 0
    J = full.copy()
    np.fill_diagonal(J, 0.0)
    return SeparableCoupling(CouplingMatrix(J), rank, sv)


def builder_sachdev_ye(M, variance=1.0, seed=0) -> CouplingMatrix:
    """Random all-to-all couplings, i<j entries drawn from N(0, variance) / sqrt(M)."""
    if M < 2:
        raise ValueError("need at least two sites")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(M, 1)
    J = np.zeros((M, M))
    J[iu] = rng.normal(0.0, np.sqrt(variance), size=iu[0].size) / np.sqrt(M)
    return CouplingMatrix(J + J.T)


def magnon_dispersion(table, M, boundary="periodic"):
    """E(k) = sum_r 2 J(r) cos(k r) on k = 2 pi n / M."""
    if boundary != "periodic":
        raise ValueError("the magnon dispersion needs a periodic chain")
    k = 2 * np.pi * np.arange(M) / M
    E = np.zeros(M, dtype=complex if any(np.iscomplexobj(v) for v in table.values()) else float)
    for r, val in table.items():
        E = E + 2 * val * np.cos(k * r)
    return k, E


# ---------------------------------------------------------------- Gaussian quench


def symplectic_form(M):
    I = np.eye(M)
    Z = np.zeros((M, M))
    return np.block([[Z, I], [-I, Z]])


@dataclass
class QuenchTrack:
    times: np.ndarray
    sigma: np.ndarray        # (T, 2M, 2M)
    C_xx: np.ndarray         # (T, M, M)
    S: np.ndarray            # (T, 2M, 2M) symplectic propagators
    unstable: bool
    growth_rate: float       # largest real part of the generator spectrum
    mode_rates: np.ndarray   # sqrt(max(0, -q(q + 2 lambda))) per eigenvalue of J
    symplectic_error: float


def gaussian_quench(J, q, times) -> QuenchTrack:
    """Covariance evolution under (q/2) sum (x^2 + p^2) + sum_ij J_ij x_i x_j from vacuum."""
    J = np.asarray(J.J if isinstance(J, CouplingMatrix) else J, dtype=float)
    M = J.shape[0]
    if J.shape != (M, M) or np.max(np.abs(J - J.T), initial=0.0) > SYM_TOL:
        raise ValueError("coupling matrix must be real symmetric")
    Hq = np.block([[q * np.eye(M) + 2 * J, np.zeros((M, M))], [np.zeros((M, M)), q * np.eye(M)]])
    Om = symplectic_form(M)
    A = Om @ Hq
    lam = np.linalg.eigvalsh(J)
    disc = q * (q + 2 * lam)
    sig0 = np.eye(2 * M) / 2
    Ss, sigmas = [], []
    err = 0.0
    for t in np.asarray(times, dtype=float):
        S = sla.expm(A * t)
        Ss.append(S)
        sig = S @ sig0 @ S.T
        sigmas.append((sig + sig.T) / 2)
        err = max(err, np.max(np.abs(S @ Om @ S.T - Om)))
    sigmas = np.array(sigmas)
    return QuenchTrack(np.asarray(times, dtype=float), sigmas, sigmas[:, :M, :M].copy(), np.array(Ss),
                       bool(np.any(disc < 0)), float(np.max(np.linalg.eigvals(A).real)),
                       np.sqrt(np.maximum(-disc, 0.0)), float(err))


# ---------------------------------------------------------------- geometry


class Geometry(NamedTuple):
    D: np.ndarray
    embedding: np.ndarray
    eigenvalues: np.ndarray   # top three, clipped at zero
    stress: float


def corr_to_geometry(C, dim=3) -> Geometry:
    """Distances from |C| = C0 exp(-d^2) and a classical-MDS embedding in ``dim`` dimensions."""
    C = np.asarray(C, dtype=float)
    M = C.shape[0]
    off = ~np.eye(M, dtype=bool)
    C0 = np.max(np.abs(C[off])) if M > 1 else 0.0
    if C0 == 0:
        raise ValueError("correlation matrix has no off-diagonal weight")
    with np.errstate(divide="ignore"):
        d2 = -np.log(np.abs(C) / C0)
    d2 = np.where(np.isfinite(d2), d2, np.nanmax(np.where(np.isfinite(d2), d2, np.nan)) * 10 + 10)
    d2 = np.maximum(d2, 0.0)
    np.fill_diagonal(d2, 0.0)
    d2 = (d2 + d2.T) / 2
    D = np.sqrt(d2)
    H = np.eye(M) - np.ones((M, M)) / M
    B = -0.5 * H @ d2 @ H
    w, v = np.linalg.eigh((B + B.T) / 2)
    order = np.argsort(w)[::-1][:dim]
    lam = np.maximum(w[order], 0.0)
    X = v[:, order] * np.sqrt(lam)
    if X.shape[1] < dim:
        X = np.pad(X, ((0, 0), (0, dim - X.shape[1])))
        lam = np.pad(lam, (0, dim - lam.size))
    Dh = np.sqrt(np.maximum(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1), 0.0))
    denom = np.sum(D**2)
    stress = float(np.sqrt(np.sum((D - Dh) ** 2) / denom)) if denom > 0 else 0.0
    return Geometry(D, X, lam, stress)


@dataclass
class CoarseTree:
    merges: list              # (cluster_a, cluster_b, strength, new_cluster) in merge order
    members: dict             # cluster id -> tuple of leaves
    root: int
    M: int

    def leaf_order(self):
        children = {new: (a, b) for a, b, _, new in self.merges}
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            if node < self.M:
                out.append(node)
            else:
                a, b = children[node]
                stack.extend((b, a))
        return out


def coarse_grain_tree(C) -> CoarseTree:
    """Greedy average-linkage merging on |C|; ties go to the lowest cluster ids.

    Clusters are numbered as in the usual agglomerative convention: leaves
    0..M-1, the k-th merge creates cluster M + k.  In each merge the child
    holding the lower leaf is listed first.
    """
    A = np.abs(np.asarray(C, dtype=float))
    M = A.shape[0]
    if M < 2:
        raise ValueError("need at least two sites")
    members = {i: (i,) for i in range(M)}
    active = list(range(M))
    merges = []
    nxt = M
    while len(active) > 1:
        best, pair = -np.inf, None
        for ia in range(len(active)):
            for ib in range(ia + 1, len(active)):
                a, b = active[ia], active[ib]
                val = A[np.ix_(members[a], members[b])].mean()
                if pair is None or val > best + 1e-14 * max(1.0, abs(best)):
                    best, pair = val, (a, b)
        a, b = pair
        if min(members[b]) < min(members[a]):
            a, b = b, a
        members[nxt] = tuple(sorted(members[a] + members[b]))
        merges.append((a, b, float(best), nxt))
        active = [c for c in active if c not in (a, b)] + [nxt]
        nxt += 1
    return CoarseTree(merges, members, nxt - 1, M)


def bit_reversed_order(M):
    bits = int(np.log2(M))
    if 2**bits != M:
        raise ValueError("bit reversal needs a power-of-two number of sites")
    return [int(format(i, f"0{bits}b")[::-1], 2) for i in range(M)]


# ---------------------------------------------------------------- serialization


def matrix_to_csv(J) -> str:
    """Row-major ``i,j,value`` listing (real part; imaginary part in a 4th column if complex)."""
    J = np.asarray(J)
    cplx = np.iscomplexobj(J) and np.any(J.imag != 0)
    lines = ["i,j,value,imag" if cplx else "i,j,value"]
    for i in range(J.shape[0]):
        for j in range(J.shape[1]):
            if cplx:
                lines.append(f"{i},{j},{J[i, j].real:.12g},{J[i, j].imag:.12g}")
            else:
                lines.append(f"{i},{j},{np.real(J[i, j]):.12g}")
    return "\n".join(lines) + "\n"


def matrix_from_csv(text) -> np.ndarray:
    rows = [ln.split(",") for ln in text.strip().splitlines()]
    header, body = rows[0], rows[1:]
    n = max(int(r[0]) for r in body) + 1
    cplx = len(header) == 4
    J = np.zeros((n, n), dtype=complex if cplx else float)
    for r in body:
        J[int(r[0]), int(r[1])] = float(r[2]) + (1j * float(r[3]) if cplx else 0)
    return J


def matrix_to_json(J, boundary=None) -> str:
    J = np.real_if_close(np.asarray(J))
    d = {"M": int(J.shape[0]), "values": J.real.tolist()}
    if np.iscomplexobj(J):
        d["imag"] = J.imag.tolist()
    if boundary is not None:
        d["boundary"] = boundary
    return json.dumps(d, sort_keys=True)
