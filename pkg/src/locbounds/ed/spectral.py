"""Eigen-decomposition, ground-space bookkeeping and gap tracking."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DomainError
from .models import DENSE_LIMIT

DEGENERACY_RTOL = 1e-9


class DegeneracyAmbiguityWarning(UserWarning):
    pass


def _hnorm(H) -> float:
    """Infinity-norm bound on ||H||; only sets the scale of the degeneracy tolerance."""
    if sp.issparse(H):
        return float(abs(H).sum(axis=1).max())
    return float(np.abs(H).sum(1).max())


@dataclass(frozen=True)
class SpectralData:
    energies: np.ndarray
    vectors: np.ndarray
    ground_dim: int
    tol: float
    complete: bool
    ambiguous: bool = False
    hnorm: float = field(default=0.0)

    @property
    def E0(self) -> float:
        return float(self.energies[0])

    @property
    def ground_energies(self) -> np.ndarray:
        return self.energies[:self.ground_dim]

    @property
    def ground(self) -> np.ndarray:
        return self.vectors[:, :self.ground_dim]

    @property
    def gap(self) -> float:
        if len(self.energies) <= self.ground_dim:
            return float("inf")
        return float(self.energies[self.ground_dim] - self.energies[self.ground_dim - 1])

    def projector(self) -> np.ndarray:
        G = self.ground
        return G @ G.conj().T

    def expectation(self, A) -> complex:
        """Uniform average of <G^b|A|G^b> over the ground space."""
        G = self.ground
        AG = A @ G
        return complex(np.einsum("ib,ib->", G.conj(), AG) / self.ground_dim)


def spectrum(H, k: int | None = None, *, rtol: float = DEGENERACY_RTOL,
             ground_dim: int | None = None) -> SpectralData:
    """Lowest eigenpairs (all of them for dense-size matrices).

    Levels within ``rtol * ||H||`` of the ground energy form the ground space
    unless ``ground_dim`` is given. Warns when the gap above the ground space
    is below ten times that tolerance.
    """
    dim = H.shape[0]
    hn = _hnorm(H)
    if dim <= DENSE_LIMIT:
        A = H.toarray() if sp.issparse(H) else np.asarray(H)
        if not np.allclose(A, A.conj().T, atol=1e-12 * max(hn, 1.0)):
            raise DomainError("matrix is not Hermitian")
        w, U = np.linalg.eigh(A)
        hn = float(max(abs(w[0]), abs(w[-1])))
        complete = True
        if k is not None:
            w, U = w[:k], U[:, :k]
            complete = k >= dim
    else:
        # beyond dense size only the low end of the spectrum is needed
        nev = k or 8
        w, U = spla.eigsh(sp.csr_matrix(H), k=nev, which="SA", tol=1e-13, ncv=max(4 * nev, 40))
        order = np.argsort(w)
        w, U = w[order], U[:, order]
        complete = False
    tol = rtol * max(hn, 1.0)
    if ground_dim is None:
        ground_dim = int(np.sum(w - w[0] <= tol))
        if ground_dim == len(w) and not complete:
            raise DomainError("ground space fills the requested eigenpairs; raise k")
    ambiguous = False
    if ground_dim < len(w) and w[ground_dim] - w[ground_dim - 1] < 10 * tol:
        ambiguous = True
        warnings.warn("gap above the ground space is within 10x the degeneracy tolerance",
                      DegeneracyAmbiguityWarning, stacklevel=2)
    return SpectralData(w, U, ground_dim, tol, complete, ambiguous, hn)


@dataclass(frozen=True)
class PathRecord:
    lambdas: np.ndarray
    gaps: np.ndarray
    weyl: np.ndarray
    delta_min: float
    weyl_violations: int
    assumption_violated: bool
    status: str


def gap_along_path(H, V, lambdas, *, ground_dim=None, gap_floor: float = 1e-8,
                   k: int | None = None) -> PathRecord:
    """Gap of H + lambda V on a grid, next to the Weyl lower bound Delta(0) - 2 lambda ||V||."""
    lambdas = np.asarray(lambdas, float)
    if lambdas.size == 0:
        raise DomainError("empty lambda grid")
    from .models import operator_norm
    dense_ok = H.shape[0] <= DENSE_LIMIT
    nV = operator_norm(V) if dense_ok else float(abs(sp.csr_matrix(V)).sum(axis=1).max())
    sd0 = spectrum(H, k=k, ground_dim=ground_dim)
    # track the ground-space size of lambda = 0, so a level crossing shows up as a closed gap
    ground_dim = sd0.ground_dim
    gaps = []
    for lam in lambdas:
        sd = spectrum(H + lam * V, k=k, ground_dim=ground_dim)
        gaps.append(sd.gap)
    gaps = np.array(gaps)
    gap0 = sd0.gap
    weyl = gap0 - 2.0 * lambdas * nV
    slack = 1e-9 * max(1.0, gap0)
    violations = int(np.sum(gaps < weyl - slack))
    dmin = float(gaps.min())
    closed = dmin <= gap_floor
    status = "assumption violated" if closed else "gapped"
    return PathRecord(lambdas, gaps, weyl, dmin, violations, closed, status)


def delta_expectation(H, V, S, *, ground_dim=None, k=None) -> float:
    """<S>_{H+V} - <S>_H with ground-space averages."""
    a = spectrum(H + V, k=k, ground_dim=ground_dim).expectation(S)
    b = spectrum(H, k=k, ground_dim=ground_dim).expectation(S)
    return float((a - b).real)


def connected_correlation(H, A, B, *, ground_dim=None, spec: SpectralData | None = None) -> complex:
    """<A B> - <A><B> in the ground-space average."""
    sd = spec or spectrum(H, ground_dim=ground_dim)
    val = sd.expectation(A @ B) - sd.expectation(A) * sd.expectation(B)
    return val


@dataclass(frozen=True)
class DegenerateBlock:
    basis: np.ndarray
    energies: np.ndarray
    Q: np.ndarray
    antihermitian_residual: float
    clusters: list


def degenerate_block_basis(H, V, tol: float | None = None, *, ground_dim=None) -> DegenerateBlock:
    """Ground-space basis diagonalizing V inside exactly degenerate clusters, plus Q.

    Q[a, b] = <G^b|V|G^a> / (E_b - E_a) for distinct energies, 0 otherwise.
    """
    sd = spectrum(H, ground_dim=ground_dim)
    tol = sd.tol if tol is None else tol
    G = sd.ground.copy()
    E = sd.ground_energies.copy()
    Vd = V.toarray() if sp.issparse(V) else np.asarray(V)
    clusters = []
    start = 0
    for i in range(1, len(E) + 1):
        if i == len(E) or E[i] - E[i - 1] > tol:
            clusters.append(list(range(start, i)))
            start = i
    for c in clusters:
        if len(c) > 1:
            block = G[:, c].conj().T @ Vd @ G[:, c]
            _, R = np.linalg.eigh(0.5 * (block + block.conj().T))
            G[:, c] = G[:, c] @ R
    Vg = G.conj().T @ Vd @ G  # Vg[b, a] = <G^b|V|G^a>
    d = len(E)
    Q = np.zeros((d, d), complex)
    for a in range(d):
        for b in range(d):
            if abs(E[b] - E[a]) > tol:
                Q[a, b] = Vg[b, a] / (E[b] - E[a])
    resid = float(np.max(np.abs(Q.conj() + Q.T))) if d else 0.0
    return DegenerateBlock(G, E, Q, resid, clusters)
