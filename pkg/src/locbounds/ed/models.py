"""Finite spin-1/2 lattices, power-law couplings and local observables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import DomainError
from .. import backend

DEFAULT_MAX_SITES = 14
DENSE_LIMIT = 1 << 12

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Y": np.array([[0.0, -1j], [1j, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


@dataclass(frozen=True)
class LatticeSpec:
    """Open hypercubic patch of Z^D; site index is row-major over ``lengths``."""

    lengths: tuple
    metric: str = "euclidean"
    max_sites: int = DEFAULT_MAX_SITES

    def __post_init__(self):
        lengths = tuple(int(n) for n in np.atleast_1d(self.lengths))
        object.__setattr__(self, "lengths", lengths)
        if not 1 <= len(lengths) <= 2 or min(lengths) < 1:
            raise DomainError("lattices must be 1D or 2D with positive lengths")
        if self.metric not in ("euclidean", "graph"):
            raise DomainError(f"unknown metric {self.metric!r}")
        if self.N > self.max_sites:
            raise DomainError(f"{self.N} sites exceed the cap of {self.max_sites}")

    @property
    def D(self) -> int:
        return len(self.lengths)

    @property
    def N(self) -> int:
        return int(np.prod(self.lengths))

    @property
    def coords(self) -> np.ndarray:
        return np.array(list(itertools.product(*[range(n) for n in self.lengths])), float)

    def distance(self, i, j) -> float:
        a, b = self.coords[i], self.coords[j]
        if self.metric == "graph":
            return float(np.abs(a - b).sum())
        return float(np.linalg.norm(a - b))

    def distance_matrix(self) -> np.ndarray:
        c = self.coords
        diff = c[:, None, :] - c[None, :, :]
        if self.metric == "graph":
            return np.abs(diff).sum(-1)
        return np.sqrt((diff ** 2).sum(-1))

    def set_distance(self, X, Y) -> float:
        d = self.distance_matrix()
        return float(d[np.ix_(list(X), list(Y))].min())


@dataclass(frozen=True)
class CouplingModel:
    """Two-site pattern with strength sign * h0 * decay(d), plus uniform fields.

    ``pattern`` is "zz" (J Z_i Z_j) or "xy" (J (X_i X_j + Y_i Y_j) / 2); both
    terms have norm |J|, so the pair audit compares |J_ij| to h0 d^-alpha.
    ``decay`` is "power" (d^-alpha) or "exponential" (e^{-mu d}).
    """

    alpha: float = 3.0
    h0: float = 1.0
    pattern: str = "zz"
    sign: float = -1.0
    field_x: float = 0.0
    field_z: float = 0.0
    decay: str = "power"
    mu: float = 1.0
    boundary: str = "open"
    pair_scale: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.pattern not in ("zz", "xy"):
            raise DomainError(f"unknown coupling pattern {self.pattern!r}")
        if self.decay not in ("power", "exponential"):
            raise DomainError(f"unknown decay {self.decay!r}")
        if self.h0 < 0:
            raise DomainError("h0 must be nonnegative")
        if self.boundary != "open":
            raise DomainError("only open boundaries are supported")

    def envelope(self, d):
        d = np.asarray(d, float)
        if self.decay == "power":
            return self.h0 * d ** (-self.alpha)
        return self.h0 * np.exp(-self.mu * d)

    def couplings(self, lattice: LatticeSpec) -> np.ndarray:
        """Symmetric matrix of J_ij (zero diagonal)."""
        d = lattice.distance_matrix()
        J = np.zeros_like(d)
        off = ~np.eye(lattice.N, dtype=bool)
        J[off] = self.sign * self.envelope(d[off])
        if self.pair_scale is not None:
            scale = np.asarray(self.pair_scale, float)
            if np.any(np.abs(scale) > 1.0):
                raise DomainError("pair scales must lie in [-1, 1] to respect the coupling cap")
            J = J * scale
        return J


def site_operator(op, site: int, N: int, sparse: bool = True):
    op = PAULI[op] if isinstance(op, str) else np.asarray(op)
    left = sp.identity(2 ** site, format="csr")
    right = sp.identity(2 ** (N - site - 1), format="csr")
    out = sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")
    return out if sparse else out.toarray()


def pauli_string(ops: dict, N: int):
    """Sparse product of single-site operators, e.g. {0: "Z", 3: "X"}."""
    factors = [sp.csr_matrix(PAULI[ops[i]] if isinstance(ops.get(i), str) else ops[i])
               if i in ops else sp.identity(2, format="csr") for i in range(N)]
    out = factors[0]
    for f in factors[1:]:
        out = sp.kron(out, f, format="csr")
    return out


def local_operator(matrix, support, N: int):
    """Embed a 2^k x 2^k operator acting on ``support`` (any order) into N sites."""
    support = list(support)
    k = len(support)
    matrix = np.asarray(matrix)
    if matrix.shape != (2 ** k, 2 ** k):
        raise DomainError("operator shape does not match its support")
    rest = [i for i in range(N) if i not in support]
    perm = support + rest
    full = np.kron(matrix, np.eye(2 ** (N - k)))
    # reorder tensor legs from (support, rest) to (0, ..., N-1)
    t = full.reshape([2] * (2 * N))
    inv = np.argsort(perm)
    t = t.transpose(list(inv) + [N + i for i in inv])
    return sp.csr_matrix(t.reshape(2 ** N, 2 ** N))


@dataclass(frozen=True)
class ObservableSpec:
    support: tuple
    pattern: str | None = "Z"
    matrix: np.ndarray | None = field(default=None, compare=False)
    coefficient: float = 1.0

    def operator(self, N: int):
        if self.matrix is not None:
            return self.coefficient * local_operator(self.matrix, self.support, N)
        if len(self.pattern) != len(self.support):
            raise DomainError("pattern length must match the support size")
        return self.coefficient * pauli_string(dict(zip(self.support, self.pattern)), N)

    def norm(self) -> float:
        if self.matrix is not None:
            return abs(self.coefficient) * float(np.linalg.norm(self.matrix, 2))
        return abs(self.coefficient)


@dataclass(frozen=True)
class SpinSystem:
    lattice: LatticeSpec
    coupling: CouplingModel
    H: object
    J: np.ndarray = field(compare=False)

    @property
    def N(self):
        return self.lattice.N

    def dense(self) -> np.ndarray:
        return self.H.toarray() if sp.issparse(self.H) else np.asarray(self.H)


def build_hamiltonian(lattice: LatticeSpec, coupling: CouplingModel, *, dense=None) -> SpinSystem:
    """Assemble H = sum_{i<j} J_ij pattern_ij - field_x sum X_i - field_z sum Z_i."""
    N = lattice.N
    J = coupling.couplings(lattice)
    dim = 1 << N
    if coupling.pattern == "zz":
        H = sp.diags(backend.zz_diagonal(np.ascontiguousarray(J), N), format="csr")
    else:
        H = sp.csr_matrix((dim, dim))
        for i, j in itertools.combinations(range(N), 2):
            if J[i, j] != 0:
                xx = pauli_string({i: "X", j: "X"}, N)
                yy = pauli_string({i: "Y", j: "Y"}, N)
                H = H + 0.5 * J[i, j] * (xx + yy).real
    for i in range(N):
        if coupling.field_x:
            H = H - coupling.field_x * site_operator("X", i, N)
        if coupling.field_z:
            H = H - coupling.field_z * site_operator("Z", i, N)
    H = sp.csr_matrix(H)
    if H.nnz and abs(H - H.getH()).max() > 1e-12:
        raise DomainError("assembled Hamiltonian is not Hermitian")
    if dense is None:
        dense = dim <= DENSE_LIMIT
    return SpinSystem(lattice, coupling, H.toarray() if dense else H, J)


def coupling_audit(system: SpinSystem, rtol=1e-12) -> dict:
    """Check sum_{X > {i,j}} ||h_X|| = |J_ij| <= h0 decay(d_ij) for every pair."""
    d = system.lattice.distance_matrix()
    N = system.N
    iu = np.triu_indices(N, 1)
    cap = system.coupling.envelope(d[iu])
    norms = np.abs(system.J[iu])
    excess = norms - cap * (1 + rtol)
    return {"pairs": int(len(norms)), "max_ratio": float(np.max(norms / cap)) if len(cap) else 0.0,
            "violations": int(np.sum(excess > 0)), "passed": bool(np.all(excess <= 0))}


@dataclass(frozen=True)
class CutTerm:
    i: int
    j: int
    strength: float
    norm: float


def boundary_perturbation(system: SpinSystem, block) -> tuple:
    """Interaction terms V_ij between ``block`` and the rest of the lattice.

    Returns (V as an operator, list of CutTerm). H - V decouples the block.
    """
    block = sorted(int(b) for b in block)
    N = system.N
    outside = [j for j in range(N) if j not in block]
    terms = []
    V = sp.csr_matrix((1 << N, 1 << N))
    for i in block:
        for j in outside:
            Jij = system.J[i, j]
            if Jij == 0:
                continue
            terms.append(CutTerm(i, j, float(Jij), float(abs(Jij))))
            if system.coupling.pattern == "zz":
                V = V + Jij * pauli_string({i: "Z", j: "Z"}, N)
            else:
                V = V + 0.5 * Jij * (pauli_string({i: "X", j: "X"}, N)
                                     + pauli_string({i: "Y", j: "Y"}, N)).real
    V = sp.csr_matrix(V)
    if not sp.issparse(system.H):
        V = V.toarray()
    return V, terms


def operator_norm(A) -> float:
    A = A.toarray() if sp.issparse(A) else np.asarray(A)
    if A.shape[0] > DENSE_LIMIT:
        raise DomainError("operator too large for a dense norm")
    if np.allclose(A, A.conj().T):
        return float(np.max(np.abs(np.linalg.eigvalsh(A))))
    return float(np.linalg.norm(A, 2))


def pair_distance(lattice, X, Y) -> float:
    d = lattice.set_distance(X, Y)
    if d < 1:
        raise DomainError("observable supports must be disjoint")
    return d


def weyl_lower_bound(gap0: float, lam, norm_V: float):
    return gap0 - 2.0 * np.asarray(lam, float) * norm_V

