"""Seeded families of small gapped instances, with certified envelopes.

Every instance carries a single-site observable S and a single-site
perturbation V with ||V|| < Delta(0)/4, so the Weyl bound keeps the path
H + lambda V gapped by at least Delta(0) - 2 ||V|| > Delta(0)/2. Single-site
terms leave the Lieb-Robinson constants of the interaction unchanged, which
is what makes the kernel from ``derive_hk_constants`` valid along the path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import DomainError
from ..holo import GapModel
from ..kernels import derive_hk_constants
from .models import (CouplingModel, LatticeSpec, build_hamiltonian, local_operator,
                     operator_norm, pair_distance, site_operator)
from .response import InstanceKernel, ResponseAmplitudes, response_amplitudes
from .spectral import SpectralData, spectrum

MAX_RANDOM_SITES = 10


@dataclass(frozen=True)
class EdInstance:
    name: str
    H: np.ndarray
    S: np.ndarray
    V: np.ndarray
    x: int
    y: int
    distance: float
    alpha: float
    h0: float
    spec: SpectralData = field(repr=False)
    norm_S: float = 1.0
    norm_V: float = 1.0

    @property
    def gap0(self) -> float:
        return self.spec.gap

    @property
    def weyl_gap(self) -> float:
        """Gap guaranteed on the whole path lambda in [0, 1]."""
        return self.gap0 - 2.0 * self.norm_V

    @cached_property
    def _amps0(self) -> ResponseAmplitudes:
        return response_amplitudes(self.H, self.S, self.V, spec=self.spec)

    def amplitudes(self, lam: float = 0.0) -> ResponseAmplitudes:
        if lam == 0.0:
            return self._amps0
        Hl = self.H + lam * self.V
        return response_amplitudes(Hl, self.S, self.V,
                                   spec=spectrum(Hl, ground_dim=self.spec.ground_dim))

    def certified_kernel(self):
        hk = derive_hk_constants(self.h0, self.alpha, 1)
        return hk.kernel(self.norm_S, self.norm_V, 1, 1, alpha=self.alpha, D=1), hk

    def certified_gap(self) -> GapModel:
        _, hk = self.certified_kernel()
        return GapModel(self.weyl_gap, hk.v)

    def instance_kernel(self, n: int = 4000, horizon: float | None = None) -> InstanceKernel:
        amps = self.amplitudes()
        T = horizon or 40.0 / self.gap0
        return InstanceKernel(amps, T, n)


def _random_observable(rng, scale):
    A = rng.normal(size=(2, 2))
    A = 0.5 * (A + A.T)
    return scale * A / np.linalg.norm(A, 2)


def random_chain(rng: np.random.Generator, *, n_sites=None, alpha=None, field_x=None,
                 name: str = "random-chain") -> EdInstance:
    """Transverse-field power-law chain, H = -sum_{i<j} Z_i Z_j / d^alpha - g sum X_i.

    A weak random longitudinal field removes the Z2 symmetry. S sits on site 0,
    V on a random site at distance >= 2 with ||V|| drawn in (0.05, 0.24) Delta(0).
    """
    N = int(n_sites or rng.integers(6, MAX_RANDOM_SITES + 1))
    if N > MAX_RANDOM_SITES:
        raise DomainError(f"random instances are capped at {MAX_RANDOM_SITES} sites")
    a = float(alpha if alpha is not None else rng.uniform(2.0, 4.0))
    g = float(field_x if field_x is not None else rng.uniform(2.0, 4.0))
    hz = float(rng.uniform(0.05, 0.3))
    lat = LatticeSpec((N,))
    sysm = build_hamiltonian(lat, CouplingModel(alpha=a, h0=1.0, field_x=g, field_z=hz), dense=True)
    H = sysm.dense()
    sd = spectrum(H)
    y = int(rng.integers(2, N))
    S = local_operator(_random_observable(rng, 1.0), [0], N).toarray()
    nv = float(rng.uniform(0.05, 0.24)) * sd.gap
    V = local_operator(_random_observable(rng, nv), [y], N).toarray()
    d = pair_distance(lat, [0], [y])
    return EdInstance(name, H, S, V, 0, y, d, a, 1.0, sd,
                      operator_norm(S), operator_norm(V))


def random_instances(seed: int, count: int = 20, **kw) -> list:
    rng = np.random.default_rng(seed)
    return [random_chain(rng, name=f"chain-{seed}-{i}", **kw) for i in range(count)]


def degenerate_instance(n_sites: int = 5, alpha: float = 3.0, eps: float = 0.05,
                        site: int | None = None) -> EdInstance:
    """Odd-length XY chain without fields: prod X and prod Z anticommute, so
    every level is (at least) doubly degenerate. V = eps Z_site splits the pair."""
    if n_sites % 2 == 0:
        raise DomainError("the parity argument needs an odd number of sites")
    lat = LatticeSpec((n_sites,))
    sysm = build_hamiltonian(lat, CouplingModel(alpha=alpha, h0=1.0, pattern="xy"), dense=True)
    H = sysm.dense()
    sd = spectrum(H)
    y = n_sites - 1 if site is None else site
    S = site_operator("Z", 0, n_sites, sparse=False)
    V = eps * site_operator("Z", y, n_sites, sparse=False)
    return EdInstance(f"xy-degenerate-{n_sites}", H, S, V, 0, y, float(y), alpha, 1.0, sd,
                      1.0, abs(eps))


def two_level(Delta: float = 1.0) -> tuple:
    """H = diag(0, Delta) with S = V = sigma_x; Omega(w) = -2i Delta / (Delta^2 - w^2)."""
    H = np.diag([0.0, Delta])
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    return H, X, X.copy()


def two_level_omega(Delta, w):
    w = np.asarray(w, complex)
    return -2j * Delta / (Delta ** 2 - w ** 2)


@dataclass(frozen=True)
class SplitInstance:
    N: int
    block: tuple
    block_value: float
    decoupled_value: float
    residual: float
    cut_terms: int


def boundary_identity(n_total: int = 8, n_block: int = 4, alpha: float = 3.0,
                      field_x: float = 3.0, field_z: float = 0.2, site: int = 0) -> SplitInstance:
    """<S>_L on the isolated block against <S> for H - V_Y on the larger chain."""
    from .models import boundary_perturbation
    if not 0 <= site < n_block < n_total:
        raise DomainError("need 0 <= site < n_block < n_total")
    cm = CouplingModel(alpha=alpha, h0=1.0, field_x=field_x, field_z=field_z)
    big = build_hamiltonian(LatticeSpec((n_total,)), cm, dense=True)
    small = build_hamiltonian(LatticeSpec((n_block,)), cm, dense=True)
    block = tuple(range(n_block))
    V, terms = boundary_perturbation(big, block)
    S_big = site_operator("Z", site, n_total, sparse=False)
    S_small = site_operator("Z", site, n_block, sparse=False)
    a = spectrum(small.dense()).expectation(S_small).real
    b = spectrum(big.dense() - V).expectation(S_big).real
    return SplitInstance(n_total, block, float(a), float(b), abs(a - b), len(terms))


def chain_response_profile(n_sites: int = 14, alpha: float = 3.0, field_x: float = 3.0,
                           eps_fraction: float = 0.1, distances=None, J: float = 1.0):
    """|delta <Z_0>| under V = eps Z_r for each r, on the transverse-field chain.

    eps = eps_fraction * Delta(0) keeps ||V|| well inside the Weyl-safe range.
    Returns (Delta(0), eps, rows) with rows (r, delta, gap_min, weyl_violations).
    """
    from .spectral import delta_expectation, gap_along_path
    lat = LatticeSpec((n_sites,), max_sites=max(n_sites, 14))
    sysm = build_hamiltonian(lat, CouplingModel(alpha=alpha, h0=J, field_x=field_x))
    H = sysm.H
    k = 6
    gap0 = spectrum(H, k=k).gap
    eps = eps_fraction * gap0
    S = site_operator("Z", 0, n_sites)
    rows = []
    for r in (distances or range(1, n_sites)):
        V = eps * site_operator("Z", r, n_sites)
        path = gap_along_path(H, V, [0.0, 0.5, 1.0], k=k)
        dval = delta_expectation(H, V, S, k=k)
        rows.append((int(r), abs(dval), path.delta_min, path.weyl_violations,
                     path.status))
    return gap0, eps, rows


def circle_average_values(inst: EdInstance, env, gap: GapModel, rhos) -> list:
    """(rho, ln|Omega(0)|, disk average, conformal average) rows for one envelope."""
    from ..holo import conformal_average_log_bound, disk_average_log_bound
    om0 = abs(inst.amplitudes().omega(0.0))
    lo = math.log(om0) if om0 > 0 else -math.inf
    out = []
    for rho in rhos:
        disk = disk_average_log_bound(env, rho * gap.Delta, gap)
        conf = conformal_average_log_bound(env, rho, gap)
        out.append((float(rho), lo, disk, conf))
    return out
