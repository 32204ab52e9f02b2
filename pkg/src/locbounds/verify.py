"""Verification campaign: every identity and inequality on exact instances.

Each check records a descriptive name, the quantity it compares, a residual,
the tolerance and a status. Identity checks pass when the residual is below
the tolerance; inequality checks pass when the margin (bound minus measured
value) is nonnegative. Instances whose lambda path loses its gap are reported
with status "assumption violated" and never counted as failures.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import backend
from .correlation import axis_dominance_check, correlation_bound
from .errors import DomainError
from .holo import GapModel, conformal_average_log_bound, disk_average_log_bound, log_bound_at_zero
from .kernels import CLOSED_FORM, NUMERIC, OmegaBarEnvelope
from .ed.instances import (EdInstance, boundary_identity, degenerate_instance, random_chain,
                           two_level, two_level_omega)
from .ed.models import (CouplingModel, LatticeSpec, ObservableSpec, build_hamiltonian,
                        operator_norm, pair_distance)
from .ed.response import axis_integral, dlambda_identity_check, omega_time_integral, response_amplitudes
from .ed.spectral import (DegeneracyAmbiguityWarning, connected_correlation, degenerate_block_basis,
                          delta_expectation, gap_along_path, spectrum)

SCHEMA_VERSION = "1.0"

PASS, FAIL, VIOLATED = "pass", "fail", "assumption violated"

DEFAULT_TOLERANCES = {
    "spectral_vs_time": 1e-6,
    "axis_identity": 1e-8,
    "derivative": 1e-6,
    "antihermitian": 1e-12,
    "boundary": 1e-10,
    "two_level": 1e-12,
}

DEFAULT_LAMBDA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
CIRCLE_RHOS = (0.5, 0.9, 0.99)


@dataclass
class Check:
    name: str
    instance: str
    quantity: str
    value: float
    reference: float
    residual: float
    tolerance: float
    kind: str  # "identity" or "inequality"
    status: str = PASS
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


def _identity(name, inst, quantity, value, reference, tol, **detail):
    res = abs(value - reference)
    return Check(name, inst, quantity, float(value), float(reference), float(res), float(tol),
                 "identity", PASS if res <= tol else FAIL, detail)


def _inequality(name, inst, quantity, value, bound, slack=0.0, **detail):
    """value <= bound (+ slack for rounding); residual is value - bound."""
    res = value - bound
    return Check(name, inst, quantity, float(value), float(bound), float(res), float(slack),
                 "inequality", PASS if res <= slack else FAIL, detail)


def _mark_violated(checks):
    for c in checks:
        c.status = VIOLATED
    return checks


def instance_checks(inst: EdInstance, tol: dict, lambda_grid) -> list:
    """Identity and inequality checks on one random gapped instance."""
    name = inst.name
    checks = []
    path = gap_along_path(inst.H, inst.V, lambda_grid)
    checks.append(_inequality("weyl-guard", name, "gap below Delta(0) - 2 lambda ||V|| (count)",
                              float(path.weyl_violations), 0.0,
                              delta_min=path.delta_min, status=path.status))
    amps = inst.amplitudes()
    gap0 = inst.gap0
    w = 0.3j * gap0
    ti = omega_time_integral(inst.H, inst.S, inst.V, w, amps=amps)
    sv = complex(amps.omega(w))
    checks.append(_identity("spectral-vs-time-integral", name, "Omega(0.3 i Delta)",
                            abs(ti.value - sv), 0.0, tol["spectral_vs_time"],
                            tail_bound=ti.tail_bound))
    ax = axis_integral(inst.H, inst.S, inst.V, amps=amps)
    cc = connected_correlation(inst.H, inst.S, inst.V, spec=inst.spec)
    checks.append(_identity("axis-integral-equals-correlation", name,
                            "(1/2pi) int Omega dw vs <S V>_c", (ax / (2 * math.pi)).real, cc.real,
                            tol["axis_identity"]))
    dc = dlambda_identity_check(inst.H, inst.V, inst.S)
    checks.append(_identity("derivative-identity", name, "Richardson d<S>/dlambda vs -i Omega(0)",
                            dc.richardson, dc.minus_i_omega0,
                            tol["derivative"] * max(1.0, abs(dc.minus_i_omega0)),
                            fd=dc.fd, fd_half=dc.fd_half))
    if path.assumption_violated:
        return checks[:1] + _mark_violated(checks[1:])

    # circle averages with the tight instance envelope; the certified one follows
    om0 = abs(complex(amps.omega(0.0)))
    log_om0 = math.log(om0) if om0 > 0 else -math.inf
    ienv = OmegaBarEnvelope(inst.instance_kernel(), inst.distance, CLOSED_FORM)
    igap = GapModel(gap0, gap0)
    for rho in CIRCLE_RHOS:
        disk = disk_average_log_bound(ienv, rho * gap0, igap)
        conf = conformal_average_log_bound(ienv, rho, igap)
        checks.append(_inequality("circle-average-disk", name, f"ln|Omega(0)| vs disk rho={rho}",
                                  log_om0, disk, 1e-9))
        checks.append(_inequality("circle-average-conformal", name,
                                  f"ln|Omega(0)| vs conformal rho={rho}", log_om0, conf, 1e-9))

    kern, hk = inst.certified_kernel()
    env = OmegaBarEnvelope(kern, inst.distance, NUMERIC)
    y = 0.3 * gap0
    checks.append(_inequality("envelope-dominates-response", name, "|Omega(iy)| vs Omega-bar(y)",
                              abs(sv), float(env(y)), 0.0))
    B0 = math.exp(log_bound_at_zero(env, GapModel(gap0, hk.v)))
    dom = axis_dominance_check(amps, B0, gap=GapModel(gap0, hk.v))
    checks.append(_inequality("axis-dominance", name, "max_y |Omega(iy)| vs bound at zero",
                              float(np.max(dom.profile)), B0, 0.0, monotone=dom.monotone))
    weyl = GapModel(inst.weyl_gap, hk.v)
    B_path = math.exp(log_bound_at_zero(env, weyl))
    dS = abs(delta_expectation(inst.H, inst.V, inst.S))
    checks.append(_inequality("lppl-bound", name, "|delta <S>| vs bound", dS, B_path, 0.0,
                              weyl_gap=inst.weyl_gap, v=hk.v))
    cb = correlation_bound(env, GapModel(gap0, hk.v), B0)
    checks.append(_inequality("correlation-bound", name, "|<S V>_c| vs bound", abs(cc), cb.value,
                              0.0, y0=cb.y0))
    return checks


def degenerate_checks(tol: dict, n_sites: int = 5) -> list:
    inst = degenerate_instance(n_sites)
    name = inst.name
    blk = degenerate_block_basis(inst.H, inst.V)
    d = inst.spec.ground_dim
    checks = [
        _identity("ground-degeneracy", name, "ground-space dimension", float(d), 2.0, 0.0),
        _identity("q-antihermitian", name, "max |conj(Q) + Q^T|", blk.antihermitian_residual, 0.0,
                  tol["antihermitian"]),
        _identity("q-diagonal-zero", name, "max |Q_aa|",
                  float(np.max(np.abs(np.diag(blk.Q)))) if d else 0.0, 0.0, 0.0),
    ]
    dc = dlambda_identity_check(inst.H, inst.V, inst.S, ground_dim=d)
    checks.append(_identity("derivative-identity-degenerate", name,
                            "Richardson d<S>/dlambda vs -i Omega(0), uniform ground average",
                            dc.richardson, dc.minus_i_omega0,
                            tol["derivative"] * max(1.0, abs(dc.minus_i_omega0))))
    return checks


def static_checks(tol: dict) -> list:
    checks = []
    H, S, V = two_level(1.0)
    amps = response_amplitudes(H, S, V)
    ws = np.array([0.0, 0.5j, 0.3 + 0.2j, -0.7j])
    err = float(np.max(np.abs(amps.omega(ws) - two_level_omega(1.0, ws))))
    checks.append(_identity("two-level-response", "two-level", "Omega vs -2i Delta/(Delta^2-w^2)",
                            err, 0.0, tol["two_level"]))
    split = boundary_identity()
    checks.append(_identity("boundary-decoupling", f"split-{split.N}", "<S>_L vs <S>_{H - V}",
                            split.block_value, split.decoupled_value, tol["boundary"],
                            cut_terms=split.cut_terms))
    return checks


def custom_instance(spec: dict, max_sites: int) -> EdInstance:
    """Instance from a config entry {lattice, coupling, observables}."""
    lat = LatticeSpec(tuple(spec["lattice"]["lengths"]), spec["lattice"].get("metric", "euclidean"),
                      max_sites=max_sites)
    cm = CouplingModel(**spec.get("coupling", {}))
    sysm = build_hamiltonian(lat, cm, dense=True)
    obs = spec["observables"]
    So = ObservableSpec(tuple(obs["S"]["support"]), obs["S"].get("pattern", "Z"),
                        coefficient=obs["S"].get("coefficient", 1.0))
    Vo = ObservableSpec(tuple(obs["V"]["support"]), obs["V"].get("pattern", "Z"),
                        coefficient=obs["V"].get("coefficient", 1.0))
    H = sysm.dense()
    S = So.operator(lat.N).toarray()
    V = Vo.operator(lat.N).toarray()
    d = pair_distance(lat, So.support, Vo.support)
    return EdInstance(spec.get("name", "custom"), H, S, V, So.support[0], Vo.support[0], d,
                      cm.alpha, cm.h0, spectrum(H), operator_norm(S), operator_norm(V))


def run_campaign(*, seed: int = 0, count: int = 20, n_sites=8, lambda_grid=DEFAULT_LAMBDA_GRID,
                 tolerances: dict | None = None, custom=(), max_sites: int = 14,
                 include_static: bool = True) -> dict:
    """Run the suite and return a JSON-ready report."""
    lambda_grid = [float(x) for x in lambda_grid]
    if not lambda_grid:
        raise DomainError("lambda grid is empty")
    tol = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    if any(not (t > 0) for t in tol.values()):
        raise DomainError("tolerances must be positive")
    sizes = [n_sites] if np.isscalar(n_sites) else list(n_sites)
    if not sizes:
        raise DomainError("site grid is empty")
    if max(sizes) > min(max_sites, 10):
        raise DomainError(f"random instances are limited to {min(max_sites, 10)} sites")
    rng = np.random.default_rng(seed)
    checks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneracyAmbiguityWarning)
        if include_static:
            checks += static_checks(tol)
            checks += degenerate_checks(tol)
        for i in range(count):
            n = int(sizes[i % len(sizes)])
            inst = random_chain(rng, n_sites=n, name=f"chain-{seed}-{i}")
            checks += instance_checks(inst, tol, lambda_grid)
        for spec in custom:
            checks += instance_checks(custom_instance(spec, max_sites), tol, lambda_grid)
    summary = {
        "total": len(checks),
        "passed": sum(c.status == PASS for c in checks),
        "failed": sum(c.status == FAIL for c in checks),
        "assumption_violated": sum(c.status == VIOLATED for c in checks),
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": int(seed),
        "count": int(count),
        "lambda_grid": lambda_grid,
        "tolerances": tol,
        "backend": backend.NAME,
        "summary": summary,
        "checks": [asdict(c) for c in checks],
    }
