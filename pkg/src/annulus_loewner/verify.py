"""Property checks asserting the evolution-family axioms and structural
identities on computed families.

Every check produces named results with residuals and tolerances inside a
serializable report.  Checks are deterministic given (scenario, seed), and
the harness is falsifiable: deliberately corrupted inputs must fail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, LiftingError
from .fields import field_conjugate, whvf_majorant_integral
from .ode import EvolutionMap

#: EF1 must hold exactly: evolve(s, s, .) short-circuits to the identity.
EF1_TOL = 0.0
EF2_TOL = 1e-6
EF3_SLACK = 1e-6
INDEX_TOL = 1e-6
INJECTIVITY_SEPARATION = 1e-9
FIXED_POINT_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "residual": float(self.residual),
            "tol": float(self.tol),
        }


@dataclass
class VerificationReport:
    scenario: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, tol: float) -> CheckResult:
        result = CheckResult(name, residual <= tol, float(residual), float(tol))
        self.checks.append(result)
        return result

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "checks": [c.to_json() for c in self.checks],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def merged(cls, reports) -> "VerificationReport":
        reports = list(reports)
        if not reports:
            return cls(scenario="", seed=0)
        out = cls(scenario=reports[0].scenario, seed=reports[0].seed)
        for rep in reports:
            out.checks.extend(rep.checks)
        out.checks.sort(key=lambda c: c.name)
        return out


def probe_ring(emap: EvolutionMap, s: float, count: int, seed: int) -> np.ndarray:
    """Deterministic probe points inside D_s, away from both rims."""
    rng = np.random.default_rng(seed)
    r_s = emap.spec.ds.radius(s)
    lo = r_s + 0.08 * (1.0 - r_s)
    hi = 1.0 - 0.08 * (1.0 - r_s)
    rho = rng.uniform(lo, hi, size=count)
    ang = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return rho * np.exp(1j * ang)


def _variation_bound_residual(emap: EvolutionMap, s: float, z: complex, t_end: float) -> float:
    """Total variation along the trajectory minus its integrated majorant.

    Each accepted step supplies its own modulus band (padded toward, but
    strictly above, the inner radius at the step's start), so the growth
    majorant applies cell by cell even while the annuli shrink.
    """
    spec = emap.spec
    traj = emap.trajectory(s, t_end, z)
    values, times = traj.values, traj.times
    variation = float(np.sum(np.abs(np.diff(values))))
    bound = 0.0
    moduli = np.abs(values)
    for k in range(len(times) - 1):
        t0, t1 = float(times[k]), float(times[k + 1])
        m_lo = min(moduli[k], moduli[k + 1])
        m_hi = max(moduli[k], moduli[k + 1])
        r_t0 = spec.ds.radius(t0)
        floor = 0.5 * (m_lo + r_t0)
        cap = 0.5 * (1.0 + m_hi)
        bound += whvf_majorant_integral(spec, (floor, cap), t0, t1, n_grid=4)
    return variation - bound


def check_ef_axioms(
    emap: EvolutionMap,
    horizon: float,
    seed: int = 0,
    n_triples: int = 50,
    n_points: int = 20,
    ef2_tol: float = EF2_TOL,
    scenario: str = "",
) -> VerificationReport:
    """EF1 exactly, EF2 composition residuals, and the variation surrogate
    of the integrable-continuity axiom."""
    report = VerificationReport(scenario=scenario, seed=seed)
    rng = np.random.default_rng(seed)

    worst_ef1 = 0.0
    for s in np.linspace(0.0, horizon, 5):
        for z in probe_ring(emap, s, 4, seed + 1):
            worst_ef1 = max(worst_ef1, abs(emap.evolve(s, s, z) - z))
    report.add("EF1_identity", worst_ef1, EF1_TOL)

    worst_ef2 = 0.0
    for _ in range(n_triples):
        s = rng.uniform(0.0, 0.6 * horizon)
        u = s + rng.uniform(0.0, 0.2 * horizon)
        t = u + rng.uniform(0.0, 0.2 * horizon)
        z = complex(probe_ring(emap, s, 1, int(rng.integers(1 << 31)))[0])
        direct = emap.evolve(s, t, z)
        chained = emap.evolve(u, t, emap.evolve(s, u, z))
        worst_ef2 = max(worst_ef2, abs(direct - chained))
    report.add("EF2_composition", worst_ef2, ef2_tol)

    worst_ef3 = -math.inf
    for z in probe_ring(emap, 0.0, min(4, n_points), seed + 2):
        worst_ef3 = max(worst_ef3, _variation_bound_residual(emap, 0.0, z, horizon))
    report.add("EF3_variation_bound", worst_ef3, EF3_SLACK)
    return report


def check_index_preservation(
    emap: EvolutionMap,
    s: float,
    t: float,
    loop_radius: float,
    n_samples: int = 1024,
    max_doublings: int = 3,
    scenario: str = "",
    seed: int = 0,
) -> VerificationReport:
    """Winding number about 0 of the evolved core circle must stay 1.

    The image argument is accumulated sample to sample; sampling doubles
    (up to a cap) whenever a turn of pi/2 or more appears between
    neighbors, and a persistent jump of pi or more is a hard error.
    """
    report = VerificationReport(scenario=scenario, seed=seed)
    r_s = emap.spec.ds.radius(s)
    if not (r_s < loop_radius < 1.0):
        raise DomainError(f"loop radius {loop_radius} outside D_s")
    n = n_samples
    for attempt in range(max_doublings + 1):
        loop = loop_radius * np.exp(2j * np.pi * np.arange(n) / n)
        image = emap.evolve_grid(s, t, loop)
        closed = np.append(image, image[0])
        deltas = np.angle(closed[1:] / closed[:-1])
        if np.max(np.abs(deltas)) < np.pi / 2.0:
            break
        if attempt == max_doublings:
            raise LiftingError(
                f"angular sampling too coarse at {n} nodes for loop radius "
                f"{loop_radius}"
            )
        n *= 2
    winding = float(np.sum(deltas) / (2.0 * np.pi))
    report.add("index_preservation", abs(winding - 1.0), INDEX_TOL)
    return report


def check_injectivity(
    emap: EvolutionMap,
    s: float,
    t: float,
    grid,
    min_separation: float = INJECTIVITY_SEPARATION,
    scenario: str = "",
    seed: int = 0,
) -> VerificationReport:
    """Pairwise distinctness of evolved grid points (univalence surrogate)."""
    report = VerificationReport(scenario=scenario, seed=seed)
    pts = np.asarray(list(grid), dtype=np.complex128)
    image = emap.evolve_grid(s, t, pts)
    iu = np.triu_indices(len(pts), k=1)
    gaps = np.abs(image[:, None] - image[None, :])[iu]
    smallest = float(gaps.min()) if gaps.size else math.inf
    # Residual formulation: separation shortfall, 0 when well separated.
    report.add("injectivity_separation", max(0.0, min_separation - smallest), 0.0)
    return report


def check_fixed_points(
    emap: EvolutionMap,
    n_points: int,
    r_star: float,
    horizon: float,
    tol: float = FIXED_POINT_TOL,
    scenario: str = "",
) -> VerificationReport:
    """Sup-norm drift of the pinned points over the whole horizon."""
    report = VerificationReport(scenario=scenario, seed=0)
    worst = 0.0
    for j in range(n_points):
        zj = r_star * np.exp(2j * np.pi * j / n_points)
        traj = emap.trajectory(0.0, horizon, zj)
        if not traj.complete:
            report.add("fixed_point_drift", math.inf, tol)
            return report
        worst = max(worst, float(np.max(np.abs(traj.values - zj))))
    report.add("fixed_point_drift", worst, tol)
    return report


def check_inversion_symmetry(
    emap: EvolutionMap, s: float, t: float, z: complex
) -> float:
    """|phi~_{s,t}(z) - r(t)/phi_{s,t}(r(s)/z)| for the conjugated family."""
    spec = emap.spec
    conj_map = EvolutionMap(field_conjugate(spec), emap.cfg)
    lhs = conj_map.evolve(s, t, z)
    r_s = spec.ds.radius(s)
    r_t = spec.ds.radius(t)
    rhs = r_t / emap.evolve(s, t, r_s / z)
    return abs(lhs - rhs)


def check_lifting(
    emap: EvolutionMap,
    s: float,
    t: float,
    n_probes: int = 20,
    tol: float = 1e-6,
    seed: int = 0,
    scenario: str = "",
) -> VerificationReport:
    """Commutation residual of the strip lift over random strip probes."""
    from .lifting import lift_commutation_check

    report = VerificationReport(scenario=scenario, seed=seed)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_probes):
        zeta = complex(rng.uniform(0.05, 0.95), rng.uniform(-2.0, 2.0))
        res = lift_commutation_check(emap, s, t, zeta)
        worst = max(worst, res.residual)
    report.add("lifting_commutation", worst, tol)
    return report


def check_containment(
    emap: EvolutionMap,
    horizon: float,
    n_probes: int = 6,
    seed: int = 0,
    scenario: str = "",
) -> VerificationReport:
    """No boundary terminations, and the modulus envelopes hold throughout."""
    from .ode import containment_certificate

    report = VerificationReport(scenario=scenario, seed=seed)
    terminations = 0
    worst = 0.0
    for z in probe_ring(emap, 0.0, n_probes, seed):
        if emap.spec.ds.degenerate:
            traj = emap.trajectory(0.0, horizon, z)
            if not traj.complete:
                terminations += 1
            continue
        cert = containment_certificate(emap.spec, 0.0, z, horizon, emap.cfg)
        if not cert.trajectory.complete:
            terminations += 1
        worst = max(worst, cert.max_upper_violation, cert.max_lower_violation)
    report.add("boundary_terminations", float(terminations), 0.0)
    if not emap.spec.ds.degenerate:
        report.add("containment_envelopes", worst, 10.0 * emap.cfg.rel_tol + 1e-12)
    return report


def check_degenerate_extension(
    emap: EvolutionMap,
    s: float,
    t: float,
    moduli=(1e-2, 1e-3, 1e-4),
    angle: float = 0.4,
    scenario: str = "",
) -> VerificationReport:
    """Near-origin behavior of a degenerate family: |phi| decreasing along
    shrinking probes and below the Schwarz envelope |phi(z)| <= |z|."""
    if not emap.spec.ds.degenerate:
        raise DomainError("degenerate-extension check needs a degenerate system")
    report = VerificationReport(scenario=scenario, seed=0)
    probes = [m * np.exp(1j * angle) for m in moduli]
    values = [abs(emap.evolve(s, t, z)) for z in probes]
    drops = all(b < a for a, b in zip(values, values[1:]))
    envelope_excess = max(v - abs(z) for v, z in zip(values, probes))
    report.add("origin_monotone_decay", 0.0 if drops else 1.0, 0.0)
    report.add("origin_linear_envelope", envelope_excess, 1e-9)
    return report
