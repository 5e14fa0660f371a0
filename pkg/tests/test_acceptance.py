"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single PASS/FAIL line (run with ``pytest -s`` to see
them live) and also asserts, so the suite is red whenever a criterion is.
Wall-clock budgets are asserted after a JIT warm-up fixture.
"""

import time

import numpy as np
import pytest

from annulus_loewner import (
    CircleMeasure,
    EvolutionMap,
    IntegratorConfig,
    LebedevSpec,
    ScalarDriver,
    UnitCircleDriver,
    check_containment,
    check_index_preservation,
    check_inversion_symmetry,
    check_lifting,
    circle_mean,
    field_eval_many,
    fixed_point_field,
    integrate_mt,
    integrate_slit,
    p_bounds_check,
    probe_ring,
    radial_degenerate_field,
    rotation_field,
    to_canonical_field,
    villat_kernel,
    villat_kernel_grid,
    villat_reconstruct,
)
from annulus_loewner.battery import (
    lebedev_demo_spec,
    non_degenerate_battery,
    standard_battery,
)

from generators import random_p_spec, random_annulus_point
from oracles import rk4_fixed

RADII = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
CFG = IntegratorConfig()


def _report(number, name, passed, budget, elapsed, detail=""):
    tag = "PASS" if passed else "FAIL"
    print(
        f"[{tag}] criterion {number:02d} {name}: {detail} "
        f"({elapsed:.2f}s / budget {budget:.0f}s)"
    )
    assert passed, f"criterion {number} ({name}): {detail}"
    assert elapsed < budget, f"criterion {number} exceeded {budget}s: {elapsed:.2f}s"


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    villat_kernel(0.3, 0.5)
    villat_kernel_grid(0.3, np.array([0.5 + 0.1j]))
    spec = rotation_field(0.3, ScalarDriver.constant(1.0), 1.0)
    EvolutionMap(spec).evolve(0.0, 0.01, 0.5)
    field_eval_many(spec, np.array([0.5 + 0.0j]), 0.0)
    deg = radial_degenerate_field(1.0)
    EvolutionMap(deg).evolve(0.0, 0.01, 0.5)


def test_acceptance_01_kernel_identities():
    t0 = time.time()
    worst = 0.0
    for r in RADII:
        worst = max(worst, abs(villat_kernel(r, r) - 1.0))
        worst = max(worst, abs(villat_kernel(r, -r) - 1.0))
        worst = max(worst, abs(villat_kernel(r, -1.0)))
        rho = 0.5 * (1.0 + r)
        theta = 2.0 * np.pi * np.arange(4096) / 4096
        samples = villat_kernel_grid(r, rho * np.exp(1j * theta))
        worst = max(worst, abs(circle_mean(r, rho, samples) - 1.0))
    elapsed = time.time() - t0
    _report(1, "kernel identities", worst < 1e-10, 1.0, elapsed, f"max err {worst:.2e}")


def test_acceptance_02_root_of_unity_identity():
    t0 = time.time()
    rng = np.random.default_rng(202)
    worst = 0.0
    for n_roots in (2, 3, 5):
        for _ in range(200):
            r = rng.uniform(0.15, 0.75)
            rho = rng.uniform(r + 0.02 * (1 - r), 0.98)
            z = rho * np.exp(1j * rng.uniform(0, 2 * np.pi))
            lhs = sum(
                villat_kernel(r, z * np.exp(2j * np.pi * j / n_roots))
                for j in range(n_roots)
            )
            rhs = n_roots * villat_kernel(r**n_roots, z**n_roots)
            worst = max(worst, abs(lhs - rhs))
    elapsed = time.time() - t0
    _report(2, "root-of-unity identity", worst < 1e-9, 5.0, elapsed, f"max err {worst:.2e}")


def test_acceptance_03_villat_reconstruction():
    t0 = time.time()
    rng = np.random.default_rng(303)
    n = 8192
    theta = 2.0 * np.pi * np.arange(n) / n
    xi = np.exp(1j * theta)
    worst = 0.0
    for r in (0.3, 0.5):
        coeffs = {
            k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in range(-3, 4)
        }
        f = lambda z: sum(c * np.asarray(z, dtype=complex) ** k for k, c in coeffs.items())
        rho = 0.5 * (1.0 + r)
        outer = np.real(f(xi))
        inner = np.real(f(r * xi))
        im_mean = float(np.mean(np.imag(f(rho * xi))))
        for _ in range(8):
            z = random_annulus_point(rng, r, margin=0.08)
            got = villat_reconstruct(r, rho, outer, inner, im_mean, z)
            worst = max(worst, abs(got - f(z)))
    elapsed = time.time() - t0
    _report(3, "boundary reconstruction", worst < 1e-8, 10.0, elapsed, f"max err {worst:.2e}")


def test_acceptance_04_rotation_closed_form():
    t0 = time.time()
    rng = np.random.default_rng(404)
    worst = 0.0
    for theta_fn, driver in [
        (lambda t: t, ScalarDriver.constant(1.0)),
        (np.sin, ScalarDriver.cosine(1.0, 1.0)),
    ]:
        emap = EvolutionMap(rotation_field(0.3, driver, 4.0), CFG)
        for _ in range(50):
            s = rng.uniform(0.0, 1.5)
            t = s + rng.uniform(0.0, 1.5)
            z = random_annulus_point(rng, 0.3)
            want = z * np.exp(1j * (theta_fn(t) - theta_fn(s)))
            worst = max(worst, abs(emap.evolve(s, t, z) - want))
    elapsed = time.time() - t0
    _report(4, "rotation closed form", worst < 1e-8, 5.0, elapsed, f"max err {worst:.2e}")


def test_acceptance_05_degenerate_radial_closed_form():
    t0 = time.time()
    rng = np.random.default_rng(505)
    emap = EvolutionMap(radial_degenerate_field(4.0), CFG)
    worst = 0.0
    for _ in range(20):
        s = rng.uniform(0.0, 1.0)
        t = s + rng.uniform(0.0, 2.0)
        z = rng.uniform(0.05, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        want = z * np.exp(-(t - s))
        worst = max(worst, abs(emap.evolve(s, t, z) - want))
    elapsed = time.time() - t0
    _report(5, "degenerate radial closed form", worst < 1e-8, 2.0, elapsed, f"max err {worst:.2e}")


def test_acceptance_06_fixed_point_persistence():
    t0 = time.time()
    drifts = {}
    for n_points in (1, 3):
        emap = EvolutionMap(fixed_point_field(n_points, 0.2, 0.5, 3.0), CFG)
        worst = 0.0
        for j in range(n_points):
            zj = 0.5 * np.exp(2j * np.pi * j / n_points)
            traj = emap.trajectory(0.0, 3.0, zj)
            assert traj.complete
            worst = max(worst, float(np.max(np.abs(traj.values - zj))))
        drifts[n_points] = worst
    control = EvolutionMap(
        fixed_point_field(3, 0.2, 0.5, 3.0, alpha_offset=0.05), CFG
    )
    control_traj = control.trajectory(0.0, 3.0, 0.5 + 0.0j)
    control_drift = float(np.max(np.abs(control_traj.values - 0.5)))
    elapsed = time.time() - t0
    ok = max(drifts.values()) < 1e-6 and control_drift > 1e-3
    _report(
        6, "fixed-point persistence", ok, 30.0, elapsed,
        f"drift n1={drifts[1]:.2e} n3={drifts[3]:.2e} control={control_drift:.2e}",
    )


def _ef2_worst(emap, horizon, n_draws, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        s = rng.uniform(0.0, 0.5 * horizon)
        u = s + rng.uniform(0.0, 0.25 * horizon)
        t = u + rng.uniform(0.0, 0.25 * horizon)
        z = complex(probe_ring(emap, s, 1, int(rng.integers(1 << 31)))[0])
        worst = max(
            worst, abs(emap.evolve(s, t, z) - emap.evolve(u, t, emap.evolve(s, u, z)))
        )
    return worst


def test_acceptance_07_composition_law():
    t0 = time.time()
    worst = 0.0
    for sc in standard_battery():
        worst = max(worst, _ef2_worst(EvolutionMap(sc.spec, CFG), sc.horizon, 50, 707))
    loose_cfg = IntegratorConfig(rel_tol=1e-5, abs_tol=1e-7, h_max=0.5)
    tight_cfg = IntegratorConfig(rel_tol=1e-6, abs_tol=1e-8, h_max=0.5)
    loose = max(
        _ef2_worst(EvolutionMap(sc.spec, loose_cfg), sc.horizon, 15, 708)
        for sc in standard_battery()
    )
    tight = max(
        _ef2_worst(EvolutionMap(sc.spec, tight_cfg), sc.horizon, 15, 708)
        for sc in standard_battery()
    )
    elapsed = time.time() - t0
    ok = worst < 1e-6 and tight < loose / 4.0
    _report(
        7, "composition law", ok, 60.0, elapsed,
        f"max residual {worst:.2e}, shrink x{loose / tight:.1f}",
    )


def test_acceptance_08_containment():
    t0 = time.time()
    terminations = 0
    worst_violation = 0.0
    for sc in standard_battery():
        emap = EvolutionMap(sc.spec, CFG)
        report = check_containment(emap, sc.horizon, n_probes=6, seed=808, scenario=sc.name)
        by_name = {c.name: c for c in report.checks}
        terminations += int(by_name["boundary_terminations"].residual)
        if "containment_envelopes" in by_name:
            worst_violation = max(worst_violation, by_name["containment_envelopes"].residual)
    elapsed = time.time() - t0
    ok = terminations == 0 and worst_violation <= 10.0 * CFG.rel_tol + 1e-12
    _report(
        8, "containment", ok, 60.0, elapsed,
        f"terminations={terminations} envelope excess {worst_violation:.2e}",
    )


def test_acceptance_09_index_preservation():
    t0 = time.time()
    worst = 0.0
    for sc in non_degenerate_battery():
        emap = EvolutionMap(sc.spec, CFG)
        r0 = sc.spec.ds.radius(0.0)
        report = check_index_preservation(
            emap, 0.0, sc.horizon, 0.5 * (1.0 + r0), n_samples=512, scenario=sc.name
        )
        worst = max(worst, report.checks[0].residual)
    elapsed = time.time() - t0
    _report(9, "index preservation", worst < 1e-6, 30.0, elapsed, f"max dev {worst:.2e}")


def test_acceptance_10_lifting_commutation():
    t0 = time.time()
    worst = 0.0
    for sc in non_degenerate_battery():
        emap = EvolutionMap(sc.spec, CFG)
        report = check_lifting(emap, 0.0, sc.horizon, n_probes=20, seed=1010, scenario=sc.name)
        worst = max(worst, report.checks[0].residual)
    elapsed = time.time() - t0
    _report(10, "lifting commutation", worst < 1e-6, 30.0, elapsed, f"max residual {worst:.2e}")


def test_acceptance_11_driving_class_bounds():
    t0 = time.time()
    rng = np.random.default_rng(1111)
    violations = 0
    for _ in range(500):
        spec = random_p_spec(rng)
        z = random_annulus_point(rng, spec.r.r, margin=0.02)
        if not p_bounds_check(spec, z).passed:
            violations += 1
    elapsed = time.time() - t0
    _report(11, "driving-class bounds", violations == 0, 5.0, elapsed, f"{violations} violations")


def test_acceptance_12_slit_system():
    t0 = time.time()
    spec = lebedev_demo_spec()
    horizon = 3.0
    mt = integrate_mt(spec, horizon)
    band_ok = all(spec.r(t) < v < 1.0 for t, v in zip(mt.times, mt.values))
    emap = EvolutionMap(to_canonical_field(spec, mt), CFG)
    rng = np.random.default_rng(1212)
    worst = 0.0
    statuses_ok = True
    for _ in range(10):
        rho = rng.uniform(0.55, 1.9)
        zeta = rho * np.exp(1j * rng.uniform(0, 2 * np.pi))
        traj = integrate_slit(spec, zeta, horizon, CFG, mt=mt)
        statuses_ok = statuses_ok and traj.complete
        band_ok = band_ok and all(
            spec.r(t) < mt(t) < 1.0 for t in traj.times
        )
        canonical = mt(horizon) * emap.evolve(0.0, horizon, zeta / spec.M) / spec.r(horizon)
        worst = max(worst, abs(traj.endpoint - canonical))
    elapsed = time.time() - t0
    ok = band_ok and statuses_ok and worst < 1e-6
    _report(
        12, "slit system", ok, 60.0, elapsed,
        f"band_ok={band_ok} round-trip {worst:.2e}",
    )


def test_acceptance_13_inversion_symmetry():
    t0 = time.time()
    worst = 0.0
    for sc in non_degenerate_battery():
        emap = EvolutionMap(sc.spec, CFG)
        for z in probe_ring(emap, 0.0, 5, 1313):
            worst = max(worst, check_inversion_symmetry(emap, 0.0, sc.horizon, z))
    elapsed = time.time() - t0
    _report(13, "inversion symmetry", worst < 1e-6, 30.0, elapsed, f"max residual {worst:.2e}")


def test_acceptance_14_oracle_equivalence():
    t0 = time.time()
    worst = 0.0
    for sc in standard_battery():
        spec = sc.spec
        emap = EvolutionMap(spec, CFG)
        probes = probe_ring(emap, 0.0, 3, 1414)
        adaptive = np.array([emap.evolve(0.0, sc.horizon, z) for z in probes])
        oracle = rk4_fixed(
            lambda w, t: field_eval_many(spec, w, t),
            0.0,
            probes,
            sc.horizon,
            h=1e-5,
            breakpoints=spec.breakpoints(),
        )
        worst = max(worst, float(np.max(np.abs(adaptive - oracle))))
    elapsed = time.time() - t0
    _report(14, "oracle equivalence", worst < 1e-6, 120.0, elapsed, f"max err {worst:.2e}")
