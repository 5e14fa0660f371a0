"""Slit-evolution system: state band, oracle match, canonical reduction."""

import numpy as np
import pytest

from annulus_loewner.drivers import ScalarDriver, UnitCircleDriver
from annulus_loewner.errors import DomainError
from annulus_loewner.lebedev import (
    LebedevSpec,
    MT_CONFIG,
    integrate_mt,
    integrate_slit,
    long_time_monitor,
    to_canonical_field,
)
from annulus_loewner.ode import COMPLETE, EvolutionMap, IntegratorConfig

from oracles import rk4_fixed


def demo_spec(lam=0.6, om1=1.0, om2=-0.5):
    return LebedevSpec(
        m=0.5,
        M=2.0,
        lam=ScalarDriver.constant(lam),
        kappa1=UnitCircleDriver.rotating(om1),
        kappa2=UnitCircleDriver.rotating(om2),
    )


class TestMtPath:
    def test_initial_value(self):
        mt = integrate_mt(demo_spec(), 0.0)
        assert mt(0.0) == 0.5

    def test_band_holds_along_path(self):
        spec = demo_spec()
        mt = integrate_mt(spec, 3.0)
        for t, v in zip(mt.times, mt.values):
            assert spec.r(t) < v < 1.0

    def test_pure_outer_drive_grows_below_one(self):
        # lam = 0 and kappa2 = 1: the drift K_r(r/m_t) - 1 is nonnegative on
        # the positive real axis and vanishes as m_t -> 1.
        spec = LebedevSpec(
            m=0.5,
            M=2.0,
            lam=ScalarDriver.constant(0.0),
            kappa1=UnitCircleDriver.rotating(1.0),
            kappa2=UnitCircleDriver.constant_angle(0.0),
        )
        mt = integrate_mt(spec, 4.0)
        diffs = np.diff(mt.values)
        assert np.all(diffs >= -1e-14)
        assert np.all(mt.values < 1.0)

    def test_matches_fixed_step_oracle(self):
        spec = demo_spec()
        mt = integrate_mt(spec, 2.0)
        from annulus_loewner.lebedev import _mt_rhs
        from annulus_loewner.kernels import DEFAULT_KERNEL_CONFIG

        raw = _mt_rhs(spec, DEFAULT_KERNEL_CONFIG)
        want = rk4_fixed(lambda m, t: raw(m, t, False), 0.0, complex(0.5), 2.0, h=1e-5)
        assert abs(mt(2.0) - want.real) < 1e-7

    def test_hermite_interpolation_consistency(self):
        # interpolated values between samples stay within the band and agree
        # with a direct re-integration to the query time
        spec = demo_spec()
        mt = integrate_mt(spec, 2.0)
        short = integrate_mt(spec, 1.37)
        assert abs(mt(1.37) - short.values[-1]) < 1e-9

    def test_csv_export(self, tmp_path):
        mt = integrate_mt(demo_spec(), 1.0)
        out = tmp_path / "mt.csv"
        mt.write_csv(out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,m_t"
        assert len(lines) == len(mt.times) + 1


class TestSlit:
    def test_initial_value(self):
        spec = demo_spec()
        traj = integrate_slit(spec, 1.2 + 0.4j, 0.0)
        assert traj.endpoint == 1.2 + 0.4j

    def test_seed_domain_checked(self):
        spec = demo_spec()
        with pytest.raises(DomainError):
            integrate_slit(spec, 0.3, 1.0)
        with pytest.raises(DomainError):
            integrate_slit(spec, 2.5, 1.0)

    def test_round_trip_with_canonical_field(self):
        spec = demo_spec()
        horizon = 3.0
        mt = integrate_mt(spec, horizon)
        emap = EvolutionMap(to_canonical_field(spec, mt))
        rng = np.random.default_rng(5)
        for _ in range(6):
            rho = rng.uniform(0.55, 1.9)
            zeta = rho * np.exp(1j * rng.uniform(0, 2 * np.pi))
            traj = integrate_slit(spec, zeta, horizon, mt=mt)
            assert traj.status == COMPLETE
            direct = traj.endpoint
            canonical = mt(horizon) * emap.evolve(0.0, horizon, zeta / 2.0) / spec.r(horizon)
            assert abs(direct - canonical) < 1e-6

    def test_image_loop_winding_preserved(self):
        spec = demo_spec()
        horizon = 1.5
        mt = integrate_mt(spec, horizon)
        n = 512
        loop = 1.0 * np.exp(2j * np.pi * np.arange(n) / n)
        images = np.array(
            [integrate_slit(spec, z, horizon, mt=mt).endpoint for z in loop]
        )
        closed = np.append(images, images[0])
        total = np.sum(np.angle(closed[1:] / closed[:-1]))
        assert abs(total / (2 * np.pi) - 1.0) < 1e-6


class TestCanonicalField:
    def test_measure_normalization(self):
        spec = demo_spec(lam=0.37)
        mt = integrate_mt(spec, 1.0)
        fs = to_canonical_field(spec, mt)
        for t in [0.0, 0.3, 0.9]:
            mu1, mu2 = fs.measures.measures(t)
            assert mu1.total_mass + mu2.total_mass == pytest.approx(1.0)

    def test_pure_inner_drive_is_single_atom(self):
        spec = demo_spec(lam=1.0)
        mt = integrate_mt(spec, 1.0)
        fs = to_canonical_field(spec, mt)
        mu1, mu2 = fs.measures.measures(0.7)
        assert mu1.total_mass == pytest.approx(0.0)
        assert mu2.total_mass == pytest.approx(1.0)
        assert mu2.atoms[0][0] == pytest.approx(spec.kappa1.angle(0.7) % (2 * np.pi))

    def test_radius_path_matches(self):
        spec = demo_spec()
        mt = integrate_mt(spec, 1.0)
        fs = to_canonical_field(spec, mt)
        for t in [0.0, 0.5, 1.0]:
            assert fs.ds.radius(t) == pytest.approx(spec.r(t))


class TestMonitor:
    def test_table_shape_and_determinism(self):
        spec = demo_spec()
        zetas = [0.8, 1.5j, -1.2]
        a = long_time_monitor(spec, zetas, [1.0, 2.0, 3.0])
        b = long_time_monitor(spec, zetas, [1.0, 2.0, 3.0])
        assert a.sup_increments == b.sup_increments
        assert len(a.rows()) == 2

    def test_increments_shrink_for_steady_drive(self):
        spec = LebedevSpec(
            m=0.5,
            M=2.0,
            lam=ScalarDriver.constant(0.5),
            kappa1=UnitCircleDriver.constant_angle(0.0),
            kappa2=UnitCircleDriver.constant_angle(0.0),
        )
        table = long_time_monitor(spec, [1.3, 0.7j], [1.0, 2.0, 3.0, 4.0])
        assert table.sup_increments[-1] < table.sup_increments[0]

    def test_csv_export(self, tmp_path):
        table = long_time_monitor(demo_spec(), [1.1], [0.5, 1.0])
        out = tmp_path / "monitor.csv"
        table.write_csv(out)
        assert out.read_text().startswith("t_from,t_to,sup_increment")
