"""Vector-field construction, conjugation, and growth bounds."""

import numpy as np
import pytest

from annulus_loewner.domains import RadiusPath, validate
from annulus_loewner.drivers import HerglotzPath, MeasurePath, ScalarDriver
from annulus_loewner.errors import DomainError, NormalizationError
from annulus_loewner.fields import (
    FieldSpec,
    degenerate_field,
    field_conjugate,
    field_eval,
    field_eval_many,
    fixed_point_field,
    radial_degenerate_field,
    rotation_field,
    whvf_bound,
    whvf_majorant_integral,
)
from annulus_loewner.measures import CircleMeasure

from generators import random_annulus_point


def generic_field(horizon=2.0):
    """Exponentially shrinking system with a static atoms+uniform pair."""
    path = RadiusPath.exponential(0.35, 0.4)
    ds = validate(path, horizon)
    mu1 = CircleMeasure(atoms=((0.7, 0.3), (2.1, 0.2)), uniform_mass=0.1)
    mu2 = CircleMeasure(atoms=((4.0, 0.15),), uniform_mass=0.25)
    return FieldSpec(
        ds=ds,
        C=ScalarDriver.cosine(0.5, 2.0),
        measures=MeasurePath.static(mu1, mu2),
    )


class TestFieldEval:
    def test_rotation_is_ic_times_w(self):
        spec = rotation_field(0.3, ScalarDriver.constant(1.0), horizon=4.0)
        for w in [0.5, 0.4 + 0.3j, -0.8j]:
            assert field_eval(spec, w, 1.3) == pytest.approx(1j * w, abs=1e-15)

    def test_vanishes_at_pinned_points(self):
        spec = fixed_point_field(3, 0.2, 0.5, horizon=3.0)
        for t in [0.0, 0.5, 1.0, 2.5]:
            for j in range(3):
                zj = 0.5 * np.exp(2j * np.pi * j / 3)
                assert abs(field_eval(spec, zj, t)) < 1e-10

    def test_degenerate_radial_contraction(self):
        spec = radial_degenerate_field(horizon=3.0)
        for w in [0.3, 0.2 - 0.1j]:
            assert field_eval(spec, w, 0.7) == pytest.approx(-w, abs=1e-15)

    def test_degenerate_origin_limit(self):
        alpha = ScalarDriver.constant(0.6)
        q = HerglotzPath.static(CircleMeasure(atoms=((1.1, 0.7),), uniform_mass=0.3))
        spec = degenerate_field(alpha, q, horizon=2.0, c_driver=ScalarDriver.constant(0.25))
        w = 1e-6
        ratio = field_eval(spec, w, 0.5) / w
        assert abs(ratio - (1j * 0.25 - 0.6)) < 1e-5

    def test_strict_domain_check(self):
        spec = rotation_field(0.3, ScalarDriver.constant(1.0), horizon=4.0)
        with pytest.raises(DomainError):
            field_eval(spec, 0.1, 0.0)
        assert field_eval(spec, 0.1, 0.0, strict=False) == pytest.approx(0.1j)

    def test_many_matches_scalar(self, rng):
        spec = generic_field()
        ws = np.array([random_annulus_point(rng, 0.35) for _ in range(16)])
        vals = field_eval_many(spec, ws, 0.8)
        for w, v in zip(ws, vals):
            assert abs(field_eval(spec, w, 0.8) - v) < 1e-15

    def test_contracting_real_part_without_second_measure(self, rng):
        path = RadiusPath.exponential(0.3, 1.0)
        ds = validate(path, 2.0)
        spec = FieldSpec(
            ds=ds,
            C=ScalarDriver.constant(0.7),
            measures=MeasurePath.static(
                CircleMeasure(atoms=((0.4, 0.6),), uniform_mass=0.4),
                CircleMeasure.zero(),
            ),
        )
        for _ in range(40):
            t = rng.uniform(0.0, 2.0)
            w = random_annulus_point(rng, spec.ds.radius(t))
            assert (field_eval(spec, w, t) / w).real <= 1e-12

    def test_normalization_violation_surfaces(self):
        path = RadiusPath.exponential(0.3, 1.0)
        ds = validate(path, 2.0)
        bad = MeasurePath.from_callable(
            lambda t: (CircleMeasure.uniform(0.9), CircleMeasure.zero())
        )
        spec = FieldSpec(ds=ds, measures=bad)
        with pytest.raises(NormalizationError):
            field_eval(spec, 0.5, 0.3)

    def test_mixed_system_rejected(self):
        path = RadiusPath.custom(
            r_fn=lambda t: max(0.0, 0.2 * (1.0 - t)),
            dr_fn=lambda t: -0.2 if t < 1.0 else 0.0,
            breakpoints=(1.0,),
        )
        ds = validate(path, 3.0)
        with pytest.raises(DomainError):
            FieldSpec(ds=ds, measures=MeasurePath.static(
                CircleMeasure.uniform(1.0), CircleMeasure.zero()
            ))


class TestConjugate:
    def test_rotation_flips_driver_sign(self):
        spec = rotation_field(0.3, ScalarDriver.constant(1.0), horizon=4.0)
        conj = field_conjugate(spec)
        for w in [0.5, 0.4 + 0.3j]:
            assert field_eval(conj, w, 0.9) == pytest.approx(-1j * w, abs=1e-15)

    def test_involution_pointwise(self, rng):
        spec = generic_field()
        back = field_conjugate(field_conjugate(spec))
        for _ in range(10):
            t = rng.uniform(0.0, 2.0)
            w = random_annulus_point(rng, spec.ds.radius(t))
            assert abs(field_eval(back, w, t) - field_eval(spec, w, t)) < 1e-12

    def test_conjugate_matches_reflected_formula(self, rng):
        # G~(w,t)/w = -iC(t) + (r'/r)(1 - p(r(t)/w, t))
        spec = generic_field()
        conj = field_conjugate(spec)
        for _ in range(10):
            t = rng.uniform(0.0, 2.0)
            rv = spec.ds.radius(t)
            w = random_annulus_point(rng, rv, margin=0.1)
            lhs = field_eval(conj, w, t) / w
            g_at_reflect = field_eval(spec, rv / w, t) / (rv / w)
            c = spec.C.value(t)
            logdr = spec.ds.radius_derivative(t) / rv
            p_reflect = (g_at_reflect - 1j * c) / logdr
            rhs = -1j * c + logdr * (1.0 - p_reflect)
            assert abs(lhs - rhs) < 1e-10

    def test_degenerate_unsupported(self):
        with pytest.raises(DomainError):
            field_conjugate(radial_degenerate_field(2.0))


class TestGrowthBound:
    def test_rotation_band_gives_sup_c(self):
        spec = rotation_field(0.25, ScalarDriver.cosine(2.0, 3.0), horizon=4.0)
        assert whvf_bound(spec, (0.4, 0.8), 4.0) == pytest.approx(2.0, abs=1e-6)

    def test_static_system_sup_c(self):
        spec = rotation_field(0.25, ScalarDriver.constant(-1.5), horizon=4.0)
        assert whvf_bound(spec, (0.3, 0.9), 2.0) == pytest.approx(1.5)

    def test_dominates_field_on_box_grid(self):
        spec = fixed_point_field(3, 0.2, 0.5, horizon=1.0)
        bound = whvf_bound(spec, (0.3, 0.8), 1.0)
        assert np.isfinite(bound) and bound > 0.0
        rads = np.linspace(0.3, 0.8, 64)
        ts = np.linspace(0.0, 1.0, 64)
        angles = np.array([0.0, 0.9, 2.33, 4.1, 5.7])
        ws = (rads[:, None] * np.exp(1j * angles[None, :])).ravel()
        worst = 0.0
        for t in ts:
            vals = np.abs(field_eval_many(spec, ws, t))
            worst = max(worst, float(vals.max()))
        assert worst <= bound + 1e-9

    def test_band_validation(self):
        spec = fixed_point_field(3, 0.2, 0.5, horizon=1.0)
        with pytest.raises(DomainError):
            whvf_bound(spec, (0.1, 0.8), 1.0)
        with pytest.raises(DomainError):
            whvf_bound(spec, (0.5, 0.4), 1.0)

    def test_majorant_integral_scales(self):
        spec = generic_field()
        full = whvf_majorant_integral(spec, (0.5, 0.9), 0.0, 2.0)
        half = whvf_majorant_integral(spec, (0.5, 0.9), 0.0, 1.0)
        assert full > half > 0.0
