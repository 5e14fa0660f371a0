"""The standard scenario battery: one named driving field per behavior the
library exercises end to end.

Tests, demos, and the command line all draw from this collection so that
"across the battery" means the same thing everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .domains import RadiusPath, validate
from .drivers import HerglotzPath, MeasurePath, ScalarDriver, UnitCircleDriver
from .fields import (
    FieldSpec,
    degenerate_field,
    fixed_point_field,
    radial_degenerate_field,
    rotation_field,
)
from .lebedev import LebedevSpec, integrate_mt, to_canonical_field
from .measures import CircleMeasure


@dataclass
class BatteryScenario:
    """Named field with the horizon its checks run over."""

    name: str
    horizon: float
    _build: Callable[[], FieldSpec]
    _spec: Optional[FieldSpec] = None

    @property
    def spec(self) -> FieldSpec:
        if self._spec is None:
            self._spec = self._build()
        return self._spec

    @property
    def degenerate(self) -> bool:
        return self.spec.degenerate


def _generic_mixed() -> FieldSpec:
    path = RadiusPath.exponential(0.35, 0.4)
    ds = validate(path, 2.0)
    mu1 = CircleMeasure(atoms=((0.7, 0.3), (2.1, 0.2)), uniform_mass=0.1)
    mu2 = CircleMeasure(atoms=((4.0, 0.15),), uniform_mass=0.25)
    return FieldSpec(
        ds=ds, C=ScalarDriver.cosine(0.5, 2.0), measures=MeasurePath.static(mu1, mu2)
    )


def _degenerate_generic() -> FieldSpec:
    q = HerglotzPath.static(CircleMeasure(atoms=((1.1, 0.7),), uniform_mass=0.3))
    return degenerate_field(
        ScalarDriver.constant(0.6), q, horizon=2.0, c_driver=ScalarDriver.constant(0.25)
    )


def lebedev_demo_spec() -> LebedevSpec:
    return LebedevSpec(
        m=0.5,
        M=2.0,
        lam=ScalarDriver.constant(0.6),
        kappa1=UnitCircleDriver.rotating(1.0),
        kappa2=UnitCircleDriver.rotating(-0.5),
    )


def _lebedev_canonical() -> FieldSpec:
    spec = lebedev_demo_spec()
    return to_canonical_field(spec, integrate_mt(spec, 3.0))


def standard_battery() -> list:
    """All scenarios, in a stable order."""
    return [
        BatteryScenario(
            "rotation_const", math.pi,
            lambda: rotation_field(0.3, ScalarDriver.constant(1.0), math.pi),
        ),
        BatteryScenario(
            "rotation_sine", math.pi,
            lambda: rotation_field(0.3, ScalarDriver.cosine(1.0, 1.0), math.pi),
        ),
        BatteryScenario(
            "fixed_points_n1", 3.0, lambda: fixed_point_field(1, 0.2, 0.5, 3.0)
        ),
        BatteryScenario(
            "fixed_points_n3", 3.0, lambda: fixed_point_field(3, 0.2, 0.5, 3.0)
        ),
        BatteryScenario("generic_mixed", 2.0, _generic_mixed),
        BatteryScenario(
            "degenerate_radial", 3.0, lambda: radial_degenerate_field(3.0)
        ),
        BatteryScenario("degenerate_generic", 2.0, _degenerate_generic),
        BatteryScenario("lebedev_canonical", 3.0, _lebedev_canonical),
    ]


def non_degenerate_battery() -> list:
    return [sc for sc in standard_battery() if not sc.degenerate]
