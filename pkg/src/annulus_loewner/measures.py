"""Positive measures on the unit circle and the two-measure driving class.

A measure is a finite list of atoms plus a uniform component.  A pair of
such measures with unit total mass drives a holomorphic function on the
annulus through the Villat kernel:

    p(z) = int K_r(z/xi) dmu1(xi) + int [1 - K_r(r xi / z)] dmu2(xi).

The same atoms+uniform model, with a single unit measure and the Schwarz
kernel, realizes normalized Herglotz functions on the disk (q(0) = 1,
Re q >= 0) for the degenerate case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import (
    STATUS_OK,
    caratheodory_core,
    caratheodory_many,
    p_eval_core,
    p_eval_many,
)
from .errors import ConvergenceError, DomainError, NormalizationError
from .kernels import (
    DEFAULT_KERNEL_CONFIG,
    AnnulusParam,
    KernelEvalConfig,
    as_annulus,
    villat_kernel,
)

TWO_PI = 2.0 * math.pi

#: Atoms closer than this (radians) are merged, masses added.
ATOM_MERGE_TOL = 1e-12

#: Allowed deviation from unit total mass for normalized measure pairs.
MASS_TOL = 1e-12


def _coalesce(atoms):
    """Sort atoms by angle and merge near-duplicates, including the wrap."""
    if not atoms:
        return ()
    atoms = sorted(atoms)
    merged = [list(atoms[0])]
    for angle, mass in atoms[1:]:
        if angle - merged[-1][0] < ATOM_MERGE_TOL:
            merged[-1][1] += mass
        else:
            merged.append([angle, mass])
    if len(merged) > 1 and (merged[0][0] + TWO_PI) - merged[-1][0] < ATOM_MERGE_TOL:
        merged[0][1] += merged.pop()[1]
    return tuple((a, m) for a, m in merged)


@dataclass(frozen=True)
class CircleMeasure:
    """Finite positive measure on the unit circle: atoms plus a uniform part.

    Atom angles are stored mod 2*pi; atoms closer than ATOM_MERGE_TOL are
    coalesced with masses added.
    """

    atoms: tuple = ()
    uniform_mass: float = 0.0

    def __post_init__(self):
        cleaned = []
        for angle, mass in self.atoms:
            angle = float(angle)
            mass = float(mass)
            if not math.isfinite(angle):
                raise DomainError(f"atom angle must be finite, got {angle}")
            if not (mass >= 0.0 and math.isfinite(mass)):
                raise DomainError(f"atom mass must be finite and >= 0, got {mass}")
            cleaned.append((angle % TWO_PI, mass))
        if not (self.uniform_mass >= 0.0 and math.isfinite(self.uniform_mass)):
            raise DomainError(f"uniform mass must be finite and >= 0, got {self.uniform_mass}")
        object.__setattr__(self, "atoms", _coalesce(cleaned))
        object.__setattr__(self, "uniform_mass", float(self.uniform_mass))

    @classmethod
    def uniform(cls, mass: float = 1.0) -> "CircleMeasure":
        return cls(atoms=(), uniform_mass=mass)

    @classmethod
    def point(cls, angle: float, mass: float = 1.0) -> "CircleMeasure":
        return cls(atoms=((angle, mass),))

    @classmethod
    def zero(cls) -> "CircleMeasure":
        return cls()

    @property
    def total_mass(self) -> float:
        return math.fsum(m for _, m in self.atoms) + self.uniform_mass

    def reflected(self) -> "CircleMeasure":
        """Push-forward under complex conjugation: atom angles negated."""
        return CircleMeasure(
            atoms=tuple((-a, m) for a, m in self.atoms),
            uniform_mass=self.uniform_mass,
        )

    def as_arrays(self):
        angles = np.array([a for a, _ in self.atoms], dtype=np.float64)
        masses = np.array([m for _, m in self.atoms], dtype=np.float64)
        return angles, masses

    def to_json(self) -> dict:
        return {
            "atoms": [{"angle": a, "mass": m} for a, m in self.atoms],
            "uniform": self.uniform_mass,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "CircleMeasure":
        atoms = tuple((a["angle"], a["mass"]) for a in payload.get("atoms", []))
        return cls(atoms=atoms, uniform_mass=payload.get("uniform", 0.0))


@dataclass(frozen=True)
class ParametricPSpec:
    """Driving pair (mu1, mu2) over an annulus, normalized to unit total mass.

    The constructor rejects violations of mu1(T) + mu2(T) = 1 beyond MASS_TOL
    instead of renormalizing, so configuration bugs fail loudly.
    """

    r: AnnulusParam
    mu1: CircleMeasure
    mu2: CircleMeasure

    def __post_init__(self):
        object.__setattr__(self, "r", as_annulus(self.r))
        if self.r.degenerate:
            raise DomainError("two-measure driving class requires r > 0")
        total = self.mu1.total_mass + self.mu2.total_mass
        if abs(total - 1.0) > MASS_TOL:
            raise NormalizationError(
                f"mu1(T) + mu2(T) = {total!r} deviates from 1 beyond {MASS_TOL}"
            )


def _check_annulus_point(rv: float, z: complex) -> None:
    az = abs(z)
    if not (rv < az < 1.0):
        raise DomainError(f"|z| = {az} outside the open annulus ({rv}, 1)")


def p_eval(
    spec: ParametricPSpec, z: complex, cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG
) -> complex:
    """Evaluate the driving function p at a point of the open annulus."""
    z = complex(z)
    _check_annulus_point(spec.r.r, z)
    a1, m1 = spec.mu1.as_arrays()
    a2, m2 = spec.mu2.as_arrays()
    value, status = p_eval_core(
        spec.r.r, a1, m1, spec.mu1.uniform_mass, a2, m2, spec.mu2.uniform_mass,
        z, cfg.rel_tol, cfg.max_terms,
    )
    if status != STATUS_OK:
        raise ConvergenceError("kernel series did not converge inside p_eval")
    return complex(value)


def p_eval_grid(
    spec: ParametricPSpec, zs, cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG
) -> np.ndarray:
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    for z in zs.flat:
        _check_annulus_point(spec.r.r, complex(z))
    a1, m1 = spec.mu1.as_arrays()
    a2, m2 = spec.mu2.as_arrays()
    out, status = p_eval_many(
        spec.r.r, a1, m1, spec.mu1.uniform_mass, a2, m2, spec.mu2.uniform_mass,
        zs.ravel(), cfg.rel_tol, cfg.max_terms,
    )
    if status != STATUS_OK:
        raise ConvergenceError("kernel series did not converge inside p_eval_grid")
    return out.reshape(zs.shape)


def p_free_term(spec: ParametricPSpec) -> float:
    """Free Laurent term of p: the total mass of the first measure."""
    return spec.mu1.total_mass


def p_conjugate(spec: ParametricPSpec) -> ParametricPSpec:
    """Spec of the reflected function 1 - p(r/z): measures swapped and conjugated."""
    return ParametricPSpec(spec.r, spec.mu2.reflected(), spec.mu1.reflected())


@dataclass(frozen=True)
class PBoundsDiagnostic:
    """Evaluated growth bounds for a driving function at one point."""

    abs_p: float
    abs_bound: float
    neg_re_p: float
    neg_re_bound: float

    @property
    def abs_ok(self) -> bool:
        return self.abs_p <= self.abs_bound + 1e-9

    @property
    def re_ok(self) -> bool:
        return self.neg_re_p <= self.neg_re_bound + 1e-9

    @property
    def passed(self) -> bool:
        return self.abs_ok and self.re_ok


def p_bounds_check(
    spec: ParametricPSpec, z: complex, cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG
) -> PBoundsDiagnostic:
    """Check |p(z)| and -Re p(z) against their closed-form majorants.

    |p(z)|   <= mu1(T) + (2/(1-r)) (|z|/(1-|z|) + r/(|z|-r)),
    -Re p(z) <= (K_r(r/|z|) - 1) mu2(T).
    """
    z = complex(z)
    rv = spec.r.r
    _check_annulus_point(rv, z)
    value = p_eval(spec, z, cfg)
    az = abs(z)
    abs_bound = spec.mu1.total_mass + (2.0 / (1.0 - rv)) * (
        az / (1.0 - az) + rv / (az - rv)
    )
    neg_re_bound = (villat_kernel(rv, rv / az, cfg).real - 1.0) * spec.mu2.total_mass
    return PBoundsDiagnostic(
        abs_p=abs(value),
        abs_bound=abs_bound,
        neg_re_p=-value.real,
        neg_re_bound=neg_re_bound,
    )


def caratheodory_p_eval(measure: CircleMeasure, z: complex) -> complex:
    """Normalized Herglotz function of a unit measure, q(0) = 1, Re q >= 0.

    q(z) = sum_i m_i (xi_i + z)/(xi_i - z) + uniform_mass, an exact finite
    sum of Schwarz-kernel terms.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} must be < 1")
    if abs(measure.total_mass - 1.0) > MASS_TOL:
        raise NormalizationError(
            f"Herglotz measure must have unit mass, got {measure.total_mass!r}"
        )
    angles, masses = measure.as_arrays()
    return complex(caratheodory_core(angles, masses, measure.uniform_mass, z))


def caratheodory_p_eval_grid(measure: CircleMeasure, zs) -> np.ndarray:
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    if np.any(np.abs(zs) >= 1.0):
        raise DomainError("all points must satisfy |z| < 1")
    if abs(measure.total_mass - 1.0) > MASS_TOL:
        raise NormalizationError(
            f"Herglotz measure must have unit mass, got {measure.total_mass!r}"
        )
    angles, masses = measure.as_arrays()
    out = caratheodory_many(angles, masses, measure.uniform_mass, zs.ravel())
    return out.reshape(zs.shape)
