"""Villat/Schwarz kernels, the modulus map, and boundary reconstruction.

The Villat kernel

    K_r(z) = (1+z)/(1-z) + sum_{k>=1} 2 r^{2k} (z^k - z^{-k}) / (1 - r^{2k}),

defined for an inner radius r in [0, 1), plays the role on the annulus
A_r = {r < |z| < 1} that the Schwarz kernel K_0(z) = (1+z)/(1-z) plays on
the unit disk.  Its defining identities (K_r(+-r) = 1, K_r(-1) = 0, circle
mean 1) are exercised by the test suite.  The series above converges
geometrically on r^2 < |z| <= 1 away from the poles on the positive real
axis, so boundary values such as K_r(-1) are evaluated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._core import (
    STATUS_OK,
    kernel_series,
    kernel_series_many,
)
from .errors import ConvergenceError, DomainError, PoleProximityError

#: Absolute distance below which evaluation near a kernel pole is refused.
POLE_GUARD = 1e-9

#: Slack for |z| <= 1 checks, to admit points placed on the circle by fp math.
_RIM_SLACK = 1e-12


@dataclass(frozen=True)
class AnnulusParam:
    """Inner radius of a canonical annulus A_r = {r < |z| < 1}.

    r = 0 flags the degenerate (punctured disk) limit.
    """

    r: float

    def __post_init__(self):
        if not (0.0 <= self.r < 1.0) or not math.isfinite(self.r):
            raise DomainError(f"inner radius must lie in [0, 1), got {self.r}")

    @property
    def degenerate(self) -> bool:
        return self.r == 0.0


@dataclass(frozen=True)
class KernelEvalConfig:
    """Series truncation controls for kernel evaluation."""

    rel_tol: float = 1e-12
    max_terms: int = 512

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise DomainError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if self.max_terms < 8:
            raise DomainError(f"max_terms must be >= 8, got {self.max_terms}")


DEFAULT_KERNEL_CONFIG = KernelEvalConfig()


def as_annulus(r) -> AnnulusParam:
    """Coerce a float or AnnulusParam into an AnnulusParam."""
    if isinstance(r, AnnulusParam):
        return r
    return AnnulusParam(float(r))


def omega(r) -> float:
    """Conformal modulus parameter of A_r: -pi/log r, and 0 at r = 0."""
    rv = as_annulus(r).r
    if rv == 0.0:
        return 0.0
    return -math.pi / math.log(rv)


def _check_kernel_domain(rv: float, z: complex) -> None:
    az = abs(z)
    if rv == 0.0:
        if az > 1.0 + _RIM_SLACK:
            raise DomainError(f"|z| = {az} exceeds 1 for the disk kernel")
        if abs(z - 1.0) < POLE_GUARD:
            raise PoleProximityError("z is within the guard distance of the pole at 1")
        return
    if az <= rv * rv or az > 1.0 + _RIM_SLACK:
        raise DomainError(
            f"|z| = {az} outside the convergence ring ({rv**2}, 1] for r = {rv}"
        )
    # In-ring poles on the positive real axis: z = 1 (nu = 0) and z = r^2 (nu = 1).
    if abs(z - 1.0) < POLE_GUARD or abs(z - rv * rv) < POLE_GUARD:
        raise PoleProximityError("z is within the guard distance of a kernel pole")


def villat_kernel(r, z, cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG) -> complex:
    """Evaluate K_r at a single point.

    Parameters
    ----------
    r : AnnulusParam or float
        Inner radius; r = 0 selects the exact Schwarz kernel (1+z)/(1-z).
    z : complex
        Point with r^2 < |z| <= 1, away from the poles at 1 and r^2.
    cfg : KernelEvalConfig
        Truncation tolerance and term cap for the Laurent series.
    """
    rv = as_annulus(r).r
    z = complex(z)
    _check_kernel_domain(rv, z)
    value, status = kernel_series(rv, z, cfg.rel_tol, cfg.max_terms)
    if status != STATUS_OK:
        raise ConvergenceError(
            f"kernel series did not reach rel_tol={cfg.rel_tol} in {cfg.max_terms} terms"
        )
    return complex(value)


def villat_kernel_grid(r, zs, cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG) -> np.ndarray:
    """Vectorized K_r over an array of points (same domain rules per point)."""
    rv = as_annulus(r).r
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    for z in zs.flat:
        _check_kernel_domain(rv, complex(z))
    out, status = kernel_series_many(rv, zs.ravel(), cfg.rel_tol, cfg.max_terms)
    if status != STATUS_OK:
        raise ConvergenceError(
            f"kernel series did not reach rel_tol={cfg.rel_tol} in {cfg.max_terms} terms"
        )
    return out.reshape(zs.shape)


def circle_mean(r, rho: float, samples) -> complex:
    """Trapezoid mean of boundary samples over the circle |xi| = rho.

    ``samples`` must hold values f(rho * exp(2 pi i k / n)) on a uniform
    angular grid with n >= 16.  For a periodic integrand on a uniform grid
    the trapezoid rule reduces to the plain mean, which is spectrally
    accurate; applied to K_r it recovers the free Laurent term 1.
    """
    rv = as_annulus(r).r
    if not (rv < rho < 1.0):
        raise DomainError(f"rho = {rho} outside ({rv}, 1)")
    samples = np.asarray(samples)
    if samples.size < 16:
        raise DomainError(f"need at least 16 samples, got {samples.size}")
    return complex(np.mean(samples))


def villat_reconstruct(
    r,
    rho: float,
    outer_re,
    inner_re,
    im_mean: float,
    z: complex,
    cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG,
) -> complex:
    """Recover an interior value of a holomorphic function from boundary data.

    Implements the three-integral reconstruction

        f(z) = mean_k K_r(z / xi_k) Re f(xi_k)
             + mean_k [K_r(r xi_k / z) - 1] Re f(r xi_k)
             + i * im_mean,

    where xi_k runs over a uniform grid on the unit circle, ``outer_re`` and
    ``inner_re`` sample Re f on |xi| = 1 and |xi| = r, and ``im_mean`` is the
    mean of Im f over |xi| = rho for any rho in [r, 1].  Exact for Laurent
    polynomials up to quadrature plus kernel tolerance.
    """
    rv = as_annulus(r).r
    z = complex(z)
    az = abs(z)
    if not (rv < az < 1.0):
        raise DomainError(f"z must lie in the open annulus ({rv}, 1), |z| = {az}")
    if not (rv <= rho <= 1.0):
        raise DomainError(f"rho = {rho} outside [{rv}, 1]")
    outer_re = np.asarray(outer_re, dtype=np.float64)
    inner_re = np.asarray(inner_re, dtype=np.float64)
    if outer_re.shape != inner_re.shape or outer_re.ndim != 1:
        raise DomainError("outer and inner boundary samples must be 1-d and equal length")
    n = outer_re.size
    if n < 16:
        raise DomainError(f"need at least 16 boundary nodes, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    xi = np.exp(1j * theta)
    outer_term = np.mean(villat_kernel_grid(rv, z * np.conj(xi), cfg) * outer_re)
    if rv == 0.0:
        # Inner circle collapses to a point and K_0(0) - 1 = 0 kills the term.
        inner_term = 0.0
    else:
        inner_term = np.mean((villat_kernel_grid(rv, rv * xi / z, cfg) - 1.0) * inner_re)
    return complex(outer_term + inner_term + 1j * im_mean)
