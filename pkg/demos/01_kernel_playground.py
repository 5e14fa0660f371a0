"""Kernel warm-up: identities, circle means, and boundary reconstruction.

The annulus kernel K_r generalizes the Schwarz kernel (1+z)/(1-z) of the
disk.  This script checks its textbook identities numerically, shows the
unit circle-mean property that makes uniform measures invisible on the
second slot, and reconstructs a Laurent polynomial from boundary data.

Run:  python3 demos/01_kernel_playground.py
"""

import numpy as np

from annulus_loewner import (
    circle_mean,
    omega,
    villat_kernel,
    villat_kernel_grid,
    villat_reconstruct,
)

print("=== pointwise identities ===")
print(f"{'r':>5} {'K_r(r)':>22} {'K_r(-r)':>22} {'K_r(-1)':>12}")
for r in [0.1, 0.3, 0.5, 0.7]:
    print(
        f"{r:5.2f} {villat_kernel(r, r).real:22.16f} "
        f"{villat_kernel(r, -r).real:22.16f} {abs(villat_kernel(r, -1.0)):12.3e}"
    )

print()
print("=== disk limit r = 0 ===")
print(f"K_0(0.5) = {villat_kernel(0.0, 0.5).real}  (Schwarz kernel gives 3)")

print()
print("=== circle mean is 1 on every intermediate circle ===")
n = 4096
theta = 2.0 * np.pi * np.arange(n) / n
for r, rho in [(0.3, 0.5), (0.3, 0.9), (0.6, 0.75)]:
    samples = villat_kernel_grid(r, rho * np.exp(1j * theta))
    mean = circle_mean(r, rho, samples)
    print(f"r={r:.1f} rho={rho:.2f}: mean = {mean.real:.15f} {mean.imag:+.1e}i")

print()
print("=== modulus parameter ===")
for r in [0.0, np.exp(-np.pi), 0.2, 0.5, 0.8]:
    print(f"omega({r:.5f}) = {omega(r):.8f}")

print()
print("=== reconstruction of f(z) = z^2 + 3/z from boundary data ===")
r = 0.4
f = lambda z: np.asarray(z, dtype=complex) ** 2 + 3.0 / np.asarray(z, dtype=complex)
xi = np.exp(1j * theta)
outer = np.real(f(xi))
inner = np.real(f(r * xi))
rho = 0.7
im_mean = float(np.mean(np.imag(f(rho * xi))))
for z in [0.5 + 0.3j, -0.6 + 0.0j, 0.45j]:
    got = villat_reconstruct(r, rho, outer, inner, im_mean, z)
    print(f"  f({z}) = {f(z):.12f}, reconstructed {got:.12f}, "
          f"error {abs(got - f(z)):.2e}")
