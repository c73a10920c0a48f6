"""Mathieu characteristic values and the cosine-lattice band structure.

The undriven lattice's stationary problem is a Mathieu equation with
parameter q0 = V'/4; band n at quasimomentum kappa has energy a_nu(q0) at
the folded fractional order nu.  The zone-edge gap a_1 - b_1 converts, for
the 852 nm Rb-87 lattice, to the measured band separations (3.15 kHz at
V' = 2 and 20.8 kHz at V' = 16).
"""

import numpy as np

from drivenlattice import mathieu, units

print("characteristic values a_nu(q):")
for nu, q in [(0.0, 1.0), (0.5, 1.0), (1.0, 4.0), (2.3, 4.0)]:
    print(f"  a_{nu:g}({q:g}) = {mathieu.char_value(nu, q):+.6f}")
print(f"  b_1(4) = {mathieu.char_odd(1, 4.0):+.6f} (odd branch)")

# shallow and deep expansions bracket the exact solver
q = 25.0
print(f"\ndeep expansion at q={q:g}, ground well: "
      f"{mathieu.char_value_large_q(1, q):.4f} vs exact "
      f"{mathieu.char_even(0, q):.4f}")

# band structure for V' = 16 (q0 = 4)
q0 = 4.0
kappas = np.linspace(0.0, 1.0, 9)
print(f"\nbands at q0 = {q0:g} (energies in E_r):")
print("kappa " + " ".join(f"{k:7.3f}" for k in kappas))
for n in range(3):
    row = [mathieu.band_energy(n, float(k), q0) for k in kappas]
    print(f"  n={n} " + " ".join(f"{e:7.3f}" for e in row))

f_r = units.recoil_frequency(units.PhysicalSetup(
    atom_mass=1.443e-25, lattice_wavelength=852e-9, lattice_depth=2.0,
    drive_frequency=5e3, drive_amplitude=0.0)) / (2 * np.pi)
for vprime in (2.0, 16.0):
    gap = mathieu.band_edge_gap(vprime / 4)
    avg = mathieu.mean_band_separation(vprime / 4)
    print(f"\nV' = {vprime:g}: zone-edge gap {gap:.3f} E_r = "
          f"{gap * f_r / 1e3:.2f} kHz; kappa-averaged separation {avg:.3f} E_r")
