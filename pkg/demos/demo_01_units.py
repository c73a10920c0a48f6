"""From laboratory numbers to the dimensionless driven-lattice parameters.

A Rb-87 condensate in an 852 nm lattice, shaken at a few kHz: this is the
parameter regime the whole toolkit works in.  The scaled quantities are
kbar (the effective Planck constant), the depth V' in recoil units, the
Mathieu parameter q0 = V'/4 and the drive amplitude lambda = k_L * DeltaL.
"""

import numpy as np

from drivenlattice import units

rb87 = dict(atom_mass=1.443e-25, lattice_wavelength=852e-9,
            lattice_depth=2.0, drive_amplitude=50e-9, drive_frequency=5e3)

setup = units.PhysicalSetup(**rb87)
print(f"recoil frequency: {units.recoil_frequency(setup) / (2 * np.pi):.1f} Hz")

# kbar ~ 1/drive-frequency: sweeping 3 -> 9 kHz spans the experimental range
for f in (3e3, 5e3, 9e3):
    scaled = units.scale_setup(units.PhysicalSetup(**{**rb87, "drive_frequency": f}))
    print(f"f_m = {f / 1e3:.0f} kHz: kbar = {scaled.kbar:.3f}, "
          f"lambda = {scaled.lambda_drive:.3f}, q0 = {scaled.q0:.3f}")

# the inertial force in the co-moving frame round-trips the drive amplitude
F = units.drive_force(setup)
print(f"\ninertial force amplitude: {F:.3e} N "
      f"(DeltaL back: {units.drive_amplitude_from_force(setup, F) * 1e9:.1f} nm)")

# mean-field screening: strong interactions flatten the lattice a condensate sees
for G in (0.0, 1.0, 10.0):
    s = units.ScaledParams(kbar=1.0, lattice_depth_recoil=20.0,
                           interaction_G=G, lambda_drive=0.0)
    rep = units.effective_potential_validity(s)
    print(f"G = {G:4.1f}: V' = {s.effective_depth:6.3f} E_r  [{rep.status}]")
