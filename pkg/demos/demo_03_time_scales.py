"""Analytic recurrence time scales: undriven, delicate and robust regimes.

The hierarchy classical period < revival < super-revival follows from the
first, second and third derivatives of the level spacing.  Weak driving
(q <~ 1) perturbs the undriven scales; strong driving (q >> 1) replaces
them with the pendulum ladder of the 1:1 resonance island.
"""

import numpy as np

from drivenlattice import analysis, resonance
from drivenlattice.units import ScaledParams

# undriven scales for the deep lattice of the autocorrelation figures
t0 = resonance.undriven_times(nbar=0, q0=4.0, regime="deep")
print(f"undriven (q0=4): T_cl={t0.t_classical:.3f}  T_rev={t0.t_revival:.2f}  "
      f"T_spr={t0.t_super_revival:.1f}")

# the resonance context bundles omega, zeta, matrix element, beta0, q
scaled = ScaledParams(kbar=0.5, lattice_depth_recoil=16.0, interaction_G=0.0,
                      lambda_drive=0.5)
ctx = resonance.build_context(scaled, N=1, nbar=0, beta=0.0)
print(f"\ncontext: zeta={ctx.zeta:.4f}  V={ctx.matrix_element_V:.4f}  "
      f"beta0={ctx.beta0:.4f}  q={ctx.q:.2f}")

rob = resonance.robust_times(ctx)
print(f"robust (lambda=0.5): T_cl={rob.t_classical:.2f}  "
      f"T_rev={rob.t_revival:.1f}  T_spr={rob.t_super_revival:.0f}")

# harmonic-limit route: identical once q is the harmonic effective modulation
harm = resonance.robust_times_harmonic(ctx, q0=4.0, lam=0.5)
print(f"harmonic-limit route agrees to "
      f"{abs(harm.t_super_revival - rob.t_super_revival) / rob.t_super_revival:.1e}")

# drive-amplitude sweep: the trends behind the published curves
rows = analysis.sweep(np.linspace(0.5, 3.0, 6), scaled, nbar=0, beta=0.0,
                      regimes=("robust",))
print("\nlambda     q     T_cl    T_rev    T_spr")
for r in rows:
    print(f"{r['lambda']:.2f}  {r['q']:6.2f}  {r['t_cl']:6.3f}  "
          f"{r['t_rev']:6.2f}  {r['t_spr']:7.1f}")

# quasi-energy ladder of the resonance (Floquet spectrum, reduced mod kbar)
qe = resonance.quasienergy_spectrum(ctx, nu_values=[2.0 * l for l in range(-2, 3)])
print("\nquasi-energies (mod kbar):",
      " ".join(f"{e.energy:.4f}" for e in qe))
