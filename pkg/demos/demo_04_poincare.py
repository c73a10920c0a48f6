"""Classical phase space of the driven pendulum: stroboscopic sections.

The 1:1 resonance appears for lambda > 0 where the drive period matches an
unperturbed orbit; increasing the drive grows the stochastic layer at the
expense of regular orbits.  kappa = V' reproduces the published panels.
Writes CSVs that `latticeplot poincare` renders (if installed).
"""

import math
from pathlib import Path

import numpy as np

from drivenlattice import classical
from drivenlattice._io import write_csv

OUT = Path("demo_output/poincare")
params0 = classical.ClassicalParams(kappa=2.0, lam=0.0, dt=2 * math.pi / 1000)

# the undriven pendulum: frequency falls from sqrt(2 kappa) toward the separatrix
for amp in (0.05, 0.8, 1.4):
    w = classical.orbit_frequency((classical.WELL_CENTRE + amp, 0.0), params0,
                                  min_crossings=20)
    print(f"amplitude {amp:4.2f}: libration frequency {w:.4f}")
e_res = classical.resonance_energy(2.0, omega_target=1.0)
print(f"1:1 resonance energy (kappa=2): {e_res:.4f} (separatrix at +1)")

seeds = [(classical.WELL_CENTRE + a, 0.0) for a in np.linspace(0.1, 1.45, 7)]
seeds += [(classical.WELL_CENTRE, p) for p in np.linspace(0.3, 1.9, 7)]

for lam in (0.0, 0.5, 1.5):
    params = classical.ClassicalParams(kappa=2.0, lam=lam, dt=2 * math.pi / 1000)
    sec = classical.poincare(seeds, params, 300)
    f = write_csv(OUT / f"kappa2_lam{lam:g}.csv",
                  ["seed_id", "period_index", "z", "p"],
                  zip(sec.seed_ids, sec.period_indices, sec.z, sec.p))
    frac = classical.libration_fraction(seeds, params, 200) if lam else 1.0
    print(f"lambda = {lam:3.1f}: librating fraction {frac:.2f}  -> {f}")

fp, res = classical.find_period1_point((classical.WELL_CENTRE, -0.15),
                                       classical.ClassicalParams(2.0, 0.5))
print(f"\nperiod-1 point at (z={fp[0]:.4f}, p={fp[1]:.4f}), residual {res:.1e}")

try:
    from latticeplot import PlotJob, render
    img = render(PlotJob(kind="poincare",
                         inputs=[str(OUT / f"kappa2_lam{lam:g}.csv")
                                 for lam in (0.0, 0.5, 1.5)],
                         output=str(OUT / "sections.svg")))
    print(f"rendered {img}")
except ImportError:
    print("latticeplot not installed; CSVs written only")
