"""End-to-end: a bundled figure recipe, its manifest, and rendered panels.

Recipes write CSV outputs plus a manifest with file hashes and structural
assertions; the plotting package consumes only those files.
"""

import json
from pathlib import Path

from drivenlattice import recipes

OUT = Path("demo_output/recipes")
ok = recipes.run_recipe("fig2", OUT / "fig2")
manifest = json.loads((OUT / "fig2" / "manifest.json").read_text())
print(f"fig2 recipe: {'all assertions passed' if ok else 'ASSERTION FAILURES'}")
for a in manifest["assertions"]:
    print(f"  [{'ok' if a['passed'] else 'XX'}] {a['name']} {a.get('detail', '')}")
print("files:", ", ".join(sorted(manifest["files"])))

try:
    from latticeplot import PlotJob, render
    img = render(PlotJob(
        kind="sweep",
        inputs=[str(OUT / "fig2" / "times_deep_delicate.csv"),
                str(OUT / "fig2" / "times_deep_robust.csv")],
        output=str(OUT / "fig2" / "times_deep.svg"), log_y=True))
    print(f"rendered {img}")
except ImportError:
    print("latticeplot not installed; skipping render")

print("\navailable recipes:", ", ".join(recipes.available_recipes()))
print("full-fidelity variants run via: drivenlattice --out-dir OUT --full recipe fig5")
