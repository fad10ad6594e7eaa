"""A desk-scale benchmark sweep: certify, size, run, aggregate, compare.

The same pipeline the full-scale experiments use, shrunk to a couple
of cells.  Outputs land in a results directory as results.csv,
aggregates.csv, and manifest.json; reruns with the same master seed are
byte-identical, and interrupted sweeps resume from the manifest.
"""

import tempfile
from pathlib import Path

from nkbench import (
    AlgorithmSpec,
    SweepConfig,
    compare,
    execute_sweep,
)
from nkbench.harness import read_results_csv, write_plot_csv, read_aggregates_csv

config = SweepConfig(
    grid={2: [16, 20], 3: [16]},
    instances_per_cell=5,
    algorithms=[AlgorithmSpec("ga-uniform"), AlgorithmSpec("ga-nocrossover")],
    master_seed=12345,
)

out_dir = Path(tempfile.mkdtemp(prefix="nkbench_demo_"))
paths = execute_sweep(config, out_dir, workers=2)
print(f"sweep complete: {paths.complete}")
print(f"results in {out_dir}\n")

stats = read_results_csv(paths.results)
print(f"{len(stats)} runs recorded "
      f"({config.instances_per_cell} instances x 10 runs x 2 algorithms x 3 cells)")

aggregates = read_aggregates_csv(paths.aggregates)
print(f"\n{'cell':14s} {'algorithm':16s} {'mean evals':>10s} {'mean flips':>11s}")
for a in aggregates:
    print(f"(n={a.n}, k={a.k})   {a.algorithm:16s} {a.mean_evaluations:10.1f} "
          f"{a.mean_dhc_flips:11.1f}")

curve = compare(
    [s for s in stats if s.algorithm == "ga-nocrossover"],
    [s for s in stats if s.algorithm == "ga-uniform"],
)
print("\nno-crossover vs uniform-crossover ratios (>1 means crossover wins):")
for cell in curve.cells:
    print(f"  (n={cell.n}, k={cell.k}): evaluations x{cell.evaluations_ratio:.2f}, "
          f"flips x{cell.dhc_flips_ratio:.2f}")

write_plot_csv(out_dir / "plotdata.csv", aggregates)
print(f"\nplot-ready series written to {out_dir/'plotdata.csv'}")
