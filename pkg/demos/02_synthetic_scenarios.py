"""Run the four synthetic sweeps at desk scale and print the trends.

Each scenario starts from a seeded isotropic Gaussian blob and walks one
knob: the sampling fraction, the spread, the number of far-away outliers,
or the number of sub-clusters. SVG trend charts land in demos/output/.

    python3 demos/02_synthetic_scenarios.py
"""

from pathlib import Path

from textchar import simulation
from textchar.svg import write_line_chart

OUT_DIR = Path(__file__).parent / "output"

# Desk-scale settings: small enough to run in seconds, large enough that
# the trends match what full-size sweeps show.
POINTS = 2000
DIM = 2
SEED = 11


def print_rows(result):
    print(f"{'parameter':>10} {'diversity':>11} {'density':>11} {'homogeneity':>12}")
    for row in result.rows:
        if row.report is None:
            print(f"{row.parameter:>10g}  error: {row.error}")
            continue
        hom = f"{row.report.homogeneity:.4f}" if row.report.homogeneity is not None else "-"
        print(f"{row.parameter:>10g} {row.report.diversity:>11.4f} "
              f"{row.report.density:>11.4f} {hom:>12}")


def chart(result, x_label, path):
    xs = [row.parameter for row in result.rows]
    panels = []
    for name in ("diversity", "density", "homogeneity"):
        ys = [getattr(row.report, name) if row.report else None
              for row in result.rows]
        panels.append((name, ys))
    write_line_chart(path, x_label, xs, panels)


def main():
    OUT_DIR.mkdir(exist_ok=True)

    print("== down-sampling: keep a fraction of the blob " + "=" * 20)
    spec = simulation.scenario("down_sampling", dim=DIM, points=POINTS, seed=SEED)
    result = simulation.run_scenario(spec)
    print_rows(result)
    chart(result, "fraction kept", OUT_DIR / "down_sampling.svg")
    print("-> diversity and homogeneity barely move; density tracks the")
    print("   sample count almost exactly.\n")

    print("== varying spread: same blob shape, bigger radius " + "=" * 16)
    spec = simulation.scenario("varying_spread", dim=DIM, points=POINTS, seed=SEED)
    result = simulation.run_scenario(spec)
    print_rows(result)
    chart(result, "per-axis std", OUT_DIR / "varying_spread.svg")
    print("-> diversity grows linearly with the spread, density shrinks,")
    print("   homogeneity stays put (it is scale-invariant).\n")

    print("== outliers: append points on a far shell " + "=" * 24)
    # The shell must sit far outside the bulk for the dip-then-rise shape
    # to show at this m; with the 10-x-std default the curve only decays.
    spec = simulation.scenario("outliers", dim=DIM, points=POINTS, seed=SEED,
                               outlier_radius=200.0)
    result = simulation.run_scenario(spec)
    print_rows(result)
    chart(result, "outliers added", OUT_DIR / "outliers.svg")
    print("-> the first outliers drag homogeneity down; once the shell")
    print("   itself is populous the walk evens out again.\n")

    print("== sub-clusters: split the mass into k islands " + "=" * 20)
    spec = simulation.scenario("sub_clusters", dim=768, points=POINTS, seed=SEED)
    result = simulation.run_scenario(spec)
    print_rows(result)
    chart(result, "sub-cluster count", OUT_DIR / "sub_clusters.svg")
    print("-> in high dimension homogeneity falls steadily as the mass")
    print("   fragments. (In 2-D the same sweep is not monotone: after a")
    print("   dip at k=2 the many nearby islands blend back together.)\n")

    print(f"SVG charts written to {OUT_DIR}/")


if __name__ == "__main__":
    main()
