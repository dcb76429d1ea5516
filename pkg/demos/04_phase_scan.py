"""The covering phase transition, empirically.

For lengths ell(n) = c ln(n)/n the theory pins two thresholds for a
target A: no eventual covering when c is below the Hausdorff dimension
of A, eventual covering when c exceeds its upper box dimension plus one.
Between the two the theory is silent, and the scan says so explicitly
rather than asserting anything there.

The full circle has both dimensions equal to 1, so its silent band is
(1, 2); a middle-thirds pre-fractal has dimension ln2/ln3 ~ 0.631 and
band (0.631, 1.631).  Desk-scale horizons already separate the phases
sharply.
"""

from arccover import TrialConfig, make_cantor, make_circle, phase_scan

N_MAX = 30_000
TRIALS = 30


def show(scan):
    print(f"  target {scan.target_description}: dim_H={scan.dim_H}, "
          f"cover threshold dim_B+1={scan.cover_threshold:.3f}")
    for row in scan.rows:
        bar = "#" * int(round(20 * row.eventually_covered_fraction))
        print(f"    c={row.c:4.2f} [{row.regime:>14s}] "
              f"frac={row.eventually_covered_fraction:5.2f} {bar}")
    print(f"  empirical threshold c* = {scan.c_star:.2f} "
          f"(+- {scan.c_star_uncertainty:.2f}, the grid spacing at the largest jump)")


print(f"== circle, n_max={N_MAX}, {TRIALS} trials per c ==")
base = TrialConfig(seed=0, lengths=None, target=make_circle(), n_max=N_MAX)
show(phase_scan([0.5, 0.8, 1.1, 1.4, 1.7, 2.0, 2.3, 2.6], base, TRIALS))

print()
print(f"== middle-thirds pre-fractal (depth 12), n_max={N_MAX} ==")
cantor = make_cantor(1 / 3, 12)
base = TrialConfig(seed=0, lengths=None, target=cantor, n_max=N_MAX)
show(phase_scan([0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1], base, TRIALS))

print()
print("the same scan is available from the shell, with CSV/JSON/SVG output:")
print("  arccover scan --target cantor:0.3333333:12 --c 0.3:2.1:0.3 "
      f"--trials {TRIALS} --n-max {N_MAX} --out cantor_scan")
