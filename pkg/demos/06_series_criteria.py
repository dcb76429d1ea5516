"""Series tests for covering, without running a single trial.

Two series say a lot about a length rule:

* the covering series sum_n (1/ell_n)^beta exp(-n d ell_n): if it
  converges for some d in (0, 1) and beta bounding the target's box
  dimension, eventual covering is almost sure.  For ell = c ln(n)/n the
  terms are ~ n^(beta - c d), so convergence is exactly c d - beta > 1.
* the classical Shepp series sum_n n^-2 exp(ell_1 + ... + ell_n), whose
  divergence characterizes covering of the circle in the fixed-length
  model: harmonic arcs c/n cover the circle iff c >= 1.

Verdicts are finite-sample heuristics with an explicit `inconclusive`
near the boundary; each result carries the tail diagnostics it used.
"""

from arccover import Harmonic, LogOverN, covering_series, shepp_series

N = 10 ** 6

print("== covering series for logn:c, beta=1 (targets of box dimension <= 1) ==")
print(f"{'c':>5} {'d':>5} {'c*d-beta':>9} {'verdict':>13} {'tail frac':>10} {'term slope':>11}")
for c, d in ((5.0, 0.5), (3.0, 0.5), (2.2, 0.95), (1.0, 0.9)):
    res = covering_series(LogOverN(c), beta=1.0, d=d, N=N)
    print(f"{c:>5.1f} {d:>5.2f} {c * d - 1:>9.2f} {res.verdict:>13} "
          f"{res.tail_fraction:>10.2e} {res.term_slope:>11.3f}")
print("   (convergent exactly when c*d - beta > 1; the verdicts track the rule)")

print()
print("== shepp series for harmonic arcs c/n ==")
print(f"{'c':>5} {'verdict':>13} {'covering?':>24}")
for c in (0.5, 1.0, 1.5):
    res = shepp_series(Harmonic(c), N)
    side = "covers the circle" if res.verdict == "divergent" else "leaves points uncovered"
    print(f"{c:>5.1f} {res.verdict:>13}   {side:>24}")
print("   (the c=1 boundary diverges like the harmonic series itself: the")
print("    verdict comes from the still-growing partial sums, terms alone")
print("    decay exactly like 1/n and would be ambiguous)")

print()
print("== near the boundary the heuristic refuses to guess ==")
res = covering_series(LogOverN(4.05), beta=1.0, d=0.5, N=N)
print(f"logn:4.05, beta=1, d=0.5 (c*d - beta = {4.05 * 0.5 - 1:.3f}): {res.verdict}")
