"""Length sequences and their covering diagnostics.

The arc at step n has length ell(n).  Two numbers summarize how much
total length a rule spends against the log of time:

* delta: the liminf of n * ell(n) / ln n.  Below the target's Hausdorff
  dimension it forbids eventual covering.
* the covering exponent: the limsup of (sum of the first N lengths)/ln N,
  the classical exponent controlling covering by fixed-length arcs.

Both are asymptotic; the estimators sample a finite range and say so.
Block sequences (lengths frozen on blocks, at the value of the block end)
connect the two: scheduled coarsely enough they spend the same length
budget as the base rule but look like a fixed-length covering problem on
each block.
"""

import numpy as np

from arccover import (Harmonic, LogOverN, PowerLaw, Schedule, ScheduleError,
                      block_sequence, choose_schedule,
                      estimate_covering_exponent, estimate_delta,
                      rare_block_sum)

RANGE = (10, 10 ** 6)

print("== delta = liminf n ell(n) / ln n, sampled on", RANGE, "==")
for rule in (LogOverN(0.5), LogOverN(2.5), Harmonic(3.0), PowerLaw(1.0, 0.5)):
    print(f"  {rule.describe():14s} delta ~ {estimate_delta(rule, RANGE):.4f}")
print("   (logn:c has n ell(n)/ln n identically c; harmonic decays to 0;")
print("    power laws with gamma < 1 diverge, the minimum sits at the range edge)")

print()
print("== covering exponent = limsup (sum ell) / ln N ==")
for rule, rng in ((Harmonic(1.0), (90_000, 100_000)),
                  (Harmonic(1.0), (900_000, 1_000_000)),
                  (LogOverN(1.0), (10, 100_000))):
    got = estimate_covering_exponent(rule, rng)
    print(f"  {rule.describe():14s} over {str(rng):22s} -> {got:.4f}")
print("   (harmonic tends to 1 from above; logn grows like c ln N / 2: divergent)")

print()
print("== block sequences ==")
base = Harmonic(1.0)
blocked = block_sequence(base, Schedule((2, 4)))
print("harmonic(1) blocked on (2, 4):",
      [float(blocked.ell(n)) for n in (1, 2, 3, 4, 5)], "(beyond the schedule: base rule)")

print()
print("== greedy schedules for the block decomposition ==")
print("each n_k is minimal with n_(k-1) ell(n_k)^alpha <= 2^-k and the")
print("accumulated blocked mass per ln n_k within delta + 2^-k:")
for c, K in ((0.3, 6), (0.5, 5)):
    rule = LogOverN(c)
    sched = choose_schedule(rule, alpha=0.9, K=K)
    blocked = block_sequence(rule, sched)
    ends = np.asarray(sched.indices, dtype=float)
    ratios = blocked.partial_sums(ends) / np.log(ends)
    print(f"  logn:{c} K={K}: {sched.indices}")
    print(f"     rare-block sum {rare_block_sum(rule, sched, 0.9):.3f}, "
          f"block-end ratios {np.round(ratios, 3)}")
print()
print("note the ratios creep upward: pulling them back to delta needs")
print("tower-growth schedules, which overflow any fixed index cap; the")
print("construction below fails loudly instead of pretending otherwise:")
try:
    choose_schedule(LogOverN(0.9), alpha=0.9, K=6)
except ScheduleError as exc:
    print(f"  ScheduleError: {exc}")
