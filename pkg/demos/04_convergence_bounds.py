"""Checking the method's convergence bounds on a recorded run.

Under a nonincreasing schedule with alpha(0) = 1 the per-iteration multiplier
disagreement admits an explicit bound from sigma2 and the subgradient bound C;
under the 1/sqrt(k) schedule the dual gap of the time-weighted average decays
like (2 + ln K) / sqrt(K). Both are evaluated here against an actual trace and
hold with slack at every point.
"""

from netalloc import (
    RecipSqrt,
    builtin_ieee14,
    check_bounds,
    cycle_graph,
    global_subgradient_bound,
    metropolis_weights,
    run_dlm,
    solve_centralized,
    to_problems,
)

problems = to_problems(builtin_ieee14())
weights = metropolis_weights(cycle_graph(5))
sol = solve_centralized(problems, 300.0)

trace = run_dlm(problems, weights, RecipSqrt(), iters=1000)
report = check_bounds(trace, problems, weights, sol.lam_star, checkpoints=[1, 10, 100, 1000])

print(f"n = {report.n}, sigma2 = {report.sigma2:.4f}, C = {report.C:.1f} "
      f"(= {global_subgradient_bound(problems):.1f})")

print("\nconsensus error vs bound (every 100 iterations):")
print(f"{'k':>6s} {'observed':>12s} {'bound':>12s}")
for k, observed, bound, slack, ok in report.consensus_rows[::100]:
    print(f"{k:6d} {observed:12.5f} {bound:12.5f}")

print("\ndual gap of the time-weighted average vs rate bound:")
print(f"{'K':>6s} {'gap':>12s} {'bound':>12s}")
for K, gap, bound, slack, ok in report.gap_rows:
    print(f"{K:6d} {gap:12.6f} {bound:12.2f}")

print(f"\nall bounds satisfied: {report.all_satisfied}")
print(f"summary: {report.summary_json()}")
