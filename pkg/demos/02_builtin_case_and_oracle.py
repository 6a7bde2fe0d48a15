"""The built-in five-generator dispatch case and its centralized solution.

The case ships with the package: five generators with quadratic costs meeting
a 300 MW demand. The reference oracle finds the shared marginal price by
bisection and certifies the result with the saddle-point conditions.
"""

import math

from netalloc import builtin_ieee14, dual_value, serialize_case, solve_centralized, to_problems, verify_kkt

case = builtin_ieee14()
print(serialize_case(case))

problems = to_problems(case)  # equal split: each node starts with 60 MW
sol = solve_centralized(problems, case.demand)

print(f"{'gen':>4s} {'gamma':>7s} {'beta':>6s} {'cap':>6s} {'x*':>10s} {'marginal':>10s}")
for g, x in zip(case.generators, sol.x_star):
    marginal = 2 * g.gamma * x + g.beta
    print(f"{g.id:4d} {g.gamma:7.3f} {g.beta:6.2f} {g.pmax:6.0f} {x:10.4f} {marginal:10.4f}")

# all marginals equal the common price -lam_star: no cheaper reshuffle exists
print(f"\ntotal = {sol.x_star.sum():.6f} MW, cost = {sol.f_star:.4f} MU")
print(f"price = {-sol.lam_star:.6f} MU/MW  (multiplier {sol.lam_star:.6f})")
print(f"KKT certificate: {verify_kkt(problems, sol)}")

# strong duality: the dual value at lam_star matches the primal cost
dual_total = math.fsum(dual_value(p, sol.lam_star) for p in problems)
print(f"strong-duality residual |f* + sum q_i(lam*)| = {abs(sol.f_star + dual_total):.2e}")
