#!/usr/bin/env python3
"""Independent reference evaluation of the sample-complexity formulas.

Evaluates the Bennett-based test counts for the two group-testing
estimator variants and the Hoeffding-based permutation count, straight
from the closed forms. The C++ bound calculator must reproduce these
integers exactly; the frozen values in the acceptance suite come from
this script.

Usage: python3 scripts/bound_reference.py
"""

import math


def h(u: float) -> float:
    return (1.0 + u) * math.log1p(u) - u


def z_and_qtot(n_eff: int):
    """Normalizer Z and collision probability q_tot for the size
    distribution over k = 1..n_eff-1."""
    z = 0.0
    for k in range(1, n_eff):
        z += 1.0 / k
    z *= 2.0
    q = [(1.0 / z) * (1.0 / k + 1.0 / (n_eff - k)) for k in range(1, n_eff)]
    q_tot = (n_eff - 2) / n_eff * q[0]
    for k in range(2, n_eff):
        q_tot += q[k - 1] * (1.0 + 2.0 * k * (k - n_eff) / (n_eff * (n_eff - 1)))
    return z, q_tot


def required_t_original(n: int, eps: float, delta: float) -> int:
    z, q_tot = z_and_qtot(n)
    arg = eps / (2.0 * z * math.sqrt(n) * (1.0 - q_tot))
    raw = math.log(n * (n - 1) / delta) / ((1.0 - q_tot) * h(arg))
    return math.ceil(raw)


def required_t_improved(n: int, eps: float, delta: float) -> int:
    z, q_tot = z_and_qtot(n + 1)
    arg = eps / (z * math.sqrt(n + 1) * (1.0 - q_tot))
    raw = math.log(n / delta) / ((1.0 - q_tot) * h(arg))
    return math.ceil(raw)


def required_permutations(n: int, eps: float, delta: float) -> int:
    return math.ceil(2.0 * n / (eps * eps) * math.log(2.0 * n / delta))


def main():
    grid_n = [5, 10, 50, 100]
    grid_eps = [0.1, 0.5]
    grid_delta = [0.01, 0.1]

    print("variant,n,epsilon,delta,T")
    for n in grid_n:
        for eps in grid_eps:
            for delta in grid_delta:
                print(f"gt,{n},{eps},{delta},{required_t_original(n, eps, delta)}")
    for n in grid_n:
        for eps in grid_eps:
            for delta in grid_delta:
                print(f"gt-improved,{n},{eps},{delta},{required_t_improved(n, eps, delta)}")
    for n in grid_n:
        for eps in grid_eps:
            for delta in grid_delta:
                print(f"perm,{n},{eps},{delta},{required_permutations(n, eps, delta)}")

    print()
    print("# coverage-trial budgets (n=8, eps=0.5, delta=0.1)")
    print("gt:", required_t_original(8, 0.5, 0.1))
    print("gt-improved:", required_t_improved(8, 0.5, 0.1))
    print("perm:", required_permutations(8, 0.5, 0.1))

    print()
    print("# growth/separation sanity")
    for n in [16, 64, 256, 1024]:
        t = required_t_original(n, 0.1, 0.05)
        print(f"ratio_band n={n}: T={t}  T/(n*log(n)^2)={t / (n * math.log(n) ** 2):.4f}")
    for n in [64, 128, 256, 512, 1024]:
        t_orig = required_t_original(n, 0.1, 0.05)
        t_impr = required_t_improved(n, 0.1, 0.05)
        m = required_permutations(n, 0.1, 0.05)
        print(f"separation n={n}: gt={t_orig} gt-improved={t_impr} perm_evals={m * (n + 1)}")
    for n in [50, 100]:
        e1 = required_permutations(n, 0.1, 0.05) * (n + 1)
        e2 = required_permutations(2 * n, 0.1, 0.05) * (2 * n + 1)
        print(f"perm growth n={n}->{2*n}: evals ratio={e2 / e1:.4f}")


if __name__ == "__main__":
    main()
