"""Elementary-divisor tables for the p-de Rham complex of a line.

For each precision the H^1 classes follow the valuation pattern: the
class of x^(n-1) dx has order p^min(N, 1 + v_p(n)).  The table makes
the pattern visible and flags any deviation from the closed form.
"""

import argparse

from prism_forge import Modulus, RingSpec, build_p_derham, polynomial_p_connection


def v_p(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--precisions", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--poly-degree", type=int, default=12)
    args = ap.parse_args()

    for p in args.primes:
        for N in args.precisions:
            ring = RingSpec(("x",), (), Modulus(p, N), args.poly_degree, 0)
            dr = build_p_derham(polynomial_p_connection(ring), cap=args.poly_degree)
            h1 = dr.all_cohomology()[1]
            predicted = sorted(
                min(N, 1 + v_p(n, p)) for n in range(1, args.poly_degree + 1)
            )
            mark = "" if list(h1.exponents) == predicted else "  << MISMATCH"
            print(f"p={p} N={N}: H^1 = {h1.describe()}{mark}")
        print()


if __name__ == "__main__":
    main()
