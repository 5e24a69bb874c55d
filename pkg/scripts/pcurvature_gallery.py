"""p-curvature of transformed line connections across small primes.

For each twist coefficient theta' the transform produces an honest
connection whose p-curvature must equal Theta^p - F*(theta').  Prints
psi for the standard gallery and checks the identity each time.
"""

import argparse

from prism_forge import (
    FrobeniusLift,
    Modulus,
    RelativeFrobenius,
    RingSpec,
    check_pcurvature_formula,
    polynomial_p_connection,
)


def line(p, cap):
    ring = RingSpec(("x",), (), Modulus(p, 2), cap, 0)
    lift = FrobeniusLift(ring=ring, images={"x": ring.gen("x") ** p})
    return RelativeFrobenius.from_lift(lift)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    args = ap.parse_args()

    for p in args.primes:
        # cap holds Theta^p and the psi * Theta products for theta' = x' dx'
        rf = line(p, (p + 1) * (2 * p - 1))
        dom = rf.domain_ring
        gallery = [
            ("0", {}),
            ("dx'", {"xp": [[dom.one()]]}),
            ("x' dx'", {"xp": [[dom.gen("xp")]]}),
        ]
        for label, mats in gallery:
            pconn = polynomial_p_connection(dom, matrices=mats)
            rep = check_pcurvature_formula(rf, pconn)
            psi = rep.data.psi["x"][0][0].render()
            tag = "ok" if rep.passed else "FORMULA FAILS"
            print(f"p={p} theta'={label:8s} psi = {psi:24s} [{tag}]")
        print()


if __name__ == "__main__":
    main()
