"""Walk the envelope constructions for one prime and print presentations.

Shows, side by side: the dilatation of a coordinate cut, the stagewise
prismatic envelope with its t-relations and Frobenius images, and the
two-generator mixed envelope where the cut refuses to align.
"""

import argparse

from prism_forge import (
    CoordinateImmersion,
    FrobeniusLift,
    Modulus,
    RingSpec,
    check_envelope_frobenius,
    dilatation,
    mod_p_dimensions,
    polynomial_dimensions,
    prismatic_envelope_stages,
    two_gen_mixed_envelope,
)


def show(title, pres, weight_cap):
    print(f"== {title} ==")
    ring = pres.ring
    gens = ", ".join(ring.ordinary_gens)
    pds = ", ".join(ring.pd_gens)
    print("ring: W" + (f"[{gens}]" if gens else "") + (f"<{pds}>" if pds else ""))
    for g, e in sorted(pres.structural_images.items()):
        print(f"  {g} -> {e.render()}")
    for rel in pres.relations:
        print(f"  {rel}")
    if pres.lift is not None:
        for g in ring.all_gens():
            print(f"  psi({g}) = {pres.lift.images[g].render()}")
        rep = check_envelope_frobenius(pres)
        for c in rep.checks:
            print(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}")
    print(f"  mod-p dims <= {weight_cap}: {mod_p_dimensions(pres, weight_cap)}")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=3)
    ap.add_argument("--precision", type=int, default=4)
    ap.add_argument("--stages", type=int, default=2)
    ap.add_argument("--weight-cap", type=int, default=6)
    args = ap.parse_args()

    modulus = Modulus(args.prime, args.precision)
    ring = RingSpec(("x", "y"), (), modulus, 16, 0)
    lift = FrobeniusLift(
        ring=ring,
        images={"x": ring.gen("x") ** args.prime, "y": ring.gen("y") ** args.prime},
    )
    imm = CoordinateImmersion(lift, ("x",))

    show("dilatation of (p, x) in W[x,y]", dilatation(imm), args.weight_cap)
    show(
        f"stagewise prismatic envelope, {args.stages} stage(s)",
        prismatic_envelope_stages(imm, args.stages),
        args.weight_cap,
    )
    show(
        "mixed envelope: phi(x) = x^p + p*y blocks alignment",
        two_gen_mixed_envelope(modulus, 16, 12),
        args.weight_cap,
    )
    print(
        "polynomial prediction for two free variables:",
        polynomial_dimensions(2, args.weight_cap),
    )


if __name__ == "__main__":
    main()
