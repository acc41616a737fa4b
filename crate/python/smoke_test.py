"""Smoke test for the e3atlas Python module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import math
import sys

import e3atlas as ea


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    checks = []

    ghz = ea.PureState3.ghz()
    checks.append(("GHZ invariants", close(ghz.invariants_j(), [0, 0, 0, 0.25, 0, 0])))
    w = ea.PureState3.w()
    checks.append(("W invariants", close(w.invariants_j(), [1 / 9, 1 / 9, 1 / 9, 0, 2 / 27, 0])))

    cell = ea.classify([0.25, 0, 0, 0, 0, 0])
    checks.append(("classify A-BC", cell["cell"] == "e0_A-BC" and cell["orbit_dim"] == 5))

    rep = ea.membership([0, 0, 0, 0, 1, 0])
    checks.append(("non-member", not rep["in_x"] and "bottomsurface" in rep["violated"]))
    try:
        ea.classify([0, 0, 0, 0, 1, 0])
        checks.append(("classify raises", False))
    except ValueError:
        checks.append(("classify raises", True))

    psi = ea.PureState3.haar(3)
    case, chi = ea.canonical_representative(psi)
    checks.append(("round trip", case == "2b5" and close(chi.invariants_j(), psi.invariants_j(), 1e-8)))

    swapped = ea.PureState3.one_epr().permute("(12)").invariants_j()
    checks.append(("permutation", close(swapped, [0, 0.25, 0, 0, 0, 0])))

    h = 1 / math.sqrt(2)
    u = [[h, h], [h, -h]]
    ident = [[1, 0], [0, 1]]
    moved = ghz.apply_local_unitary(u, ident, [[1j, 0], [0, 1]])
    checks.append(("local unitary", close(moved.invariants_j(), ghz.invariants_j())))

    checks.append(("orbit dims", [ea.PureState3.basis(0, 0, 0).orbit_dimension()["dimension"],
                                  ghz.orbit_dimension()["dimension"],
                                  w.orbit_dimension()["dimension"]] == [6, 7, 8]))
    checks.append(("concurrence", abs(ea.concurrence([0, h, -h, 0]) - 1) < 1e-12))

    report = ea.verify_membership(200, 1)
    checks.append(("membership report", report["samples"] == 200 and report["failure_count"] == 0))

    fiber = ea.sample_fiber_circle(0.03, 0.03, 0.03, 0.125, 64)
    checks.append(("fiber", len(fiber) == 64 and fiber[0][1] == 0.0
                   and abs(max(p[0] for p in fiber) - 2 * math.sqrt(2.7e-5)) < 1e-15))
    checks.append(("bubble", len(ea.sample_bubble_surface(8)) > 0))

    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(("ok   " if ok else "FAIL ") + name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
