#!/usr/bin/env python3
"""Run the singularity gallery through both computation routes.

For each gallery function f the critical locus X = Z(df) is evaluated at the
origin twice: via the Milnor route (local colength of the Jacobian ideal and
the Milnor-fibre formula) and via the cycle route (Euler obstruction of the
distinguished cycle of the normal cone).  The two integers must agree; the
script prints the comparison table and exits nonzero on any mismatch.
"""

import sys
import time

from nuchi import Ring, behrend_report, jacobian_ideal
from nuchi.cycles import nu_from_cycle, regular_sequence_presentation

R1 = Ring(("x",))
R2 = Ring(("x", "y"))


def gallery():
    items = [(R1.parse("x^3"), R1), (R2.parse("x^3 + y^3"), R2)]
    for k in range(1, 9):
        items.append((R2.parse(f"x^{k + 1} + y^2"), R2))
    items.append((R2.parse("x*y"), R2))
    return items


def main() -> int:
    print(f"{'f':>16} {'mu':>4} {'nu (Milnor)':>12} {'nu (cycle)':>11} {'agree':>6}")
    started = time.monotonic()
    failures = 0
    for f, ring in gallery():
        origin = (0,) * ring.arity
        report = behrend_report(f, origin)
        cycle_nu = nu_from_cycle(
            regular_sequence_presentation(jacobian_ideal(f)), origin
        )
        ok = report.nu == cycle_nu
        failures += not ok
        print(
            f"{str(f):>16} {report.mu:>4} {report.nu:>12} {cycle_nu:>11} "
            f"{'yes' if ok else 'NO'}"
        )
    print(f"\n{len(gallery())} functions checked in {time.monotonic() - started:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
