#!/usr/bin/env python3
"""Exercise the conic Lagrangian property on arc families.

Almost-closed 1-forms must produce an exactly zero obstruction 2-form on
every arc with certified vanishing order; the non-almost-closed control
omega = y dx produces du^dv.  The most interesting rows are the exact forms
with positive-dimensional critical loci, where the zero comes from genuine
cancellation between coordinate directions.
"""

import sys

from nuchi import Ring, arc_from_strings, differential, is_almost_closed
from nuchi.arcs import arc_vanishing_order, lagrangian_obstruction, INFINITE_WITHIN_TRUNCATION
from nuchi.singular import OneForm

R2 = Ring(("x", "y"))
R3 = Ring(("x", "y", "z"))


def rows():
    yield ("d(x^3 + y^3)", differential(R2.parse("x^3 + y^3")),
           arc_from_strings(R2, ["u*t", "v*t"], order=6), 2)
    yield ("y dx + (x - x*y) dy", OneForm.from_strings(R2, ["y", "x - x*y"]),
           arc_from_strings(R2, ["u*t", "v*t"], order=6), 1)
    yield ("d((x - y^2)^2/2), moving base", differential(R2.parse("1/2*(x - y^2)^2")),
           arc_from_strings(R2, ["u^2 + v*t", "u"], order=6), 1)
    yield ("d((x - y*z)^2/2), moving base", differential(R3.parse("1/2*(x - y*z)^2")),
           arc_from_strings(R3, ["u*v + u*t", "u", "v + v^2*t"], order=6), 1)
    yield ("y dx  (control, not almost closed)", OneForm.from_strings(R2, ["y", "0"]),
           arc_from_strings(R2, ["u", "v*t"], order=6), 1)


def main() -> int:
    print(f"{'form':>36} {'almost closed':>14} {'vanishing':>10} {'obstruction':>16}")
    for label, omega, arc, m in rows():
        almost = is_almost_closed(omega).almost_closed
        order = arc_vanishing_order(omega, arc)
        shown = "inf(N)" if order is INFINITE_WITHIN_TRUNCATION else order
        form = lagrangian_obstruction(omega, arc, m)
        print(f"{label:>36} {str(almost):>14} {shown!s:>10} {str(form):>16}")
        if almost and not form.is_zero():
            print("UNEXPECTED: almost-closed form with nonzero obstruction")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
