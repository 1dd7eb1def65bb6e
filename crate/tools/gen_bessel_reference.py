#!/usr/bin/env python3
"""Generate the cylinder-function reference table used by the test suite.

Evaluates J_n(x) and Y_n(x) in extended precision (200 significant digits)
and writes one record per line:

    n x re_J re_Y

with 20 significant digits. The argument x is printed with repr() so the
Rust side parses back the identical f64.

Points that fall too close to a zero of J_n or Y_n are skipped: relative
accuracy there is limited by the conditioning of the function itself, not
by the evaluation algorithm. Points whose values overflow or underflow f64
are skipped as well.

The ascending power series is evaluated independently for small arguments
as a self-check of the oracle.

Regenerate with:  python3 tools/gen_bessel_reference.py
"""

import math
import os

import mpmath as mp

OUT = os.path.join(
    os.path.dirname(__file__), "..", "crates", "proxyscat", "tests", "data",
    "bessel_reference.txt",
)

ORDERS = [0, 1, 2, 3, 5, 8, 10, 15, 20, 30, 50, 75, 100, 150, 200]
ARGS = [
    1e-3, 0.01, 0.1, 0.3, 0.5, 1.0, 2.0, 3.5, 5.0, 7.0, 10.0, 14.0, 20.0,
    35.0, 50.0, 100.0, 250.0, 500.0, 1000.0, 2500.0, 10000.0,
]

F64_MAX = 1.0e290
F64_MIN = 1.0e-290
# Skip oscillatory-regime points within 5% of the envelope amplitude.
ZERO_GUARD = 0.05


def series_j(n, x, terms=150):
    """Ascending series sum_m (-1)^m (x/2)^(n+2m) / (m! (n+m)!)."""
    with mp.workdps(mp.mp.dps + 60):
        half = mp.mpf(x) / 2
        total = mp.mpf(0)
        term = half ** n / mp.factorial(n)
        for m in range(terms):
            total += term
            term *= -(half * half) / ((m + 1) * (n + m + 1))
        return total


def main():
    mp.mp.dps = 200
    lines = []
    for n in ORDERS:
        for x in ARGS:
            xm = mp.mpf(x)  # exact f64 -> mpf conversion
            j = mp.besselj(n, xm)
            y = mp.bessely(n, xm)
            if x <= 10.0 and n <= 30:
                js = series_j(n, xm)
                assert mp.almosteq(j, js, rel_eps=mp.mpf(10) ** -120), (n, x)
            jf, yf = abs(float(j)), abs(float(y))
            if not (F64_MIN < jf < F64_MAX and F64_MIN < yf < F64_MAX):
                continue
            if x > n + 2:
                envelope = math.sqrt(2.0 / (math.pi * x))
                if jf < ZERO_GUARD * envelope or yf < ZERO_GUARD * envelope:
                    continue
            lines.append(
                "%d %s %s %s"
                % (n, repr(x), mp.nstr(j, 20), mp.nstr(y, 20))
            )
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print("wrote %d records to %s" % (len(lines), OUT))


if __name__ == "__main__":
    main()
