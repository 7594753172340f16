"""Stability thresholds p_c(n, s) across orders.

For s = 1 and s = 2 the root of the discriminant is compared with the
classical closed forms; in between, the first dimension with a finite
threshold moves with s.
"""

import math

from fraclane import exponents as ex


def main():
    orders = (0.5, 1.0, 1.5, 2.0)
    print("   n" + "".join(f"{'s=' + str(s):>14}" for s in orders))
    for n in range(8, 31, 2):
        row = []
        for s in orders:
            pc = ex.joseph_lundgren_exponent(n, s)
            row.append(f"{pc:14.6f}" if math.isfinite(pc) else f"{'inf':>14}")
        print(f"{n:4d}" + "".join(row))

    print("\nroot finder against the closed forms")
    for n, s, closed in [(11, 1.0, ex.pc_closed_form_s1), (20, 1.0, ex.pc_closed_form_s1),
                         (13, 2.0, ex.pc_closed_form_s2), (25, 2.0, ex.pc_closed_form_s2)]:
        got, ref = ex.joseph_lundgren_exponent(n, s), closed(n)
        print(f"  n={n:2d} s={s}: {got:.12f}  closed {ref:.12f}  rel {abs(got - ref) / ref:.1e}")

    rep = ex.classify(12, 1.5, 14.0)
    print(f"\nclassify(12, 1.5, 14): {rep.verdict}  phi={rep.phi:+.6f}")


if __name__ == "__main__":
    main()
