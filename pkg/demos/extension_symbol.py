"""Dirichlet-to-Neumann multiplier of the degenerate extension.

Each frequency is solved by backward integration plus a Frobenius match at
small y; the fitted power should be 2s.
"""

from fraclane import extkit as ek

XI = (0.25, 0.5, 1.0, 2.0, 4.0)

for s in (1.2, 1.5, 1.8):
    ms = []
    for xi in XI:
        prof = ek.solve_extension_profile(xi, s)
        ms.append(ek.extract_dtn_multiplier(prof))
    k, c = ek.fit_symbol_exponent(list(zip(XI, ms)))
    ref = ek.dtn_multiplier_closed_form(1.0, s)
    print(f"s={s}: exponent {k:.10f} (2s = {2 * s}), constant {c:.10f} vs {ref:.10f}")

# trace-one profile at s = 3/2 is (1 + xi y) exp(-xi y)
prof = ek.solve_extension_profile(1.0, 1.5)
for y, phi in list(zip(prof.y_grid, prof.phi))[::80]:
    print(f"  y={y:9.3e}  phi={phi:.12f}")
