"""Scale behaviour of the monotonicity functional E.

E(u, lam r) equals E(u^lam, r) for the rescaling u^lam(X) = lam^a u(lam X),
and the homogeneity defect vanishes on blow-down profiles.
"""

from fraclane import energykit as en

n, s, p = 5, 1.5, 5.0
al, be = en.mono_constants(n, s, p)
print(f"alpha={al:.4f} beta={be:.4f} alpha-beta-1={al - be - 1:.4f}")

for f in (en.gaussian_field(n, s, p), en.bump_field(n, s, p, radius=1.5),
          en.homogeneous_field(n, s, p)):
    e = en.energy_E(f, r=1.0)
    res = max(en.scale_invariance_residual(f, lam, 1.0) for lam in (0.5, 2.0, 3.0))
    print(f"{f.name:>24}: E={e.total:+.10e}  scale residual {res:.1e}  "
          f"defect {en.homogeneity_defect(f, 1.0):.3e}")
