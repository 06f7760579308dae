"""The approximate minimax ladder and level sweeps.

The first rungs of the Ljusternik-Schnirelmann hierarchy are computed by
nodal-domain gluing in 1D and penalized deflation in 2D; level sweeps
trace the multiplier as a function of the constraint level.
"""

import numpy as np

import orlicz_lab as ol


def interval_setup(phi, n=257):
    dom = ol.domain_from_config({"shape": "interval", "n": n,
                                 "extent": [0.0, 1.0]})
    w = ol.WeightField.constant(dom)
    return ol.EnergySetup(phi, phi, w, w, dom)


print("== quadratic ladder on (0,1): lambda_k = (k pi)^2 ==")
setup = interval_setup(ol.Power(2.0))
for lv in ol.ls_sequence(setup, 1.0, 4):
    want = (lv.k * np.pi) ** 2
    print(f"  k = {lv.k}: lambda = {lv.pair.lam:10.4f} "
          f"(continuum {want:10.4f})  c_k = {lv.c_k_alpha:.6g}  "
          f"[{lv.method}]")

print()
print("== cubic ladder scales like k**3 ==")
setup = interval_setup(ol.Power(3.0))
levels = ol.ls_sequence(setup, 1.0, 3)
lam1 = levels[0].pair.lam
for lv in levels:
    print(f"  k = {lv.k}: lambda = {lv.pair.lam:10.4f}   "
          f"lambda/lambda_1 = {lv.pair.lam / lam1:.4f} "
          f"(k**3 = {lv.k ** 3})")

print()
print("== box ladder via deflation ==")
dom = ol.domain_from_config({"shape": "box", "n": 41, "extent": [0.0, 1.0]})
w = ol.WeightField.constant(dom)
setup2 = ol.EnergySetup(ol.Power(2.0), ol.Power(2.0), w, w, dom)
for lv in ol.ls_sequence(setup2, 1.0, 3, ol.SolverOptions(tol=1e-8)):
    note = "" if lv.reliable else "  (fallback)"
    print(f"  k = {lv.k}: lambda = {lv.pair.lam:10.4f}  "
          f"c_k = {lv.c_k_alpha:.6g}{note}")
print("  (continuum: 2 pi^2 = 19.74, 5 pi^2 = 49.35 twice)")

print()
print("== level sweep: homogeneous vs mixed growth ==")
alphas = np.geomspace(0.1, 10.0, 6)
sweep = ol.spectrum_sweep(interval_setup(ol.Power(2.0)), alphas)
lams = [p.lam for p in sweep.pairs]
print(f"  t^2/2 pair: lambda constant, spread "
      f"{(max(lams) - min(lams)) / max(lams):.2e}")
dom = ol.domain_from_config({"shape": "interval", "n": 257,
                             "extent": [0.0, 1.0]})
w = ol.WeightField.constant(dom)
mixed = ol.EnergySetup(ol.Power(3.0), ol.Power(2.0), w, w, dom)
sweep = ol.spectrum_sweep(mixed, alphas)
for p in sweep.pairs:
    print(f"  alpha = {p.alpha:8.4f}: lambda = {p.lam:.6g}")
