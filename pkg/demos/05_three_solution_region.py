"""Locating the multiple-solution parameter region on the unit disc.

For the reference pair (cubic diffusion, quadratic reaction) the pipeline
builds the radial plateau test function, assembles the admissibility
constants, searches a small (d, r) grid, and probes an admissible
multiplier window for distinct critical points of the free energy.
"""

import numpy as np

import orlicz_lab as ol

dom = ol.domain_from_config({"shape": "disc", "n": 81, "extent": [1.0]})
w = ol.WeightField.constant(dom)
setup = ol.EnergySetup(ol.Power(3.0), ol.Power(2.0), w, w, dom)

print("== the plateau test function ==")
d = 0.15
v = ol.build_test_function(setup, d)
print(f"  d = {d}: I(v_d) = {ol.energy_I(setup, v):.6g}, "
      f"J(v_d) = {ol.energy_J(setup, v):.6g}")
lo, hi = ol.energy_bounds_ine(setup, d)
print(f"  norm sandwich for I(v_d): [{lo:.6g}, {hi:.6g}] "
      f"(O(h) stencil smearing at the two circles)")

print()
print("== admissibility constants ==")
c1 = ol.default_c1(setup, seed=1)
g = ol.gamma_d(setup, d)
print(f"  embedding constant C1 = {c1:.6g}")
print(f"  gamma_d = {g:.6g}")
for r in (0.0265, 0.0274, 0.0281):
    wt = ol.w_tilde_r(setup, r, c1)
    print(f"  r = {r:g}: w_tilde_r = {wt:.6g} "
          f"{'<' if wt < g else '>='} gamma_d, "
          f"r cap = {ol.r_condition_cap(setup, d):.6g}")

print()
print("== grid search ==")
reports = ol.grid_search(setup, [d], [0.0265, 0.0274, 0.0281],
                         samples=48, seed=1, c1=c1)
winners = [rep for rep in reports
           if rep.admissible
           and rep.lambda_interval[0] < rep.lambda_interval[1]]
print(f"  {sum(r.admissible for r in reports)}/{len(reports)} admissible, "
      f"{len(winners)} with a nonempty multiplier window")
print()
print(ol.format_report(winners[0]))

print()
print("== probing the window for distinct critical points ==")
lam_lo, lam_hi = winners[0].lambda_interval
lam = float(np.sqrt(lam_lo * lam_hi))
probe_dom = ol.domain_from_config({"shape": "disc", "n": 61,
                                   "extent": [1.0]})
probe_w = ol.WeightField.constant(probe_dom)
probe = ol.EnergySetup(ol.Power(3.0), ol.Power(2.0), probe_w, probe_w,
                       probe_dom)
found = ol.count_critical_points(probe, lam, starts=4, seed=0)
print(f"  lambda = {lam:.6g}: {found} distinct critical points found "
      f"(zero state included)")
