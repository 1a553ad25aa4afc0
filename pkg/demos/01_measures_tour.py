"""Tour of the two-qubit measures on a few textbook states.

Run:  python3 demos/01_measures_tour.py
"""
import numpy as np

from detpi import bell_state, measure_report, eof_bounds
from detpi.qmat import DensityMatrix
from detpi.states import bell_diagonal, product_state, werner

states = {
    "psi+": bell_state("psi+").density(),
    "|00>": product_state("00").density(),
    "I/4": DensityMatrix(np.eye(4) / 4, (2, 2)),
    "Bell-diag (.6,.2,.15,.05)": bell_diagonal([0.6, 0.2, 0.15, 0.05]),
}

print(f"{'state':28s} {'C':>8s} {'C^a':>8s} {'pi':>8s} {'pi_hat':>8s} {'det':>10s} {'F':>8s}")
for name, rho in states.items():
    r = measure_report(rho)
    print(f"{name:28s} {r.concurrence:8.4f} {r.assistance:8.4f} {r.pi:8.4f} {r.pi_hat:8.4f} {r.det_pt:10.6f} {r.fef:8.4f}")

# Werner family: pi turns on together with C (at weight 1/3) and stays between
# C and the upper curve r(C); the entanglement of formation is bracketed by pi.
print("\nWerner states w*psi+ + (1-w)*I/4")
print(f"{'w':>5s} {'C':>8s} {'pi':>8s} {'E_low':>8s} {'E_high':>8s}")
for w in np.linspace(0, 1, 11):
    r = measure_report(werner(w))
    lo, hi = eof_bounds(min(r.pi, 1.0))
    print(f"{w:5.2f} {r.concurrence:8.4f} {r.pi:8.4f} {lo:8.4f} {hi:8.4f}")
