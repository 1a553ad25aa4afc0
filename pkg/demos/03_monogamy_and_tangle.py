"""Monogamy on three qubits, and the tangle read off from determinants.

Run:  python3 demos/03_monogamy_and_tangle.py
"""
from detpi import monogamy_report, tangle, tangle_from_determinants
from detpi.measures import det_pt
from detpi.qmat import determinant, partial_trace
from detpi.states import RngStream, ghz_state, random_pure, w_state

for name, psi in [("GHZ", ghz_state()), ("W", w_state()), ("random", random_pure(3, RngStream(3, 0)))]:
    r = monogamy_report(psi, pivot=1)
    print(f"{name}: tau = {r.tau:.6f}")
    print(f"  C_AB^2 + C_BC^2 + tau = {r.lhs_ckw:.12f}   4 det rho_B = {r.c_pivot**2:.12f}")
    print(f"  pi-monogamy lhs       = {r.lhs_pi:.12f}   pi_B(AC)^2 = {r.pi_pivot**2:.12f}")

# The tangle needs the full spectrum of rho*rho~.  Three determinants suffice instead:
# two partially transposed pair states around the pivot, and the pivot itself.
print("\nTangle from determinants vs spectral tangle")
for i in range(5):
    psi = random_pure(3, RngStream(4, i))
    d_ab = det_pt(partial_trace(psi, (0, 1)))
    d_bc = det_pt(partial_trace(psi, (1, 2)))
    d_b = determinant(partial_trace(psi, [1]).mat).real
    print(f"  {tangle_from_determinants(d_ab, d_bc, d_b):.12f}  {tangle(psi):.12f}")
