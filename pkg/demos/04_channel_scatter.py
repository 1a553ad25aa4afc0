"""Singlet fraction after a local channel, as a function of pi_AB and pi_AE.

Half of psi+ is sent through a channel on B with environment E.  For the
two-parameter (p, q) family the three numbers have closed forms; for Haar
random environments the singlet fraction still follows from pi_AB and pi_AE.
The scatter data is written as CSV for any plotting tool.

Run:  python3 demos/04_channel_scatter.py [out.csv]
"""
import sys

from detpi import channel_closed_forms, channel_pipeline, fidelity_relation
from detpi.cli import main
from detpi.states import PQChannel, pq_unitary

print(f"{'p':>5s} {'q':>5s} {'pi_AB':>10s} {'pi_AE':>10s} {'F_AB':>10s}   (closed form / dilation)")
for p, q in [(0, 0), (0.2, 0.3), (0.5, 0.5), (0.9, 0.4), (1, 0)]:
    ch = PQChannel(p, q)
    a, n = channel_closed_forms(ch), channel_pipeline(pq_unitary(ch))
    print(f"{p:5.2f} {q:5.2f} {a.pi_ab:10.6f} {a.pi_ae:10.6f} {a.f_ab:10.6f}")
    print(f"{'':11s} {n.pi_ab:10.6f} {n.pi_ae:10.6f} {n.f_ab:10.6f}  relation: {fidelity_relation(n.pi_ab, n.pi_ae):.6f}")

out = sys.argv[1] if len(sys.argv) > 1 else "scatter.csv"
code = main(["scatter-channels", "--samples", "2000", "--out", out])
print(f"\nwrote 2000 Haar-channel rows to {out} (exit code {code})")
