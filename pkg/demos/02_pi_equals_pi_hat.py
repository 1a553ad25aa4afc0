"""The determinant route and the spin-flip route give the same number.

pi is computed from det(rho^T) alone; pi_hat multiplies four combinations
of the spin-flip spectrum.  This script samples random states of every rank,
compares the two, and then checks how pi transforms under a local filter.

Run:  python3 demos/02_pi_equals_pi_hat.py
"""
import numpy as np

from detpi import local_filter, pi_hat, pi_measure
from detpi.states import RngStream, random_density

worst = {}
for i in range(2000):
    rank = i % 4 + 1
    rho = random_density(rank, RngStream(1, i))
    worst[rank] = max(worst.get(rank, 0.0), abs(pi_measure(rho) - pi_hat(rho)))
for rank, w in sorted(worst.items()):
    print(f"rank {rank}: max |pi - pi_hat| = {w:.2e}")

# A local filter A x B rescales pi by |det A det B| / p, p the success probability.
gen = np.random.default_rng(2)
rho = random_density(2, gen)
a = gen.normal(size=(2, 2)) + 1j * gen.normal(size=(2, 2))
b = gen.normal(size=(2, 2)) + 1j * gen.normal(size=(2, 2))
out, p = local_filter(rho, a, b)
pred = abs(np.linalg.det(a) * np.linalg.det(b)) / p * pi_measure(rho)
print(f"\nfiltered pi = {pi_measure(out):.12f}, predicted = {pred:.12f}")
