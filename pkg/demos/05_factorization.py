"""pi after a one-sided channel factorizes into input and channel parts.

For pure inputs the identity is exact; for mixed inputs the product is an
upper bound.  Both are sampled here.

Run:  python3 demos/05_factorization.py
"""
from detpi import factorization_check_mixed, factorization_check_pure
from detpi.states import RngStream, haar_unitary, random_density, random_filter_state

worst = 0.0
for i in range(500):
    gen = RngStream(5, i).generator()
    phi, _ = random_filter_state(gen)
    worst = max(worst, factorization_check_pure(phi, haar_unitary(4, gen))[2])
print(f"pure inputs: max |pi(out) - pi(channel) pi(in)| = {worst:.2e}")

min_slack = 1.0
for i in range(2000):
    gen = RngStream(6, i).generator()
    rho = random_density(i % 3 + 2, gen)
    min_slack = min(min_slack, factorization_check_mixed(rho, haar_unitary(4, gen))[2])
print(f"mixed inputs: min(bound - pi(out)) = {min_slack:.2e}")
