"""
Coulomb levels from the asymptotic iteration method
===================================================

For a pure Coulomb vector potential the AIM termination condition holds
exactly at a finite depth, so the numeric roots coincide with the closed
form. This script prints both side by side, in three and five dimensions.
"""

from diracaim import channel_from_k, coulomb_energy, make_channel
from diracaim.cli import coulomb_aim

A = 0.5

# three dimensions: k = -1 (s1/2) and k = 1 (p1/2) are degenerate for n >= 1
print(f"{'label':>8} {'closed form':>14} {'AIM':>14} {'depth':>6}")
for k in (-1, 1, -2, 2):
    for n in range(4):
        if k > 0 and n == 0:
            continue
        ch = channel_from_k(k, n)
        res = coulomb_aim(ch, A)
        print(f"{ch.label:>8} {coulomb_energy(ch, A):14.10f} {res.energy:14.10f} "
              f"{res.iterations_used:6d}")

# five dimensions: the same j gives |k_d| = j + 3/2
ch = make_channel(5, -1, "1/2", 0)
print(f"\nd=5, j=1/2: k_d = {ch.k:g}, E = {coulomb_energy(ch, A):.10f}")
