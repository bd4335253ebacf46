"""
Radial functions of a confined state
====================================

Once the 3p3/2 energy is known, the AIM generator gives G and F as a
polynomial times r^gamma exp(-alpha r - beta r^2 / 2). The low-order
coefficients are stable under truncation, and a higher-order version of
the same expansion reproduces the shooting solution over the plotted range.
"""

import numpy as np

from diracaim import LinearConfined, ConfinedProblem, channel_from_k, solve_eigenvalue
from diracaim.shooting import radial_solution
from diracaim.wavefunction import generate_wavefunction, ode_residual, reconstruct

pot = LinearConfined(A=0.5, B1=0.1, B2=0.2, m=1.0)
ch = channel_from_k(-2, 1)
prob = ConfinedProblem(ch, pot)
E = solve_eigenvalue(prob, (2.15, 2.25)).energy
print(f"{ch.label}: E = {E:.8f}")

# coefficients at K = 15, scaled so that a_0 = 1.7746
gen = generate_wavefunction(prob, E, order=15)
a, b = gen.scaled_coefficients(1.7746)
for i in range(6):
    print(f"  a_{i} = {a[i]: .6f}   b_{i} = {b[i]: .6f}")
print(f"gamma = {gen.factor.gamma:.6f}, alpha = {gen.factor.alpha_lin:.5f}, "
      f"beta/2 = {gen.factor.beta_lin / 2:.7f}")

# K = 15 is too short for r up to 8; sample with a longer expansion
sampler = generate_wavefunction(prob, E, order=100)
r = np.linspace(0.02, 8, 400)
G, F = reconstruct(sampler, r)
Gs, Fs = radial_solution(pot, ch, E, r)
sign = np.sign(G[50] * Gs[50])
print(f"max |G - G_shooting| on (0, 8]: {np.max(np.abs(sign * G - Gs)):.1e}")
print(f"relative ODE residual on [0.1, 8]: {ode_residual(sampler, np.linspace(0.1, 8, 200)):.1e}")
print(f"G(8) / max |G| = {abs(G[-1]) / np.abs(G).max():.1e}")
