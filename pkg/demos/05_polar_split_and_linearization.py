# %% [markdown]
# Polar split and the linearized potential term.
#
# Writing u - a = rho nu splits the Dirichlet energy into a radial part, an
# angular part weighted by rho^2, and the potential. On the grid the split
# exceeds the energy by (1/2) sum (1 - nu_i . nu_j)(rho_i - rho_j)^2 h^(n-2),
# which vanishes when either rho or nu is constant.

# %%
import numpy as np

from allen_cahn_mp import (VectorField, assemble_Q, build_box_domain, energy, make_triple_well_2d,
                           residual_fundamental, split_energy)

W = make_triple_well_2d()
for k in (16, 32, 64, 128):
    dom = build_box_domain(1, [1.0], 1 / k)
    x = dom.coords[:, 0]
    rho = 0.05 + 0.03 * x
    th = 2 * np.pi * x
    u = VectorField(dom, W.a + rho[:, None] * np.stack([np.cos(th), np.sin(th)], axis=1))
    gap = split_energy(u, W.a, W).total - energy(u, W).total
    print(f"h = 1/{k:<4d} split - energy = {gap:.3e}")

# %% [markdown]
# Since grad W(a) = 0, grad W(u) = Q (u - a) with Q the average Hessian along
# the segment from a to u. Gauss-Legendre quadrature makes this exact up to
# rounding for polynomial potentials.

# %%
dom = build_box_domain(2, [1.0, 1.0], 1 / 16)
rng = np.random.default_rng(1)
u = VectorField(dom, W.a + 0.1 * rng.standard_normal(dom.shape + (2,)))
Q = assemble_Q(u, W.a, W)
print(f"max |Q| = {Q.max_operator_norm:.3f}   residual = {residual_fundamental(u, W.a, W, Q):.1e}")
