# %% [markdown]
# Minimizing in 1-d against a closed form.
#
# With W(u) = u^2 and u = 0.1 at both ends of [0, 1], the minimizer solves
# u'' = 2u, so u(x) = 0.1 cosh(sqrt(2)(x - 1/2)) / cosh(sqrt(2)/2).

# %%
import numpy as np

from allen_cahn_mp import SolveOptions, VectorField, build_box_domain, make_quadratic, minimize

W = make_quadratic(m=1)
exact = lambda x: 0.1 * np.cosh(np.sqrt(2) * (x - 0.5)) / np.cosh(np.sqrt(2) / 2)

# %%
prev = None
for k in (16, 32, 64, 128):
    dom = build_box_domain(1, [1.0], 1 / k)
    g = VectorField.constant(dom, [0.1])
    u, stats = minimize(dom, g, W, opts=SolveOptions(grad_tol=1e-12))
    err = np.max(np.abs(u.values[:, 0] - exact(dom.coords[:, 0])))
    rate = "" if prev is None else f"  ratio {prev / err:.2f}"
    print(f"h = 1/{k:<4d} iterations {stats.iterations:3d}  max error {err:.2e}{rate}")
    prev = err
# the ratio settles near 4: second order in h
