# %% [markdown]
# Built-in potentials and their hypothesis checks.
#
# A potential is usable for the maximum principle when it is positive on the
# punctured ball of radius r0 around its well a, and radially nondecreasing
# there. Both checks are sampling based and return witnesses on failure.

# %%
import numpy as np

from allen_cahn_mp import check_hypotheses, make_double_well_1d, make_triple_well_2d

for W in (make_double_well_1d(), make_triple_well_2d()):
    rep = check_hypotheses(W)
    print(f"{W.name:16s} a={W.a} r0={W.r0}  passed={rep.passed}")

# %% [markdown]
# Stretching r0 past what the potential supports is caught. For the double
# well W(u) = (u^2 - 1)^2 / 4 the profile toward -1 turns down after distance 1.

# %%
rep = check_hypotheses(make_double_well_1d(r0=3.0))
print("double well, r0 = 3:", rep.radial_monotone, rep.radial_witness)

# %% [markdown]
# The triple well with r0 = 1 contains the other two wells in its ball, so
# positivity fails and the witness lands on one of them.

# %%
rep = check_hypotheses(make_triple_well_2d(r0=1.0, validate=False))
print("triple well, r0 = 1:", rep.positive_on_punctured_ball,
      np.round(rep.positivity_witness, 6))
