# %% [markdown]
# # One reconstruction, step by step
#
# Simulate a record, estimate the state, and inspect what the projection did.
# The same record could come from an experiment: save frequencies to JSON or
# CSV and load them with `lretomo.sampling.load_record` / `load_record_csv`.

# %%
import numpy as np

from lretomo import cube_set, ls_estimate, plre, project_physical, simulate_record, werner
from lretomo.states import mse

rho = werner(0.95)
mset = cube_set(2)
record = simulate_record(rho, mset, total_copies=3600, seed=11)

theta = ls_estimate(record, mset)
mu = plre(theta, mset.basis)
rho_hat = project_physical(mu)

# %%
print("PLRE eigenvalues:", np.round(np.linalg.eigvalsh(mu)[::-1], 4))
print("LRE eigenvalues: ", np.round(np.linalg.eigvalsh(rho_hat)[::-1], 4))
print(f"MSE PLRE {mse(mu, rho):.5f}   MSE LRE {mse(rho_hat, rho):.5f}")

# %% [markdown]
# The command line does the same in one go:
#
#     tomo estimate --state werner.json --set cube2 --copies 3600 --seed 11
