# %% [markdown]
# # Runtime: linear regression versus iterative maximum likelihood
#
# Random n-qubit pure states mixed with the identity, cube measurements and
# N = 3^9 * 4^n copies.  Both estimators see the same simulated record.

# %%
from lretomo.bench import BenchmarkConfig, run_scaling, summarize_scaling
from lretomo.mle import MleOptions

cfg = BenchmarkConfig(experiment="scaling", qubit_range=(2, 4), trials=3,
                      mle_options=MleOptions(max_iterations=500))
rows = run_scaling(cfg)

# %%
print(" n   LRE [ms]   MLE [ms]   speedup   N*MSE LRE   N*MSE MLE")
for s in summarize_scaling(rows):
    copies = 3 ** 9 * 4 ** s["n"]
    print(f"{s['n']:2d} {s['median_time_lre'] * 1e3:9.3f} {s['median_time_mle'] * 1e3:10.1f} {s['speedup']:9.0f}"
          f" {s['mean_mse_lre'] * copies:11.2f} {s['mean_mse_mle'] * copies:11.2f}")

# %% [markdown]
# Linear regression costs one matrix-vector product with the precomputed
# (X^T X)^-1 X^T plus one eigendecomposition; each maximum-likelihood
# iteration already costs about as much as the whole regression.
