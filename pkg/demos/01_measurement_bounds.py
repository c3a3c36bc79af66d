# %% [markdown]
# # Choosing a measurement set from its error bound
#
# Least-squares tomography has a worst-case asymptotic MSE of
# (M / 4N) Tr((X^T X)^-1), which depends only on the measurement set.
# Here we compare the built-in two-qubit sets with the two optima:
# the global one (any measurement) and the one for local product measurements.

# %%
import numpy as np

from lretomo import cube_set, mub_set, mse_upper_bound, optimal_bound_global, optimal_bound_local_2qubit, tetrahedron_set
from lretomo.measurement_design import group_spectrum, gram_spectrum

N = 36000

# %%
for mset in (cube_set(2), tetrahedron_set(2), mub_set(2)):
    spectrum = group_spectrum(gram_spectrum(mset))
    print(f"{mset.label:7s} M={mset.count:3d}  N*bound={mse_upper_bound(mset, N) * N:7.3f}  "
          f"Gram spectrum {[(round(v, 4), k) for v, k in spectrum]}")

print(f"global optimum     N*bound={optimal_bound_global(4, N) * N:.3f}")
print(f"local optimum      N*bound={optimal_bound_local_2qubit(N) * N:.3f}")

# %% [markdown]
# The mutually unbiased bases make every Gram eigenvalue equal (M/20), which
# reaches the global minimum 75/N.  Cube and tetrahedron sets split the
# spectrum into six eigenvalues M/12 and nine M/36: the best any product
# measurement can do, 99/N.
#
# Scaling up, the cube set's Gram matrix stays diagonal, so its inverse is free.

# %%
for n in (1, 2, 3, 4):
    g = cube_set(n).gram
    print(n, "diagonal:", np.allclose(g, np.diag(np.diag(g))), " N*bound:", round(mse_upper_bound(cube_set(n), 6 ** n) * 6 ** n, 6))
