# %% [markdown]
# Smith normal form over Z/3^k
#
# Kernels and cokernels of matrices over Z/3^k come out as labelled cyclic
# summands.  A small exhaustive oracle is available to cross-check them.

# %%
import numpy as np

from anss_q2.linalg_snf import (
    LocalMatrix,
    brute_force_oracle,
    cokernel_presentation,
    diagonal_exponents,
    kernel_presentation,
    smith_normal_form,
)

A = np.array([[8, 78], [80, 21]])
D, U, V = smith_normal_form(A, 4)
print(D)
print("diagonal valuations:", diagonal_exponents(D, 4))

# %% [markdown]
# Rows carry their own orders.  Here x0 - 3 x1 is killed, so x0 disappears and
# the cokernel is generated by x1 (order 81) and x2 (order 27).

# %%
M = LocalMatrix(np.array([[1, 0], [-3, 0], [0, 27]]), [4, 4, 4], row_labels=["x0", "x1", "x2"])
print(kernel_presentation(M))
print(cokernel_presentation(M).summands)

# %% [markdown]
# Random check against brute force.

# %%
rng = np.random.default_rng(1)
for _ in range(5):
    B = rng.integers(0, 9, size=(3, 3))
    kernel, coker = brute_force_oracle(B, 2)
    P = LocalMatrix(B, [2, 2, 2])
    print(len(kernel), 3 ** kernel_presentation(P).log3_order(), coker, 3 ** cokernel_presentation(P).log3_order())
