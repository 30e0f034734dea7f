# %% [markdown]
# The connecting map delta^1, one degree at a time
#
# delta^1 preserves degree, so it splits into blocks indexed by (eps, m).
# Every entry of a block lives in Z/3^e for one e, and each column is computed
# twice: by applying the ring maps and by the closed binomial sums.

# %%
from anss_q2.connecting import analyze_block, build_block, delta0_column, two_route_agreement

print("delta0(j):", delta0_column(1))
print("delta0(j^2):", delta0_column(2))

# %% [markdown]
# The exceptional block eps = 1, m = 13 (internal degree 54) lives mod 81.
# Column 4 is the one that breaks the echelon pattern.

# %%
blk = build_block(1, 13, 12)
print(blk.matrix.entries[:7, :6])
print("routes agree:", two_route_agreement(1, 13, 12))

# %%
rep = analyze_block(1, 13, 12)
print("kernel:  ", rep.kernel)
print("kernel generator:", [s.label for s in rep.kernel.summands])
print("cokernel:", [s.label for s in rep.cokernel.summands][:8], "relations:", rep.cokernel.relations)
print("provenance:", rep.provenance)

# %% [markdown]
# A generic negative block is in echelon form with unit pivots, so its kernel
# is trivial and its cokernel is read off from the rows that are not pivots.

# %%
rep = analyze_block(0, -4, 8)
print(rep.kernel, rep.provenance, [s.label for s in rep.cokernel.summands][:6])
