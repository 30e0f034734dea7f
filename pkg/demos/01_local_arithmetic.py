# %% [markdown]
# 3-local arithmetic
#
# Everything happens over Z_(3): rationals whose denominator is prime to 3.
# Powers of 2 are units, so 1/2 is a perfectly good element and reduces to 5 mod 9.

# %%
from fractions import Fraction

from anss_q2.local_arith import adic_lemma_check, is_unit, reduce_mod, val3

print(val3(4**6 - 1), val3(2**5 + 1), val3(0))
print(reduce_mod(Fraction(1, 2), 2), reduce_mod(-27, 4))
print(is_unit(-(2**12)), is_unit(Fraction(1, 2)), is_unit(3))

# %% [markdown]
# The valuation lemma behind every order computation later on:
# v3(4^n - 1) = v3(n) + 1 for even n and v3(2^n + 1) = v3(n) + 1 for odd n.

# %%
bad = [n for n in range(-500, 501) if n and not adic_lemma_check(n)]
print("counterexamples:", bad)
