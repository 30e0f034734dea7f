# %% [markdown]
# The rings B, Gamma and MF and the maps between them
#
# B is spanned by s^i t^j q2^e with q2^2 = (s + t)/2.  Modular forms map in
# through c4 = 2s + 8t, c6 = 4 q2 (s - 8t) and Delta = s^2 t / 8.

# %%
from anss_q2.hopf_maps import Phi, cobar_d0, g, h, psi_d
from anss_q2.rings import (
    a_elem,
    b_elem,
    c4_gen,
    c6_gen,
    delta_gen,
    j_mf,
    mf_to_b,
    q2_gen,
    q4_gen,
    r_gen,
    s_gen,
    t_gen,
)

print("c4    ->", mf_to_b(c4_gen()))
print("c6    ->", mf_to_b(c6_gen()))
print("Delta ->", mf_to_b(delta_gen()))
c4, c6, d = (mf_to_b(x) for x in (c4_gen(), c6_gen(), delta_gen()))
print("c6^2 == c4^3 - 1728 Delta:", c6 * c6 == c4**3 - d.scale(1728))

# %% [markdown]
# The dual isogeny swaps s and t (with a factor 4) and sends q2 to -2 q2.

# %%
print(psi_d(s_gen()), "|", psi_d(t_gen()), "|", psi_d(q2_gen()))

# %% [markdown]
# h = psi_d + 1 has eigenvectors a_{i,j} = s^i t^j - s^j t^i and b_{i,j};
# g = psi_[2] - 1 acts on a modular form of degree d by 2^d - 1.

# %%
print(h(a_elem(-1, 1)))
print(h(b_elem(0, 1)) == b_elem(0, 1).scale(9))
print(g(c4_gen()), "|", g(delta_gen()), "|", g(j_mf(1)))

# %% [markdown]
# The right unit moves q2 to q2 + 3r, so the cobar differential of q2 is 3r
# while modular forms are cycles.  Phi evaluates both structure maps at once.

# %%
print(cobar_d0(q2_gen()), "|", cobar_d0(delta_gen()))
for x in (q2_gen(), q4_gen(), r_gen()):
    print(Phi(x))
