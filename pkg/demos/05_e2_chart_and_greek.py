# %% [markdown]
# The E2 chart and Greek-letter candidates
#
# assemble_E2 puts the pieces together: kernels of delta^1 on the 1-line,
# cokernels of delta^1 modulo the d-tilde image on the 2-line, and Ext
# groups as symbols (X<s>) unless data for them is supplied.

# %%
from anss_q2.spectral import assemble_E2, compare_with_theorem, d2_tilde, greek_report, greek_text, text_chart

entries = assemble_E2(0, 16)
print(text_chart(entries))

# %% [markdown]
# d-tilde vanishes on alpha and hits a unit multiple of a named B-generator
# for every other Delta^k alpha.

# %%
for k in (0, 1, -1, 2):
    r = d2_tilde(k)
    print(k, r.label, r.coefficient, r.nontrivial)

# %% [markdown]
# Entries on the 1-line agree with the closed-form table.

# %%
print(compare_with_theorem([e for e in assemble_E2(-20, 40) if e.s <= 1]))

# %%
print(greek_text(greek_report(3, ("alpha",))))
print(greek_text(greek_report(6, ("beta",))))
