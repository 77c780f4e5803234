# %% [markdown]
# # Yang-Mills in abstract mode
#
# Matrix-valued forms with ``F = dA + A ^ A``.  Traces are kept in a cyclic
# normal form, and the Hodge star stays symbolic, so every result holds in any
# dimension.

# %%
from varcomplex.fieldtheory import euler_lagrange, invariance_check, momentum_map, symplectic_density
from varcomplex.frontend import load_builtin, render
from varcomplex.gauge import covariant_derivative, curvature, ym_euler_lagrange, ym_momentum_map

n = 4
F = curvature(n)
print("F       =", render(F, "plain"))
print("D_A F   =", render(covariant_derivative(F), "plain"), "(Bianchi)")

# %% [markdown]
# The Euler-Lagrange form is ``-Tr(del A ^ D_A *F)``; the library function
# raises if the direct computation disagrees with that closed form.

# %%
sc = load_builtin("yangmills", n)
E = ym_euler_lagrange(n)
print("E     =", render(E, "plain"))
print("same as generic derivation:", E == euler_lagrange(sc.system))
print("omega =", render(symplectic_density(sc.system), "plain"))

# %% [markdown]
# Infinitesimal gauge transformations leave ``L + theta`` invariant.  The gauge
# Killing field contracts the Lagrangian density to zero, so the momentum map
# comes from ``theta`` alone.

# %%
X = sc.killing_field("gauge")
print("gauge invariant:", invariance_check(sc.system, X).ok)
J = ym_momentum_map(n, X)
print("J     =", render(J, "plain"))
print("matches generic momentum map:", J == momentum_map(sc.system, X))
