# %% [markdown]
# # Complex Klein-Gordon field in two dimensions
#
# ``L = 1/2 d phibar ^ *d phi - mu^2/2 phi phibar *1`` with the symmetric
# variational form.  The Hodge star is given by an explicit sign table, so the
# same scenario text can be evaluated under two candidate tables.

# %%
from varcomplex.fieldtheory import (
    euler_lagrange,
    hamilton_identity,
    invariance_check,
    momentum_map,
    noether_check,
    on_shell_reduce,
    symplectic_density,
)
from varcomplex.algebra import jets_in
from varcomplex.frontend import load_builtin, parse_scenario, render
from varcomplex.frontend.parser import parse_scalar

BODY = """
field phi complex phibar
const At Ax mu
L = 1/2 * d(phibar) ^ star(d(phi)) - star(mu**2/2 * phi * phibar)
theta = 1/2 * del(phi) ^ star(d(phibar)) + 1/2 * del(phibar) ^ star(d(phi))
killing translation
  horizontal t = At
  horizontal x = Ax
  vertical phi = -At*phi_{t} - Ax*phi_{x}
  vertical phibar = -At*phibar_{t} - Ax*phibar_{x}
end
"""

CONSISTENT = """
scenario kg-consistent
dim 2
coords t x
hodge table minkowski(+,-)
star 1 = -t^x
star t = -x
star x = -t
star t^x = 1
""" + BODY

PRINTED = CONSISTENT.replace("star t = -x", "star t = x").replace(
    "star x = -t", "star x = t").replace("kg-consistent", "kg-printed")

sc = parse_scenario(CONSISTENT)
print("E     =", render(euler_lagrange(sc.system), "plain", sc.coords))
print("omega =", render(symplectic_density(sc.system), "plain", sc.coords))

# %% [markdown]
# Doubling the translation momentum map gives the energy-momentum current of
# the field.  The printed table flips the signs of ``*dt`` and ``*dx``, which
# flips the kinetic part of the current and no longer matches.

# %%
J = momentum_map(sc.system, sc.killing_field("translation"))
print("2J (consistent) =", render(J * 2, "plain", sc.coords))
alt = parse_scenario(PRINTED)
J_alt = momentum_map(alt.system, alt.killing_field("translation"))
print("2J (printed)    =", render(J_alt * 2, "plain", alt.coords))
print("tables agree:", J == J_alt)

# %% [markdown]
# Translations and the U(1) phase are symmetries; the built-in scenario carries
# all four Killing fields, so every Noether pair can be checked.

# %%
kg = load_builtin("kg2d")
for name in kg.killing:
    print("invariant under", name, invariance_check(kg.system, kg.killing_field(name)).ok)
fields = list(kg.killing.values())
print("all Noether pairs:", all(noether_check(kg.system, a, b).ok for a in fields for b in fields))

# %% [markdown]
# The Hamilton identity for time translation holds off shell.  Its components
# are proportional to the equations of motion, so they vanish once
# ``phi_{t,t} = phi_{x,x} - mu^2 phi`` (and its conjugate) is imposed.

# %%
v = hamilton_identity(kg.system, kg.killing_field("time"))
print("Hamilton identity:", v.ok)
eqns = {}
for lhs, rhs in (("phi_{t,t}", "phi_{x,x} - mu**2*phi"),
                 ("phibar_{t,t}", "phibar_{x,x} - mu**2*phibar")):
    (jet,) = jets_in(parse_scalar(lhs, kg.context))
    eqns[jet] = parse_scalar(rhs, kg.context)
for bideg, comp in sorted(v.components.items()):
    print(tuple(bideg), "on shell:", on_shell_reduce(comp, eqns).is_zero())
