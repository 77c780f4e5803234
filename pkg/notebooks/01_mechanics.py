# %% [markdown]
# # Classical mechanics in the bicomplex
#
# A time-dependent Lagrangian ``L(q, q_t, t) dt`` on the time axis, with the
# variational form ``theta = dL/dq_t del q``.  The Euler-Lagrange form comes out
# as the familiar ``(d/dt dL/dq_t - dL/dq) dt ^ del q``.

# %%
from varcomplex.fieldtheory import (
    euler_lagrange,
    hamilton_identity,
    lagrangian_shift,
    symplectic_density,
    total_symplectic,
)
from varcomplex.frontend import load_builtin, parse_expression, parse_scenario, render

sc = load_builtin("mechanics")
print(render(euler_lagrange(sc.system), "plain", sc.coords))

# %% [markdown]
# Slots of the formal function are numbered from 1: ``L[2,3]`` is the mixed
# derivative in the velocity and time slots.  The symplectic density keeps only
# the velocity-velocity Hessian; the ``del q ^ del q`` piece vanishes.

# %%
print(render(symplectic_density(sc.system), "plain", sc.coords))

# %% [markdown]
# Adding a total derivative ``D lambda`` to the Lagrangian changes ``L`` and
# ``theta`` separately but leaves the total form ``Omega`` alone.

# %%
shifted = lagrangian_shift(sc.system, parse_expression("q", sc.context))
print("L shifted:", render(shifted.L, "plain", sc.coords))
print("Omega unchanged:", total_symplectic(shifted).Omega == total_symplectic(sc.system).Omega)

# %% [markdown]
# For an autonomous Lagrangian, time translation is a symmetry and the
# Hamilton identity holds off shell.  The harmonic oscillator below is written
# in the scenario language directly.

# %%
oscillator = parse_scenario("""
scenario oscillator
dim 1
coords t
hodge abstract
field q real
L = (q_{t}**2 - q**2) / 2 * dx[t]
theta = q_{t} * del(q)
killing time
  horizontal t = 1
  vertical q = -q_{t}
end
""")
v = hamilton_identity(oscillator.system, oscillator.killing_field("time"))
print("Hamilton identity:", v.ok)
for bideg, comp in sorted(v.components.items()):
    print(bideg, render(comp, "plain", oscillator.coords))
