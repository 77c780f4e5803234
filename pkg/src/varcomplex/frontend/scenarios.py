"""Built-in scenarios, written in the scenario language itself."""

from __future__ import annotations

from typing import Optional

from .parser import Scenario, parse_scenario

__all__ = ["BUILTINS", "builtin_text", "load_builtin", "PARAMETRIC"]

_MECHANICS = """\
scenario mechanics
dim 1
coords t
hodge abstract
field q real
function L
L = L(q, q_{t}, t) * dx[t]
theta = L[2](q, q_{t}, t) * del(q)
killing time
  horizontal t = 1
  vertical q = -q_{t}
end
"""

# Signature (+,-), orientation dx ^ dt.
_KG2D_HEAD = """\
scenario {name}
dim 2
coords t x
hodge table minkowski(+,-)
star 1 = -t^x
star t = -x
star x = -t
star t^x = 1
field phi complex phibar
const mu At Ax alpha
L = 1/2 * d(phibar) ^ star(d(phi)) - star(mu**2/2 * phi * phibar)
theta = 1/2 * (del(phi) ^ star(d(phibar)) + del(phibar) ^ star(d(phi)))
"""

_TRANSLATION = """\
killing translation
  horizontal t = At
  horizontal x = Ax
  vertical phi = -(At * phi_{t} + Ax * phi_{x})
  vertical phibar = -(At * phibar_{t} + Ax * phibar_{x})
end
"""

_TIME = """\
killing time
  horizontal t = 1
  vertical phi = -phi_{t}
  vertical phibar = -phibar_{t}
end
"""

_SPACE = """\
killing space
  horizontal x = 1
  vertical phi = -phi_{x}
  vertical phibar = -phibar_{x}
end
"""

_U1 = """\
killing u1
  vertical phi = i * alpha * phi
  vertical phibar = -i * alpha * phibar
end
"""

_KG_ABSTRACT = """\
scenario kg-abstract
dim {n}
hodge abstract
field phi complex phibar
const mu alpha
L = 1/2 * d(phibar) ^ star(d(phi)) - star(mu**2/2 * phi * phibar)
theta = 1/2 * (del(phi) ^ star(d(phibar)) + del(phibar) ^ star(d(phi)))
""" + _U1

_YANGMILLS = """\
scenario yangmills
dim {n}
hodge abstract
L = -1/2 * Tr(Fmat ^ star(Fmat))
theta = -Tr(del(Amat) ^ star(Fmat))
killing gauge
  gauge
end
"""

BUILTINS = ("mechanics", "kg2d", "kg-abstract", "translation2d", "u1", "yangmills")
PARAMETRIC = {"kg-abstract": 4, "yangmills": 4}


def builtin_text(name: str, dim: Optional[int] = None) -> str:
    """Scenario source of a built-in; ``dim`` applies to parametric ones."""
    if dim is not None and name not in PARAMETRIC:
        raise ValueError(f"scenario {name!r} has a fixed dimension")
    n = dim if dim is not None else PARAMETRIC.get(name)
    if n is not None and n < 2:
        raise ValueError("parametric scenarios need dimension at least 2")
    if name == "mechanics":
        return _MECHANICS
    if name == "kg2d":
        return _KG2D_HEAD.format(name="kg2d") + _TRANSLATION + _TIME + _SPACE + _U1
    if name == "translation2d":
        return _KG2D_HEAD.format(name="translation2d") + _TRANSLATION
    if name == "u1":
        return _KG2D_HEAD.format(name="u1") + _U1
    if name == "kg-abstract":
        return _KG_ABSTRACT.format(n=n)
    if name == "yangmills":
        return _YANGMILLS.format(n=n)
    raise KeyError(f"unknown scenario {name!r} (built-ins: {', '.join(BUILTINS)})")


def load_builtin(name: str, dim: Optional[int] = None) -> Scenario:
    return parse_scenario(builtin_text(name, dim))
