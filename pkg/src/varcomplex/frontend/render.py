"""Deterministic renderers: parseable plain text, LaTeX and a JSON AST.

The plain style is the expression language read back by
:mod:`varcomplex.frontend.parser`; the AST style round-trips through
:func:`from_ast` without any scenario context.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from ..algebra import QI, Atom, Const, Coord, FieldSymbol, Func, Jet, ScalarExpr, direction_name
from ..forms import Form, Generator, Horizontal, StarAtom, Vertical, factors_bidegree

__all__ = ["render", "render_scalar", "to_ast", "from_ast", "STYLES"]

STYLES = ("plain", "latex", "ast")


def _coord(mu: int, coords: Optional[Sequence[str]]) -> str:
    if coords and mu < len(coords):
        return coords[mu]
    return direction_name(mu)


def _negative(c: QI) -> bool:
    return c.re < 0 or (c.re == 0 and c.im < 0)


# --------------------------------------------------------------------------
# plain


def _plain_number(c: QI) -> str:
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        v = c.im
        if v == 1:
            return "i"
        return f"{v}*i"
    sign = "+" if c.im > 0 else "-"
    im = abs(c.im)
    return f"({c.re} {sign} {'i' if im == 1 else f'{im}*i'})"


def _plain_atom(a: Atom, coords) -> str:
    if isinstance(a, Jet):
        if not a.index:
            return a.field.name
        return f"{a.field.name}_{{{','.join(_coord(mu, coords) for mu in a.index)}}}"
    if isinstance(a, Const):
        return a.name
    if isinstance(a, Coord):
        return _coord(a.mu, coords)
    if isinstance(a, Func):
        args = ", ".join(render_scalar(x, "plain", coords) for x in a.args)
        slots = f"[{','.join(str(s + 1) for s in a.slots)}]" if a.slots else ""
        return f"{a.name}{slots}({args})"
    raise TypeError(f"cannot render atom {a!r}")


def _plain_monomial(mono, coords) -> list:
    out = []
    for a, e in mono:
        s = _plain_atom(a, coords)
        out.append(s if e == 1 else f"{s}**{e}")
    return out


def _signed_monomials(f: ScalarExpr, number, monomial, join):
    """Yield ``(negative, text)`` per monomial of ``f``."""
    for mono, c in f:
        neg = _negative(c)
        if neg:
            c = -c
        parts = monomial(mono)
        if c == 1 and parts:
            body = join(parts)
        else:
            body = join([number(c)] + parts)
        yield neg, body


def _join_signed(pieces) -> str:
    out = ""
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out or "0"


def _plain_scalar(f: ScalarExpr, coords) -> str:
    return _join_signed(_signed_monomials(
        f, _plain_number, lambda m: _plain_monomial(m, coords), "*".join))


# --------------------------------------------------------------------------
# latex

_GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota",
    "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon",
    "phi", "chi", "psi", "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi",
    "Sigma", "Phi", "Psi", "Omega",
}


def _latex_name(name: str) -> str:
    if name.endswith("bar") and len(name) > 3:
        return rf"\bar{{{_latex_name(name[:-3])}}}"
    if name in _GREEK:
        return "\\" + name
    if len(name) > 1:
        return rf"\mathrm{{{name}}}"
    return name


def _latex_rational(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    sign = "-" if v < 0 else ""
    return rf"{sign}\frac{{{abs(v.numerator)}}}{{{v.denominator}}}"


def _latex_number(c: QI) -> str:
    if c.im == 0:
        return _latex_rational(c.re)
    if c.re == 0:
        return "i" if c.im == 1 else f"{_latex_rational(c.im)} i"
    sign = "+" if c.im > 0 else "-"
    im = abs(c.im)
    return rf"\left({_latex_rational(c.re)} {sign} {'i' if im == 1 else _latex_rational(im) + ' i'}\right)"


def _latex_atom(a: Atom, coords) -> str:
    if isinstance(a, Jet):
        base = _latex_name(a.field.name)
        if not a.index:
            return base
        return f"{base}_{{{''.join(_coord(mu, coords) for mu in a.index)}}}"
    if isinstance(a, Const):
        return _latex_name(a.name)
    if isinstance(a, Coord):
        return _coord(a.mu, coords)
    if isinstance(a, Func):
        args = ", ".join(render_scalar(x, "latex", coords) for x in a.args)
        head = _latex_name(a.name)
        if a.slots:
            head = "".join(rf"\partial_{{{s + 1}}}" for s in a.slots) + " " + head
        return rf"{head}\left({args}\right)"
    raise TypeError(f"cannot render atom {a!r}")


def _latex_monomial(mono, coords) -> list:
    out = []
    for a, e in mono:
        s = _latex_atom(a, coords)
        out.append(s if e == 1 else f"{s}^{{{e}}}")
    return out


def _latex_scalar(f: ScalarExpr, coords) -> str:
    return _join_signed(_signed_monomials(
        f, _latex_number, lambda m: _latex_monomial(m, coords), " ".join))


# --------------------------------------------------------------------------
# generators and forms


def _matrix_atom_text(a, style: str, coords) -> str:
    from .. import gauge as g

    latex = style == "latex"
    if isinstance(a, g.ConnA):
        return "A" if latex else "Amat"
    if isinstance(a, g.DConnA):
        return r"\mathrm{d}A" if latex else "d(Amat)"
    if isinstance(a, g.VarA):
        return r"\delta A" if latex else "del(Amat)"
    if isinstance(a, g.DVarA):
        return r"\mathrm{d}\delta A" if latex else "d(del(Amat))"
    if isinstance(a, g.Xi):
        return r"\Xi" if latex else "Xi"
    if isinstance(a, g.DXi):
        return r"\mathrm{d}\Xi" if latex else "d(Xi)"
    if isinstance(a, g.StarWrap):
        inner = _word_text(a.word, style, coords)
        if latex:
            s = rf"\star\left({inner}\right)" if len(a.word) > 1 else rf"\star {inner}"
            return r"\mathrm{d}" + s if a.d_applied else s
        s = f"star({inner})"
        return f"d({s})" if a.d_applied else s
    raise TypeError(f"cannot render matrix atom {a!r}")


def _word_text(word, style: str, coords) -> str:
    if not word:
        return "1"
    sep = r" \wedge " if style == "latex" else " ^ "
    return sep.join(_matrix_atom_text(a, style, coords) for a in word)


def _generator_text(g: Generator, style: str, coords) -> str:
    from ..gauge import TraceAtom

    latex = style == "latex"
    if isinstance(g, Horizontal):
        return rf"\mathrm{{d}}{_coord(g.mu, coords)}" if latex else f"dx[{_coord(g.mu, coords)}]"
    if isinstance(g, Vertical):
        atom = _latex_atom(g.jet, coords) if latex else _plain_atom(g.jet, coords)
        return rf"\delta {atom}" if latex else f"del({atom})"
    if isinstance(g, StarAtom):
        if not g.inner:
            return r"\star 1" if latex else "star(1)"
        if latex:
            body = r" \wedge ".join(rf"\mathrm{{d}}{_coord(mu, coords)}" for mu in g.inner)
            return rf"\star {body}" if len(g.inner) == 1 else rf"\star\left({body}\right)"
        return f"star({' ^ '.join(f'dx[{_coord(mu, coords)}]' for mu in g.inner)})"
    if isinstance(g, TraceAtom):
        inner = _word_text(g.word, style, coords)
        return rf"\operatorname{{Tr}}\left({inner}\right)" if latex else f"Tr({inner})"
    raise TypeError(f"cannot render generator {g!r}")


def _term_pieces(c: ScalarExpr, factor_text: str, style: str, coords):
    """Signed pieces for ``c * factors``; expands when there are no factors."""
    scalar_fn = _latex_scalar if style == "latex" else _plain_scalar
    if not factor_text:
        number = _latex_number if style == "latex" else _plain_number
        mono_fn = _latex_monomial if style == "latex" else _plain_monomial
        join = " ".join if style == "latex" else "*".join
        yield from _signed_monomials(c, number, lambda m: mono_fn(m, coords), join)
        return
    mul = r" \, " if style == "latex" else " * "
    if len(c) == 1:
        (mono, num), = c.items()
        neg = _negative(num)
        cc = ScalarExpr({mono: -num if neg else num})
        if cc == 1:
            yield neg, factor_text
        else:
            yield neg, f"{scalar_fn(cc, coords)}{mul}{factor_text}"
        return
    lp, rp = (r"\left(", r"\right)") if style == "latex" else ("(", ")")
    yield False, f"{lp}{scalar_fn(c, coords)}{rp}{mul}{factor_text}"


def _form_text(a: Form, style: str, coords) -> str:
    sep = r" \wedge " if style == "latex" else " ^ "
    pieces = []
    for factors, c in a:
        ft = sep.join(_generator_text(g, style, coords) for g in factors)
        pieces.extend(_term_pieces(c, ft, style, coords))
    return _join_signed(pieces)


def _matrix_text(a, style: str, coords) -> str:
    pieces = []
    for w, c in a:
        pieces.extend(_term_pieces(c, _word_text(w, style, coords), style, coords))
    return _join_signed(pieces)


def render_scalar(f: ScalarExpr, style: str = "plain", coords=None) -> str:
    if style == "latex":
        return _latex_scalar(f, coords)
    if style == "ast":
        return _dumps(_scalar_ast(f))
    return _plain_scalar(f, coords)


def render(obj, style: str = "plain", coords: Optional[Sequence[str]] = None) -> str:
    """Render a form, matrix form or scalar in ``style``."""
    from ..gauge import MatrixForm

    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}; expected one of {', '.join(STYLES)}")
    if style == "ast":
        return _dumps(to_ast(obj))
    if isinstance(obj, Form):
        return _form_text(obj, style, coords)
    if isinstance(obj, MatrixForm):
        return _matrix_text(obj, style, coords)
    if isinstance(obj, ScalarExpr):
        return render_scalar(obj, style, coords)
    raise TypeError(f"cannot render {type(obj).__name__}")


# --------------------------------------------------------------------------
# AST


def _dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _num_ast(c: QI) -> list:
    return [str(c.re), str(c.im)]


def _field_ast(f: FieldSymbol) -> dict:
    return {"name": f.name, "partner": f.partner, "real": f.real}


def _atom_ast(a: Atom) -> dict:
    if isinstance(a, Jet):
        return {"jet": _field_ast(a.field), "index": list(a.index)}
    if isinstance(a, Const):
        return {"const": a.name}
    if isinstance(a, Coord):
        return {"coord": a.mu}
    if isinstance(a, Func):
        return {"func": a.name, "slots": list(a.slots), "args": [_scalar_ast(x) for x in a.args]}
    raise TypeError(f"cannot serialize atom {a!r}")


def _scalar_ast(f: ScalarExpr) -> list:
    return [{"c": _num_ast(c), "m": [[_atom_ast(a), e] for a, e in mono]} for mono, c in f]


def _matrix_atom_ast(a) -> dict:
    from .. import gauge as g

    if isinstance(a, g.StarWrap):
        return {"star": [_matrix_atom_ast(x) for x in a.word], "n": a.n, "d": a.d_applied}
    return {"atom": type(a).__name__}


def _generator_ast(g: Generator) -> dict:
    from ..gauge import TraceAtom

    if isinstance(g, Horizontal):
        return {"dx": g.mu}
    if isinstance(g, Vertical):
        return {"del": _atom_ast(g.jet)}
    if isinstance(g, StarAtom):
        return {"star": list(g.inner), "n": g.n}
    if isinstance(g, TraceAtom):
        return {"tr": [_matrix_atom_ast(a) for a in g.word]}
    raise TypeError(f"cannot serialize generator {g!r}")


def to_ast(obj) -> dict:
    """Machine-readable nested structure with explicit bidegrees."""
    from ..gauge import MatrixForm

    if isinstance(obj, Form):
        return {
            "type": "form",
            "n": obj.n,
            "terms": [{"bidegree": list(factors_bidegree(f)),
                       "coeff": _scalar_ast(c),
                       "factors": [_generator_ast(g) for g in f]} for f, c in obj],
        }
    if isinstance(obj, MatrixForm):
        return {
            "type": "matrix",
            "n": obj.n,
            "terms": [{"bidegree": [sum(a.p for a in w), sum(a.q for a in w)],
                       "coeff": _scalar_ast(c),
                       "word": [_matrix_atom_ast(a) for a in w]} for w, c in obj],
        }
    if isinstance(obj, ScalarExpr):
        return {"type": "scalar", "terms": _scalar_ast(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _num_from(data) -> QI:
    return QI(Fraction(data[0]), Fraction(data[1]))


def _atom_from(d: dict) -> Atom:
    if "jet" in d:
        f = d["jet"]
        return Jet(FieldSymbol(f["name"], f["partner"], f["real"]), tuple(d["index"]))
    if "const" in d:
        return Const(d["const"])
    if "coord" in d:
        return Coord(d["coord"])
    if "func" in d:
        return Func(d["func"], tuple(_scalar_from(x) for x in d["args"]), tuple(d["slots"]))
    raise ValueError(f"unknown atom node {d!r}")


def _scalar_from(data) -> ScalarExpr:
    acc = {}
    for t in data:
        mono = tuple(sorted(((_atom_from(a), e) for a, e in t["m"]), key=lambda ae: ae[0].key()))
        acc[mono] = _num_from(t["c"])
    return ScalarExpr(acc)


def _matrix_atom_from(d: dict):
    from .. import gauge as g

    if "star" in d:
        return g.StarWrap(tuple(_matrix_atom_from(x) for x in d["star"]), d["n"], d["d"])
    kinds = {"ConnA": g.ConnA, "DConnA": g.DConnA, "VarA": g.VarA,
             "DVarA": g.DVarA, "Xi": g.Xi, "DXi": g.DXi}
    try:
        return kinds[d["atom"]]()
    except KeyError:
        raise ValueError(f"unknown matrix atom node {d!r}") from None


def _generator_from(d: dict) -> Generator:
    from ..gauge import TraceAtom

    if "dx" in d:
        return Horizontal(d["dx"])
    if "del" in d:
        return Vertical(_atom_from(d["del"]))
    if "tr" in d:
        return TraceAtom(tuple(_matrix_atom_from(a) for a in d["tr"]))
    if "star" in d:
        return StarAtom(tuple(d["star"]), d["n"])
    raise ValueError(f"unknown generator node {d!r}")


def from_ast(data):
    """Inverse of :func:`to_ast`; accepts the JSON text or the decoded structure."""
    from ..gauge import MatrixForm

    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("type")
    if kind == "scalar":
        return _scalar_from(data["terms"])
    if kind == "form":
        products = [(_scalar_from(t["coeff"]), [_generator_from(g) for g in t["factors"]])
                    for t in data["terms"]]
        return Form.from_products(data["n"], products)
    if kind == "matrix":
        return MatrixForm(data["n"], {tuple(_matrix_atom_from(a) for a in t["word"]):
                                      _scalar_from(t["coeff"]) for t in data["terms"]})
    raise ValueError(f"unknown AST node type {kind!r}")
