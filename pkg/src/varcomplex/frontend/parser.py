"""Expression language and scenario files.

Expression grammar (loosest binding first)::

    expr    := ['+'|'-'] product (('+'|'-') product)*
    product := unary (('^'|'*'|'/') unary)*
    unary   := '-' unary | power
    power   := primary ['**' INT]
    primary := INT | 'i' | '(' expr ')' | NAME | NAME '_{' dirs '}'
             | ('d'|'del'|'D'|'star'|'Tr') '(' expr ')' | 'dx' '[' dir ']'
             | FUNC ['[' INT (',' INT)* ']'] '(' expr (',' expr)* ')'
             | 'Amat' | 'Xi' | 'Fmat'

``^`` and ``*`` are both the (graded or noncommutative) wedge product, which
reduces to multiplication on zero-forms; ``/`` divides by an exact number.
Scenario files are line oriented; see :func:`parse_scenario`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..algebra import Const, Coord, FieldSymbol, Func, Jet, ScalarExpr, scalar
from ..calculus import KillingField, horizontal_diff, total_diff, vertical_diff
from ..fieldtheory import BidegreeError, LagrangianSystem, default_coords
from ..forms import Form
from ..hodge import AbstractMode, HodgeTable, TableMode, UnsupportedStarError, star

__all__ = [
    "ParseError",
    "Context",
    "Scenario",
    "parse_expression",
    "parse_scalar",
    "parse_scenario",
    "render_scenario",
]

RESERVED = {"d", "del", "D", "star", "Tr", "dx", "i", "Amat", "Xi", "Fmat"}


class ParseError(ValueError):
    """Syntax or semantic error at a source position (1-based)."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# --------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>\*\*|_\{|[-+*/^()\[\],{}=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(Token("end", "", col0 + len(text)))
    return out


# --------------------------------------------------------------------------
# context


@dataclass
class Context:
    """Symbols visible to the expression parser."""

    n: int
    mode: object
    coords: Tuple[str, ...] = ()
    fields: Dict[str, FieldSymbol] = field(default_factory=dict)
    consts: set = field(default_factory=set)
    functions: set = field(default_factory=set)

    def __post_init__(self):
        if not self.coords:
            self.coords = default_coords(self.n)

    def direction(self, name: str) -> Optional[int]:
        try:
            return self.coords.index(name)
        except ValueError:
            return None


class _Parser:
    def __init__(self, text: str, ctx: Context, line: int = 1, col0: int = 1):
        self.toks = _tokenize(text, line, col0)
        self.k = 0
        self.ctx = ctx
        self.line = line

    # helpers ---------------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, self.line, tok.col)

    def accept(self, text: str) -> Optional[Token]:
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            t = self.tok
            self.k += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return t

    def parse(self):
        v = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return v

    # grammar ---------------------------------------------------------------
    def expr(self):
        neg = False
        if self.accept("-"):
            neg = True
        else:
            self.accept("+")
        v = self.product()
        if neg:
            v = self._neg(v)
        while True:
            t = self.tok
            if self.accept("+"):
                v = self._add(v, self.product(), t)
            elif self.accept("-"):
                v = self._add(v, self._neg(self.product()), t)
            else:
                return v

    def product(self):
        v = self.unary()
        while True:
            t = self.tok
            if self.accept("^") or self.accept("*"):
                v = self._mul(v, self.unary(), t)
            elif self.accept("/"):
                v = self._div(v, self.unary(), t)
            else:
                return v

    def unary(self):
        if self.accept("-"):
            return self._neg(self.unary())
        return self.power()

    def power(self):
        start = self.tok
        v = self.primary()
        t = self.tok
        if self.accept("**"):
            if self.tok.kind != "num":
                self.error("exponent must be a non-negative integer")
            e = int(self.tok.text)
            self.k += 1
            s = self._scalar_of(v, start, "only scalars can be raised to a power")
            return Form.scalar(s ** e, self.ctx.n)
        return v

    def primary(self):
        t = self.tok
        n = self.ctx.n
        if t.kind == "num":
            self.k += 1
            return Form.scalar(int(t.text), n)
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        if t.kind != "name":
            self.error(f"unexpected {t.text or 'end of input'!r}")
        name = t.text
        self.k += 1
        if name == "i":
            from ..algebra import QI
            return Form.scalar(ScalarExpr.const(QI(0, 1)), n)
        if name in ("d", "del", "D", "star", "Tr"):
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return self._apply(name, arg, t)
        if name == "dx":
            self.expect("[")
            d = self.tok
            if d.kind != "name" or self.ctx.direction(d.text) is None:
                self.error(f"unknown direction {d.text!r}")
            self.k += 1
            self.expect("]")
            return Form.dx(self.ctx.direction(d.text), n)
        if name in ("Amat", "Xi", "Fmat"):
            from .. import gauge
            if name == "Amat":
                return gauge.MatrixForm.atom(gauge.ConnA(), n)
            if name == "Xi":
                return gauge.MatrixForm.atom(gauge.Xi(), n)
            return gauge.curvature(n)
        if name in self.ctx.functions:
            return self._function(name, t)
        if name in self.ctx.fields:
            index = ()
            if self.accept("_{"):
                dirs = []
                while True:
                    d = self.tok
                    if d.kind != "name" or self.ctx.direction(d.text) is None:
                        self.error(f"unknown direction {d.text!r}")
                    dirs.append(self.ctx.direction(d.text))
                    self.k += 1
                    if not self.accept(","):
                        break
                self.expect("}")
                index = tuple(dirs)
            return Form.scalar(ScalarExpr.atom(Jet(self.ctx.fields[name], index)), n)
        if name in self.ctx.consts:
            return Form.scalar(ScalarExpr.atom(Const(name)), n)
        mu = self.ctx.direction(name)
        if mu is not None:
            return Form.scalar(ScalarExpr.atom(Coord(mu)), n)
        self.error(f"unknown symbol {name!r}", t)

    def _function(self, name: str, t: Token):
        slots = []
        if self.accept("["):
            while True:
                s = self.tok
                if s.kind != "num" or int(s.text) < 1:
                    self.error("derivative slots are positive integers")
                slots.append(int(s.text) - 1)
                self.k += 1
                if not self.accept(","):
                    break
            self.expect("]")
        self.expect("(")
        args = []
        while True:
            a0 = self.tok
            args.append(self._scalar_of(self.expr(), a0, "function arguments must be scalars"))
            if not self.accept(","):
                break
        self.expect(")")
        if any(s >= len(args) for s in slots):
            self.error(f"derivative slot out of range for {name!r}", t)
        return Form.scalar(ScalarExpr.atom(Func(name, tuple(args), tuple(slots))), self.ctx.n)

    # semantics -------------------------------------------------------------
    def _is_matrix(self, v) -> bool:
        from ..gauge import MatrixForm
        return isinstance(v, MatrixForm)

    def _scalar_of(self, v, tok: Token, msg: str) -> ScalarExpr:
        if isinstance(v, Form):
            if v.is_zero():
                return scalar(0)
            if len(v) == 1 and v.terms()[0][0] == ():
                return v.terms()[0][1]
        self.error(msg, tok)

    def _neg(self, v):
        return -v

    def _add(self, a, b, tok):
        if self._is_matrix(a) != self._is_matrix(b):
            self.error("cannot add a matrix-valued form to a scalar-valued form", tok)
        return a + b

    def _mul(self, a, b, tok):
        ma, mb = self._is_matrix(a), self._is_matrix(b)
        if ma and mb:
            return a ^ b
        if ma or mb:
            s = self._scalar_of(b if ma else a, tok,
                                "matrix forms multiply only with matrix forms or scalars")
            return (a if ma else b) * s
        return a ^ b

    def _div(self, a, b, tok):
        s = self._scalar_of(b, tok, "division only by numbers")
        num = s.as_number()
        if num is None or not num:
            self.error("division only by nonzero numbers", tok)
        return a / num

    def _apply(self, op: str, arg, tok: Token):
        from .. import gauge

        try:
            if self._is_matrix(arg):
                if op == "d":
                    return gauge.nc_horizontal_diff(arg)
                if op == "del":
                    return gauge.nc_vertical_diff(arg)
                if op == "D":
                    return gauge.nc_total_diff(arg)
                if op == "star":
                    return gauge.nc_star(arg)
                return gauge.trace(arg)
            if op == "d":
                return horizontal_diff(arg)
            if op == "del":
                return vertical_diff(arg)
            if op == "D":
                return total_diff(arg)
            if op == "star":
                if self.ctx.mode is None:
                    self.error("star needs a hodge mode", tok)
                return star(arg, self.ctx.mode)
            self.error("Tr applies to matrix-valued forms", tok)
        except UnsupportedStarError as e:
            self.error(str(e), tok)


def parse_expression(text: str, ctx: Context, line: int = 1, col0: int = 1):
    """Parse an expression into a :class:`Form` (or a matrix form)."""
    return _Parser(text, ctx, line, col0).parse()


def parse_scalar(text: str, ctx: Context, line: int = 1, col0: int = 1) -> ScalarExpr:
    p = _Parser(text, ctx, line, col0)
    t = p.tok
    return p._scalar_of(p.parse(), t, "expected a scalar expression")


# --------------------------------------------------------------------------
# scenarios


@dataclass
class Scenario:
    """A Lagrangian system together with its named Killing fields."""

    name: str
    system: LagrangianSystem
    killing: Dict[str, KillingField]
    context: Context
    signature: str = ""

    @property
    def coords(self):
        return self.context.coords

    def killing_field(self, name: Optional[str]) -> KillingField:
        if name is None:
            if len(self.killing) == 1:
                return next(iter(self.killing.values()))
            raise KeyError("scenario declares several Killing fields; name one: "
                           + ", ".join(self.killing))
        try:
            return self.killing[name]
        except KeyError:
            known = ", ".join(self.killing) or "none"
            raise KeyError(f"unknown Killing field {name!r} (declared: {known})") from None


_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*$")


@dataclass
class _Line:
    no: int
    text: str
    col: int  # column of the first character of ``text``


def _split_lines(text: str) -> List[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            out.append(_Line(no, stripped, len(body) - len(stripped) + 1))
    return out


def _words(ln: _Line):
    """``(word, column)`` pairs of a line."""
    return [(m.group(), ln.col + m.start()) for m in re.finditer(r"\S+", ln.text)]


def _parse_monomial(text: str, ctx_coords, ln: _Line, col: int) -> tuple:
    text = text.strip()
    if text == "1":
        return ()
    names = [s.strip() for s in text.split("^")]
    out = []
    for nm in names:
        if nm not in ctx_coords:
            raise ParseError(f"unknown direction {nm!r} in hodge row", ln.no, col)
        out.append(ctx_coords.index(nm))
    if out != sorted(set(out)):
        raise ParseError("hodge monomials must list directions in increasing order", ln.no, col)
    return tuple(out)


def _parse_star_row(ln: _Line, coords):
    m = re.match(r"star\s+(.+?)\s*=\s*([+-]?)\s*(.+)$", ln.text)
    if not m:
        raise ParseError("expected 'star <monomial> = [-]<monomial>'", ln.no, ln.col)
    mono = _parse_monomial(m.group(1), coords, ln, ln.col + m.start(1))
    img = _parse_monomial(m.group(3), coords, ln, ln.col + m.start(3))
    return mono, (-1 if m.group(2) == "-" else 1, img)


def parse_scenario(text: str) -> Scenario:
    """Build a scenario from its text.

    Statements, one per line (``#`` starts a comment)::

        scenario NAME
        dim N
        coords NAME...                  # optional, defaults t x y z x4 ...
        hodge abstract | hodge table [SIGNATURE]
        star MONO = [-]MONO             # table rows, MONO is 1 or t^x ...
        field NAME real | field NAME complex PARTNER
        const NAME...
        function NAME...
        L = EXPR
        theta = EXPR
        killing NAME
          horizontal DIR = EXPR
          vertical FIELD = EXPR
          gauge                         # the Yang-Mills gauge field
        end
    """
    lines = _split_lines(text)
    name = None
    dim = None
    coords: Tuple[str, ...] = ()
    hodge_kind = None
    signature = ""
    rows = []
    fields: Dict[str, FieldSymbol] = {}
    consts: List[str] = []
    functions: List[str] = []
    exprs: Dict[str, _Line] = {}
    killing_blocks: List[tuple] = []
    current = None
    declared = set()

    def declare(nm: str, ln: _Line, col: int):
        if not _NAME.match(nm):
            raise ParseError(f"invalid name {nm!r}", ln.no, col)
        if nm in RESERVED:
            raise ParseError(f"{nm!r} is reserved", ln.no, col)
        if nm in declared:
            raise ParseError(f"{nm!r} declared twice", ln.no, col)
        declared.add(nm)

    for ln in lines:
        words = _words(ln)
        head, hcol = words[0]
        if current is not None:
            if head == "end":
                killing_blocks.append(current)
                current = None
                continue
            if head in ("horizontal", "vertical"):
                m = re.match(r"(horizontal|vertical)\s+(\S+)\s*=\s*(.+)$", ln.text)
                if not m:
                    raise ParseError(f"expected '{head} NAME = EXPR'", ln.no, ln.col)
                current[2].append((head, m.group(2), ln, ln.col + m.start(3), m.group(3)))
                continue
            if head == "gauge" and len(words) == 1:
                current[3] = True
                continue
            raise ParseError(f"unexpected {head!r} inside killing block", ln.no, hcol)
        m = re.match(r"(L|theta)\s*=\s*(.*)$", ln.text)
        if m:
            if m.group(1) in exprs:
                raise ParseError(f"{m.group(1)} defined twice", ln.no, ln.col)
            if not m.group(2).strip():
                raise ParseError("missing expression", ln.no, ln.col + m.start(2))
            exprs[m.group(1)] = _Line(ln.no, m.group(2), ln.col + m.start(2))
            continue
        args = words[1:]
        if head == "scenario":
            if len(args) != 1:
                raise ParseError("expected 'scenario NAME'", ln.no, hcol)
            name = args[0][0]
        elif head == "dim":
            if len(args) != 1 or not args[0][0].isdigit() or int(args[0][0]) < 1:
                raise ParseError("expected 'dim N' with N >= 1", ln.no, hcol)
            dim = int(args[0][0])
        elif head == "coords":
            coords = tuple(w for w, _ in args)
            for w, c in args:
                declare(w, ln, c)
        elif head == "hodge":
            if not args or args[0][0] not in ("abstract", "table"):
                raise ParseError("expected 'hodge abstract' or 'hodge table'", ln.no, hcol)
            hodge_kind = args[0][0]
            signature = " ".join(w for w, _ in args[1:])
        elif head == "star":
            rows.append(ln)
        elif head == "field":
            if len(args) >= 2 and args[1][0] == "real" and len(args) == 2:
                declare(args[0][0], ln, args[0][1])
                fields[args[0][0]] = FieldSymbol(args[0][0], None, True)
            elif len(args) == 3 and args[1][0] == "complex":
                a, b = args[0][0], args[2][0]
                declare(a, ln, args[0][1])
                declare(b, ln, args[2][1])
                fields[a] = FieldSymbol(a, b, False)
                fields[b] = FieldSymbol(b, a, False)
            else:
                raise ParseError("expected 'field NAME real' or 'field NAME complex PARTNER'",
                                 ln.no, hcol)
        elif head == "const":
            for w, c in args:
                declare(w, ln, c)
                consts.append(w)
        elif head == "function":
            for w, c in args:
                declare(w, ln, c)
                functions.append(w)
        elif head == "killing":
            if len(args) != 1:
                raise ParseError("expected 'killing NAME'", ln.no, hcol)
            current = [args[0][0], ln, [], False]
        else:
            raise ParseError(f"unknown statement {head!r}", ln.no, hcol)
    if current is not None:
        raise ParseError(f"killing block {current[0]!r} is not closed with 'end'",
                         current[1].no, current[1].col)

    last = lines[-1].no if lines else 1
    if dim is None:
        raise ParseError("missing 'dim' statement", last, 1)
    if coords and len(coords) != dim:
        raise ParseError(f"'coords' lists {len(coords)} names for dimension {dim}", last, 1)
    coords = coords or default_coords(dim)
    for c in coords:
        if c in fields or c in consts or c in functions:
            raise ParseError(f"{c!r} is both a coordinate and a symbol", last, 1)
    if hodge_kind is None:
        raise ParseError("missing 'hodge' statement", last, 1)
    if hodge_kind == "abstract":
        if rows:
            raise ParseError("star rows given in abstract hodge mode", rows[0].no, rows[0].col)
        mode = AbstractMode(dim)
    else:
        images = {}
        for ln in rows:
            mono, img = _parse_star_row(ln, coords)
            if mono in images:
                raise ParseError("hodge row repeated", ln.no, ln.col)
            images[mono] = img
        try:
            mode = TableMode(HodgeTable(dim, signature or "custom", images))
        except ValueError as e:
            at = rows[-1] if rows else lines[-1]
            raise ParseError(str(e), at.no, at.col) from None
    ctx = Context(dim, mode, coords, fields, set(consts), set(functions))

    if "L" not in exprs:
        raise ParseError("missing 'L = ...' statement", last, 1)

    def form_of(key):
        if key not in exprs:
            return Form.zero(dim)
        ln = exprs[key]
        v = parse_expression(ln.text, ctx, ln.no, ln.col)
        if not isinstance(v, Form):
            raise ParseError(f"{key} must be scalar valued (wrap matrix forms in Tr)", ln.no, ln.col)
        return v

    L, theta = form_of("L"), form_of("theta")
    base = sorted({f.name for f in fields.values()})
    try:
        system = LagrangianSystem(dim, mode, tuple(fields[b] for b in base), L, theta,
                                  name or "scenario", coords)
    except BidegreeError as e:
        which = "L" if "Lagrangian" in str(e) else "theta"
        ln = exprs.get(which, lines[-1])
        raise ParseError(str(e), ln.no, ln.col) from None

    killing: Dict[str, KillingField] = {}
    for kname, kln, entries, is_gauge in killing_blocks:
        if kname in killing:
            raise ParseError(f"Killing field {kname!r} declared twice", kln.no, kln.col)
        killing[kname] = _build_killing(kname, kln, entries, is_gauge, ctx)
    return Scenario(name or "scenario", system, killing, ctx, signature)


def _build_killing(kname, kln, entries, is_gauge, ctx: Context) -> KillingField:
    if is_gauge:
        if entries:
            _, _, ln, col, _ = entries[0]
            raise ParseError("a gauge Killing field takes no contraction entries", ln.no, col)
        from ..gauge import KillingGauge
        return KillingGauge(kname)
    horizontal: Dict[int, ScalarExpr] = {}
    vertical: Dict[str, ScalarExpr] = {}
    for kind, target, ln, col, src in entries:
        value = parse_scalar(src, ctx, ln.no, col)
        if kind == "horizontal":
            mu = ctx.direction(target)
            if mu is None:
                raise ParseError(f"unknown direction {target!r}", ln.no, ln.col)
            if mu in horizontal:
                raise ParseError(f"direction {target!r} contracted twice", ln.no, ln.col)
            horizontal[mu] = value
        else:
            if target not in ctx.fields:
                raise ParseError(f"unknown field {target!r}", ln.no, ln.col)
            if target in vertical:
                raise ParseError(f"field {target!r} contracted twice", ln.no, ln.col)
            vertical[target] = value
    return KillingField(kname, horizontal, vertical)


def render_scenario(sc: Scenario) -> str:
    """Scenario text that parses back to an equal scenario."""
    from ..gauge import KillingGauge
    from .render import render, render_scalar

    sys = sc.system
    ctx = sc.context
    coords = ctx.coords
    out = [f"scenario {sc.name}", f"dim {sys.n}", "coords " + " ".join(coords)]
    if isinstance(sys.hodge, AbstractMode):
        out.append("hodge abstract")
    else:
        table = sys.hodge.table
        out.append(f"hodge table {table.signature}".rstrip())

        def mono(m):
            return "^".join(coords[mu] for mu in m) if m else "1"

        for m in sorted(table.images, key=lambda m: (len(m), m)):
            sign, img = table.images[m]
            out.append(f"star {mono(m)} = {'-' if sign < 0 else ''}{mono(img)}")
    seen = set()
    for nm in sorted(ctx.fields):
        f = ctx.fields[nm]
        if nm in seen:
            continue
        if f.real:
            out.append(f"field {nm} real")
        else:
            out.append(f"field {nm} complex {f.partner}")
            seen.add(f.partner)
        seen.add(nm)
    if ctx.consts:
        out.append("const " + " ".join(sorted(ctx.consts)))
    if ctx.functions:
        out.append("function " + " ".join(sorted(ctx.functions)))
    out.append("L = " + render(sys.L, "plain", coords))
    if not sys.theta.is_zero():
        out.append("theta = " + render(sys.theta, "plain", coords))
    for kname, X in sc.killing.items():
        out.append(f"killing {kname}")
        if isinstance(X, KillingGauge):
            out.append("  gauge")
        else:
            for mu in sorted(X.horizontal):
                out.append(f"  horizontal {coords[mu]} = {render_scalar(X.horizontal[mu], 'plain', coords)}")
            for fname in sorted(X.vertical):
                out.append(f"  vertical {fname} = {render_scalar(X.vertical[fname], 'plain', coords)}")
        out.append("end")
    return "\n".join(out) + "\n"
