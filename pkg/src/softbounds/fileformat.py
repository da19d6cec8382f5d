"""Line-oriented instance text format.

Grammar (one directive per line, '#' starts a comment):

    wcsp <name>                          header; implies format version 1
    k <int|inf>                          top cost, before any w0/fun line
    w0 <int>                             constant term (optional, default 0)
    var <id> <lb> <ub>                   ids must appear as 0, 1, 2, ...
    fun ext <r> <ids...> <default> <t>   followed by t lines "<v...> <cost>"
    fun funceq <i> <j> <alpha> [p q]     zero cost iff v_j == p*v_i + q
    fun antifuncneq <i> <j> <alpha> [p q]
    fun monoleq <i> <j> <delta> <alpha>
    fun linplus <i> <j> <a> <b> <c>
    fun spacer <i> <j> <d1> <d2> <d3> <d4> <slope>
    tag semiconvex <var-id> <asc|desc>   applies to the preceding ext fun

Parsing is strict: unknown directives, duplicate or out-of-order variable
ids, tuple values outside the declared interval and costs outside [0, k]
are all reported with their line number.
"""

from __future__ import annotations

import re
from dataclasses import replace
from typing import List, Optional, Tuple

from .core import CapError, INFINITY, Domain, ParseError, ValuationStructure, Variable
from .costfn import (
    AntiFunctionalNeq,
    CostFunction,
    ExtTable,
    FunctionalEq,
    LinPlus,
    MonoLeq,
    Spacer,
    validate_semiconvex,
)
from .network import Instance

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}")


class _Lines:
    """Logical (non-empty, comment-stripped) lines with their numbers."""

    def __init__(self, text: str):
        self.items: List[Tuple[int, List[str]]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.items.append((lineno, body.split()))
        self.pos = 0

    def next(self) -> Optional[Tuple[int, List[str]]]:
        if self.pos >= len(self.items):
            return None
        item = self.items[self.pos]
        self.pos += 1
        return item


def parse_text(text: str) -> Instance:
    lines = _Lines(text)
    first = lines.next()
    if first is None:
        raise ParseError(1, "empty instance: expected a 'wcsp <name>' header")
    lineno, toks = first
    if toks[0] != "wcsp" or len(toks) != 2 or not _NAME_RE.match(toks[1]):
        raise ParseError(lineno, "expected header 'wcsp <name>'")
    name = toks[1]

    val: Optional[ValuationStructure] = None
    w_zero = 0
    saw_w0 = False
    variables: List[Variable] = []
    functions: List[CostFunction] = []
    # kind name of each parsed function, to resolve tag lines
    fun_kinds: List[str] = []

    def need_val(lineno: int) -> ValuationStructure:
        if val is None:
            raise ParseError(lineno, "k must be declared before this line")
        return val

    def var_interval(vid: int, lineno: int) -> Tuple[int, int]:
        if not 0 <= vid < len(variables):
            raise ParseError(lineno, f"unknown variable id {vid}")
        d = variables[vid].domain
        return d.lb, d.ub

    while True:
        item = lines.next()
        if item is None:
            break
        lineno, toks = item
        head = toks[0]
        if head == "k":
            if val is not None:
                raise ParseError(lineno, "duplicate k directive")
            if len(toks) != 2:
                raise ParseError(lineno, "expected 'k <int|inf>'")
            if toks[1] == "inf":
                val = ValuationStructure(INFINITY)
            else:
                k = _int(toks[1], lineno, "k")
                if k < 1:
                    raise ParseError(lineno, f"k must be at least 1, got {k}")
                if k >= INFINITY:
                    raise ParseError(lineno, "finite k must stay below the infinity sentinel")
                val = ValuationStructure(k)
        elif head == "w0":
            if saw_w0:
                raise ParseError(lineno, "duplicate w0 directive")
            if len(toks) != 2:
                raise ParseError(lineno, "expected 'w0 <int>'")
            w_zero = _int(toks[1], lineno, "w0")
            v = need_val(lineno)
            if not 0 <= w_zero <= v.k:
                raise ParseError(lineno, f"w0 {w_zero} outside [0, {v.k}]")
            saw_w0 = True
        elif head == "var":
            if len(toks) != 4:
                raise ParseError(lineno, "expected 'var <id> <lb> <ub>'")
            vid = _int(toks[1], lineno, "variable id")
            lb = _int(toks[2], lineno, "lb")
            ub = _int(toks[3], lineno, "ub")
            if vid != len(variables):
                raise ParseError(
                    lineno,
                    f"variable ids must appear in order; expected {len(variables)}, got {vid}",
                )
            if lb > ub:
                raise ParseError(lineno, f"empty interval [{lb}, {ub}]")
            variables.append(Variable(vid, Domain(lb, ub)))
        elif head == "fun":
            if len(toks) < 2:
                raise ParseError(lineno, "truncated fun directive")
            functions.append(_parse_fun(lines, lineno, toks, need_val(lineno), var_interval))
            fun_kinds.append(toks[1])
        elif head == "tag":
            _apply_tag(functions, fun_kinds, lineno, toks, need_val(lineno), variables)
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    if val is None:
        raise ParseError(1, "missing k directive")
    try:
        return Instance(
            name=name,
            valuation=val,
            variables=variables,
            functions=functions,
            w_zero=w_zero,
        )
    except CapError:
        raise
    except Exception as exc:  # structural validation failures
        raise ParseError(0, str(exc))


def _parse_fun(lines, lineno, toks, val, var_interval) -> CostFunction:
    sub = toks[1]
    args = toks[2:]
    if sub == "ext":
        if len(args) < 3:
            raise ParseError(lineno, "expected 'fun ext <r> <ids...> <default> <t>'")
        r = _int(args[0], lineno, "arity")
        if r < 1:
            raise ParseError(lineno, f"arity must be at least 1, got {r}")
        if len(args) != r + 3:
            raise ParseError(lineno, f"expected {r} variable ids, a default and a tuple count")
        scope = tuple(_int(t, lineno, "variable id") for t in args[1 : r + 1])
        if len(set(scope)) != r:
            raise ParseError(lineno, f"scope {scope} repeats a variable")
        intervals = [var_interval(v, lineno) for v in scope]
        default = _int(args[r + 1], lineno, "default cost")
        if not 0 <= default <= val.k:
            raise ParseError(lineno, f"default cost {default} outside [0, {val.k}]")
        count = _int(args[r + 2], lineno, "tuple count")
        table = {}
        for _ in range(count):
            item = lines.next()
            if item is None:
                raise ParseError(lineno, f"expected {count} tuple lines, file ended early")
            tl, ttoks = item
            if len(ttoks) != r + 1:
                raise ParseError(tl, f"expected {r} values and a cost")
            values = tuple(_int(t, tl, "value") for t in ttoks[:r])
            cost = _int(ttoks[r], tl, "cost")
            for w, (lo, hi) in zip(values, intervals):
                if not lo <= w <= hi:
                    raise ParseError(tl, f"value {w} outside [{lo}, {hi}]")
            if not 0 <= cost <= val.k:
                raise ParseError(tl, f"cost {cost} outside [0, {val.k}]")
            if values in table:
                raise ParseError(tl, f"duplicate tuple {values}")
            table[values] = cost
        return CostFunction(scope=scope, kind=ExtTable(default=default, table=table))

    def binary_scope(min_args: int, usage: str) -> Tuple[int, int]:
        if len(args) < min_args:
            raise ParseError(lineno, f"expected '{usage}'")
        i = _int(args[0], lineno, "variable id")
        j = _int(args[1], lineno, "variable id")
        var_interval(i, lineno)
        var_interval(j, lineno)
        if i == j:
            raise ParseError(lineno, "binary function needs two distinct variables")
        return i, j

    if sub in ("funceq", "antifuncneq"):
        usage = f"fun {sub} <i> <j> <alpha> [p q]"
        i, j = binary_scope(3, usage)
        if len(args) not in (3, 5):
            raise ParseError(lineno, f"expected '{usage}'")
        alpha = _int(args[2], lineno, "alpha")
        if not 1 <= alpha <= val.k:
            raise ParseError(lineno, f"alpha {alpha} outside [1, {val.k}]")
        p, q = 1, 0
        if len(args) == 5:
            p = _int(args[3], lineno, "p")
            q = _int(args[4], lineno, "q")
        kind = FunctionalEq(alpha, p, q) if sub == "funceq" else AntiFunctionalNeq(alpha, p, q)
        return CostFunction(scope=(i, j), kind=kind)
    if sub == "monoleq":
        i, j = binary_scope(4, "fun monoleq <i> <j> <delta> <alpha>")
        if len(args) != 4:
            raise ParseError(lineno, "expected 'fun monoleq <i> <j> <delta> <alpha>'")
        delta = _int(args[2], lineno, "delta")
        alpha = _int(args[3], lineno, "alpha")
        if not 0 <= alpha <= val.k:
            raise ParseError(lineno, f"alpha {alpha} outside [0, {val.k}]")
        return CostFunction(scope=(i, j), kind=MonoLeq(delta, alpha))
    if sub == "linplus":
        i, j = binary_scope(5, "fun linplus <i> <j> <a> <b> <c>")
        if len(args) != 5:
            raise ParseError(lineno, "expected 'fun linplus <i> <j> <a> <b> <c>'")
        a = _int(args[2], lineno, "a")
        b = _int(args[3], lineno, "b")
        c = _int(args[4], lineno, "c")
        return CostFunction(scope=(i, j), kind=LinPlus(a, b, c))
    if sub == "spacer":
        i, j = binary_scope(7, "fun spacer <i> <j> <d1> <d2> <d3> <d4> <slope>")
        if len(args) != 7:
            raise ParseError(lineno, "expected 'fun spacer <i> <j> <d1> <d2> <d3> <d4> <slope>'")
        d1, d2, d3, d4, slope = (_int(t, lineno, "spacer parameter") for t in args[2:7])
        if not d1 <= d2 <= d3 <= d4:
            raise ParseError(lineno, f"spacer breakpoints must be ordered, got {(d1, d2, d3, d4)}")
        if slope < 1:
            raise ParseError(lineno, f"spacer slope must be positive, got {slope}")
        return CostFunction(scope=(i, j), kind=Spacer(d1, d2, d3, d4, slope))
    raise ParseError(lineno, f"unknown function kind {sub!r}")


def _apply_tag(functions, fun_kinds, lineno, toks, val, variables) -> None:
    if len(toks) != 4 or toks[1] != "semiconvex" or toks[3] not in ("asc", "desc"):
        raise ParseError(lineno, "expected 'tag semiconvex <var-id> <asc|desc>'")
    if not functions:
        raise ParseError(lineno, "tag with no preceding function")
    if fun_kinds[-1] != "ext":
        raise ParseError(lineno, "semiconvex tags apply to extensional functions")
    fn = functions[-1]
    if fn.kind.semiconvex is not None:
        raise ParseError(lineno, "function already carries a semiconvex tag")
    wrt = _int(toks[2], lineno, "variable id")
    if wrt not in fn.scope:
        raise ParseError(lineno, f"variable {wrt} is not in the function's scope {fn.scope}")
    if fn.arity != 2:
        raise ParseError(lineno, "semiconvex tags apply to binary functions")
    bounds = {v: (variables[v].domain.lb, variables[v].domain.ub) for v in fn.scope}
    ok, witness = validate_semiconvex(fn, bounds, wrt, toks[3], val)
    if not ok:
        raise ParseError(
            lineno, f"table is not semi-convex w.r.t. variable {wrt}: witness {witness}"
        )
    functions[-1] = replace(fn, kind=replace(fn.kind, semiconvex=(wrt, toks[3])))


def parse_path(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read())


def emit(inst: Instance) -> str:
    """Canonical text for an instance; parsing it back yields an equal one."""
    out = [f"wcsp {inst.name}"]
    k = inst.valuation.k
    out.append(f"k {'inf' if k == INFINITY else k}")
    if inst.w_zero:
        out.append(f"w0 {inst.w_zero}")
    for v in inst.variables:
        out.append(f"var {v.id} {v.domain.lb} {v.domain.ub}")
    for fn in inst.functions:
        kind = fn.kind
        if isinstance(kind, ExtTable):
            ids = " ".join(str(v) for v in fn.scope)
            out.append(f"fun ext {fn.arity} {ids} {kind.default} {len(kind.table)}")
            for values in sorted(kind.table):
                vals = " ".join(str(w) for w in values)
                out.append(f"{vals} {kind.table[values]}")
            if kind.semiconvex is not None:
                wrt, order = kind.semiconvex
                out.append(f"tag semiconvex {wrt} {order}")
        elif isinstance(kind, FunctionalEq):
            out.append(_map_line("funceq", fn, kind))
        elif isinstance(kind, AntiFunctionalNeq):
            out.append(_map_line("antifuncneq", fn, kind))
        elif isinstance(kind, MonoLeq):
            out.append(f"fun monoleq {fn.scope[0]} {fn.scope[1]} {kind.delta} {kind.alpha}")
        elif isinstance(kind, LinPlus):
            out.append(f"fun linplus {fn.scope[0]} {fn.scope[1]} {kind.a} {kind.b} {kind.c}")
        elif isinstance(kind, Spacer):
            out.append(
                f"fun spacer {fn.scope[0]} {fn.scope[1]} "
                f"{kind.d1} {kind.d2} {kind.d3} {kind.d4} {kind.slope}"
            )
        else:
            raise ValueError(f"cannot emit kind {type(kind).__name__}")
    return "\n".join(out) + "\n"


def _map_line(name: str, fn, kind) -> str:
    base = f"fun {name} {fn.scope[0]} {fn.scope[1]} {kind.alpha}"
    if (kind.p, kind.q) != (1, 0):
        base += f" {kind.p} {kind.q}"
    return base
