"""Cost functions: representations, evaluation and box minimization.

Every binary kind other than a plain table carries enough structure to
compute its minimum over a sub-box far below full enumeration:

* equality-style functions (zero cost on exactly one partner value) need one
  membership check per value of the first variable;
* inequality-style functions (a single penalised partner value) and tables
  that are semi-convex along one axis only need the two endpoint costs of
  that axis per value of the other variable;
* monotone and clamped-linear functions reach their minimum at a corner of
  the box;
* the trapezoid gap function is minimised analytically on the interval of
  reachable gaps.

Minimization works on *effective* costs raw(t) - delta_shift, where
delta_shift records cost already moved to the network's constant term. The
shift never exceeds the raw minimum over the current box, so the subtraction
stays within the cost scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple, Union

from .core import (
    Box,
    CapError,
    ContractError,
    ValuationStructure,
    check_cost,
    ominus,
)

# Semi-convexity validation is quadratic in the interval width, so it is
# refused (never silently skipped) above this many values per variable.
VALIDATOR_CAP = 512


@dataclass(frozen=True)
class ExtTable:
    """Explicit table with a default cost for unlisted tuples.

    `semiconvex` optionally tags one scope variable as the ordered axis:
    for every value of the other variable, the super-level sets of the cost
    along that axis are contiguous. The tag licenses endpoint-only
    minimization along the tagged axis and is verified at load time.
    """

    default: int
    table: Dict[Tuple[int, ...], int]
    semiconvex: Optional[Tuple[int, str]] = None  # (variable id, "asc"|"desc")


@dataclass(frozen=True)
class FunctionalEq:
    """Cost 0 iff v_j == p*v_i + q, else alpha."""

    alpha: int
    p: int = 1
    q: int = 0


@dataclass(frozen=True)
class AntiFunctionalNeq:
    """Cost alpha iff v_j == p*v_i + q, else 0."""

    alpha: int
    p: int = 1
    q: int = 0


@dataclass(frozen=True)
class MonoLeq:
    """Cost 0 iff v_i + delta <= v_j, else alpha."""

    delta: int
    alpha: int


@dataclass(frozen=True)
class LinPlus:
    """Cost min(k, max(0, a*v_i + b*v_j + c))."""

    a: int
    b: int
    c: int


@dataclass(frozen=True)
class Spacer:
    """Trapezoid on the gap g = v_j - v_i.

    Zero on [d2, d3], ramps of the given slope on [d1, d2) and (d3, d4],
    intolerable outside [d1, d4]; everything clamped at k.
    """

    d1: int
    d2: int
    d3: int
    d4: int
    slope: int


Kind = Union[ExtTable, FunctionalEq, AntiFunctionalNeq, MonoLeq, LinPlus, Spacer]


@dataclass(frozen=True)
class CostFunction:
    scope: Tuple[int, ...]
    kind: Kind

    @property
    def arity(self) -> int:
        return len(self.scope)


@dataclass
class FunctionOverlay:
    """Per-solve mutable companion of a cost function.

    `delta_shift` is the amount of cost already projected to the constant
    term; `eval_count` counts raw cost lookups (including the membership
    checks of the equality kind, which inspect the function once each).
    """

    delta_shift: int = 0
    eval_count: int = 0


class _Counter:
    __slots__ = ("overlay",)

    def __init__(self, overlay: Optional[FunctionOverlay]):
        self.overlay = overlay

    def bump(self, n: int = 1) -> None:
        if self.overlay is not None:
            self.overlay.eval_count += n


def raw_cost(fn: CostFunction, values: Tuple[int, ...], val: ValuationStructure) -> int:
    """Cost of one tuple before any shift, clamped to [0, k]."""
    kind = fn.kind
    if isinstance(kind, ExtTable):
        return kind.table.get(values, kind.default)
    vi, vj = values
    if isinstance(kind, FunctionalEq):
        return 0 if vj == kind.p * vi + kind.q else kind.alpha
    if isinstance(kind, AntiFunctionalNeq):
        return kind.alpha if vj == kind.p * vi + kind.q else 0
    if isinstance(kind, MonoLeq):
        return 0 if vi + kind.delta <= vj else kind.alpha
    if isinstance(kind, LinPlus):
        c = kind.a * vi + kind.b * vj + kind.c
        if c <= 0:
            return 0
        return c if c < val.k else val.k
    if isinstance(kind, Spacer):
        g = vj - vi
        if g < kind.d1 or g > kind.d4:
            return val.k
        if g < kind.d2:
            c = kind.slope * (kind.d2 - g)
        elif g > kind.d3:
            c = kind.slope * (g - kind.d3)
        else:
            return 0
        return c if c < val.k else val.k
    raise ContractError(f"unknown cost kind {type(kind).__name__}")


def evaluate(
    fn: CostFunction,
    t: Mapping[int, int],
    val: ValuationStructure,
    overlay: Optional[FunctionOverlay] = None,
) -> int:
    """Effective cost of an assignment of exactly the scope."""
    if len(t) != len(fn.scope) or any(v not in t for v in fn.scope):
        raise ContractError(f"assignment {dict(t)} does not match scope {fn.scope}")
    values = tuple(t[v] for v in fn.scope)
    raw = raw_cost(fn, values, val)
    if overlay is None:
        return raw
    overlay.eval_count += 1
    if overlay.delta_shift:
        return ominus(raw, overlay.delta_shift, val)
    return raw


def _check_box(fn: CostFunction, box: Box) -> None:
    if len(box) != len(fn.scope) or any(v not in box for v in fn.scope):
        raise ContractError(f"box {dict(box)} does not cover scope {fn.scope}")
    for v in fn.scope:
        lo, hi = box[v]
        if lo > hi:
            raise ContractError(f"empty sub-interval for variable {v}")


def min_over_box(
    fn: CostFunction,
    box: Box,
    val: ValuationStructure,
    overlay: Optional[FunctionOverlay] = None,
) -> int:
    """Minimum effective cost over all tuples in the box.

    Dispatches on the kind so that the number of raw lookups stays within
    the per-kind cap (4 for corner kinds, 2*d for endpoint kinds, d+1 for
    the equality kind, and the box volume for plain tables).
    """
    _check_box(fn, box)
    shift = overlay.delta_shift if overlay is not None else 0
    counter = _Counter(overlay)
    kind = fn.kind

    if isinstance(kind, (MonoLeq, LinPlus)):
        raw_min = _corner_min(fn, box, val, counter, shift)
    elif isinstance(kind, Spacer):
        raw_min = _spacer_min(fn, box, val, counter)
    elif isinstance(kind, FunctionalEq):
        raw_min = _functional_min(fn, box, counter)
    elif isinstance(kind, AntiFunctionalNeq):
        raw_min = _antifunctional_min(fn, box, val, counter, shift)
    elif isinstance(kind, ExtTable) and kind.semiconvex is not None:
        raw_min = _semiconvex_min(fn, box, val, counter, shift)
    elif isinstance(kind, ExtTable):
        raw_min = _table_min(fn, box, val, counter, shift)
    else:
        raise ContractError(f"unknown cost kind {type(kind).__name__}")

    if shift:
        return ominus(raw_min, shift, val)
    return raw_min


def min_over_box_pinned(
    fn: CostFunction,
    box: Box,
    pin_var: int,
    pin_val: int,
    val: ValuationStructure,
    overlay: Optional[FunctionOverlay] = None,
) -> int:
    """min_over_box with one variable's sub-interval collapsed to a point."""
    if pin_var not in fn.scope:
        raise ContractError(f"pin variable {pin_var} not in scope {fn.scope}")
    _check_box(fn, box)
    lo, hi = box[pin_var]
    if not lo <= pin_val <= hi:
        raise ContractError(f"pin value {pin_val} outside [{lo}, {hi}]")
    pinned = dict(box)
    pinned[pin_var] = (pin_val, pin_val)
    return min_over_box(fn, pinned, val, overlay)


def _corner_min(fn, box, val, counter, shift) -> int:
    xi, xj = fn.scope
    ilo, ihi = box[xi]
    jlo, jhi = box[xj]
    corners = dict.fromkeys(
        [(ilo, jlo), (ilo, jhi), (ihi, jlo), (ihi, jhi)]
    )
    best = None
    for t in corners:
        counter.bump()
        c = raw_cost(fn, t, val)
        if best is None or c < best:
            best = c
            if best <= shift:
                break
    return best


def _spacer_min(fn, box, val, counter) -> int:
    # The cost depends on the gap alone and is non-increasing left of the
    # zero plateau and non-decreasing right of it, so the minimum over the
    # reachable gap interval is at a single analytically chosen gap.
    kind = fn.kind
    xi, xj = fn.scope
    ilo, ihi = box[xi]
    jlo, jhi = box[xj]
    g_lo = jlo - ihi
    g_hi = jhi - ilo
    if g_hi < kind.d2:
        g = g_hi
    elif g_lo > kind.d3:
        g = g_lo
    else:
        g = max(g_lo, kind.d2)
    vi = max(ilo, jlo - g)
    counter.bump()
    return raw_cost(fn, (vi, vi + g), val)


def _functional_min(fn, box, counter) -> int:
    kind = fn.kind
    xi, xj = fn.scope
    ilo, ihi = box[xi]
    jlo, jhi = box[xj]
    for vi in range(ilo, ihi + 1):
        counter.bump()  # membership check of the support value
        support = kind.p * vi + kind.q
        if jlo <= support <= jhi:
            counter.bump()  # read the supporting pair
            return 0
    return kind.alpha


def _antifunctional_min(fn, box, val, counter, shift) -> int:
    # Penalised pairs form an affine graph, so the function is semi-convex
    # along both axes and a degenerate side lets us probe just the two
    # endpoints of the free side.
    xi, xj = fn.scope
    ilo, ihi = box[xi]
    jlo, jhi = box[xj]
    if ilo == ihi:
        probes = dict.fromkeys([(ilo, jlo), (ilo, jhi)])
    elif jlo == jhi:
        probes = dict.fromkeys([(ilo, jlo), (ihi, jlo)])
    else:
        probes = None
    if probes is not None:
        best = None
        for t in probes:
            counter.bump()
            c = raw_cost(fn, t, val)
            if best is None or c < best:
                best = c
                if best <= shift:
                    break
        return best
    best = None
    for vi in range(ilo, ihi + 1):
        for vj in (jlo, jhi):
            counter.bump()
            c = raw_cost(fn, (vi, vj), val)
            if best is None or c < best:
                best = c
                if best <= shift:
                    return best
    return best


def _semiconvex_min(fn, box, val, counter, shift) -> int:
    ord_var, _direction = fn.kind.semiconvex
    xi, xj = fn.scope
    partner = xj if ord_var == xi else xi
    plo, phi = box[partner]
    olo, ohi = box[ord_var]
    endpoints = (olo,) if olo == ohi else (olo, ohi)
    best = None
    for p in range(plo, phi + 1):
        for o in endpoints:
            values = (p, o) if partner == xi else (o, p)
            counter.bump()
            c = raw_cost(fn, values, val)
            if best is None or c < best:
                best = c
                if best <= shift:
                    return best
    return best


def _table_min(fn, box, val, counter, shift) -> int:
    # Iterate whichever of (box tuples, stored entries) is smaller; either
    # way the number of lookups stays within the box volume. The sparse
    # path is what keeps huge sparse unary tables affordable.
    kind = fn.kind
    ranges = [box[v] for v in fn.scope]
    vol = 1
    for lo, hi in ranges:
        vol *= hi - lo + 1
    if len(kind.table) < vol:
        best = None
        in_box = 0
        for values, c in kind.table.items():
            if all(lo <= w <= hi for w, (lo, hi) in zip(values, ranges)):
                in_box += 1
                counter.bump()
                if best is None or c < best:
                    best = c
        if in_box < vol:
            counter.bump()  # the default cost is reachable inside the box
            if best is None or kind.default < best:
                best = kind.default
        return best
    best = None
    for values in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges)):
        counter.bump()
        c = kind.table.get(values, kind.default)
        if best is None or c < best:
            best = c
            if best <= shift:
                break
    return best


SemiconvexWitness = Tuple[int, int, int]  # (partner value, beta, gap value)


def validate_semiconvex(
    fn: CostFunction,
    bounds: Box,
    wrt: int,
    order: str,
    val: ValuationStructure,
) -> Tuple[bool, Optional[SemiconvexWitness]]:
    """Check contiguity of super-level sets along the `wrt` axis.

    For every value of the partner variable and every observed cost beta,
    the set of `wrt` values with cost >= beta must be contiguous under the
    declared order. Returns a witness (partner value, beta, gap value) on
    failure. Refused above VALIDATOR_CAP values per variable.
    """
    if fn.arity != 2:
        raise ContractError("semi-convexity is defined for binary scopes")
    if wrt not in fn.scope:
        raise ContractError(f"variable {wrt} not in scope {fn.scope}")
    if order not in ("asc", "desc"):
        raise ContractError(f"order must be 'asc' or 'desc', got {order!r}")
    xi, xj = fn.scope
    partner = xj if wrt == xi else xi
    for v in fn.scope:
        lo, hi = bounds[v]
        if hi - lo + 1 > VALIDATOR_CAP:
            raise CapError(
                f"variable {v} has {hi - lo + 1} values, above the validation cap {VALIDATOR_CAP}"
            )
    axis = list(range(bounds[wrt][0], bounds[wrt][1] + 1))
    if order == "desc":
        axis.reverse()
    plo, phi = bounds[partner]
    for p in range(plo, phi + 1):
        row = []
        for o in axis:
            values = (p, o) if partner == xi else (o, p)
            row.append(raw_cost(fn, values, val))
        m = len(row)
        if m < 3:
            continue
        prefix = [row[0]] * m
        for idx in range(1, m):
            prefix[idx] = max(prefix[idx - 1], row[idx])
        suffix = [row[-1]] * m
        for idx in range(m - 2, -1, -1):
            suffix[idx] = max(suffix[idx + 1], row[idx])
        for idx in range(1, m - 1):
            left, right = prefix[idx - 1], suffix[idx + 1]
            if left > row[idx] < right:
                beta = min(left, right)
                return False, (p, beta, axis[idx])
    return True, None


MonotonicWitness = Tuple[Tuple[int, int], Tuple[int, int], int, int]


def validate_monotonic(
    fn: CostFunction,
    bounds: Box,
    val: ValuationStructure,
    order_i: str = "asc",
    order_j: str = "asc",
) -> Tuple[bool, Optional[MonotonicWitness]]:
    """Check dominance: moving down the i-order or up the j-order never
    raises the cost. Verified through adjacent steps, which is equivalent
    by transitivity. Returns the violating adjacent pair on failure.
    """
    if fn.arity != 2:
        raise ContractError("monotonicity is defined for binary scopes")
    for v in fn.scope:
        lo, hi = bounds[v]
        if hi - lo + 1 > VALIDATOR_CAP:
            raise CapError(
                f"variable {v} has {hi - lo + 1} values, above the validation cap {VALIDATOR_CAP}"
            )
    xi, xj = fn.scope
    i_axis = list(range(bounds[xi][0], bounds[xi][1] + 1))
    j_axis = list(range(bounds[xj][0], bounds[xj][1] + 1))
    if order_i == "desc":
        i_axis.reverse()
    if order_j == "desc":
        j_axis.reverse()
    rows = [[raw_cost(fn, (vi, vj), val) for vj in j_axis] for vi in i_axis]
    # Non-decreasing along the i-order.
    for a in range(len(i_axis) - 1):
        for b in range(len(j_axis)):
            if rows[a][b] > rows[a + 1][b]:
                return False, (
                    (i_axis[a], j_axis[b]),
                    (i_axis[a + 1], j_axis[b]),
                    rows[a][b],
                    rows[a + 1][b],
                )
    # Non-increasing along the j-order.
    for a in range(len(i_axis)):
        for b in range(len(j_axis) - 1):
            if rows[a][b] < rows[a][b + 1]:
                return False, (
                    (i_axis[a], j_axis[b]),
                    (i_axis[a], j_axis[b + 1]),
                    rows[a][b],
                    rows[a][b + 1],
                )
    return True, None


def validate_convex(
    fn: CostFunction,
    bounds: Box,
    val: ValuationStructure,
) -> bool:
    """Semi-convex along each axis (under the natural order of either
    axis or its reverse), which is what licences corner minimization."""
    xi, xj = fn.scope
    for wrt in (xi, xj):
        ok = any(
            validate_semiconvex(fn, bounds, wrt, order, val)[0]
            for order in ("asc", "desc")
        )
        if not ok:
            return False
    return True


def check_function(fn: CostFunction, bounds: Box, val: ValuationStructure) -> None:
    """Structural validation used at construction and load time."""
    if fn.arity == 0:
        raise ContractError("cost functions must have a non-empty scope")
    if len(set(fn.scope)) != fn.arity:
        raise ContractError(f"scope {fn.scope} repeats a variable")
    kind = fn.kind
    if isinstance(kind, ExtTable):
        check_cost(kind.default, val)
        for values, c in kind.table.items():
            if len(values) != fn.arity:
                raise ContractError(f"tuple {values} does not match arity {fn.arity}")
            for w, v in zip(values, fn.scope):
                lo, hi = bounds[v]
                if not lo <= w <= hi:
                    raise ContractError(
                        f"tuple value {w} outside [{lo}, {hi}] of variable {v}"
                    )
            check_cost(c, val)
        if kind.semiconvex is not None:
            if fn.arity != 2:
                raise ContractError("semi-convex tags apply to binary tables only")
            wrt, order = kind.semiconvex
            ok, witness = validate_semiconvex(fn, bounds, wrt, order, val)
            if not ok:
                raise ContractError(
                    f"table is not semi-convex w.r.t. variable {wrt}: witness {witness}"
                )
        return
    if fn.arity != 2:
        raise ContractError(f"{type(kind).__name__} requires a binary scope")
    if isinstance(kind, (FunctionalEq, AntiFunctionalNeq)):
        if not 1 <= kind.alpha <= val.k:
            raise ContractError(f"alpha {kind.alpha} outside [1, {val.k}]")
    elif isinstance(kind, MonoLeq):
        check_cost(kind.alpha, val)
    elif isinstance(kind, LinPlus):
        _check_linplus_semiconvex(fn, bounds, val)
    elif isinstance(kind, Spacer):
        if not kind.d1 <= kind.d2 <= kind.d3 <= kind.d4:
            raise ContractError(
                f"spacer breakpoints must be ordered, got "
                f"({kind.d1}, {kind.d2}, {kind.d3}, {kind.d4})"
            )
        if kind.slope < 1:
            raise ContractError(f"spacer slope must be positive, got {kind.slope}")


def _check_linplus_semiconvex(fn, bounds, val) -> None:
    # A clamped linear form is monotone in each variable, hence semi-convex
    # along each axis for any coefficient signs. Verified on a sampled grid
    # so a future kind change cannot silently break corner minimization.
    xi, xj = fn.scope
    sample = {}
    for v in (xi, xj):
        lo, hi = bounds[v]
        if hi - lo + 1 <= 8:
            sample[v] = list(range(lo, hi + 1))
        else:
            step = (hi - lo) // 7
            sample[v] = sorted({lo + t * step for t in range(8)} | {hi})
    for fixed_var, moving_var in ((xi, xj), (xj, xi)):
        for w in sample[fixed_var]:
            costs = []
            for m in sample[moving_var]:
                values = (w, m) if fixed_var == xi else (m, w)
                costs.append(raw_cost(fn, values, val))
            ups = all(a <= b for a, b in zip(costs, costs[1:]))
            downs = all(a >= b for a, b in zip(costs, costs[1:]))
            if not (ups or downs):
                raise ContractError(
                    "clamped linear function is not monotone along "
                    f"variable {moving_var} at {fixed_var}={w}"
                )
