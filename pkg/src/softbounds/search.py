"""Depth-first branch-and-bound with trailed state restoration.

Each node re-establishes the selected consistency incrementally; the
incumbent bound is global (tightening it is the point of the search) while
domains, the constant term and all shift structures are restored bit-exactly
on backtrack. Retained per-node state is the trail segment of the node's own
changes, never a copy of anything domain-sized.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .core import CapError, ContractError
from .costfn import raw_cost
from .network import Instance, total_cost
from .propagation import (
    AC_VALUE_CAP,
    PropState,
    project_to_zero,
    resume_bounds,
    resume_values,
)

CONSISTENCIES = ("nc", "ac", "bac", "bac0")


@dataclass
class SearchOptions:
    consistency: str = "bac0"
    initial_ub: Optional[int] = None
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    branching: str = "dichotomic"  # or "enumerate"
    var_order: str = "min_domain"  # or "lex"
    seed: int = 0


@dataclass
class SearchResult:
    status: str  # "optimal" | "infeasible" | "limit"
    best_cost: Optional[int]
    best_assignment: Optional[Dict[int, int]]
    nodes: int
    backtracks: int
    incumbents: List[int] = field(default_factory=list)


class _Limit(Exception):
    pass


class _Searcher:
    def __init__(self, inst: Instance, opts: SearchOptions, st: PropState):
        self.inst = inst
        self.opts = opts
        self.st = st
        self.nodes = 0
        self.backtracks = 0
        self.best_cost: Optional[int] = None
        self.best_assignment: Optional[Dict[int, int]] = None
        self.incumbents: List[int] = []
        self.t0 = time.perf_counter()

    def run(self) -> str:
        status = "optimal"
        mark = self.st.mark()
        try:
            self._node(0, touched=list(range(len(self.st.domains))))
        except _Limit:
            status = "limit"
        finally:
            self.st.undo_to(mark)
        if status != "limit" and self.best_cost is None:
            status = "infeasible"
        return status

    def _check_limits(self) -> None:
        if self.opts.node_limit is not None and self.nodes >= self.opts.node_limit:
            raise _Limit
        if (
            self.opts.time_limit is not None
            and time.perf_counter() - self.t0 > self.opts.time_limit
        ):
            raise _Limit

    def _enforce(self, touched: List[int]) -> bool:
        st = self.st
        c = self.opts.consistency
        if c == "bac0":
            return resume_bounds(st, project=True, touched=touched)
        if c == "bac":
            # Bound filtering plus backward checking: fully assigned
            # functions contribute their cost to the constant term.
            while True:
                if resume_bounds(st, project=False, touched=touched):
                    return True
                touched = []
                progressed = False
                for fi, fn in enumerate(st.instance.functions):
                    if all(st.domains[v].lb == st.domains[v].ub for v in fn.scope):
                        if project_to_zero(st, fi):
                            progressed = True
                            # The cached contributions of this function
                            # predate the shift and would double count it;
                            # the singleton tuple now costs exactly zero.
                            for v in fn.scope:
                                slot = st.slot_of[v][fi]
                                st._set_w_inf(v, st.w_inf[v] - st.delta_inf[v][slot])
                                st._set_delta_inf(v, slot, 0)
                                st._set_w_sup(v, st.w_sup[v] - st.delta_sup[v][slot])
                                st._set_delta_sup(v, slot, 0)
                            if st.w_zero >= st.k:
                                return True
                if not progressed:
                    return False
        if c == "ac":
            return resume_values(st, arc=True, touched=touched)
        if c == "nc":
            while True:
                if resume_values(st, arc=False, touched=touched):
                    return True
                touched = []
                progressed = False
                for fi, fn in enumerate(st.instance.functions):
                    if fn.arity == 1:
                        continue  # absorbed into the unary overlays
                    if all(st.domains[v].lb == st.domains[v].ub for v in fn.scope):
                        if project_to_zero_values(st, fi):
                            progressed = True
                            if st.w_zero >= st.k:
                                return True
                if not progressed:
                    return False
        raise ContractError(f"unknown consistency {c!r}")

    def _node(self, depth: int, touched: List[int]) -> None:
        self._check_limits()
        self.nodes += 1
        if self._enforce(touched):
            if depth > 0:
                self.backtracks += 1
            return
        st = self.st
        var = self._pick_variable()
        if var is None:
            t = {i: st.domains[i].lb for i in range(len(st.domains))}
            c = total_cost(self.inst, t)
            if c < st.k:
                self.best_cost = c
                self.best_assignment = t
                self.incumbents.append(c)
                st.k = c  # strictly-better search from here on
            return
        d = st.domains[var]
        if self.opts.branching == "enumerate":
            for v in list(d.iter_values()):
                if not d.contains(v):
                    continue  # value may have died in a sibling's propagation
                mark = st.mark()
                self._narrow(var, v, v)
                self._node(depth + 1, touched=[var])
                st.undo_to(mark)
        else:
            mid = (d.lb + d.ub) // 2
            for lo, hi in ((d.lb, mid), (mid + 1, d.ub)):
                mark = st.mark()
                self._narrow(var, lo, hi)
                if st.domains[var].is_empty:
                    st.undo_to(mark)
                    continue
                self._node(depth + 1, touched=[var])
                st.undo_to(mark)

    def _pick_variable(self) -> Optional[int]:
        st = self.st
        best = None
        best_size = None
        for i, d in enumerate(st.domains):
            if d.lb == d.ub:
                continue
            if self.opts.var_order == "lex":
                return i
            size = d.size()
            if best_size is None or size < best_size:
                best, best_size = i, size
        return best

    def _narrow(self, var: int, lo: int, hi: int) -> None:
        st = self.st
        d = st.domains[var]
        new_lb = max(d.lb, lo)
        new_ub = min(d.ub, hi)
        if d.removed:
            for v in [w for w in d.removed if w < new_lb or w > new_ub]:
                st._rm_discard(var, v)
            while new_lb <= new_ub and d.removed and new_lb in d.removed:
                st._rm_discard(var, new_lb)
                new_lb += 1
            while new_lb <= new_ub and d.removed and new_ub in d.removed:
                st._rm_discard(var, new_ub)
                new_ub -= 1
        st._set_lb(var, new_lb)
        st._set_ub(var, new_ub)
        if st.mode == "interval":
            # The variable's own bound caches refer to the old bounds and
            # would be unsound to prune with; zero them, the queue refresh
            # recomputes them.
            st._set_w_inf(var, 0)
            st._set_w_sup(var, 0)
            for pos in range(len(st.delta_inf[var])):
                st._set_delta_inf(var, pos, 0)
                st._set_delta_sup(var, pos, 0)


def project_to_zero_values(st: PropState, fi: int) -> bool:
    """Backward-checking projection for value mode: move a fully assigned
    function's effective cost to the constant term via its shift."""
    fn = st.instance.functions[fi]
    values = tuple(st.domains[v].lb for v in fn.scope)
    ov = st.overlays[fi]
    ov.eval_count += 1
    raw = raw_cost(fn, values, st.val)
    valk = st.val.k
    eff = valk if raw == valk else raw - min(ov.delta_shift, raw)
    if eff == 0:
        return False
    st.stats.projections += 1
    st._trace(event="project", fn=fi, amount=eff)
    st._set_w_zero(min(st.k, st.w_zero + eff))
    st._set_shift(fi, min(valk, ov.delta_shift + eff))
    return True


def solve(inst: Instance, opts: SearchOptions) -> SearchResult:
    """Exact optimum (with witness) or proof of infeasibility below k."""
    if opts.consistency not in CONSISTENCIES:
        raise ContractError(f"unknown consistency {opts.consistency!r}")
    if opts.branching not in ("dichotomic", "enumerate"):
        raise ContractError(f"unknown branching {opts.branching!r}")
    if opts.var_order not in ("min_domain", "lex"):
        raise ContractError(f"unknown variable order {opts.var_order!r}")
    if opts.branching == "enumerate":
        widest = max((v.domain.size() for v in inst.variables), default=0)
        if widest > AC_VALUE_CAP:
            raise CapError(
                f"enumeration branching is capped at {AC_VALUE_CAP} values "
                f"per domain, got {widest}"
            )
    if opts.consistency == "ac":
        for fn in inst.functions:
            if fn.arity > 2:
                raise ContractError(
                    "arc consistency search requires unary and binary functions only"
                )
    mode = "values" if opts.consistency in ("nc", "ac") else "interval"
    st = PropState(inst, mode=mode, record_trail=True)
    if opts.initial_ub is not None:
        if opts.initial_ub < 1:
            raise ContractError("initial upper bound must be at least 1")
        st.k = min(st.k, opts.initial_ub)

    depth_bound = 100 + 3 * len(inst.variables) + sum(
        max(1, v.domain.size()).bit_length() for v in inst.variables
    )
    if sys.getrecursionlimit() < depth_bound + 100:
        sys.setrecursionlimit(depth_bound + 100)

    searcher = _Searcher(inst, opts, st)
    status = searcher.run()
    return SearchResult(
        status=status,
        best_cost=searcher.best_cost,
        best_assignment=searcher.best_assignment,
        nodes=searcher.nodes,
        backtracks=searcher.backtracks,
        incumbents=searcher.incumbents,
    )
