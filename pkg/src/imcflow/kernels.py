"""Hot numeric kernels: float max-flow and exhaustive subset evaluation.

Each kernel has a scalar-loop implementation compiled with numba and, for
the subset evaluator, a vectorized numpy fallback; :mod:`imcflow._accel`
decides at import time which route runs (``IMCFLOW_KERNELS`` environment
flag).  The two subset routes apply additions in the same order per subset,
so their outputs agree bitwise, which the tests assert.

Max-flow is a plain Dinic on paired residual edges (edge ``e ^ 1`` is the
reverse of ``e``).  Capacities are floats; a relative epsilon decides which
residual arcs count as usable.  scipy's max-flow requires integer
capacities, which is why this is hand-rolled.
"""

from __future__ import annotations

import numpy as np

from ._accel import NUMBA_OK, USING_NUMBA, njit

__all__ = ["FlowGraph", "USING_NUMBA", "max_flow", "min_cut_sides",
           "proper_superset_min", "subset_values"]


# -- Dinic max-flow ----------------------------------------------------------

@njit(cache=True)
def _dinic(nv, s, t, eto, nxt, head, cap, eps):
    total = 0.0
    level = np.empty(nv, np.int64)
    it = np.empty(nv, np.int64)
    queue = np.empty(nv, np.int64)
    path = np.empty(nv + 1, np.int64)
    while True:
        for i in range(nv):
            level[i] = -1
        qh, qt = 0, 0
        queue[qt] = s
        qt += 1
        level[s] = 0
        while qh < qt:
            v = queue[qh]
            qh += 1
            e = head[v]
            while e != -1:
                w = eto[e]
                if cap[e] > eps and level[w] < 0:
                    level[w] = level[v] + 1
                    queue[qt] = w
                    qt += 1
                e = nxt[e]
        if level[t] < 0:
            break
        for i in range(nv):
            it[i] = head[i]
        while True:
            v = s
            depth = 0
            found = False
            while True:
                if v == t:
                    found = True
                    break
                e = it[v]
                while e != -1:
                    w = eto[e]
                    if cap[e] > eps and level[w] == level[v] + 1:
                        break
                    e = nxt[e]
                it[v] = e
                if e != -1:
                    path[depth] = e
                    depth += 1
                    v = eto[e]
                else:
                    level[v] = -1
                    if depth == 0:
                        break
                    depth -= 1
                    v = eto[path[depth] ^ 1]
                    if it[v] != -1:
                        it[v] = nxt[it[v]]
            if not found:
                break
            aug = 1e300
            for d in range(depth):
                if cap[path[d]] < aug:
                    aug = cap[path[d]]
            for d in range(depth):
                cap[path[d]] -= aug
                cap[path[d] ^ 1] += aug
            total += aug
    return total


@njit(cache=True)
def _residual_reach(nv, start, eto, nxt, head, cap, eps, forward):
    seen = np.zeros(nv, np.bool_)
    queue = np.empty(nv, np.int64)
    qh, qt = 0, 0
    queue[qt] = start
    qt += 1
    seen[start] = True
    while qh < qt:
        v = queue[qh]
        qh += 1
        e = head[v]
        while e != -1:
            w = eto[e]
            if not seen[w]:
                # forward: usable arc v -> w; backward: usable arc w -> v,
                # whose capacity lives on the paired edge
                c = cap[e] if forward else cap[e ^ 1]
                if c > eps:
                    seen[w] = True
                    queue[qt] = w
                    qt += 1
            e = nxt[e]
    return seen


class FlowGraph:
    """Edge-pair flow network builder on ``nv`` nodes."""

    def __init__(self, nv: int):
        self.nv = nv
        self._to: list[int] = []
        self._cap: list[float] = []
        self._nxt: list[int] = []
        self._head = np.full(nv, -1, dtype=np.int64)

    def add(self, a: int, b: int, cap_ab: float, cap_ba: float = 0.0) -> None:
        for (u, v, c) in ((a, b, cap_ab), (b, a, cap_ba)):
            e = len(self._to)
            self._to.append(v)
            self._cap.append(float(c))
            self._nxt.append(int(self._head[u]))
            self._head[u] = e

    def arrays(self):
        return (np.asarray(self._to, dtype=np.int64),
                np.asarray(self._nxt, dtype=np.int64),
                self._head.copy(),
                np.asarray(self._cap, dtype=np.float64))


def max_flow(graph: FlowGraph, s: int, t: int,
             eps_rel: float = 1e-12) -> tuple[float, tuple]:
    """Run Dinic from s to t; returns (flow value, residual arrays)."""
    eto, nxt, head, cap = graph.arrays()
    scale = float(cap.max()) if cap.size else 1.0
    eps = eps_rel * max(scale, 1.0)
    value = _dinic(graph.nv, s, t, eto, nxt, head, cap, eps)
    return float(value), (eto, nxt, head, cap, eps)


def min_cut_sides(graph_nv: int, s: int, t: int, residual) -> tuple[np.ndarray, np.ndarray]:
    """Extremal minimum cuts from a residual network.

    Returns boolean masks over nodes: the smallest source side (nodes the
    source still reaches) and the largest (complement of the nodes that
    still reach the sink).  Every minimum cut's source side is sandwiched
    between the two.
    """
    eto, nxt, head, cap, eps = residual
    small = _residual_reach(graph_nv, s, eto, nxt, head, cap, eps, True)
    to_sink = _residual_reach(graph_nv, t, eto, nxt, head, cap, eps, False)
    large = ~np.asarray(to_sink, dtype=bool)
    return np.asarray(small, dtype=bool), large


# -- exhaustive subset evaluation -------------------------------------------

@njit(cache=True)
def _subset_values_loop(nbits, base, ea, eb, ew, unary):
    size = 1 << nbits
    out = np.empty(size, np.float64)
    for mask in range(size):
        val = base
        for i in range(nbits):
            if (mask >> i) & 1:
                val += unary[i]
        for e in range(ew.shape[0]):
            if ((mask >> ea[e]) ^ (mask >> eb[e])) & 1:
                val += ew[e]
        out[mask] = val
    return out


def _subset_values_numpy(nbits, base, ea, eb, ew, unary):
    masks = np.arange(1 << nbits, dtype=np.uint64)
    out = np.full(masks.shape[0], base, dtype=np.float64)
    for i in range(nbits):
        out += unary[i] * ((masks >> np.uint64(i)) & np.uint64(1))
    for e in range(ew.shape[0]):
        bits = ((masks >> np.uint64(ea[e])) ^ (masks >> np.uint64(eb[e]))) & np.uint64(1)
        out += ew[e] * bits
    return out


def subset_values(nbits: int, base: float, ea, eb, ew, unary) -> np.ndarray:
    """Value of ``base + sum(unary[i] for i in S) + sum(w_e for cut edges)``
    for every subset S of ``nbits`` items, indexed by bit mask.

    Cut edges are those with exactly one endpoint bit set.  Works for both
    energy minimization (unary = linear coefficients) and perimeter tables
    (unary = exterior interface weights).
    """
    if nbits < 0 or nbits > 24:
        raise ValueError(f"subset enumeration limited to 24 bits, got {nbits}")
    ea = np.asarray(ea, dtype=np.int64)
    eb = np.asarray(eb, dtype=np.int64)
    ew = np.asarray(ew, dtype=np.float64)
    unary = np.asarray(unary, dtype=np.float64)
    if NUMBA_OK:
        return _subset_values_loop(nbits, float(base), ea, eb, ew, unary)
    return _subset_values_numpy(nbits, float(base), ea, eb, ew, unary)


def proper_superset_min(values: np.ndarray, nbits: int) -> np.ndarray:
    """For each mask, the minimum of ``values`` over its proper supersets.

    Masks with no proper superset (the full set) get ``inf``.  Runs the
    standard per-bit sweep in O(2^n * n).
    """
    size = 1 << nbits
    if values.shape[0] != size:
        raise ValueError("values array does not match bit count")
    incl = values.astype(np.float64).copy()
    idx = np.arange(size)
    for b in range(nbits):
        bit = 1 << b
        lo = idx[(idx & bit) == 0]
        incl[lo] = np.minimum(incl[lo], incl[lo + bit])
    proper = np.full(size, np.inf)
    for b in range(nbits):
        bit = 1 << b
        lo = idx[(idx & bit) == 0]
        proper[lo] = np.minimum(proper[lo], incl[lo + bit])
    return proper
