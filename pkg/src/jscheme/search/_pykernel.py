"""Pure-Python clique search; mirrors the compiled kernel step for step.

Rows are Python ints.  Node counts, witnesses and enumeration order agree
with ``_kernel.clique_search`` for the same input.
"""
from __future__ import annotations

import time

import numpy as np


class _Abort(Exception):
    pass


def _rows(adj: np.ndarray) -> list[int]:
    a = np.ascontiguousarray(adj, dtype="<u8")
    width = a.shape[1] * 8
    raw = a.tobytes()
    return [int.from_bytes(raw[r * width:(r + 1) * width], "little") for r in range(a.shape[0])]


def clique_search(adj, lower=0, upper=-1, target=0, enumerate=False, cap=0,
                  time_limit=0.0, node_limit=0):
    rows = adj if isinstance(adj, list) else _rows(adj)
    m = len(rows)
    out: list[list[int]] = []
    if m == 0:
        return lower, None, True, 0, out
    if upper < 0 or upper > m:
        upper = m
    deadline = time.monotonic() + time_limit if time_limit > 0 else 0.0
    st = {"best": lower, "best_clique": None, "nodes": 0, "found": 0}
    clique: list[int] = []

    def expand(P: int) -> None:
        depth = len(clique)
        st["nodes"] += 1
        if st["nodes"] & 1023 == 0:
            if (deadline and time.monotonic() > deadline) or (node_limit and st["nodes"] > node_limit):
                raise _Abort
        kmin = target - depth if enumerate else st["best"] - depth + 1
        if kmin < 1:
            kmin = 1
        order: list[int] = []
        col: list[int] = []
        U = P
        colour = 0
        while U:
            colour += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q ^= low
                U ^= low
                Q &= ~rows[v]
                if colour >= kmin:
                    order.append(v)
                    col.append(colour)
        for i in range(len(order) - 1, -1, -1):
            if enumerate:
                if depth + col[i] < target:
                    return
            elif depth + col[i] <= st["best"]:
                return
            v = order[i]
            clique.append(v)
            NP = P & rows[v]
            if enumerate:
                if depth + 1 == target:
                    out.append(list(clique))
                    st["found"] += 1
                    if cap and st["found"] >= cap:
                        clique.pop()
                        raise _Abort
                elif NP:
                    expand(NP)
            elif not NP:
                if depth + 1 > st["best"]:
                    st["best"] = depth + 1
                    st["best_clique"] = list(clique)
                    if st["best"] >= upper:
                        clique.pop()
                        return
            else:
                expand(NP)
                if st["best"] >= upper:
                    clique.pop()
                    return
            clique.pop()
            P &= ~(1 << v)

    complete = True
    if not (enumerate and target <= 0) and lower < upper:
        try:
            expand((1 << m) - 1)
        except _Abort:
            complete = False
    witness = None if enumerate or st["best"] <= lower else st["best_clique"]
    return st["best"], witness, complete, st["nodes"], out
