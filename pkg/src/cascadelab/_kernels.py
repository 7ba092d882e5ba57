"""Hot loops (reverse union-find trace builder, forward cascade pass).

Kept free of Python objects so numba can compile them; everything else in the
package stays plain Python/numpy.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:  # path compression
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@njit(cache=True)
def build_trace_arrays(order_u, order_v, n):
    """Process the removal permutation in reverse, adding edges via union-find.

    Node ids: 0..n-1 are single-vertex components (time m); each reverse step
    creates one node for the component containing that edge just before its
    removal. Returns, per forward step i (1-based), the node destroyed at i,
    the split-forest child links and edge counts, the giant-edge series, the
    per-step giant membership of the removed edge, and the first disconnection
    step (m+1 sentinel when the graph never disconnects, 0 when it starts
    disconnected).
    """
    m = order_u.shape[0]
    total = n + m
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    minv = np.arange(n)
    comp_node = np.arange(n)
    child1 = np.full(total, -1, dtype=np.int64)
    child2 = np.full(total, -1, dtype=np.int64)
    node_edges = np.zeros(total, dtype=np.int64)
    comp_of_step = np.zeros(m + 1, dtype=np.int64)
    giant_edges = np.zeros(m + 1, dtype=np.int64)
    in_giant = np.zeros(m, dtype=np.bool_)

    ncomp = n
    first_disconnect = m + 1 if n == 1 else 0
    gmax_e = np.int64(0)
    gmax_minv = np.int64(0)
    gmax_node = np.int64(0)
    next_node = n

    for i in range(m, 0, -1):
        u = order_u[i - 1]
        v = order_v[i - 1]
        ru = _find(parent, u)
        rv = _find(parent, v)
        x = next_node
        next_node += 1
        if ru == rv:
            # cycle edge: same vertex set, one more edge
            child1[x] = comp_node[ru]
            node_edges[x] = node_edges[comp_node[ru]] + 1
            comp_node[ru] = x
            r = ru
        else:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            if minv[rv] < minv[ru]:
                minv[ru] = minv[rv]
            child1[x] = comp_node[ru]
            child2[x] = comp_node[rv]
            node_edges[x] = node_edges[comp_node[ru]] + node_edges[comp_node[rv]] + 1
            comp_node[ru] = x
            r = ru
            ncomp -= 1
            if ncomp == 1:
                first_disconnect = i
        e_cnt = node_edges[x]
        mv = minv[r]
        if e_cnt > gmax_e or (e_cnt == gmax_e and mv < gmax_minv):
            gmax_e = e_cnt
            gmax_minv = mv
            gmax_node = x
        in_giant[i - 1] = x == gmax_node
        comp_of_step[i] = x
        giant_edges[i - 1] = gmax_e

    roots = np.empty(n, dtype=np.int64)
    n_roots = 0
    for v in range(n):
        if _find(parent, v) == v:
            roots[n_roots] = comp_node[v]
            n_roots += 1
    return (
        comp_of_step,
        child1,
        child2,
        node_edges,
        giant_edges,
        in_giant,
        first_disconnect,
        roots[:n_roots],
    )


@njit(cache=True)
def cascade_pass(
    comp_of_step, child1, child2, node_edges, in_giant, roots, capacities, theta
):
    """Forward pass of the load-surge cascade over the split forest.

    Processes removal steps in order; each step's component inherits surge
    state from its split-forest parent. Strict comparison: the edge fails iff
    its capacity is strictly below the component's surge. A component that
    survives a comparison stops for good (descendants inherit the stop).

    Returns (A, A_hat, stop_nodes, stop_steps).
    """
    m = capacities.shape[0]
    total = node_edges.shape[0]
    surge = np.zeros(total, dtype=np.float64)
    state = np.zeros(total, dtype=np.int8)  # 0 unset, 1 alive, 2 stopped
    for j in range(roots.shape[0]):
        state[roots[j]] = 1
        surge[roots[j]] = theta / m
    A = 0
    A_hat = 0
    stop_nodes = np.empty(m, dtype=np.int64)
    stop_steps = np.empty(m, dtype=np.int64)
    n_stops = 0
    for i in range(1, m + 1):
        x = comp_of_step[i]
        if state[x] == 1:
            if capacities[i - 1] < surge[x]:
                A += 1
                if in_giant[i - 1]:
                    A_hat += 1
                l = surge[x]
                new_surge = l + (1.0 - l) / node_edges[x]
                new_state = np.int8(1)
            else:
                new_surge = surge[x]
                new_state = np.int8(2)
                stop_nodes[n_stops] = x
                stop_steps[n_stops] = i
                n_stops += 1
        else:
            new_surge = surge[x]
            new_state = np.int8(2)
        c1 = child1[x]
        if c1 >= 0:
            state[c1] = new_state
            surge[c1] = new_surge
        c2 = child2[x]
        if c2 >= 0:
            state[c2] = new_state
            surge[c2] = new_surge
    return A, A_hat, stop_nodes[:n_stops], stop_steps[:n_stops]
