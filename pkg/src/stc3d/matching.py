"""Exact minimum-weight matching of defects, with a boundary option.

Defects live on interior vertices of a graph. Each defect must be paired with
another defect or routed to the boundary; the cost of a pairing is the
unit-weight shortest-path distance. The solver reduces this to perfect
matching by giving every defect a virtual boundary partner (virtual partners
are interconnected at weight zero) and runs an exact primal-dual blossom
solver on the reduced graph. Ties between equal-weight matchings are resolved
to the lexicographically least pairing: scanning defects in ascending index
order, each defect takes the lowest-index feasible partner, with the boundary
ordered after all defects.

A subset-DP oracle (`brute_force_mwpm`) solves small instances by exhaustive
enumeration with the same tie rule, through entirely separate code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .code import Graph
from .gf2 import BitVec

BOUNDARY = -1  # partner code for "matched to the boundary"

_BRUTE_FORCE_MAX_DEFECTS = 14


@dataclass(frozen=True)
class MatchingInstance:
    """Shortest-path data for a defect set on one graph.

    ``pairwise_dist[i, j]`` is the interior shortest-path length between
    defects i and j; ``boundary_dist[i]`` is the shortest length of a path
    from defect i to any boundary vertex. Unreachable entries are ``inf``.
    The predecessor records keep one lexicographically-least shortest path
    per (defect, vertex) pair for edge-set reconstruction.
    """

    defects: np.ndarray  # sorted interior vertex ids, shape (k,)
    pairwise_dist: np.ndarray  # (k, k) float
    boundary_dist: np.ndarray  # (k,) float
    n_edges: int
    edge_basis: str
    _dist: np.ndarray  # (k, n_vertices) int, -1 unreachable
    _pred_vertex: np.ndarray  # (k, n_vertices) int
    _pred_edge: np.ndarray  # (k, n_vertices) int
    _boundary_attach: np.ndarray  # (k, 2) int: (interior vertex, edge id) or -1

    @property
    def n_defects(self) -> int:
        return len(self.defects)

    def _walk_back(self, source_idx: int, vertex: int) -> List[int]:
        """Edge ids along the recorded shortest path from a defect to a vertex."""
        edges: List[int] = []
        v = vertex
        source = int(self.defects[source_idx])
        while v != source:
            eid = int(self._pred_edge[source_idx, v])
            if eid < 0:
                raise RuntimeError("path reconstruction walked off the BFS tree")
            edges.append(eid)
            v = int(self._pred_vertex[source_idx, v])
        return edges

    def pair_path_edges(self, i: int, j: int) -> np.ndarray:
        """One shortest path between defects i and j (local indices)."""
        a, b = (i, j) if i < j else (j, i)
        target = int(self.defects[b])
        return np.asarray(self._walk_back(a, target), dtype=np.int64)

    def boundary_path_edges(self, i: int) -> np.ndarray:
        """One shortest path from defect i to the boundary (local index)."""
        attach_v, attach_e = (int(x) for x in self._boundary_attach[i])
        if attach_e < 0:
            raise RuntimeError("defect has no path to the boundary")
        edges = [attach_e] + self._walk_back(i, attach_v)
        return np.asarray(edges, dtype=np.int64)


@dataclass(frozen=True)
class MatchingResult:
    """A minimizing edge set: XOR of one shortest path per matched pair."""

    edge_set: BitVec
    total_weight: int
    pairs: Tuple[Tuple[int, int], ...]  # (vertex id, vertex id) with -1 = boundary


def _layered_bfs(g: Graph, source: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """BFS over interior vertices with deterministic predecessors.

    Within each layer, vertices are visited in ascending order and adjacency
    lists are pre-sorted, so the recorded predecessor of every vertex is the
    lexicographically least (vertex, edge id) among its shortest-path parents.
    """
    n = g.n_vertices
    dist = np.full(n, -1, dtype=np.int64)
    pred_v = np.full(n, -1, dtype=np.int64)
    pred_e = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    layer = [source]
    neighbors = g.neighbors
    edge_ids = g.neighbor_edge_ids
    while layer:
        found: List[int] = []
        for u in layer:
            du = dist[u]
            for v, eid in zip(neighbors[u], edge_ids[u]):
                if dist[v] == -1:
                    dist[v] = du + 1
                    pred_v[v] = u
                    pred_e[v] = eid
                    found.append(int(v))
        layer = sorted(set(found))
    return dist, pred_v, pred_e


def _best_boundary_attach(g: Graph, dist: np.ndarray) -> Tuple[float, int, int]:
    """Shortest boundary connection given a BFS distance field.

    Returns (distance, interior attach vertex, attach edge id); ties prefer
    the lowest attach vertex, then the lowest edge id.
    """
    attach = g.boundary_attach_edge
    mask = (dist >= 0) & (attach >= 0)
    vs = np.flatnonzero(mask)
    if vs.size == 0:
        return float("inf"), -1, -1
    lengths = dist[vs] + 1
    order = np.lexsort((attach[vs], vs, lengths))
    pick = order[0]
    return float(lengths[pick]), int(vs[pick]), int(attach[vs[pick]])


def _defect_vertices(g: Graph, defects: Union[BitVec, Sequence[int]]) -> np.ndarray:
    if isinstance(defects, BitVec):
        if defects.n != g.n_vertices:
            raise ValueError("defect indicator length does not match vertex count")
        idx = defects.support()
    else:
        idx = np.unique(np.asarray(list(defects), dtype=np.int64))
    if idx.size:
        if idx.min() < 0 or idx.max() >= g.n_vertices:
            raise ValueError("defect vertex out of range")
        if g.is_boundary[idx].any():
            raise ValueError("defect placed on a boundary vertex")
    return idx.astype(np.int64)


def build_instance(g: Graph, defects: Union[BitVec, Sequence[int]]) -> MatchingInstance:
    """All-pairs and to-boundary shortest paths among defects, by BFS."""
    defect_ids = _defect_vertices(g, defects)
    k = len(defect_ids)
    n = g.n_vertices
    dist = np.full((k, n), -1, dtype=np.int64)
    pred_v = np.full((k, n), -1, dtype=np.int64)
    pred_e = np.full((k, n), -1, dtype=np.int64)
    boundary_dist = np.full(k, np.inf)
    battach = np.full((k, 2), -1, dtype=np.int64)
    for i, s in enumerate(defect_ids):
        dist[i], pred_v[i], pred_e[i] = _layered_bfs(g, int(s))
        bd, bv, be = _best_boundary_attach(g, dist[i])
        boundary_dist[i] = bd
        battach[i] = (bv, be)
    pairwise = np.full((k, k), np.inf)
    for i in range(k):
        d = dist[i, defect_ids]
        reach = d >= 0
        pairwise[i, reach] = d[reach]
    for arr in (dist, pred_v, pred_e, pairwise, boundary_dist, battach):
        arr.flags.writeable = False
    return MatchingInstance(
        defects=defect_ids,
        pairwise_dist=pairwise,
        boundary_dist=boundary_dist,
        n_edges=g.n_edges,
        edge_basis=g.edge_basis,
        _dist=dist,
        _pred_vertex=pred_v,
        _pred_edge=pred_e,
        _boundary_attach=battach,
    )


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------


def _solve_core(
    inst: MatchingInstance, active: Sequence[int]
) -> Tuple[Optional[int], Optional[Dict[int, int]]]:
    """Optimal matching weight and partner map on a subset of defects.

    Partner map sends each active local index to another local index or
    BOUNDARY. Returns (None, None) when no feasible matching exists.
    """
    active = list(active)
    k_total = inst.n_defects
    if not active:
        return 0, {}
    g = nx.Graph()
    g.add_nodes_from(active)
    for pos, i in enumerate(active):
        bd = inst.boundary_dist[i]
        if np.isfinite(bd):
            g.add_edge(i, k_total + i, weight=-int(bd))
        for j in active[pos + 1 :]:
            d = inst.pairwise_dist[i, j]
            if np.isfinite(d):
                g.add_edge(i, j, weight=-int(d))
            # Virtual partners pair off freely so boundary use stays optional.
            g.add_edge(k_total + i, k_total + j, weight=0)
    mate = nx.max_weight_matching(g, maxcardinality=True)
    partner: Dict[int, int] = {}
    weight = 0
    for u, v in mate:
        u, v = (u, v) if u < v else (v, u)
        if u < k_total and v < k_total:
            partner[u] = v
            partner[v] = u
            weight += int(inst.pairwise_dist[u, v])
        elif u < k_total:
            if v != k_total + u:
                raise RuntimeError("solver matched a defect to a foreign virtual partner")
            partner[u] = BOUNDARY
            weight += int(inst.boundary_dist[u])
    if any(i not in partner for i in active):
        return None, None
    return weight, partner


def _pair_cost(inst: MatchingInstance, i: int, j: int) -> float:
    return inst.boundary_dist[i] if j == BOUNDARY else inst.pairwise_dist[i, j]


def _lexicographic_refine(
    inst: MatchingInstance, total: int, partner: Dict[int, int]
) -> List[Tuple[int, int]]:
    """Fix pairs in lexicographic order while preserving optimality.

    Scans defects ascending; each takes its lowest-index partner (boundary
    last) that still allows the rest to be matched at the same total weight.
    The current optimal matching is the feasibility witness, so a solver call
    is needed only when a more-preferred partner is examined.
    """
    remaining = sorted(partner.keys())
    witness = dict(partner)
    budget = total
    fixed: List[Tuple[int, int]] = []
    while remaining:
        i = remaining[0]
        choice = None
        for j in [r for r in remaining if r != i] + [BOUNDARY]:
            w_ij = _pair_cost(inst, i, j)
            if not np.isfinite(w_ij):
                continue
            w_ij = int(w_ij)
            if witness.get(i) == j:
                choice = (j, w_ij)
                witness = {a: b for a, b in witness.items() if a != i and a != j}
                break
            rest = [r for r in remaining if r != i and r != j]
            w_rest, m_rest = _solve_core(inst, rest)
            if w_rest is not None and w_ij + w_rest == budget:
                choice = (j, w_ij)
                witness = m_rest
                break
        if choice is None:
            raise RuntimeError("refinement lost feasibility; instance is inconsistent")
        j, w_ij = choice
        fixed.append((i, j))
        budget -= w_ij
        remaining = [r for r in remaining if r != i and r != j]
    return fixed


def _assemble_result(
    inst: MatchingInstance, fixed: Sequence[Tuple[int, int]]
) -> MatchingResult:
    bits = np.zeros(inst.n_edges, dtype=np.uint8)
    total = 0
    pairs: List[Tuple[int, int]] = []
    for i, j in fixed:
        if j == BOUNDARY:
            eids = inst.boundary_path_edges(i)
            total += int(inst.boundary_dist[i])
            pairs.append((int(inst.defects[i]), BOUNDARY))
        else:
            a, b = (i, j) if i < j else (j, i)
            eids = inst.pair_path_edges(a, b)
            total += int(inst.pairwise_dist[a, b])
            pairs.append((int(inst.defects[a]), int(inst.defects[b])))
        if eids.size:
            np.bitwise_xor.at(bits, eids, 1)
    edge_set = BitVec.from_bits(bits, basis=inst.edge_basis)
    return MatchingResult(edge_set=edge_set, total_weight=total, pairs=tuple(pairs))


def solve_mwpm(inst: MatchingInstance) -> MatchingResult:
    """Exact minimum-weight matching via blossom, lexicographic tie-break."""
    k = inst.n_defects
    if k == 0:
        return MatchingResult(BitVec.zeros(inst.n_edges, inst.edge_basis), 0, ())
    total, partner = _solve_core(inst, range(k))
    if total is None:
        raise RuntimeError("no feasible matching: odd defect component without boundary")
    fixed = _lexicographic_refine(inst, total, partner)
    result = _assemble_result(inst, fixed)
    if result.total_weight != total:
        raise RuntimeError("refined matching changed the optimal weight")
    return result


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_mwpm(inst: MatchingInstance) -> MatchingResult:
    """Exhaustive minimum over all pairings, including boundary assignments.

    Dynamic program over defect subsets; the reconstruction applies the same
    lexicographic preference as the solver (lowest index first, boundary
    last) so results are comparable bit for bit.
    """
    k = inst.n_defects
    if k > _BRUTE_FORCE_MAX_DEFECTS:
        raise ValueError(
            f"brute force limited to {_BRUTE_FORCE_MAX_DEFECTS} defects, got {k}"
        )
    if k == 0:
        return MatchingResult(BitVec.zeros(inst.n_edges, inst.edge_basis), 0, ())

    size = 1 << k
    dp = np.full(size, np.inf)
    dp[0] = 0.0
    for mask in range(1, size):
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best = inst.boundary_dist[i] + dp[rest]
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            cand = inst.pairwise_dist[i, j] + dp[rest ^ (1 << j)]
            if cand < best:
                best = cand
        dp[mask] = best
    if not np.isfinite(dp[size - 1]):
        raise RuntimeError("no feasible matching: odd defect component without boundary")

    fixed: List[Tuple[int, int]] = []
    mask = size - 1
    while mask:
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        chosen = BOUNDARY
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            if inst.pairwise_dist[i, j] + dp[rest ^ (1 << j)] == dp[mask]:
                chosen = j
                break
        if chosen == BOUNDARY:
            if inst.boundary_dist[i] + dp[rest] != dp[mask]:
                raise RuntimeError("DP reconstruction lost the optimum")
            mask = rest
        else:
            mask = rest ^ (1 << chosen)
        fixed.append((i, chosen))
    return _assemble_result(inst, fixed)
