"""Construction of the subsystem toric code on an open-boundary cubic lattice.

The code lives on a refined integer grid of odd linear size: lattice vertices
sit at even coordinates and cell centers at odd coordinates, so every cell of
the primal lattice is keyed by one integer triple.  Qubits are indexed in
lexicographic coordinate order, which makes builds reproducible and gives all
downstream tie-breaking a stable order to lean on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import BinMatrix, BitVec

QUBIT_BASIS = "qubits"
MEAS_BASIS = "meas"


class Graph:
    """Undirected graph with colored vertices, boundary flags, indexed edges.

    Vertices are indexed 0..n-1; every edge stores both endpoints, boundary
    vertices included.  Degree accounting and the relative boundary operator
    treat an edge incident to a boundary vertex as a half-edge hanging off its
    interior endpoint: boundary endpoints never contribute to vertex sums.
    """

    def __init__(
        self,
        colors: Sequence[str],
        is_boundary: Sequence[bool],
        edges: Sequence[Tuple[int, int]],
        edge_colors: Optional[Sequence[str]] = None,
        vertex_basis: str = "vertices",
        edge_basis: str = "edges",
        coords: Optional[np.ndarray] = None,
    ):
        self.colors = tuple(colors)
        boundary = np.asarray(is_boundary, dtype=bool).copy()
        boundary.flags.writeable = False
        self.is_boundary = boundary
        edge_arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2).copy()
        edge_arr.flags.writeable = False
        self.edges = edge_arr
        self.edge_colors = tuple(edge_colors) if edge_colors is not None else None
        self.vertex_basis = vertex_basis
        self.edge_basis = edge_basis
        if coords is not None:
            coords = np.asarray(coords, dtype=np.int64).copy()
            coords.flags.writeable = False
        self.coords = coords

        n = len(self.colors)
        if boundary.shape != (n,):
            raise ValueError("boundary flags must be one per vertex")
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        if self.edge_colors is not None and len(self.edge_colors) != len(self.edges):
            raise ValueError("edge colors must be one per edge")
        if self.edges.size:
            loops = self.edges[:, 0] == self.edges[:, 1]
            if (loops & ~boundary[self.edges[:, 0]]).any():
                raise ValueError("self-loop on an interior vertex")

    # -- sizes --------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.colors)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def interior_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_boundary)

    @cached_property
    def boundary_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.is_boundary)

    # -- adjacency ----------------------------------------------------------

    @cached_property
    def _adjacency(self) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """Per-vertex arrays of (neighbor, edge id), sorted for determinism.

        Only edges with both endpoints interior appear; the second structure
        of :attr:`_boundary_attach` covers interior-to-boundary edges.
        """
        nbr: List[List[Tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        boundary = self.is_boundary
        for eid, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if boundary[u] or boundary[v]:
                continue
            nbr[u].append((v, eid))
            nbr[v].append((u, eid))
        neighbors, edge_ids = [], []
        for lst in nbr:
            lst.sort()
            if lst:
                arr = np.asarray(lst, dtype=np.int64)
                neighbors.append(arr[:, 0])
                edge_ids.append(arr[:, 1])
            else:
                neighbors.append(np.empty(0, dtype=np.int64))
                edge_ids.append(np.empty(0, dtype=np.int64))
        return neighbors, edge_ids

    @property
    def neighbors(self) -> List[np.ndarray]:
        return self._adjacency[0]

    @property
    def neighbor_edge_ids(self) -> List[np.ndarray]:
        return self._adjacency[1]

    @cached_property
    def _boundary_attach(self) -> np.ndarray:
        """Per interior vertex, lowest edge id leading to a boundary vertex (-1 if none)."""
        attach = np.full(self.n_vertices, -1, dtype=np.int64)
        boundary = self.is_boundary
        for eid, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            for a, b in ((u, v), (v, u)):
                if not boundary[a] and boundary[b] and attach[a] == -1:
                    attach[a] = eid
        return attach

    @property
    def boundary_attach_edge(self) -> np.ndarray:
        return self._boundary_attach

    # -- degrees ------------------------------------------------------------

    @cached_property
    def degrees(self) -> np.ndarray:
        """Number of incident edges per vertex (half-edges count once)."""
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        if self.edges.size:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
            # A true self-loop (boundary bookkeeping only) counts once.
            loops = self.edges[:, 0] == self.edges[:, 1]
            if loops.any():
                np.add.at(deg, self.edges[loops, 0], -1)
        return deg

    def max_interior_degree(self) -> int:
        interior = self.interior_vertices
        if interior.size == 0:
            return 0
        return int(self.degrees[interior].max())

    def boundary_degree_sum(self) -> int:
        boundary = self.boundary_vertices
        if boundary.size == 0:
            return 0
        return int(self.degrees[boundary].sum())

    # -- operators ----------------------------------------------------------

    def relative_boundary(self, edge_set: BitVec) -> BitVec:
        """XOR of interior endpoints of the selected edges.

        Boundary endpoints are dropped, so a path ending on the boundary
        contributes only its interior end.
        """
        if edge_set.n != self.n_edges:
            raise ValueError("edge_set length does not match edge count")
        out = np.zeros(self.n_vertices, dtype=np.uint8)
        sel = edge_set.support()
        if sel.size:
            ends = self.edges[sel].ravel()
            keep = ~self.is_boundary[ends]
            np.bitwise_xor.at(out, ends[keep], 1)
        return BitVec.from_bits(out, basis=self.vertex_basis)

    def relative_boundary_matrix(self) -> BinMatrix:
        """Edge-to-vertex relative boundary as a matrix (vertices × edges)."""
        dense = np.zeros((self.n_vertices, self.n_edges), dtype=np.uint8)
        for eid, (u, v) in enumerate(self.edges):
            for a in (int(u), int(v)):
                if not self.is_boundary[a]:
                    dense[a, eid] ^= 1
        return BinMatrix.from_dense(dense, row_basis=self.vertex_basis, col_basis=self.edge_basis)

    def __repr__(self) -> str:
        return (
            f"Graph({self.n_vertices} vertices, {self.n_edges} edges, "
            f"{int(self.is_boundary.sum())} boundary)"
        )


@dataclass(frozen=True)
class PauliSupport:
    """A Pauli operator given by its qubit support and type tag."""

    support: BitVec
    pauli: str  # "X" or "Z"

    def __post_init__(self):
        if self.pauli not in ("X", "Z"):
            raise ValueError("pauli tag must be 'X' or 'Z'")

    @property
    def weight(self) -> int:
        return self.support.weight()

    def overlap_parity(self, other: "PauliSupport") -> int:
        """Parity of the shared support; 0 means the operators commute
        (relevant when the two are of opposite type)."""
        return self.support.dot(other.support)

    def __xor__(self, other: "PauliSupport") -> "PauliSupport":
        if self.pauli != other.pauli:
            raise ValueError("cannot combine X-type with Z-type supports")
        return PauliSupport(self.support ^ other.support, self.pauli)
