"""Multimodal hypergraph data model.

A hypergraph here has ``M >= 2`` disjoint node classes (modalities) and every
hyperedge contains exactly one node of each modality. Nodes are addressed by
``NodeRef(modality_index, node_id)``; the same label in two modalities names
two distinct nodes.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .exceptions import HypergraphError, UnknownNodeError


class NodeRef(NamedTuple):
    modality_index: int
    node_id: str


class MultimodalHypergraph:
    """Immutable multimodal hypergraph.

    Parameters
    ----------
    modalities : sequence of str
        Ordered modality names.
    hyperedges : iterable of sequences
        Each hyperedge is either ``M`` labels ordered by modality or a
        collection of ``NodeRef``/``(modality_index, label)`` pairs.
    nodes : mapping or sequence, optional
        Per-modality node roster. Lets zero-degree nodes exist; when given,
        every hyperedge member must be declared in it. When omitted, nodes are
        inferred from the hyperedges in order of first appearance.
    allow_multi : bool, default False
        Accept repeated hyperedges (they add to degrees).

    Construction never raises on invariant violations; call :meth:`validate`
    to get them as data. Queries that need the index structure raise
    :class:`HypergraphError` on an invalid graph.
    """

    def __init__(self, modalities, hyperedges=(), nodes=None, allow_multi=False):
        self.modalities = tuple(modalities)
        self.allow_multi = bool(allow_multi)
        self._raw_edges = tuple(tuple(h) for h in hyperedges)
        self._roster_given = nodes is not None
        self._raw_roster = self._roster_lists(nodes)

    def _roster_lists(self, nodes):
        m = len(self.modalities)
        if nodes is None:
            seen = [dict() for _ in range(m)]
            for members in self._raw_edges:
                for i, label in self._positioned(members):
                    if 0 <= i < m:
                        seen[i].setdefault(label, None)
            return tuple(tuple(s) for s in seen)
        if isinstance(nodes, Mapping):
            return tuple(tuple(nodes.get(name, ())) for name in self.modalities)
        return tuple(tuple(labels) for labels in nodes)

    @staticmethod
    def _positioned(members):
        for pos, member in enumerate(members):
            if isinstance(member, str):
                yield pos, member
            else:
                i, label = member
                yield int(i), label

    @property
    def M(self) -> int:
        return len(self.modalities)

    @property
    def n_hyperedges(self) -> int:
        return len(self._raw_edges)

    def __repr__(self):
        return (
            f"MultimodalHypergraph(modalities={list(self.modalities)}, "
            f"n_nodes={sum(len(r) for r in self._raw_roster)}, "
            f"n_hyperedges={self.n_hyperedges})"
        )

    # -- validation -----------------------------------------------------

    def validate(self) -> list[str]:
        """Return every invariant violation; an empty list means valid."""
        problems = []
        m = self.M
        if m < 2:
            problems.append(f"at least 2 modalities required, got {m}")
        for name in self.modalities:
            if not isinstance(name, str) or not name:
                problems.append("modality names must be non-empty strings")
                break
        dupes = [n for n, c in Counter(self.modalities).items() if c > 1]
        if dupes:
            problems.append(f"duplicate modality names: {sorted(map(str, dupes))}")
        if len(self._raw_roster) != m:
            problems.append("node roster does not match the modality count")
            return problems
        for i, labels in enumerate(self._raw_roster):
            for label, c in Counter(labels).items():
                if c > 1:
                    problems.append(
                        f"modality {self.modalities[i]!r}: node {label!r} declared {c} times"
                    )
            if any(not isinstance(lab, str) or not lab for lab in labels):
                problems.append(f"modality {self.modalities[i]!r}: empty node label")

        declared = [set(labels) for labels in self._raw_roster]
        first_seen = {}
        for k, members in enumerate(self._raw_edges):
            counts = [0] * m
            labels = [None] * m
            bad_index = False
            for i, label in self._positioned(members):
                if not 0 <= i < m:
                    bad_index = True
                    continue
                counts[i] += 1
                labels[i] = label
            if bad_index or any(c != 1 for c in counts):
                problems.append(
                    f"hyperedge {k}: cardinality ≠ M (members per modality: {counts})"
                )
                continue
            if any(not isinstance(lab, str) or not lab for lab in labels):
                problems.append(f"hyperedge {k}: empty node label")
                continue
            for i, label in enumerate(labels):
                if label not in declared[i]:
                    problems.append(
                        f"hyperedge {k}: node {label!r} not declared in modality "
                        f"{self.modalities[i]!r}"
                    )
            key = tuple(labels)
            if key in first_seen and not self.allow_multi:
                problems.append(
                    f"hyperedge {k}: duplicate hyperedge (same members as hyperedge "
                    f"{first_seen[key]})"
                )
            first_seen.setdefault(key, k)
        return problems

    def is_valid(self) -> bool:
        return not self.validate()

    @cached_property
    def _index(self):
        problems = self.validate()
        if problems:
            raise HypergraphError(problems)
        lookup = [{label: j for j, label in enumerate(r)} for r in self._raw_roster]
        edges = np.zeros((self.n_hyperedges, self.M), dtype=np.intp)
        for k, members in enumerate(self._raw_edges):
            for i, label in self._positioned(members):
                edges[k, i] = lookup[i][label]
        degrees = tuple(
            np.bincount(edges[:, i], minlength=len(self._raw_roster[i])).astype(np.int64)
            for i in range(self.M)
        )
        return lookup, edges, degrees

    # -- queries ----------------------------------------------------------

    def labels(self, modality) -> tuple[str, ...]:
        return self._raw_roster[self.modality_index(modality)]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self._raw_roster)

    @property
    def offsets(self) -> np.ndarray:
        """Start position of each modality in the concatenated node order."""
        return np.concatenate([[0], np.cumsum(self.sizes)]).astype(np.intp)

    @property
    def n_nodes(self) -> int:
        return sum(self.sizes)

    def node_refs(self) -> list[NodeRef]:
        return [NodeRef(i, lab) for i, r in enumerate(self._raw_roster) for lab in r]

    def modality_index(self, modality) -> int:
        if isinstance(modality, (int, np.integer)) and not isinstance(modality, bool):
            if not 0 <= modality < self.M:
                raise IndexError(f"modality index {modality} out of range [0, {self.M})")
            return int(modality)
        try:
            return self.modalities.index(modality)
        except ValueError:
            raise UnknownNodeError(f"unknown modality {modality!r}") from None

    def node(self, modality, label: str) -> NodeRef:
        i = self.modality_index(modality)
        if label not in self._index[0][i]:
            raise UnknownNodeError(
                f"node {label!r} not declared in modality {self.modalities[i]!r}"
            )
        return NodeRef(i, label)

    def _locate(self, node) -> tuple[int, int]:
        ref = self.node(*node)
        return ref.modality_index, self._index[0][ref.modality_index][ref.node_id]

    @property
    def edge_array(self) -> np.ndarray:
        """``(n_hyperedges, M)`` array of per-modality node positions."""
        return self._index[1]

    def hyperedge(self, k: int) -> tuple[NodeRef, ...]:
        row = self._index[1][k]
        return tuple(NodeRef(i, self._raw_roster[i][j]) for i, j in enumerate(row))

    def degrees(self, modality) -> np.ndarray:
        return self._index[2][self.modality_index(modality)]

    def degree(self, node) -> int:
        i, j = self._locate(node)
        return int(self._index[2][i][j])

    def modality_degree_sum(self, modality) -> int:
        return int(self.degrees(modality).sum())

    def incident_hyperedges(self, node) -> list[int]:
        i, j = self._locate(node)
        return np.flatnonzero(self._index[1][:, i] == j).tolist()

    def pruned(self) -> MultimodalHypergraph:
        """Copy of the graph without zero-degree nodes."""
        roster = [
            tuple(lab for lab, d in zip(self._raw_roster[i], self.degrees(i)) if d > 0)
            for i in range(self.M)
        ]
        edges = [tuple(self._raw_roster[i][j] for i, j in enumerate(row)) for row in self.edge_array]
        return MultimodalHypergraph(self.modalities, edges, nodes=roster, allow_multi=self.allow_multi)

    def rows(self) -> list[tuple[str, ...]]:
        return [tuple(r.node_id for r in self.hyperedge(k)) for k in range(self.n_hyperedges)]


@dataclass(frozen=True, eq=False)
class GeneralizedGraphView:
    """Bipartite node/hyperedge incidence over the active (degree >= 1) nodes.

    ``node_to_edge`` is the ``(n_hyperedges, n_active)`` column-stochastic
    operator with entries ``1/deg(j)``; ``edge_to_node`` is the
    ``(n_active, n_hyperedges)`` operator with entries ``1/M``. Rows of
    ``edge_members`` hold active-node positions of each hyperedge's members.
    """

    graph: MultimodalHypergraph
    active_nodes: tuple[NodeRef, ...]
    pruned_nodes: tuple[NodeRef, ...]
    active_global: np.ndarray
    active_modality: np.ndarray
    active_degree: np.ndarray
    edge_members: np.ndarray
    node_to_edge: sp.csr_matrix
    edge_to_node: sp.csr_matrix

    @property
    def n_active(self) -> int:
        return len(self.active_nodes)

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """``(n_active, n_hyperedges)`` 0/1 incidence with multiplicity, rows in input edge order."""
        m = self.graph.M
        n_edges = self.edge_members.shape[0]
        data = np.ones(n_edges * m)
        rows = self.edge_members.ravel()
        cols = np.repeat(np.arange(n_edges), m)
        inc = sp.coo_matrix((data, (rows, cols)), shape=(self.n_active, n_edges)).tocsr()
        inc.sum_duplicates()
        inc.sort_indices()
        return inc

    def modality_slices(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.active_modality == i) for i in range(self.graph.M)]


def validate(graph: MultimodalHypergraph) -> list[str]:
    return graph.validate()


def degree(graph: MultimodalHypergraph, node) -> int:
    return graph.degree(node)


def modality_degree_sum(graph: MultimodalHypergraph, modality) -> int:
    return graph.modality_degree_sum(modality)


def incident_hyperedges(graph: MultimodalHypergraph, node) -> list[int]:
    return graph.incident_hyperedges(node)


def generalized_view(graph: MultimodalHypergraph) -> GeneralizedGraphView:
    """Build the node/hyperedge bipartite view, pruning zero-degree nodes."""
    _, edges, degrees = graph._index
    m = graph.M
    all_degrees = np.concatenate(degrees) if degrees else np.zeros(0, dtype=np.int64)
    offsets = graph.offsets
    active_mask = all_degrees > 0
    active_global = np.flatnonzero(active_mask)
    position = np.full(all_degrees.shape[0], -1, dtype=np.intp)
    position[active_global] = np.arange(active_global.shape[0])
    modality_of = np.repeat(np.arange(m), graph.sizes)

    refs = graph.node_refs()
    active_nodes = tuple(refs[g] for g in active_global)
    pruned_nodes = tuple(refs[g] for g in np.flatnonzero(~active_mask))

    n_edges = edges.shape[0]
    members = position[edges + offsets[:-1]] if n_edges else np.zeros((0, m), dtype=np.intp)
    active_degree = all_degrees[active_global]
    n_active = active_global.shape[0]

    cols = members.ravel()
    rows = np.repeat(np.arange(n_edges), m)
    node_to_edge = sp.coo_matrix(
        (1.0 / active_degree[cols], (rows, cols)), shape=(n_edges, n_active)
    ).tocsr()
    edge_to_node = sp.coo_matrix(
        (np.full(cols.shape[0], 1.0 / m), (cols, rows)), shape=(n_active, n_edges)
    ).tocsr()
    for op in (node_to_edge, edge_to_node):
        op.sum_duplicates()
        op.sort_indices()

    return GeneralizedGraphView(
        graph=graph,
        active_nodes=active_nodes,
        pruned_nodes=pruned_nodes,
        active_global=active_global,
        active_modality=modality_of[active_global],
        active_degree=active_degree,
        edge_members=members,
        node_to_edge=node_to_edge,
        edge_to_node=edge_to_node,
    )


def from_rows(modalities: Sequence[str], rows: Iterable[Sequence[str]], nodes=None,
              allow_multi=False) -> MultimodalHypergraph:
    return MultimodalHypergraph(modalities, rows, nodes=nodes, allow_multi=allow_multi)
