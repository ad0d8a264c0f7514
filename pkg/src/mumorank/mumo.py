"""MuMoRank: per-modality PageRank on multimodal hypergraphs.

One iteration moves authority node -> hyperedge -> node on the generalized
(bipartite node/hyperedge) graph:

* a node ``j`` of modality ``i`` keeps ``1 - zeta_i`` of its rank and spreads
  it evenly over its incident hyperedges;
* every hyperedge passes ``1/M`` of what it holds to each member;
* the ``zeta_i`` share goes to the supernodes, split evenly over the ``M`` of
  them, so each supernode holds the mean damping and hands it back to its own
  modality according to the preference vector.

Each modality's ranks therefore keep summing to one without renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .config import PREFERENCE_MODES, SolverConfig
from .exceptions import ConvergenceError, DegenerateSetError, MuMoRankError
from .hypergraph import GeneralizedGraphView, MultimodalHypergraph, NodeRef, generalized_view
from .validation import (
    check_damping,
    check_hypergraph,
    check_modality_distribution,
    check_preferred,
)

DRIFT_LIMIT = 1e-10


@dataclass(frozen=True, eq=False)
class RankVector:
    """Per-modality node ranks plus the supplementary hyperedge ranks.

    ``node_ranks[i]`` is aligned with ``graph.labels(i)`` and includes
    zero-degree nodes (at rank 0). ``hyperedge_ranks`` is unnormalized; its
    total is ``sum_i (1 - zeta_i)``.
    """

    modalities: tuple[str, ...]
    labels: tuple[tuple[str, ...], ...]
    node_ranks: tuple[np.ndarray, ...]
    hyperedge_ranks: np.ndarray | None = None
    n_iter: int = 0
    residual: float = float("nan")
    max_drift: float = 0.0

    def __getitem__(self, node) -> float:
        node = NodeRef(*node)
        i = node.modality_index
        if not isinstance(i, (int, np.integer)):
            i = self.modalities.index(i)
        return float(self.node_ranks[i][self.labels[i].index(node.node_id)])

    def modality_sums(self) -> np.ndarray:
        return np.array([r.sum() for r in self.node_ranks])

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {
            name: {lab: float(v) for lab, v in zip(labels, ranks)}
            for name, labels, ranks in zip(self.modalities, self.labels, self.node_ranks)
        }

    def to_array(self) -> np.ndarray:
        return np.concatenate(self.node_ranks)


def build_preference_vector(graph: MultimodalHypergraph, preferred=None,
                            mode="hub_preferring") -> tuple[np.ndarray, ...]:
    """Per-modality jump distribution over ``preferred`` label sets.

    ``uniform`` gives ``1/|U_i|`` to each preferred node, ``hub_preferring``
    gives ``deg(j) / HVol(U_i)``. Modalities absent from ``preferred`` use
    the whole modality.
    """
    if mode not in PREFERENCE_MODES:
        raise ValueError(f"mode must be one of {PREFERENCE_MODES}, got {mode!r}")
    sets = check_preferred(preferred, graph)
    out = []
    for i, U in enumerate(sets):
        labels = graph.labels(i)
        mask = np.array([lab in U for lab in labels], dtype=bool)
        if mode == "uniform":
            out.append(mask / mask.sum())
            continue
        weights = np.where(mask, graph.degrees(i), 0).astype(float)
        total = weights.sum()
        if total <= 0:
            raise DegenerateSetError(
                f"preferred set of modality {graph.modalities[i]!r} has zero total degree"
            )
        out.append(weights / total)
    return tuple(out)


class _Operator:
    """Active-node arrays and the two transition operators, bound to one damping vector."""

    def __init__(self, graph, damping, s):
        self.graph = graph
        self.view: GeneralizedGraphView = generalized_view(graph)
        self.zetas = check_damping(damping, graph)
        self.zeta_mean = float(self.zetas.mean())
        view = self.view
        counts = np.bincount(view.active_modality, minlength=graph.M)
        empty = [graph.modalities[i] for i in np.flatnonzero(counts == 0)]
        if empty:
            raise DegenerateSetError(f"modalities with no active nodes: {empty}")
        self.starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.intp)
        self.keep = 1.0 - self.zetas[view.active_modality]

        s = check_modality_distribution(s, graph)
        s_all = np.concatenate(s)
        inactive = np.ones(s_all.shape[0], dtype=bool)
        inactive[view.active_global] = False
        if np.any(s_all[inactive] > 0):
            raise DegenerateSetError("preference vector puts mass on zero-degree nodes")
        self.s_active = s_all[view.active_global]

    def modality_sums(self, x):
        return np.add.reduceat(x, self.starts)

    def half_steps(self, x):
        edge = self.view.node_to_edge @ (self.keep * x)
        node = self.view.edge_to_node @ edge + self.zeta_mean * self.s_active
        return edge, node

    def initial(self, mode):
        view = self.view
        if mode == "uniform":
            weights = np.ones(self.view.n_active)
        else:
            weights = view.active_degree.astype(float)
        return weights / self.modality_sums(weights)[view.active_modality]

    def to_active(self, ranks: RankVector):
        full = ranks.to_array()
        if full.shape[0] != self.graph.n_nodes or len(ranks.node_ranks) != self.graph.M:
            raise ValueError("rank vector does not match the hypergraph shape")
        return full[self.view.active_global]

    def to_rank_vector(self, x, edge, **info) -> RankVector:
        graph = self.graph
        full = np.zeros(graph.n_nodes)
        full[self.view.active_global] = x
        offsets = graph.offsets
        parts = tuple(full[offsets[i]:offsets[i + 1]].copy() for i in range(graph.M))
        labels = tuple(graph.labels(i) for i in range(graph.M))
        return RankVector(graph.modalities, labels, parts, edge, **info)


def initial_ranks(graph, init="uniform") -> RankVector:
    """Starting vector: uniform or degree-proportional within each modality over active nodes."""
    graph = check_hypergraph(graph)
    parts = []
    for i in range(graph.M):
        deg = graph.degrees(i).astype(float)
        weights = deg if init == "degree_proportional" else (deg > 0).astype(float)
        total = weights.sum()
        parts.append(weights / total if total > 0 else weights)
    labels = tuple(graph.labels(i) for i in range(graph.M))
    return RankVector(graph.modalities, labels, tuple(parts))


def mumorank_step(graph, damping, s, current: RankVector) -> RankVector:
    """Apply one node -> hyperedge -> node update to ``current``."""
    op = _Operator(check_hypergraph(graph), damping, s)
    x = op.to_active(current)
    edge, node = op.half_steps(x)
    drift = float(np.max(np.abs(op.modality_sums(node) - 1.0)))
    residual = float(np.max(op.modality_sums(np.abs(node - x))))
    return op.to_rank_vector(node, edge, n_iter=1, residual=residual, max_drift=drift)


def mumorank(graph, damping, s, config: SolverConfig | None = None,
             initial: RankVector | None = None) -> RankVector:
    """Iterate :func:`mumorank_step` to its fixed point.

    Converged when every modality's L1 change falls below ``config.tol``.
    Raises :class:`ConvergenceError` after ``config.max_iter`` iterations and
    :class:`MuMoRankError` if a modality sum drifts more than 1e-10 from one.
    """
    config = SolverConfig() if config is None else config
    op = _Operator(check_hypergraph(graph), damping, s)
    x = op.initial(config.init) if initial is None else op.to_active(initial)
    max_drift = float(np.max(np.abs(op.modality_sums(x) - 1.0)))
    residual = np.inf
    for it in range(1, int(config.max_iter) + 1):
        edge, nxt = op.half_steps(x)
        sums = op.modality_sums(nxt)
        max_drift = max(max_drift, float(np.max(np.abs(sums - 1.0))))
        if max_drift > DRIFT_LIMIT:
            raise MuMoRankError(f"modality mass drifted by {max_drift:.3e} at iteration {it}")
        residual = float(np.max(op.modality_sums(np.abs(nxt - x))))
        x = nxt
        if residual < config.tol:
            return op.to_rank_vector(x, edge, n_iter=it, residual=residual, max_drift=max_drift)
    raise ConvergenceError("MuMoRank did not converge", int(config.max_iter), residual)


class MuMoRank(TransformerMixin, BaseEstimator):
    """Multimodal PageRank estimator.

    Parameters
    ----------
    damping : float, sequence or mapping
        Boring factor per modality (a scalar is shared by all).
    preferred : mapping or sequence of label collections, optional
        Preferred nodes per modality; missing modalities prefer all nodes.
    preference_mode : {"hub_preferring", "uniform"}
    tol : float, default 1e-12
    max_iter : int, default 100000
    init : {"uniform", "degree_proportional"}
    modalities : sequence of str, optional
        Column names when ``fit`` receives a plain table of rows.
    allow_multi : bool, default False
        Accept repeated rows when ``fit`` receives a plain table.

    Attributes
    ----------
    graph_ : MultimodalHypergraph
    ranks_ : RankVector
    preference_ : tuple of ndarray
    n_iter_ : int
    residual_ : float
    """

    def __init__(self, damping=0.15, preferred=None, preference_mode="hub_preferring",
                 tol=1e-12, max_iter=100_000, init="uniform", modalities=None,
                 allow_multi=False):
        self.damping = damping
        self.preferred = preferred
        self.preference_mode = preference_mode
        self.tol = tol
        self.max_iter = max_iter
        self.init = init
        self.modalities = modalities
        self.allow_multi = allow_multi

    def fit(self, X, y=None):
        graph = check_hypergraph(X, self.modalities, self.allow_multi)
        s = build_preference_vector(graph, self.preferred, self.preference_mode)
        config = SolverConfig(tol=self.tol, max_iter=self.max_iter, init=self.init)
        self.graph_ = graph
        self.preference_ = s
        self.ranks_ = mumorank(graph, self.damping, s, config)
        self.n_iter_ = self.ranks_.n_iter
        self.residual_ = self.ranks_.residual
        return self

    def transform(self, X):
        """Rank of each member for every row of ``X``, shape ``(n_rows, M)``."""
        from sklearn.utils.validation import check_is_fitted

        check_is_fitted(self, "ranks_")
        ranks = self.ranks_
        rows = X.rows() if isinstance(X, MultimodalHypergraph) else X
        lookup = [dict(zip(lab, r)) for lab, r in zip(ranks.labels, ranks.node_ranks)]
        return np.array([[lookup[i].get(str(v), 0.0) for i, v in enumerate(row)] for row in rows],
                        dtype=float).reshape(-1, len(ranks.modalities))

    def rank_dict(self):
        return self.ranks_.as_dict()


__all__ = [
    "RankVector",
    "build_preference_vector",
    "initial_ranks",
    "mumorank",
    "mumorank_step",
    "MuMoRank",
]
