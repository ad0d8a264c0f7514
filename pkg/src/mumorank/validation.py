"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np
import scipy.sparse as sp

from .exceptions import ConfigError, DegenerateSetError, HypergraphError
from .hypergraph import MultimodalHypergraph


def check_hypergraph(X, modalities=None, allow_multi=False) -> MultimodalHypergraph:
    """Coerce ``X`` into a valid :class:`MultimodalHypergraph`.

    ``X`` may already be a hypergraph, or a 2-D array-like of labels with one
    hyperedge per row (``modalities`` then names the columns and defaults to
    ``modality_0 .. modality_{M-1}``).
    """
    if isinstance(X, MultimodalHypergraph):
        graph = X
    else:
        rows = [tuple(str(v) for v in row) for row in X]
        if modalities is None:
            width = len(rows[0]) if rows else 0
            modalities = [f"modality_{i}" for i in range(width)]
        graph = MultimodalHypergraph(modalities, rows, allow_multi=allow_multi)
    problems = graph.validate()
    if problems:
        raise HypergraphError(problems)
    return graph


def check_damping(damping, graph: MultimodalHypergraph) -> np.ndarray:
    """Per-modality damping as a float array, each value in [0, 1].

    Accepts a scalar (shared by all modalities), a sequence ordered by
    modality, or a mapping keyed by modality name or index.
    """
    m = graph.M
    if isinstance(damping, Mapping):
        zetas = np.full(m, np.nan)
        for key, value in damping.items():
            zetas[graph.modality_index(key)] = float(value)
        missing = [graph.modalities[i] for i in np.flatnonzero(np.isnan(zetas))]
        if missing:
            raise ConfigError(f"damping missing for modalities {missing}")
    elif np.ndim(damping) == 0:
        zetas = np.full(m, float(damping))
    else:
        zetas = np.asarray(damping, dtype=float)
        if zetas.shape != (m,):
            raise ConfigError(f"expected {m} damping values, got shape {zetas.shape}")
    if not np.all(np.isfinite(zetas)) or np.any(zetas < 0) or np.any(zetas > 1):
        raise ConfigError(f"damping values must lie in [0, 1], got {zetas.tolist()}")
    return zetas


def check_preferred(preferred, graph: MultimodalHypergraph) -> list[frozenset[str]]:
    """Per-modality preferred label sets.

    ``None`` or a missing modality means the whole modality is preferred.
    Every label must be declared in its modality.
    """
    m = graph.M
    sets: list = [None] * m
    if preferred is not None:
        items = preferred.items() if isinstance(preferred, Mapping) else enumerate(preferred)
        for key, labels in items:
            i = graph.modality_index(key)
            if isinstance(labels, str):
                labels = [labels]
            sets[i] = frozenset(graph.node(i, lab).node_id for lab in labels)
    for i in range(m):
        if sets[i] is None:
            sets[i] = frozenset(graph.labels(i))
        if not sets[i]:
            raise DegenerateSetError(
                f"preferred set of modality {graph.modalities[i]!r} is empty"
            )
    return sets


def check_modality_distribution(s, graph: MultimodalHypergraph, atol=1e-12) -> tuple[np.ndarray, ...]:
    """Validate a per-modality distribution (non-negative, each modality sums to 1)."""
    if len(s) != graph.M:
        raise ConfigError(f"expected {graph.M} per-modality distributions, got {len(s)}")
    out = []
    for i, (vec, size) in enumerate(zip(s, graph.sizes)):
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (size,):
            raise ConfigError(
                f"distribution for modality {graph.modalities[i]!r} has shape "
                f"{vec.shape}, expected ({size},)"
            )
        if np.any(vec < 0) or abs(vec.sum() - 1.0) > atol:
            raise ConfigError(
                f"distribution for modality {graph.modalities[i]!r} must be "
                f"non-negative and sum to 1 (sum={vec.sum()!r})"
            )
        out.append(vec)
    return tuple(out)


def check_adjacency(A) -> sp.csr_matrix:
    """Square 0/1 adjacency with rows as sources; nonzeros count as edges."""
    A = sp.csr_matrix(A, dtype=float)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    if A.shape[0] == 0:
        raise ValueError("adjacency has no nodes")
    A.data = (A.data != 0).astype(float)
    A.eliminate_zeros()
    return A


def check_distribution(s, n: int, atol=1e-12) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (n,):
        raise ValueError(f"preference vector must have shape ({n},), got {s.shape}")
    if np.any(s < 0) or abs(s.sum() - 1.0) > atol:
        raise ValueError(f"preference vector must be stochastic (sum={s.sum()!r})")
    return s


def check_damping_scalar(zeta) -> float:
    zeta = float(zeta)
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"damping must lie in [0, 1], got {zeta}")
    return zeta
