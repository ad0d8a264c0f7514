"""Unimodal, lazy and bipartite personalized PageRank by power iteration."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

from .config import PREFERENCE_MODES, SolverConfig
from .exceptions import ConvergenceError, DegenerateSetError
from .validation import (
    check_adjacency,
    check_damping_scalar,
    check_distribution,
)


def effective_adjacency(A) -> sp.csr_matrix:
    """Adjacency with every dangling node linked to all other nodes."""
    A = check_adjacency(A)
    n = A.shape[0]
    out = np.asarray(A.sum(axis=1)).ravel()
    dangling = np.flatnonzero(out == 0)
    if dangling.size == 0:
        return A
    A = A.tolil()
    for j in dangling:
        if n == 1:
            A[j, j] = 1.0
        else:
            A[j, :] = 1.0
            A[j, j] = 0.0
    return A.tocsr()


def transition_matrix(A) -> sp.csr_matrix:
    """Column-stochastic ``P`` with ``P[i, j] = 1/outdeg(j)`` for each link j -> i."""
    A = effective_adjacency(A)
    out = np.asarray(A.sum(axis=1)).ravel()
    return sp.csr_matrix(sp.diags(1.0 / out) @ A).T.tocsr()


def preference_vector(degrees, preferred, mode="hub_preferring") -> np.ndarray:
    """Distribution supported on ``preferred`` (index array or boolean mask).

    ``uniform`` gives each preferred node ``1/|U|``; ``hub_preferring`` gives
    it ``deg(j) / sum of preferred degrees``.
    """
    degrees = np.asarray(degrees, dtype=float)
    mask = np.zeros(degrees.shape[0], dtype=bool)
    idx = np.asarray(preferred)
    if idx.dtype != bool:
        idx = idx.astype(np.intp)
    mask[idx] = True
    if not mask.any():
        raise DegenerateSetError("preferred set is empty")
    if mode == "uniform":
        return mask / mask.sum()
    if mode != "hub_preferring":
        raise ValueError(f"mode must be one of {PREFERENCE_MODES}, got {mode!r}")
    weights = np.where(mask, degrees, 0.0)
    total = weights.sum()
    if total <= 0:
        raise DegenerateSetError("preferred set has zero total degree")
    return weights / total


def _config(config):
    return SolverConfig() if config is None else config


def _power_iterate(apply, x0, config, split=None):
    """Iterate ``x <- apply(x)`` until the L1 change (per block of ``split``) drops below tol."""
    x = x0
    residual = np.inf
    for it in range(1, int(config.max_iter) + 1):
        nxt = apply(x)
        diff = np.abs(nxt - x)
        if split is None:
            residual = float(diff.sum())
        else:
            residual = max(float(d.sum()) for d in np.split(diff, split))
        x = nxt
        if residual < config.tol:
            return x, it, residual
    raise ConvergenceError("power iteration did not converge", int(config.max_iter), residual)


def _unimodal(A, zeta, s, config, lazy):
    P = transition_matrix(A)
    n = P.shape[0]
    zeta = check_damping_scalar(zeta)
    s = np.full(n, 1.0 / n) if s is None else check_distribution(s, n)
    config = _config(config)
    if lazy:
        def apply(r):
            return (1 - zeta) * (0.5 * r + 0.5 * (P @ r)) + zeta * s
    else:
        def apply(r):
            return (1 - zeta) * (P @ r) + zeta * s
    return _power_iterate(apply, np.full(n, 1.0 / n), config)


def unimodal_pagerank(A, zeta, s=None, config=None) -> np.ndarray:
    """Solve ``r = (1 - zeta) P r + zeta s``.

    ``A[i, j] != 0`` is a link from node i to node j. ``s`` defaults to the
    uniform distribution (traditional PageRank).
    """
    return _unimodal(A, zeta, s, config, lazy=False)[0]


def lazy_pagerank(A, zeta, s=None, config=None) -> np.ndarray:
    """Solve ``r = (1 - zeta) (I/2 + P/2) r + zeta s``."""
    return _unimodal(A, zeta, s, config, lazy=True)[0]


def _bipartite_operators(B):
    B = sp.csr_matrix(B, dtype=float)
    B.data = (B.data != 0).astype(float)
    B.eliminate_zeros()
    n_clients, n_items = B.shape
    if n_clients == 0 or n_items == 0:
        raise DegenerateSetError("bipartite graph has an empty side")
    deg_k = np.asarray(B.sum(axis=1)).ravel()
    deg_p = np.asarray(B.sum(axis=0)).ravel()
    if np.any(deg_k == 0) or np.any(deg_p == 0):
        raise DegenerateSetError("bipartite graph has zero-degree nodes; prune them first")
    # client j -> item i with 1/deg(j); item j -> client i with 1/deg(j)
    P_kp = sp.csr_matrix(sp.diags(1.0 / deg_k) @ B).T.tocsr()
    P_pk = sp.csr_matrix(B @ sp.diags(1.0 / deg_p))
    return B, deg_k, deg_p, P_kp, P_pk


def _bipartite(B, zeta_kp, zeta_pk, s_items, s_clients, config):
    _, deg_k, deg_p, P_kp, P_pk = _bipartite_operators(B)
    n_clients, n_items = deg_k.shape[0], deg_p.shape[0]
    zeta_kp = check_damping_scalar(zeta_kp)
    zeta_pk = check_damping_scalar(zeta_pk)
    s_p = np.full(n_items, 1.0 / n_items) if s_items is None else check_distribution(s_items, n_items)
    s_k = (np.full(n_clients, 1.0 / n_clients) if s_clients is None
           else check_distribution(s_clients, n_clients))

    def apply(x):
        r_p, r_k = x[:n_items], x[n_items:]
        return np.concatenate([
            (1 - zeta_kp) * (P_kp @ r_k) + zeta_kp * s_p,
            (1 - zeta_pk) * (P_pk @ r_p) + zeta_pk * s_k,
        ])

    x0 = np.concatenate([np.full(n_items, 1.0 / n_items), np.full(n_clients, 1.0 / n_clients)])
    x, n_iter, residual = _power_iterate(apply, x0, _config(config), split=[n_items])
    return x[:n_items], x[n_items:], n_iter, residual


def bipartite_pagerank(B, zeta_kp, zeta_pk, s_items=None, s_clients=None, config=None):
    """Item- and client-oriented bipartite PageRank.

    ``B`` is the ``(n_clients, n_items)`` biadjacency. ``zeta_kp`` damps the
    client -> item direction and feeds ``s_items``; ``zeta_pk`` damps
    item -> client and feeds ``s_clients``. Returns ``(r_items, r_clients)``.
    """
    r_p, r_k, _, _ = _bipartite(B, zeta_kp, zeta_pk, s_items, s_clients, config)
    return r_p, r_k


class PageRank(BaseEstimator):
    """Personalized PageRank on a directed graph.

    Parameters
    ----------
    damping : float, default 0.15
        Boring factor: probability of a jump to the preference vector.
    lazy : bool, default False
        Use the lazy walk (stay put with probability 1/2 before moving).
    preferred : array-like of int or None
        Preferred node indices. ``None`` gives traditional PageRank.
    preference_mode : {"hub_preferring", "uniform"}
        How the jump mass is spread over ``preferred``; hub-preferring weighs
        by out-degree.
    tol, max_iter : solver settings.

    Attributes
    ----------
    rank_ : ndarray of shape (n_nodes,)
    preference_ : ndarray of shape (n_nodes,)
    n_iter_ : int
    residual_ : float
    """

    def __init__(self, damping=0.15, lazy=False, preferred=None,
                 preference_mode="hub_preferring", tol=1e-12, max_iter=100_000):
        self.damping = damping
        self.lazy = lazy
        self.preferred = preferred
        self.preference_mode = preference_mode
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        A = effective_adjacency(X)
        n = A.shape[0]
        if self.preferred is None:
            s = np.full(n, 1.0 / n)
        else:
            out = np.asarray(A.sum(axis=1)).ravel()
            s = preference_vector(out, self.preferred, self.preference_mode)
        config = SolverConfig(tol=self.tol, max_iter=self.max_iter)
        self.rank_, self.n_iter_, self.residual_ = _unimodal(A, self.damping, s, config, self.lazy)
        self.preference_ = s
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).rank_


class BipartitePageRank(BaseEstimator):
    """Bipartite PageRank with a separate supernode per direction.

    ``fit`` takes the ``(n_clients, n_items)`` biadjacency. Preferred sets,
    when given, are index arrays on each side.

    Attributes
    ----------
    item_rank_, client_rank_ : ndarray
    n_iter_ : int
    residual_ : float
    """

    def __init__(self, damping_kp=0.15, damping_pk=0.15, preferred_items=None,
                 preferred_clients=None, preference_mode="hub_preferring",
                 tol=1e-12, max_iter=100_000):
        self.damping_kp = damping_kp
        self.damping_pk = damping_pk
        self.preferred_items = preferred_items
        self.preferred_clients = preferred_clients
        self.preference_mode = preference_mode
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        _, deg_k, deg_p, _, _ = _bipartite_operators(X)
        s_p = (None if self.preferred_items is None
               else preference_vector(deg_p, self.preferred_items, self.preference_mode))
        s_k = (None if self.preferred_clients is None
               else preference_vector(deg_k, self.preferred_clients, self.preference_mode))
        config = SolverConfig(tol=self.tol, max_iter=self.max_iter)
        (self.item_rank_, self.client_rank_, self.n_iter_,
         self.residual_) = _bipartite(X, self.damping_kp, self.damping_pk, s_p, s_k, config)
        return self
