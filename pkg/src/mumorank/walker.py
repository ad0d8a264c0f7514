"""Seeded Monte-Carlo simulation of the multimodal random walk.

Used as an estimator of MuMoRank that shares no code path with the
power iteration. Walker ``k`` draws from its own PCG64 stream seeded by
``SeedSequence(master_seed, spawn_key=(k,))``, so the merged counts do not
depend on how walkers are grouped or scheduled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import DegenerateSetError
from .hypergraph import generalized_view
from .mumo import RankVector, build_preference_vector
from .validation import check_damping, check_hypergraph, check_modality_distribution

MIN_RECOMMENDED_STEPS = 1000


@dataclass(frozen=True)
class WalkConfig:
    """Simulation settings.

    ``total_steps`` counts node-to-node transitions over all walkers, burn-in
    included. ``burn_in`` defaults to 10% of ``total_steps``.
    """

    total_steps: int
    burn_in: int | None = None
    master_seed: int = 0
    walkers: int = 64
    init: str = "degree_proportional"
    chunk: int = 2048

    def __post_init__(self):
        if int(self.total_steps) < 1:
            raise ValueError("total_steps must be positive")
        if int(self.walkers) < 1:
            raise ValueError("walkers must be positive")
        if not 0 <= self.effective_burn_in < self.total_steps:
            raise ValueError("burn_in must satisfy 0 <= burn_in < total_steps")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.init not in ("degree_proportional", "preference"):
            raise ValueError(f"unknown init {self.init!r}")

    @property
    def effective_burn_in(self) -> int:
        return self.total_steps // 10 if self.burn_in is None else int(self.burn_in)

    @property
    def sampled_steps(self) -> int:
        return int(self.total_steps) - self.effective_burn_in


def _split(total, parts):
    base, extra = divmod(int(total), parts)
    return np.array([base + (k < extra) for k in range(parts)], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class WalkResult:
    counts: tuple[np.ndarray, ...]
    ranks: RankVector
    config: WalkConfig

    @property
    def n_samples(self) -> int:
        return int(sum(c.sum() for c in self.counts))


class _Chain:
    """Read-only transition tables shared by all walkers."""

    def __init__(self, graph, damping, s):
        view = generalized_view(graph)
        m = graph.M
        self.m = m
        self.view = view
        zetas = check_damping(damping, graph)
        self.node_zeta = zetas[view.active_modality]
        inc = view.incidence
        # one member per modality, so a node meets each hyperedge at most once
        self.inc_edges = inc.indices
        self.inc_ptr = inc.indptr.astype(np.int64)
        self.degree = view.active_degree.astype(np.int64)
        self.members = view.edge_members

        s_all = np.concatenate(check_modality_distribution(s, graph))
        s_active = s_all[view.active_global]
        # cdf over active nodes, shifted so modality l occupies (l, l+1]
        self.cdf = np.zeros(view.n_active)
        self.last = np.zeros(m, dtype=np.intp)
        for mod, idx in enumerate(view.modality_slices()):
            mass = s_active[idx]
            if idx.size == 0 or mass.sum() <= 0:
                raise DegenerateSetError(
                    f"preference support is empty for modality {graph.modalities[mod]!r}"
                )
            c = np.cumsum(mass) / mass.sum()
            c[np.flatnonzero(mass)[-1]:] = 1.0
            self.cdf[idx] = mod + c
            self.last[mod] = idx[np.flatnonzero(mass)[-1]]
        self.s_active = s_active

    def land(self, mod, u):
        pos = np.searchsorted(self.cdf, mod + u, side="right")
        # mod + u can round up to mod + 1
        return np.minimum(pos, self.last[mod])

    def start(self, rng, init):
        if init == "degree_proportional":
            p = self.degree / self.degree.sum()
        else:
            p = self.s_active / self.s_active.sum()
        return int(rng.choice(p.shape[0], p=p))


def _simulate_group(chain: _Chain, seeds, quotas, burns, chunk, init):
    rngs = [np.random.Generator(np.random.PCG64(seq)) for seq in seeds]
    w = len(rngs)
    cur = np.array([chain.start(rng, init) for rng in rngs], dtype=np.intp)
    counts = np.zeros(chain.view.n_active, dtype=np.int64)
    horizon = int(quotas.max()) if w else 0
    m = chain.m
    t0 = 0
    while t0 < horizon:
        n = min(chunk, horizon - t0)
        u = np.stack([rng.random((n, 3)) for rng in rngs], axis=1)  # (n, w, 3)
        visits = np.empty((n, w), dtype=np.intp)
        for t in range(n):
            u0, u1, u2 = u[t, :, 0], u[t, :, 1], u[t, :, 2]
            bored = u0 < chain.node_zeta[cur]
            # boring jump: uniform supernode, then its modality's preference
            mod = np.minimum((u1 * m).astype(np.intp), m - 1)
            jumped = chain.land(mod, u2)
            # hyperedge move: uniform incident hyperedge, then uniform member
            slot = np.minimum((u1 * chain.degree[cur]).astype(np.int64), chain.degree[cur] - 1)
            edge = chain.inc_edges[chain.inc_ptr[cur] + slot]
            member = np.minimum((u2 * m).astype(np.intp), m - 1)
            walked = chain.members[edge, member]
            cur = np.where(bored, jumped, walked)
            visits[t] = cur
        step = t0 + np.arange(n)[:, None]
        keep = (step >= burns[None, :]) & (step < quotas[None, :])
        counts += np.bincount(visits[keep], minlength=counts.shape[0])
        t0 += n
    return counts


def simulate(graph, damping, s, config: WalkConfig, n_jobs: int = 1) -> WalkResult:
    """Empirical per-modality visit distribution of the multimodal walker.

    A walker at a modality-``i`` node jumps with probability ``zeta_i`` via a
    uniformly chosen supernode (landing by that supernode's preference);
    otherwise it takes a uniform incident hyperedge and then a uniform member
    of it, possibly the node it came from. Visits after burn-in are counted
    separately per modality.
    """
    graph = check_hypergraph(graph)
    chain = _Chain(graph, damping, s)
    w = int(config.walkers)
    quotas = _split(config.total_steps, w)
    burns = _split(config.effective_burn_in, w)
    seeds = [np.random.SeedSequence(int(config.master_seed), spawn_key=(k,)) for k in range(w)]
    groups = np.array_split(np.arange(w), max(1, min(int(n_jobs), w)))

    def run(idx):
        return _simulate_group(chain, [seeds[k] for k in idx], quotas[idx], burns[idx],
                               int(config.chunk), config.init)

    if len(groups) == 1:
        parts = [run(groups[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(groups)) as pool:
            parts = list(pool.map(run, groups))
    active_counts = np.sum(parts, axis=0)

    view = chain.view
    full = np.zeros(graph.n_nodes, dtype=np.int64)
    full[view.active_global] = active_counts
    offsets = graph.offsets
    counts = tuple(full[offsets[i]:offsets[i + 1]] for i in range(graph.M))
    dist = tuple(c / c.sum() if c.sum() > 0 else np.zeros(c.shape[0]) for c in counts)
    labels = tuple(graph.labels(i) for i in range(graph.M))
    ranks = RankVector(graph.modalities, labels, dist, n_iter=int(config.total_steps))
    return WalkResult(counts, ranks, config)


def compare(empirical: RankVector, analytic: RankVector) -> dict:
    """Max absolute per-node deviation and per-modality L1 distance."""
    if empirical.modalities != analytic.modalities or empirical.labels != analytic.labels:
        raise ValueError("rank vectors cover different node sets")
    l1 = [float(np.abs(a - b).sum()) for a, b in zip(empirical.node_ranks, analytic.node_ranks)]
    dev = max((float(np.abs(a - b).max()) for a, b in zip(empirical.node_ranks, analytic.node_ranks)
               if a.size), default=0.0)
    return {"max_abs_deviation": dev, "l1_per_modality": dict(zip(empirical.modalities, l1))}


class WalkSimulator(BaseEstimator):
    """Estimator wrapper around :func:`simulate`.

    Attributes
    ----------
    ranks_ : RankVector
        Empirical per-modality visit frequencies.
    counts_ : tuple of ndarray
    """

    def __init__(self, damping=0.15, preferred=None, preference_mode="hub_preferring",
                 total_steps=1_000_000, burn_in=None, seed=0, walkers=64,
                 init="degree_proportional", n_jobs=1):
        self.damping = damping
        self.preferred = preferred
        self.preference_mode = preference_mode
        self.total_steps = total_steps
        self.burn_in = burn_in
        self.seed = seed
        self.walkers = walkers
        self.init = init
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        graph = check_hypergraph(X)
        s = build_preference_vector(graph, self.preferred, self.preference_mode)
        config = WalkConfig(self.total_steps, self.burn_in, self.seed, self.walkers, self.init)
        result = simulate(graph, self.damping, s, config, n_jobs=self.n_jobs)
        self.ranks_ = result.ranks
        self.counts_ = result.counts
        return self
