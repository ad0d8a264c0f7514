"""Boundary statistics of preferred node sets and authority-outflow bounds.

The outflow of a preferred set ``U`` is the authority re-entering it through
the supernodes: ``sum_i zeta_i * (rank mass of modality i outside U_i)``.
Each bound caps it by the boundary of ``U`` scaled by a per-link authority
limit.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .config import SolverConfig
from .exceptions import ConfigError, DegenerateSetError, MuMoRankError
from .hypergraph import MultimodalHypergraph
from .pagerank import _bipartite, _bipartite_operators, _unimodal, effective_adjacency, preference_vector
from .validation import check_damping, check_hypergraph, check_preferred

HOLDS_SLACK = 1e-12
MUMO_VARIANTS = ("equal", "equal_d0", "unequal", "unequal_d0")


class UndefinedBoundError(MuMoRankError, ZeroDivisionError):
    """A bound constant divides by a zero damping factor."""


@dataclass(frozen=True, eq=False)
class BoundaryStats:
    """Per-hyperedge inside/outside counts and per-modality capacities of ``U``.

    ``inside[h, i]`` tells whether hyperedge ``h``'s modality-``i`` member is
    preferred; ``l_n``/``l_o`` count inside/outside members; ``hvol[i]`` is
    the degree sum of ``U_i``; ``boundary`` is ``sum_h l_n*l_o/M`` and
    ``boundary_zeta`` is ``sum_h (l_o/M) * sum_{i inside} (1 - zeta_i)``.
    """

    modalities: tuple[str, ...]
    inside: np.ndarray
    l_n: np.ndarray
    l_o: np.ndarray
    hvol: np.ndarray
    boundary: float
    boundary_zeta: float
    zetas: np.ndarray

    @property
    def M(self) -> int:
        return len(self.modalities)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    bound: float
    observed: float
    holds: bool
    d_sat: float | None = None
    d0_sat: float | None = None
    d_modality: tuple[float, ...] | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "bound": self.bound,
            "observed_outflow": self.observed,
            "holds": self.holds,
        }
        if self.d_sat is not None:
            out["d_sat"] = self.d_sat
        if self.d0_sat is not None:
            out["d0_sat"] = self.d0_sat
        if self.d_modality is not None:
            out["d_modality"] = list(self.d_modality)
        out.update(self.details)
        return out


def _holds(observed, bound):
    return bool(observed <= bound + HOLDS_SLACK)


def boundary_stats(graph: MultimodalHypergraph, preferred, damping) -> BoundaryStats:
    graph = check_hypergraph(graph)
    sets = check_preferred(preferred, graph)
    zetas = check_damping(damping, graph)
    m = graph.M
    edges = graph.edge_array
    inside = np.zeros(edges.shape, dtype=bool)
    for i in range(m):
        mask = np.array([lab in sets[i] for lab in graph.labels(i)], dtype=bool)
        inside[:, i] = mask[edges[:, i]] if edges.shape[0] else False
    l_n = inside.sum(axis=1)
    l_o = m - l_n
    # each hyperedge meets U_i at most once, so the degree sum is an incidence count
    hvol = inside.sum(axis=0).astype(np.int64)
    boundary = float(np.sum(l_n * l_o) / m)
    keep_inside = (inside * (1.0 - zetas)).sum(axis=1)
    boundary_zeta = float(np.sum(l_o / m * keep_inside))
    return BoundaryStats(graph.modalities, inside, l_n, l_o, hvol, boundary, boundary_zeta, zetas)


def _preferred_masks(ranks, preferred):
    m = len(ranks.modalities)
    sets = [None] * m
    if preferred is not None:
        items = preferred.items() if isinstance(preferred, Mapping) else enumerate(preferred)
        for key, labels in items:
            i = key if isinstance(key, (int, np.integer)) else ranks.modalities.index(key)
            sets[i] = {labels} if isinstance(labels, str) else set(labels)
    return [
        np.ones(len(ranks.labels[i]), dtype=bool) if sets[i] is None
        else np.array([lab in sets[i] for lab in ranks.labels[i]], dtype=bool)
        for i in range(m)
    ]


def observed_outflow(ranks, preferred, damping) -> float:
    """``sum_i zeta_i * (rank of modality-i nodes outside U_i)``."""
    masks = _preferred_masks(ranks, preferred)
    if isinstance(damping, Mapping):
        zetas = [float(damping[name]) for name in ranks.modalities]
    elif np.ndim(damping) == 0:
        zetas = [float(damping)] * len(ranks.modalities)
    else:
        zetas = [float(z) for z in damping]
    return float(sum(z * r[~mask].sum() for z, r, mask in zip(zetas, ranks.node_ranks, masks)))


def _require_hvol(stats):
    if np.any(stats.hvol <= 0):
        empty = [stats.modalities[i] for i in np.flatnonzero(stats.hvol <= 0)]
        raise DegenerateSetError(f"preferred sets with zero capacity in modalities {empty}")
    return stats.hvol.astype(float)


def _equal_zeta(stats, zeta):
    if zeta is None:
        zetas = stats.zetas
        if not np.all(zetas == zetas[0]):
            raise ConfigError("equal-damping form requested but damping differs between modalities")
        return float(zetas[0])
    return float(zeta)


def d_sat_equal(stats: BoundaryStats, zeta=None) -> float:
    """Per-link cap with one shared damping: ``max_i 1/HVol(U_i)``."""
    _equal_zeta(stats, zeta)
    return float(np.max(1.0 / _require_hvol(stats)))


def d_sat_unequal(stats: BoundaryStats, damping=None) -> float:
    """``max_i mean(zeta) / (zeta_i * HVol(U_i))``."""
    hvol = _require_hvol(stats)
    zetas = stats.zetas if damping is None else np.broadcast_to(np.asarray(damping, float), hvol.shape)
    if np.any(zetas == 0):
        raise UndefinedBoundError("per-link cap is undefined when some modality has zero damping")
    return float(np.max(zetas.mean() / (zetas * hvol)))


def d0_sat_equal(stats: BoundaryStats, zeta=None):
    """Base authority ``d0 = mean_i (1-zeta)/HVol_i`` and caps ``d0 + zeta/HVol_i``."""
    zeta = _equal_zeta(stats, zeta)
    hvol = _require_hvol(stats)
    d0 = float(np.mean((1.0 - zeta) / hvol))
    return d0, d0 + zeta / hvol


def d0_sat_unequal(stats: BoundaryStats, damping=None):
    """Base authority ``d0 = mean_i (1-zeta_i)/HVol_i`` and caps ``d0 + mean(zeta)/HVol_i``."""
    hvol = _require_hvol(stats)
    zetas = stats.zetas if damping is None else np.broadcast_to(np.asarray(damping, float), hvol.shape)
    d0 = float(np.mean((1.0 - zetas) / hvol))
    return d0, d0 + zetas.mean() / hvol


def _d0_bound(stats, zetas, d_modality):
    per_edge = (stats.inside * ((1.0 - zetas) * d_modality)).sum(axis=1)
    return float(np.sum(stats.l_o / stats.M * per_edge))


def _equal_d0_literal(stats, zeta):
    # closed form for one shared damping: base term times the l_n*l_o boundary
    hvol = _require_hvol(stats)
    m = stats.M
    first = float(np.sum(stats.l_o / m * (stats.inside * (zeta / hvol)).sum(axis=1)))
    second = float(np.sum((1.0 - zeta) / hvol) / m) * float(np.sum(stats.l_o * stats.l_n) / m)
    return (1.0 - zeta) * (first + second)


def bound_mumo(stats: BoundaryStats, damping=None, variant="unequal", observed=float("nan"),
               literal=False) -> BoundReport:
    """Evaluate one multimodal outflow bound.

    ``variant`` is one of ``equal``, ``equal_d0`` (single damping shared by
    all modalities) or ``unequal``, ``unequal_d0``. ``observed`` is the
    outflow from :func:`observed_outflow` and only feeds ``holds``.
    ``literal`` evaluates ``equal_d0`` through its closed form in ``zeta``
    instead of the per-modality sum; the two agree.
    """
    if variant not in MUMO_VARIANTS:
        raise ValueError(f"variant must be one of {MUMO_VARIANTS}, got {variant!r}")
    zetas = stats.zetas if damping is None else np.asarray(damping, dtype=float)
    if zetas.shape != (stats.M,):
        zetas = np.broadcast_to(zetas, (stats.M,)).astype(float)
    if np.any(zetas != stats.zetas):
        raise ConfigError("damping differs from the one the boundary statistics were built with")
    hvol = _require_hvol(stats)
    observed = float(observed)

    if variant == "equal":
        zeta = _equal_zeta(stats, None)
        bound = (1.0 - zeta) * stats.boundary / hvol.min()
        return BoundReport(variant, float(bound), observed, _holds(observed, bound),
                           d_sat=d_sat_equal(stats), details={"boundary": stats.boundary})
    if variant == "unequal":
        bound = stats.boundary_zeta / hvol.min()
        try:
            d_sat = d_sat_unequal(stats)
        except UndefinedBoundError:
            d_sat = None
        return BoundReport(variant, float(bound), observed, _holds(observed, bound), d_sat=d_sat,
                           details={"boundary_zeta": stats.boundary_zeta})
    if variant == "equal_d0":
        zeta = _equal_zeta(stats, None)
        d0, d_modality = d0_sat_equal(stats)
        if literal:
            bound = _equal_d0_literal(stats, zeta)
        else:
            bound = _d0_bound(stats, zetas, d_modality)
    else:
        d0, d_modality = d0_sat_unequal(stats)
        bound = _d0_bound(stats, zetas, d_modality)
    return BoundReport(variant, float(bound), observed, _holds(observed, bound), d0_sat=d0,
                       d_modality=tuple(float(d) for d in d_modality))


def evaluate_bounds(graph, preferred, damping, ranks, variants=None) -> dict:
    """All applicable multimodal bounds for ``ranks`` (a converged RankVector)."""
    graph = check_hypergraph(graph)
    stats = boundary_stats(graph, preferred, damping)
    sets = check_preferred(preferred, graph)
    zetas = stats.zetas
    observed = observed_outflow(ranks, sets, zetas)
    if variants is None:
        equal = bool(np.all(zetas == zetas[0]))
        variants = MUMO_VARIANTS if equal else ("unequal", "unequal_d0")
    reports = {v: bound_mumo(stats, zetas, v, observed) for v in variants}
    return {"stats": stats, "observed": observed, "reports": reports}


# -- unimodal and bipartite ---------------------------------------------------


def _mask(n, members):
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(members)] = True
    return mask


def bound_theorem_unimodal(A, U, zeta, config: SolverConfig | None = None, lazy=False) -> BoundReport:
    """Check ``zeta * p_o <= (1 - zeta) |boundary(U)| / Vol(U)``.

    ``p_o`` is the rank mass outside ``U`` of the hub-preferring personalized
    PageRank on ``U``. Dangling nodes are first linked to every other node;
    degrees and the boundary are counted on that graph. With ``lazy`` the
    walk and the bound both use the lazy variant (bound factor halved).
    """
    A = effective_adjacency(A)
    n = A.shape[0]
    inside = _mask(n, U)
    out = np.asarray(A.sum(axis=1)).ravel()
    vol = float(out[inside].sum())
    if vol <= 0:
        raise DegenerateSetError("preferred set has zero volume")
    border = float(A[inside][:, ~inside].sum())
    s = preference_vector(out, inside, "hub_preferring")
    r, n_iter, _ = _unimodal(A, zeta, s, config or SolverConfig(), lazy)
    factor = 0.5 if lazy else 1.0
    bound = factor * (1.0 - zeta) * border / vol
    observed = float(zeta * r[~inside].sum())
    return BoundReport("lazy" if lazy else "unimodal", float(bound), observed,
                       _holds(observed, bound),
                       details={"boundary": border, "volume": vol, "iterations": n_iter})


def bound_theorem_lazy(A, U, zeta, config: SolverConfig | None = None) -> BoundReport:
    return bound_theorem_unimodal(A, U, zeta, config, lazy=True)


def _bipartite_setup(B, U_clients, U_items, zeta_kp, zeta_pk, config):
    B, deg_k, deg_p, _, _ = _bipartite_operators(B)
    in_k = _mask(deg_k.shape[0], U_clients)
    in_p = _mask(deg_p.shape[0], U_items)
    s_k = preference_vector(deg_k, in_k, "hub_preferring")
    s_p = preference_vector(deg_p, in_p, "hub_preferring")
    r_p, r_k, _, _ = _bipartite(B, zeta_kp, zeta_pk, s_p, s_k, config or SolverConfig())
    vol = min(float(deg_k[in_k].sum()), float(deg_p[in_p].sum()))
    border_k = float(B[in_k][:, ~in_p].sum())   # U_k -> items outside U_p
    border_p = float(B[~in_k][:, in_p].sum())   # U_p -> clients outside U_k
    p_out = float(r_p[~in_p].sum())
    k_out = float(r_k[~in_k].sum())
    return vol, border_k, border_p, p_out, k_out


def bound_theorem_bipartite(B, U_clients, U_items, zeta_kp, zeta_pk,
                            config: SolverConfig | None = None):
    """The two separate bipartite outflow inequalities.

    Items side: ``zeta_pk * p_{p,o} <= (1 - zeta_kp) |U_k -> Items minus U_p| / min Vol``.
    Clients side: ``zeta_kp * p_{k,o} <= (1 - zeta_pk) |U_p -> Clients minus U_k| / min Vol``.

    These do not hold on every graph: mass can reach the outside items via
    clients outside ``U_k`` without crossing the counted border. See
    :func:`bound_bipartite_combined` for the form that always holds.
    Returns ``(items_report, clients_report)``.
    """
    vol, border_k, border_p, p_out, k_out = _bipartite_setup(
        B, U_clients, U_items, zeta_kp, zeta_pk, config)
    b_items = (1.0 - zeta_kp) * border_k / vol
    b_clients = (1.0 - zeta_pk) * border_p / vol
    o_items = zeta_pk * p_out
    o_clients = zeta_kp * k_out
    return (
        BoundReport("bipartite_items", b_items, o_items, _holds(o_items, b_items),
                    details={"border": border_k, "min_volume": vol}),
        BoundReport("bipartite_clients", b_clients, o_clients, _holds(o_clients, b_clients),
                    details={"border": border_p, "min_volume": vol}),
    )


def bound_bipartite_combined(B, U_clients, U_items, zeta_kp, zeta_pk,
                             config: SolverConfig | None = None) -> BoundReport:
    """Sum of both sides' outflows against the sum of both borders."""
    vol, border_k, border_p, p_out, k_out = _bipartite_setup(
        B, U_clients, U_items, zeta_kp, zeta_pk, config)
    bound = ((1.0 - zeta_kp) * border_k + (1.0 - zeta_pk) * border_p) / vol
    observed = zeta_pk * p_out + zeta_kp * k_out
    return BoundReport("bipartite_combined", bound, observed, _holds(observed, bound),
                       details={"border_clients": border_k, "border_items": border_p,
                                "min_volume": vol})
