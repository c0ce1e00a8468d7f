"""Sublinear Monte Carlo approximation of heat kernel pagerank.

The estimator runs r random walks: walk w starts at node i with probability
|f_i| / ||f||_1, takes k ~ truncated-Poisson(t) uniform-neighbor steps, and
deposits sign(f_i) * ||f||_1 / r at its endpoint. The restricted variant
runs the same walks on the full transition kernel but kills any walk that
steps outside the follower set (Dirichlet boundary), which realizes the
substochastic follower-restricted kernel.

Randomness is counter-based: walk w reads draws w*(K+2) .. w*(K+2)+K+1 of
the SplitMix64 stream for the given seed (position 0 start node, position 1
walk length, then one draw per step). The vectorized batch below is
bit-identical to a sequential walk-by-walk loop over those streams, and
total walk steps never exceed r*K regardless of graph size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, PreconditionError
from .exact import poisson_cutoff
from .graph import Graph, is_connected, is_connected_subset, validate_node_set
from . import rng

WALK_COUNT_FACTOR = 16.0  # r = ceil((16 / eps^3) * ln max(n, 2))


@dataclass(frozen=True)
class Preference:
    """Signed seed vector with its cached 1-norm."""

    values: np.ndarray
    one_norm: float

    @staticmethod
    def from_values(values) -> "Preference":
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise InputFormatError("preference must be a 1-d vector")
        if not np.all(np.isfinite(arr)):
            raise InputFormatError("preference must be finite")
        return Preference(values=arr, one_norm=float(np.abs(arr).sum()))


@dataclass(frozen=True)
class WalkParams:
    r: int
    K: int

    def __post_init__(self):
        if self.r < 1 or self.K < 0:
            raise InputFormatError(f"invalid walk params r={self.r}, K={self.K}")


@dataclass(frozen=True)
class HkprEstimate:
    """Monte Carlo estimate of a heat kernel pagerank vector plus run metadata."""

    values: np.ndarray
    t: float
    epsilon: float
    r_walks: int
    k_cap: int
    seed: int
    steps: int  # total steps taken across all walks; always <= r_walks * k_cap


def _check_epsilon(epsilon: float) -> None:
    if not (0.0 < epsilon < 1.0):
        raise InputFormatError(f"epsilon must be in (0, 1), got {epsilon}")


def walk_params(
    n_effective: int,
    epsilon: float,
    t: float,
    r_override: int | None = None,
    k_override: int | None = None,
) -> WalkParams:
    """Walk count and step cap for an epsilon-approximate run.

    r = ceil((16/eps^3) ln max(n, 2)); K is the smallest step cap whose
    truncated-Poisson tail is at most eps/2, found by pmf accumulation.
    Overrides exist for experiments; defaults carry the accuracy contract.
    """
    if n_effective < 1:
        raise InputFormatError("n_effective must be >= 1")
    _check_epsilon(epsilon)
    if t < 0:
        raise InputFormatError("t must be nonnegative")
    if r_override is not None:
        r = int(r_override)
    else:
        r = math.ceil((WALK_COUNT_FACTOR / epsilon**3) * math.log(max(n_effective, 2)))
    k = int(k_override) if k_override is not None else poisson_cutoff(t, epsilon / 2.0)
    return WalkParams(r=r, K=k)


def _poisson_cdf_table(t: float, K: int) -> np.ndarray:
    """cdf[j] = P(Poisson(t) <= j) for j = 0..K, by the same recurrence the
    scalar sampler uses, so table inversion and scalar accumulation agree bit
    for bit."""
    w = math.exp(-t)
    cdf = np.empty(K + 1)
    cum = w
    cdf[0] = cum
    for j in range(1, K + 1):
        w *= t / j
        cum += w
        cdf[j] = cum
    return cdf


def sample_walk_length(t: float, K: int, rg) -> int:
    """One draw of min(Poisson(t), K) by inverse-cdf accumulation.

    `rg` is anything with .random() -> float in [0, 1).
    """
    if t < 0 or K < 0:
        raise InputFormatError("t and K must be nonnegative")
    u = rg.random()
    w = math.exp(-t)
    cum = w
    k = 0
    while k < K and u >= cum:
        k += 1
        w *= t / k
        cum += w
    return k


def random_walk(graph: Graph, start: int, k: int, rg) -> int:
    """Endpoint of a k-step uniform-neighbor walk from `start`."""
    if not (0 <= start < graph.n):
        raise InputFormatError(f"start node {start} out of range")
    cur = int(start)
    for _ in range(k):
        d = int(graph.degrees[cur])
        idx = min(int(rg.random() * d), d - 1)
        cur = int(graph.indices[graph.indptr[cur] + idx])
    return cur


def _start_distribution(pref: Preference) -> np.ndarray:
    """Normalized cumulative |f|; zero-mass nodes occupy zero-width intervals."""
    cum = np.cumsum(np.abs(pref.values))
    return cum / cum[-1]


def _run_walks(
    graph: Graph,
    t: float,
    pref: Preference,
    params: WalkParams,
    seed: int,
    local_to_global: np.ndarray | None,
    member: np.ndarray | None,
) -> tuple[np.ndarray, int]:
    """Shared walk engine. `local_to_global`/`member` are None for the full
    graph; for the restricted variant they map preference coordinates to
    graph nodes and flag the surviving set."""
    n_out = pref.values.size
    r, K = params.r, params.K
    stride = np.uint64(K + 2)

    out = np.zeros(n_out)
    if pref.one_norm == 0.0 or r == 0:
        return out, 0

    ids = np.arange(r, dtype=np.uint64)

    u_start = rng.uniforms(seed, ids * stride)
    start_local = np.searchsorted(_start_distribution(pref), u_start, side="right")
    start_local = np.minimum(start_local, n_out - 1).astype(np.int64)
    mass = np.sign(pref.values[start_local]) * (pref.one_norm / r)

    u_len = rng.uniforms(seed, ids * stride + np.uint64(1))
    lengths = np.searchsorted(_poisson_cdf_table(t, K), u_len, side="right")
    lengths = np.minimum(lengths, K).astype(np.int64)

    if local_to_global is None:
        final = start_local.copy()
    else:
        final = local_to_global[start_local]
    alive = np.ones(r, dtype=bool)

    active = np.flatnonzero(lengths >= 1)
    cur = final[active].copy()
    rem_len = lengths[active]
    steps = 0
    j = 0
    while active.size:
        j += 1
        counters = active.astype(np.uint64) * stride + np.uint64(1 + j)
        u = rng.uniforms(seed, counters)
        deg = graph.degrees[cur]
        sel = np.minimum((u * deg).astype(np.int64), deg - 1)
        cur = graph.indices[graph.indptr[cur] + sel]
        steps += active.size
        if member is not None:
            ok = member[cur]
            alive[active[~ok]] = False
            active, cur, rem_len = active[ok], cur[ok], rem_len[ok]
        done = rem_len == j
        final[active[done]] = cur[done]
        keep = ~done
        active, cur, rem_len = active[keep], cur[keep], rem_len[keep]

    depositing = alive if member is not None else slice(None)
    endpoints = final[depositing]
    if local_to_global is not None:
        # map global endpoints back to preference coordinates
        g2l = np.full(graph.n, -1, dtype=np.int64)
        g2l[local_to_global] = np.arange(n_out, dtype=np.int64)
        endpoints = g2l[endpoints]
    out = np.bincount(endpoints, weights=mass[depositing], minlength=n_out)
    return out, steps


def approx_hkpr(
    graph: Graph,
    t: float,
    f,
    epsilon: float,
    seed: int = 0,
    r_override: int | None = None,
    k_override: int | None = None,
) -> HkprEstimate:
    """Epsilon-approximate heat kernel pagerank by seeded random walks.

    For nonnegative f the deposited mass sums to ||f||_1 by construction and
    each coordinate lands in the band (1 +- eps) rho[i] +- eps with
    probability at least 1 - eps. Signed f is handled by depositing signed
    mass (the estimator is linear in f); the guarantee then applies to the
    positive and negative parts separately.
    """
    pref = f if isinstance(f, Preference) else Preference.from_values(f)
    if pref.values.size != graph.n:
        raise InputFormatError(f"preference length {pref.values.size} != n={graph.n}")
    if not is_connected(graph):
        raise PreconditionError("graph is not connected")
    params = walk_params(graph.n, epsilon, t, r_override, k_override)
    values, steps = _run_walks(graph, t, pref, params, seed, None, None)
    return HkprEstimate(
        values=values,
        t=t,
        epsilon=epsilon,
        r_walks=params.r,
        k_cap=params.K,
        seed=int(seed),
        steps=steps,
    )


def approx_hkpr_restricted(
    graph: Graph,
    follower,
    t: float,
    f,
    epsilon: float,
    seed: int = 0,
    r_override: int | None = None,
    k_override: int | None = None,
) -> HkprEstimate:
    """Restricted heat kernel pagerank: walks die on leaving the follower set.

    The preference vector lives on follower coordinates (length s). With
    follower = V this is the plain estimator, draw for draw.
    """
    follower = validate_node_set(graph, follower)
    pref = f if isinstance(f, Preference) else Preference.from_values(f)
    if pref.values.size != follower.size:
        raise InputFormatError(
            f"preference length {pref.values.size} != follower count {follower.size}"
        )
    if follower.size == graph.n:
        if not is_connected(graph):
            raise PreconditionError("graph is not connected")
    elif not is_connected_subset(graph, follower):
        raise PreconditionError("follower-induced subgraph is not connected")

    params = walk_params(follower.size, epsilon, t, r_override, k_override)
    member = np.zeros(graph.n, dtype=bool)
    member[follower] = True
    values, steps = _run_walks(graph, t, pref, params, seed, follower, member)
    return HkprEstimate(
        values=values,
        t=t,
        epsilon=epsilon,
        r_walks=params.r,
        k_cap=params.K,
        seed=int(seed),
        steps=steps,
    )
