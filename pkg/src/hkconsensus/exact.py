"""Dense, deterministic reference implementations.

Heat-kernel action and exact heat kernel pagerank by truncated series over
random-walk powers, a dense restricted-Laplacian solve, and the spectral
gap by deflated power iteration. These are the validation oracles for the
Monte Carlo estimators and the source of the default convergence time
t = 1/lambda_1. Deliberately refuses graphs beyond desk scale
(HKPR_MAX_DENSE_N, default 4096) so it stays honest as a reference.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputFormatError, PreconditionError
from .graph import Graph, induced_index_maps, is_connected_subset, require_connected
from . import rng

_DEFAULT_MAX_DENSE_N = 4096
_MAX_SERIES_T = 700.0  # exp(-t) underflows past ~745; refuse rather than return zeros

_RESIDUAL_FACTOR = 1e-10  # dense solve contract: ||L_f x - b||_inf <= 1e-10 ||b||_inf


@dataclass(frozen=True)
class SpectralGap:
    """Smallest nonzero eigenvalue of the normalized Laplacian."""

    lambda1: float
    iterations: int
    residual: float

    def __post_init__(self):
        if not (0.0 < self.lambda1 <= 2.0 + 1e-12):
            raise PreconditionError(f"lambda1 out of range (0, 2]: {self.lambda1}")


def max_dense_n() -> int:
    raw = os.environ.get("HKPR_MAX_DENSE_N")
    return int(raw) if raw else _DEFAULT_MAX_DENSE_N


def _guard_dense(graph: Graph) -> None:
    limit = max_dense_n()
    if graph.n > limit:
        raise PreconditionError(
            f"dense oracle refuses n={graph.n} > {limit} (set HKPR_MAX_DENSE_N to override)"
        )


def _check_t_tol(t: float, tol: float) -> None:
    if t < 0:
        raise InputFormatError(f"t must be nonnegative, got {t}")
    if t > _MAX_SERIES_T:
        raise InputFormatError(f"t={t} exceeds the series range ({_MAX_SERIES_T})")
    if tol <= 0:
        raise InputFormatError(f"tol must be positive, got {tol}")


def _as_vector(x, length: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (length,):
        raise InputFormatError(f"{name} must have length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputFormatError(f"{name} must be finite")
    return arr


def poisson_cutoff(t: float, tail_bound: float) -> int:
    """Smallest K with Poisson(t) tail mass beyond K at most `tail_bound`.

    Accumulates the pmf directly; never underestimates K for small bounds.
    """
    if t < 0 or t > _MAX_SERIES_T:
        raise InputFormatError(f"t out of range: {t}")
    if tail_bound <= 0:
        raise InputFormatError("tail bound must be positive")
    w = math.exp(-t)
    cum = w
    k = 0
    cap = int(t + 12.0 * math.sqrt(t + 1.0) + 80)
    while 1.0 - cum > tail_bound:
        k += 1
        if k > cap:
            raise ConvergenceError(
                f"Poisson tail {tail_bound} unreachable at t={t} (floating-point floor)",
                estimate=float(k),
                residual=1.0 - cum,
                iterations=k,
            )
        w *= t / k
        cum += w
    return k


def walk_matrix_apply(graph: Graph, x: np.ndarray) -> np.ndarray:
    """One step of P = D^{-1}A on a column vector: neighbor averages."""
    sums = np.add.reduceat(x[graph.indices], graph.indptr[:-1])
    return sums / graph.degrees


def walk_matrix_apply_t(graph: Graph, f: np.ndarray) -> np.ndarray:
    """One step of a row vector through P: (fP)_j = sum_{i in adj(j)} f_i / d_i."""
    g = f / graph.degrees
    return np.add.reduceat(g[graph.indices], graph.indptr[:-1])


def _heat_series(graph: Graph, t: float, vec: np.ndarray, tol: float, step) -> np.ndarray:
    w = math.exp(-t)
    cum = w
    acc = w * vec
    cur = vec
    k = 0
    while 1.0 - cum > tol:
        k += 1
        cur = step(graph, cur)
        w *= t / k
        acc += w * cur
        cum += w
    return acc


def heat_kernel_apply(graph: Graph, t: float, x, tol: float = 1e-12) -> np.ndarray:
    """Action of the heat kernel e^{-t(I-P)} on a state vector.

    Truncated Poisson-weighted sum of walk powers; the truncation index is
    the smallest K whose remaining tail mass is below tol, so each entry is
    within tol * ||x||_inf of the exact action.
    """
    _guard_dense(graph)
    _check_t_tol(t, tol)
    xv = _as_vector(x, graph.n, "x")
    return _heat_series(graph, t, xv, tol, walk_matrix_apply)


def exact_hkpr(graph: Graph, t: float, f, tol: float = 1e-12) -> np.ndarray:
    """Exact heat kernel pagerank row vector: the seed f diffused for time t."""
    _guard_dense(graph)
    _check_t_tol(t, tol)
    fv = _as_vector(f, graph.n, "f")
    return _heat_series(graph, t, fv, tol, walk_matrix_apply_t)


def restricted_laplacian(graph: Graph, follower) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense normalized Laplacian restricted to `follower` rows/columns.

    Degrees are the GLOBAL degrees (restriction after construction).
    Returns (L_f, global_to_local, local_to_global).
    """
    g2l, l2g = induced_index_maps(graph, follower)
    s = l2g.size
    lap = np.eye(s)
    inv_sqrt_d = 1.0 / np.sqrt(graph.degrees.astype(np.float64))
    for a in range(s):
        ga = int(l2g[a])
        for gj in graph.neighbors(ga):
            lb = g2l[gj]
            if lb >= 0:
                lap[a, lb] = -inv_sqrt_d[ga] * inv_sqrt_d[gj]
    return lap, g2l, l2g


def restricted_laplacian_solve_dense(graph: Graph, follower, b) -> np.ndarray:
    """Solve L_f x = b by dense partial-pivot elimination, with residual check."""
    _guard_dense(graph)
    lap, _, l2g = restricted_laplacian(graph, follower)
    bv = _as_vector(b, l2g.size, "b")
    try:
        x = np.linalg.solve(lap, bv)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError(f"restricted Laplacian is singular: {exc}") from None
    resid = np.abs(lap @ x - bv).max()
    bound = _RESIDUAL_FACTOR * max(np.abs(bv).max(), 1e-300)
    if resid > bound:
        raise PreconditionError(
            f"restricted solve residual {resid:.3e} exceeds {bound:.3e}; system near-singular"
        )
    return x


def _normalized_adjacency_apply(graph: Graph, inv_sqrt_d: np.ndarray, v: np.ndarray) -> np.ndarray:
    g = v * inv_sqrt_d
    sums = np.add.reduceat(g[graph.indices], graph.indptr[:-1])
    return sums * inv_sqrt_d


def lambda1(graph: Graph, tol: float = 1e-10, max_iter: int = 200_000) -> SpectralGap:
    """Spectral gap of the normalized Laplacian by deflated power iteration.

    Iterates M = I - L/2 = (I + D^{-1/2} A D^{-1/2}) / 2, whose spectrum is
    1 - lambda/2 in [0, 1], deflating the known top eigenvector
    phi_0 ~ D^{1/2} 1. The deflated dominant eigenvalue mu gives
    lambda_1 = 2 (1 - mu). Residual contract: ||M v - mu v||_2 <= tol.
    """
    require_connected(graph)
    if tol <= 0:
        raise InputFormatError("tol must be positive")

    deg = graph.degrees.astype(np.float64)
    inv_sqrt_d = 1.0 / np.sqrt(deg)
    phi0 = np.sqrt(deg)
    phi0 /= np.linalg.norm(phi0)

    # Deterministic start vector from the counter stream; no global RNG state.
    v = uniform_start(graph.n) - 0.5
    v -= (phi0 @ v) * phi0
    nv = np.linalg.norm(v)
    if nv < 1e-12:  # pathological start, shift deterministically
        v = uniform_start(graph.n, salt=1) - 0.5
        v -= (phi0 @ v) * phi0
        nv = np.linalg.norm(v)
    v /= nv

    mu = 0.0
    residual = math.inf
    for it in range(1, max_iter + 1):
        mv = 0.5 * (v + _normalized_adjacency_apply(graph, inv_sqrt_d, v))
        mv -= (phi0 @ mv) * phi0
        mu = float(v @ mv)
        residual = float(np.linalg.norm(mv - mu * v))
        if residual <= tol:
            return SpectralGap(lambda1=2.0 * (1.0 - mu), iterations=it, residual=residual)
        norm = np.linalg.norm(mv)
        if norm < 1e-300:
            # Deflated operator annihilates v: mu = 0 exactly, lambda_1 = 2.
            return SpectralGap(lambda1=2.0, iterations=it, residual=0.0)
        v = mv / norm
    raise ConvergenceError(
        f"power iteration did not reach residual {tol} in {max_iter} iterations",
        estimate=2.0 * (1.0 - mu),
        residual=residual,
        iterations=max_iter,
    )


def lambda_min_restricted(
    graph: Graph, follower, tol: float = 1e-8, max_iter: int = 200_000
) -> float:
    """Smallest eigenvalue of the follower-restricted normalized Laplacian.

    L_f is positive definite for a proper follower subset of a connected
    graph, so plain power iteration on I - L_f/2 needs no deflation.
    """
    require_connected(graph)
    if not is_connected_subset(graph, follower):
        raise PreconditionError("follower-induced subgraph is not connected")
    g2l, l2g = induced_index_maps(graph, follower)
    s = l2g.size
    deg = graph.degrees.astype(np.float64)
    inv_sqrt_d = 1.0 / np.sqrt(deg)

    # Restricted M_f matvec without dense assembly: gather neighbors that stay
    # inside the follower set.
    nbr_cols = []
    nbr_vals = []
    counts = np.zeros(s, dtype=np.int64)
    for a in range(s):
        ga = int(l2g[a])
        cols = graph.neighbors(ga)
        inside = g2l[cols] >= 0
        kept = cols[inside]
        counts[a] = kept.size
        nbr_cols.append(g2l[kept])
        nbr_vals.append(inv_sqrt_d[ga] * inv_sqrt_d[kept])
    cols_flat = np.concatenate(nbr_cols) if nbr_cols else np.empty(0, dtype=np.int64)
    vals_flat = np.concatenate(nbr_vals) if nbr_vals else np.empty(0)
    rows_flat = np.repeat(np.arange(s), counts)

    def mf_apply(v: np.ndarray) -> np.ndarray:
        contrib = np.zeros(s)
        if cols_flat.size:
            # np.add.at tolerates the empty rows that reduceat cannot
            np.add.at(contrib, rows_flat, v[cols_flat] * vals_flat)
        return 0.5 * (v + contrib)

    v = uniform_start(s, salt=2) + 0.5  # positive-ish start correlates with top eigenvector
    v /= np.linalg.norm(v)
    mu = 0.0
    residual = math.inf
    for it in range(1, max_iter + 1):
        mv = mf_apply(v)
        mu = float(v @ mv)
        residual = float(np.linalg.norm(mv - mu * v))
        if residual <= tol:
            lam = 2.0 * (1.0 - mu)
            return max(lam, 1e-15)
        norm = np.linalg.norm(mv)
        if norm < 1e-300:
            return 2.0
        v = mv / norm
    raise ConvergenceError(
        f"restricted power iteration did not reach residual {tol} in {max_iter} iterations",
        estimate=2.0 * (1.0 - mu),
        residual=residual,
        iterations=max_iter,
    )


def uniform_start(n: int, salt: int = 0) -> np.ndarray:
    """Fixed pseudo-random start vector in [0,1)^n, independent of global RNG."""
    counters = np.arange(n, dtype=np.uint64)
    return rng.uniforms(rng.derive_seed(0x5EED0F17, salt), counters)
