"""Weighted-average consensus via heat kernel pagerank.

The protocol conserves the degree-weighted mean chi_w of the states, and
the state at time t is the heat kernel applied to the initial state. Both
an exact dense path and the sublinear Monte Carlo path are provided; the
Monte Carlo path seeds the estimator with f = x(0) * d and rescales the
resulting pagerank vector by 1/d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, PreconditionError
from .exact import exact_hkpr, lambda1
from .graph import Graph, is_connected
from .hkpr import Preference, approx_hkpr
from .rng import derive_seed

MODES = ("exact", "mc")


@dataclass(frozen=True)
class ConsensusResult:
    state: np.ndarray
    chi_w: float
    t: float
    epsilon: float
    exact: bool


@dataclass(frozen=True)
class ConvergenceTrace:
    """Disagreement norms along a time grid, with the 1/lambda_1 marker."""

    t: np.ndarray
    euclidean: np.ndarray
    dnorm: np.ndarray
    lambda1_marker: float

    def rows(self):
        for i in range(self.t.size):
            yield float(self.t[i]), float(self.euclidean[i]), float(self.dnorm[i])


def _state_vector(graph: Graph, x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (graph.n,):
        raise InputFormatError(f"state must have length {graph.n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputFormatError("state must be finite")
    return arr


def weighted_average(graph: Graph, x0) -> float:
    """Degree-weighted mean: the invariant the protocol converges to."""
    x = _state_vector(graph, x0)
    deg = graph.degrees.astype(np.float64)
    return float((deg @ x) / deg.sum())


def consensus_state(
    graph: Graph,
    x0,
    t: float,
    epsilon: float = 0.1,
    seed: int = 0,
    mode: str = "exact",
    tol: float = 1e-12,
    r_override: int | None = None,
    k_override: int | None = None,
) -> ConsensusResult:
    """State of the consensus system at time t, exactly or by Monte Carlo.

    Builds the seed f_i = x0_i * d_i, diffuses it for time t, and divides
    the result by the degrees. In mc mode the output inherits the
    estimator's (1 + eps) multiplicative / O(eps) additive contract.
    """
    if mode not in MODES:
        raise InputFormatError(f"mode must be one of {MODES}, got {mode!r}")
    x = _state_vector(graph, x0)
    if not is_connected(graph):
        raise PreconditionError("graph is not connected")
    deg = graph.degrees.astype(np.float64)
    f = x * deg
    if mode == "exact":
        rho = exact_hkpr(graph, t, f, tol)
    else:
        est = approx_hkpr(
            graph,
            t,
            Preference.from_values(f),
            epsilon,
            seed,
            r_override=r_override,
            k_override=k_override,
        )
        rho = est.values
    return ConsensusResult(
        state=rho / deg,
        chi_w=weighted_average(graph, x),
        t=float(t),
        epsilon=float(epsilon),
        exact=(mode == "exact"),
    )


def disagreement(graph: Graph, x, chi: float) -> tuple[float, float]:
    """(Euclidean, degree-weighted) norms of delta = x - chi * 1.

    The D-weighted norm is the one that provably never increases under the
    dynamics; the Euclidean norm is reported for comparison.
    """
    xv = _state_vector(graph, x)
    delta = xv - float(chi)
    dn = np.sqrt(graph.degrees.astype(np.float64)) * delta
    return float(np.linalg.norm(delta)), float(np.linalg.norm(dn))


def convergence_trace(
    graph: Graph,
    x0,
    t_grid,
    epsilon: float = 0.1,
    seed: int = 0,
    mode: str = "exact",
    tol: float = 1e-12,
) -> ConvergenceTrace:
    """Disagreement at each grid time, plus the 1/lambda_1 reference marker.

    Rows are independent; mc rows use per-row seeds derived from
    (seed, row index) so the trace is reproducible regardless of evaluation
    order.
    """
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.size == 0:
        raise InputFormatError("t grid must be nonempty")
    if grid[0] < 0 or (grid.size > 1 and np.any(np.diff(grid) <= 0)):
        raise InputFormatError("t grid must be strictly increasing and nonnegative")
    chi = weighted_average(graph, x0)
    gap = lambda1(graph)
    eu = np.empty(grid.size)
    dn = np.empty(grid.size)
    for i, t in enumerate(grid):
        res = consensus_state(
            graph, x0, float(t), epsilon, derive_seed(seed, i), mode, tol
        )
        eu[i], dn[i] = disagreement(graph, res.state, chi)
    return ConvergenceTrace(
        t=grid, euclidean=eu, dnorm=dn, lambda1_marker=1.0 / gap.lambda1
    )
