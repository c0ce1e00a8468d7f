"""Leader-following consensus on a follower subset.

Followers run the degree-normalized protocol; leaders apply affine
self-feedback u_i = a_i x_i + c_i. The follower states solve the restricted
Laplacian system L_f x^f = b with b = -(u^f + L_fl u^l). The Monte Carlo
path evaluates the Green's-function integral of the restricted heat kernel
by uniform-time sampling: each sample runs the restricted walk estimator
seeded with D_f^{1/2} b and the scaled average is mapped back through
D_f^{-1/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, PreconditionError
from .exact import (
    lambda_min_restricted,
    restricted_laplacian_solve_dense,
)
from .graph import (
    Graph,
    complement_node_set,
    induced_index_maps,
    is_connected_subset,
    validate_node_set,
)
from .hkpr import Preference, approx_hkpr_restricted
from .rng import derive_seed, uniforms

SOLVER_SAMPLE_FACTOR = 8.0  # outer samples only pay for time-sampling error


@dataclass(frozen=True)
class Partition:
    """Disjoint leader/follower split covering all nodes, with follower maps."""

    leaders: np.ndarray
    followers: np.ndarray
    global_to_local: np.ndarray
    local_to_global: np.ndarray

    @staticmethod
    def from_leaders(graph: Graph, leaders) -> "Partition":
        lead = validate_node_set(graph, leaders)
        if lead.size == graph.n:
            raise InputFormatError("every node is a leader; no followers remain")
        followers = complement_node_set(graph, lead)
        g2l, l2g = induced_index_maps(graph, followers)
        return Partition(
            leaders=lead, followers=followers, global_to_local=g2l, local_to_global=l2g
        )

    @property
    def s(self) -> int:
        return int(self.followers.size)


def parse_partition(source, graph: Graph) -> Partition:
    """Partition file: lines "leader <label>" / "follower <label>".

    Unlisted nodes default to follower. Assigning one node both roles is an
    error; so is an unknown label or an empty role after defaults.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    roles: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2 or tokens[0] not in ("leader", "follower"):
            raise InputFormatError(
                f"expected 'leader <label>' or 'follower <label>' at line {lineno}"
            )
        role, label = tokens
        idx = graph.index_of(label)
        if roles.get(idx, role) != role:
            raise InputFormatError(f"node {label!r} assigned both roles (line {lineno})")
        roles[idx] = role
    leaders = [i for i, role in roles.items() if role == "leader"]
    if not leaders:
        raise InputFormatError("partition declares no leaders")
    return Partition.from_leaders(graph, leaders)


@dataclass(frozen=True)
class LeaderControl:
    """Affine per-leader rule u_i = a_i * x_i + c_i on the leader's own state."""

    gains: np.ndarray  # a_i, aligned with Partition.leaders
    offsets: np.ndarray  # c_i

    @staticmethod
    def zero(partition: Partition) -> "LeaderControl":
        k = partition.leaders.size
        return LeaderControl(gains=np.zeros(k), offsets=np.zeros(k))

    @staticmethod
    def from_mapping(
        graph: Graph, partition: Partition, per_label: dict[str, tuple[float, float]]
    ) -> "LeaderControl":
        leader_set = {int(i) for i in partition.leaders}
        gains = np.zeros(partition.leaders.size)
        offsets = np.zeros(partition.leaders.size)
        pos = {int(g): k for k, g in enumerate(partition.leaders)}
        for label, (a, c) in per_label.items():
            idx = graph.index_of(label)
            if idx not in leader_set:
                raise InputFormatError(f"control given for non-leader node {label!r}")
            gains[pos[idx]] = a
            offsets[pos[idx]] = c
        return LeaderControl(gains=gains, offsets=offsets)

    def evaluate(self, partition: Partition, x_full: np.ndarray) -> np.ndarray:
        return self.gains * x_full[partition.leaders] + self.offsets


def parse_controls(source) -> dict[str, tuple[float, float]]:
    """Control file: lines "<label> <a> <c>"; unlisted leaders default to zero."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    out: dict[str, tuple[float, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise InputFormatError(f"expected '<label> <a> <c>' at line {lineno}")
        label = tokens[0]
        if label in out:
            raise InputFormatError(f"duplicate control for {label!r} at line {lineno}")
        try:
            out[label] = (float(tokens[1]), float(tokens[2]))
        except ValueError:
            raise InputFormatError(f"bad numeric value at line {lineno}") from None
    return out


@dataclass(frozen=True)
class SolverParams:
    """Monte Carlo quadrature configuration: horizon T, grid size N, samples r."""

    T: float
    N: int
    r: int

    def __post_init__(self):
        if self.T <= 0 or self.N < 1 or self.r < 1:
            raise InputFormatError(f"invalid solver params T={self.T}, N={self.N}, r={self.r}")


@dataclass(frozen=True)
class LfSolution:
    x_f: np.ndarray
    params: SolverParams | None  # None on the exact path


def _check_partition(graph: Graph, partition: Partition) -> None:
    if partition.leaders.size == 0 or partition.followers.size == 0:
        raise InputFormatError("partition needs at least one leader and one follower")
    union = np.union1d(partition.leaders, partition.followers)
    if union.size != graph.n or np.intersect1d(partition.leaders, partition.followers).size:
        raise InputFormatError("leaders and followers must partition the node set")


def _follower_components(graph: Graph, followers: np.ndarray) -> list[list[str]]:
    """Connected components of the follower-induced subgraph, as label lists."""
    remaining = set(int(v) for v in followers)
    member = np.zeros(graph.n, dtype=bool)
    member[followers] = True
    comps = []
    while remaining:
        start = min(remaining)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for i in frontier:
                for j in graph.neighbors(i):
                    j = int(j)
                    if member[j] and j not in seen:
                        seen.add(j)
                        nxt.append(j)
            frontier = nxt
        comps.append(sorted(seen))
        remaining -= seen
    return [[graph.node_labels[i] for i in comp] for comp in comps]


def require_connected_followers(graph: Graph, partition: Partition) -> None:
    if not is_connected_subset(graph, partition.followers):
        comps = _follower_components(graph, partition.followers)
        detail = "; ".join("{" + ", ".join(c) + "}" for c in comps)
        raise PreconditionError(
            f"follower-induced subgraph is disconnected: components {detail}"
        )


def follower_protocol(graph: Graph, partition: Partition, x) -> np.ndarray:
    """Normalized protocol value at each follower:
    u_i = (1/d_i) sum_{j in N_i} (sqrt(d_i/d_j) x_j - x_i)."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (graph.n,):
        raise InputFormatError(f"state must have length {graph.n}")
    sqrt_d = np.sqrt(graph.degrees.astype(np.float64))
    scaled = xv / sqrt_d
    nbr_sum = np.add.reduceat(scaled[graph.indices], graph.indptr[:-1])
    u_all = nbr_sum / sqrt_d - xv
    return u_all[partition.followers]


def build_b(graph: Graph, partition: Partition, x, u_leader: np.ndarray) -> np.ndarray:
    """Right-hand side b = -(u^f + L_fl u^l) over followers.

    u_leader holds the evaluated leader controls, aligned with
    partition.leaders.
    """
    u_f = follower_protocol(graph, partition, x)
    u_leader = np.asarray(u_leader, dtype=np.float64)
    if u_leader.shape != (partition.leaders.size,):
        raise InputFormatError("u_leader must align with partition.leaders")
    sqrt_d = np.sqrt(graph.degrees.astype(np.float64))
    z = np.zeros(graph.n)
    z[partition.leaders] = u_leader / sqrt_d[partition.leaders]
    spread = np.add.reduceat(z[graph.indices], graph.indptr[:-1])
    lfl_u = -(spread / sqrt_d)[partition.followers]  # L_fl entries are -1/sqrt(d_i d_j)
    return -(u_f + lfl_u)


def solver_sample_count(s: int, epsilon: float) -> int:
    """Default quadrature sample count for the Green's-function solver."""
    return math.ceil((SOLVER_SAMPLE_FACTOR / epsilon**2) * math.log(max(s, 2)))


def lf_solve(
    graph: Graph,
    partition: Partition,
    b,
    epsilon: float = 0.1,
    seed: int = 0,
    mode: str = "exact",
    r_override: int | None = None,
) -> LfSolution:
    """Solve L_f x^f = b exactly or by Monte Carlo Green's-function quadrature.

    mc path: with lam = smallest eigenvalue of L_f, integrate the restricted
    heat kernel over [0, T], T = ln(s/eps)/lam (tail mass below eps/lam), on
    an N = ceil(T/eps) point grid, averaging r uniform-time samples of the
    restricted walk estimator seeded with D_f^{1/2} b; the average times T/r
    is mapped back through D_f^{-1/2}.
    """
    if mode not in ("exact", "mc"):
        raise InputFormatError(f"mode must be 'exact' or 'mc', got {mode!r}")
    _check_partition(graph, partition)
    require_connected_followers(graph, partition)
    s = partition.s
    bv = np.asarray(b, dtype=np.float64)
    if bv.shape != (s,):
        raise InputFormatError(f"b must have length {s}")
    if not np.all(np.isfinite(bv)):
        raise InputFormatError("b must be finite")

    if mode == "exact":
        x = restricted_laplacian_solve_dense(graph, partition.followers, bv)
        return LfSolution(x_f=x, params=None)

    if not (0.0 < epsilon < 1.0):
        raise InputFormatError(f"epsilon must be in (0, 1), got {epsilon}")
    lam = lambda_min_restricted(graph, partition.followers)
    horizon = math.log(max(s, 2) / epsilon) / lam
    n_grid = max(1, math.ceil(horizon / epsilon))
    r = int(r_override) if r_override is not None else solver_sample_count(s, epsilon)
    params = SolverParams(T=horizon, N=n_grid, r=r)

    sqrt_df = np.sqrt(graph.degrees[partition.followers].astype(np.float64))
    seed_pref = Preference.from_values(sqrt_df * bv)
    acc = np.zeros(s)
    if seed_pref.one_norm > 0.0:
        # grid indices come from the master stream; each sample's walks use a
        # stream derived from (seed, sample index)
        u_grid = uniforms(int(seed), np.arange(r, dtype=np.uint64))
        grid_idx = np.minimum((u_grid * n_grid).astype(np.int64), n_grid - 1) + 1
        for i in range(r):
            t_i = float(grid_idx[i]) * horizon / n_grid
            est = approx_hkpr_restricted(
                graph,
                partition.followers,
                t_i,
                seed_pref,
                epsilon,
                derive_seed(seed, i),
            )
            acc += est.values
    x = (horizon / r) * acc / sqrt_df
    return LfSolution(x_f=x, params=params)


def lf_consensus_state(
    graph: Graph,
    partition: Partition,
    x0,
    t: float,
    control: LeaderControl,
    epsilon: float = 0.1,
    seed: int = 0,
    mode: str = "exact",
    r_override: int | None = None,
) -> LfSolution:
    """Follower states consistent with the instantaneous controls at x0.

    The supplied state is taken as x(t); b is assembled from the follower
    protocol and the evaluated leader controls at that state, then solved.
    """
    if t < 0:
        raise InputFormatError("t must be nonnegative")
    xv = np.asarray(x0, dtype=np.float64)
    if xv.shape != (graph.n,):
        raise InputFormatError(f"state must have length {graph.n}")
    u_l = control.evaluate(partition, xv)
    b = build_b(graph, partition, xv, u_l)
    return lf_solve(graph, partition, b, epsilon, seed, mode, r_override)
