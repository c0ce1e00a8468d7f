"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines as they complete. Tolerances and runtime budgets are pinned here and
nowhere else.
"""

import math
import time

import numpy as np

import hkconsensus as hk
from hkconsensus.cli import main as cli_main
from hkconsensus.hkpr import walk_params

from conftest import random_connected_graph, random_regular_graph
from oracles import dense_normalized_laplacian, jacobi_eigenvalues
from test_hkpr import hkpr_band_ok

LN2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)


def connected_follower_set(g, rng):
    """Random proper follower subset whose induced subgraph is connected."""
    while True:
        size = int(rng.integers(1, g.n - 1))
        start = int(rng.integers(0, g.n))
        # BFS prefix from a random start: connected by construction
        order, seen, queue = [start], {start}, [start]
        while queue and len(order) < size:
            i = queue.pop(0)
            for j in g.neighbors(i):
                j = int(j)
                if j not in seen:
                    seen.add(j)
                    order.append(j)
                    queue.append(j)
                    if len(order) == size:
                        break
        if len(order) == size:
            return sorted(order)


def test_criterion_1_analytic_hkpr(path2):
    begin = time.perf_counter()
    rho = hk.exact_hkpr(path2, LN2, np.array([1.0, 0.0]))
    exact_ok = np.allclose(rho, [0.625, 0.375], atol=1e-9)
    hits = 0
    for seed in range(20):
        est = hk.approx_hkpr(path2, LN2, np.array([1.0, 0.0]), 0.1, seed=seed)
        hits += bool(hkpr_band_ok(est.values, rho, 0.1))
    elapsed = time.perf_counter() - begin
    ok = exact_ok and hits >= 18 and elapsed < 1.0
    report(1, ok, f"exact within 1e-9: {exact_ok}; band {hits}/20 seeds; {elapsed:.2f}s")
    assert exact_ok
    assert hits >= 18
    assert elapsed < 1.0


def test_criterion_2_epsilon_contract():
    begin = time.perf_counter()
    sizes = [8, 12, 16, 20, 24, 32, 40, 48, 56, 64]
    graphs = [random_connected_graph(n, n // 2, 1000 + i) for i, n in enumerate(sizes)]
    cells = 0
    worst = 20
    for g in graphs:
        marker = 1.0 / hk.lambda1(g).lambda1
        f = np.zeros(g.n)
        f[0] = 1.0
        for eps in (0.1, 0.3):
            for t in (0.5, marker, 5.0):
                rho = hk.exact_hkpr(g, t, f)
                passes = sum(
                    bool(hkpr_band_ok(hk.approx_hkpr(g, t, f, eps, seed=s).values, rho, eps))
                    for s in range(20)
                )
                worst = min(worst, passes)
                cells += 1
                assert passes >= math.ceil((1 - eps) * 20), (g.n, eps, t, passes)
    elapsed = time.perf_counter() - begin
    ok = elapsed < 60.0
    report(2, ok, f"{cells} cells x 20 seeds, lowest pass count {worst}/20; {elapsed:.1f}s")
    assert elapsed < 60.0


def test_criterion_3_conservation(path2, path3, triangle, karate):
    fixtures = [path2, path3, triangle, karate,
                random_connected_graph(25, 15, 2), random_connected_graph(40, 30, 3)]
    worst = 0.0
    for k, g in enumerate(fixtures):
        rng = np.random.default_rng(k)
        x0 = rng.uniform(-1, 1, g.n)
        chi0 = hk.weighted_average(g, x0)
        for t in (0.1, 1.0, 10.0):
            res = hk.consensus_state(g, x0, t)
            worst = max(worst, abs(hk.weighted_average(g, res.state) - chi0))
    ok = worst <= 1e-8
    report(3, ok, f"max |chi_w(x(t)) - chi_w(x(0))| = {worst:.2e} over 6 fixtures x 3 times")
    assert worst <= 1e-8


def test_criterion_4_figure_reproduction(sweep_graph):
    begin = time.perf_counter()
    g = sweep_graph
    gap = hk.lambda1(g)
    marker = 1.0 / gap.lambda1
    rng = np.random.default_rng(0)
    x0 = rng.uniform(0, 1, g.n)
    chi = hk.weighted_average(g, x0)
    _, dnorm_at_0 = hk.disagreement(g, x0, chi)
    grid = np.unique(np.concatenate([np.geomspace(0.01, 100.0, 25), [marker]]))

    exact = hk.convergence_trace(g, x0, grid)
    monotone = bool(np.all(np.diff(exact.dnorm) <= 1e-9))
    at_marker = exact.dnorm[int(np.argmin(np.abs(grid - marker)))]
    decayed = at_marker <= 0.25 * dnorm_at_0

    mc = hk.convergence_trace(g, x0, grid, epsilon=0.1, seed=0, mode="mc")
    dev = np.abs(mc.dnorm - exact.dnorm)
    tracked = bool(np.all(dev <= 0.1 * exact.dnorm + 0.2))

    elapsed = time.perf_counter() - begin
    ok = monotone and decayed and tracked and elapsed < 120.0
    report(
        4,
        ok,
        f"n={g.n}: monotone={monotone}; dnorm(1/l1)/dnorm(0)="
        f"{at_marker / dnorm_at_0:.3f} (<=0.25); mc max dev {dev.max():.3f}; {elapsed:.1f}s",
    )
    assert monotone
    assert decayed
    assert tracked
    assert elapsed < 120.0


def test_criterion_5_leader_following(path3):
    begin = time.perf_counter()
    part = hk.Partition.from_leaders(path3, [0])
    b = np.array([1.0 / SQRT2, 0.0])
    expected = np.array([SQRT2, 1.0])

    exact = hk.lf_solve(path3, part, b).x_f
    exact_ok = np.allclose(exact, expected, atol=1e-9)

    states = [
        hk.lf_solve(path3, part, b, epsilon=0.1, seed=s, mode="mc").x_f for s in range(20)
    ]
    mean = np.mean(states, axis=0)
    mc_ok = bool(np.all(np.abs(mean - expected) <= 0.15 * expected + 0.15))

    worst_resid = 0.0
    rng = np.random.default_rng(77)
    for i in range(10):
        g = random_connected_graph(int(rng.integers(8, 65)), 20, 500 + i)
        follower = connected_follower_set(g, rng)
        rhs = rng.normal(size=len(follower))
        x = hk.restricted_laplacian_solve_dense(g, follower, rhs)
        lap, _, _ = hk.restricted_laplacian(g, follower)
        worst_resid = max(
            worst_resid, float(np.abs(lap @ x - rhs).max() / np.abs(rhs).max())
        )
    resid_ok = worst_resid <= 1e-10

    elapsed = time.perf_counter() - begin
    ok = exact_ok and mc_ok and resid_ok and elapsed < 120.0
    report(
        5,
        ok,
        f"exact 1e-9: {exact_ok}; mc mean dev {np.abs(mean - expected).round(3)}; "
        f"relative residual {worst_resid:.2e}; {elapsed:.1f}s",
    )
    assert exact_ok
    assert mc_ok
    assert resid_ok
    assert elapsed < 120.0


def test_criterion_6_sublinearity_witness():
    begin = time.perf_counter()
    eps, t = 0.1, 5.0
    # the walk budget is a function of (n, eps); pin it to the larger graph's
    # value so the configuration is identical across sizes
    pinned_r = walk_params(100_000, eps, t).r

    results = {}
    for n in (1_000, 100_000):
        g = random_regular_graph(n, 3, seed=4242)
        f = np.zeros(g.n)
        f[0] = 1.0
        hk.approx_hkpr(g, t, f, eps, seed=7, r_override=pinned_r)  # warm-up
        best = math.inf
        for _ in range(3):
            tick = time.perf_counter()
            est = hk.approx_hkpr(g, t, f, eps, seed=7, r_override=pinned_r)
            best = min(best, time.perf_counter() - tick)
        results[n] = (est.steps, est.r_walks * est.k_cap, best)

    steps_small, cap, time_small = results[1_000]
    steps_big, _, time_big = results[100_000]
    identical = steps_small == steps_big
    bounded = steps_small <= cap and steps_big <= cap
    ratio = time_big / time_small
    elapsed = time.perf_counter() - begin
    ok = identical and bounded and ratio < 10.0 and elapsed < 300.0
    report(
        6,
        ok,
        f"steps {steps_small} == {steps_big} (cap {cap}); wall ratio x100 nodes = "
        f"{ratio:.2f} (<10); {elapsed:.1f}s",
    )
    assert identical
    assert bounded
    assert ratio < 10.0
    assert elapsed < 300.0


def test_criterion_7_cli_determinism(tmp_path):
    graph = tmp_path / "g.edges"
    graph.write_text("a b\nb c\n", encoding="utf-8")
    state = tmp_path / "s.txt"
    state.write_text("a 1\nb 1.4142135623730951\nc 1\n", encoding="utf-8")
    partition = tmp_path / "p.txt"
    partition.write_text("leader a\n", encoding="utf-8")
    controls = tmp_path / "c.txt"
    controls.write_text("a 0 1\n", encoding="utf-8")

    commands = {
        "hkpr": ["hkpr", "--graph", graph, "--pref", state, "--t", "0.9",
                 "--mode", "mc", "--eps", "0.2", "--seed", "5"],
        "consensus": ["consensus", "--graph", graph, "--state", state, "--t", "0.9",
                      "--mode", "mc", "--eps", "0.2", "--seed", "5"],
        "sweep": ["sweep", "--graph", graph, "--state", state, "--t-steps", "3",
                  "--mode", "mc", "--eps", "0.3", "--seed", "5"],
        "leader-follow": ["leader-follow", "--graph", graph, "--state", state,
                          "--partition", partition, "--controls", controls,
                          "--mode", "mc", "--eps", "0.3", "--seed", "5"],
        "lambda1": ["lambda1", "--graph", graph],
    }
    mismatched = []
    for name, argv in commands.items():
        out1, out2 = tmp_path / f"{name}1.csv", tmp_path / f"{name}2.csv"
        assert cli_main([str(a) for a in argv] + ["--out", str(out1)]) == 0
        assert cli_main([str(a) for a in argv] + ["--out", str(out2)]) == 0
        if out1.read_bytes() != out2.read_bytes():
            mismatched.append(name)
    ok = not mismatched
    report(7, ok, f"all 5 subcommands byte-identical across reruns"
                  f"{'' if ok else ': mismatches ' + str(mismatched)}")
    assert not mismatched


def test_criterion_8_spectral_gap(path2, path3, triangle):
    analytic = [(path2, 2.0), (path3, 1.0), (triangle, 1.5)]
    analytic_ok = all(
        abs(hk.lambda1(g).lambda1 - expected) < 1e-8 for g, expected in analytic
    )
    worst = 0.0
    small = [path2, path3, triangle] + [
        random_connected_graph(n, n // 2, 900 + n) for n in (8, 10, 12, 14, 16)
    ]
    for g in small:
        eigs = jacobi_eigenvalues(dense_normalized_laplacian(g))
        gap = hk.lambda1(g, tol=1e-11)
        worst = max(worst, abs(gap.lambda1 - eigs[1]))
    ok = analytic_ok and worst <= 1e-8
    report(
        8,
        ok,
        f"analytic 2/1/1.5: {analytic_ok}; max |power-iter - Jacobi| = {worst:.2e} "
        f"on {len(small)} graphs (n<=16)",
    )
    assert analytic_ok
    assert worst <= 1e-8
