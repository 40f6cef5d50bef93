"""Acceptance suite: one test per criterion, one printed line per criterion.

Statistical gates use fixed seeds; thresholds are regression choices for
asymptotic (w.h.p.) statements, so a red gate means "not observable at this
scale with this construction", not necessarily an implementation bug.  Each
test prints its measured numbers before asserting.
"""

import math
import random
import time
from collections import Counter, deque
from itertools import product

from graphpower import (Graph, RandomSource, clique_lower_bound, codegree_max,
                        degree_sum_pmf, gnp_sample, graph_power,
                        lemma2_min_exact, lemma2_min_lagrange,
                        max_clique_exact, power_max_degree,
                        power_neighborhood_edge_count, run_experiment,
                        u_value, verify_theorem)
from graphpower.coloring import dsatur_chromatic_exact, greedy_coloring_explicit
from graphpower.experiments import ExperimentConfig

SEED = 1


def report(capsys, name, ok, detail):
    with capsys.disabled():
        print(f"\n[{name}] {'PASS' if ok else 'FAIL'}: {detail}")


def test_ac1_poisson_reduction(capsys):
    start = time.time()
    worst = 0.0
    for d in (0.5, 1.0, 2.0, 5.0):
        for big_d in range(61):
            poisson = math.exp(-d) * d ** big_d / math.factorial(big_d)
            rel = abs(u_value((big_d,), d) - poisson) / poisson
            worst = max(worst, rel)
        total = sum(degree_sum_pmf(d, 1, big_d) for big_d in range(61))
        worst_norm = abs(total - 1.0)
    elapsed = time.time() - start
    ok = worst <= 1e-10 and worst_norm <= 1e-9 and elapsed < 1.0
    report(capsys, "AC1", ok,
           f"max rel err {worst:.2e}, norm err {worst_norm:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-10 and worst_norm <= 1e-9
    assert elapsed < 1.0


def _entropy_min_oracle(big_d, r):
    """Brute force over every nonnegative r-tuple summing to D."""
    best, arg = float("inf"), None
    for ell in product(range(big_d + 1), repeat=r):
        if sum(ell) != big_d:
            continue
        val, prev, feasible = 0.0, 1, True
        for x in ell:
            if x:
                if prev == 0:
                    feasible = False
                    break
                val += x * math.log(x / prev)
            prev = x
        if feasible and (val < best or (val == best and ell < arg)):
            best, arg = val, ell
    return best, arg


def test_ac2_lemma2_oracle_agreement(capsys):
    start = time.time()
    for big_d in range(1, 61):
        val, arg = lemma2_min_exact(big_d, 1)
        assert val == big_d * math.log(big_d) and arg.ell == (big_d,)
    checked = 0
    for r in (2, 3):
        for big_d in list(range(1, 21)) + [30, 40]:
            val, arg = lemma2_min_exact(big_d, r)
            oval, oarg = _entropy_min_oracle(big_d, r)
            assert abs(val - oval) < 1e-12 and arg.ell == oarg
            checked += 1
    for r in (1, 2, 3):
        for big_d in (4, 10, 25, 60):
            assert (lemma2_min_lagrange(big_d, r).value
                    <= lemma2_min_exact(big_d, r)[0] + 1e-9)
    elapsed = time.time() - start
    report(capsys, "AC2", elapsed < 30,
           f"{checked} oracle comparisons agree, {elapsed:.1f}s")
    assert elapsed < 30


def test_ac3_lemma2_asymptotic_shape(capsys):
    start = time.time()
    worst_c = 0.0
    grid = [100, 178, 316, 562, 1000, 1778, 3162, 5623, 10000]
    for big_d in grid:
        val, _ = lemma2_min_exact(big_d, 2)
        worst_c = max(worst_c, (big_d * math.log(math.log(big_d)) - val) / big_d)
    elapsed = time.time() - start
    ok = worst_c <= 5.0 and elapsed < 60
    report(capsys, "AC3", ok,
           f"smallest valid c = {worst_c:.3f} (ceiling 5), {elapsed:.1f}s")
    assert worst_c <= 5.0 and elapsed < 60


def _layers_oracle(adj, v, r):
    dist = {v: 0}
    layers = [set() for _ in range(r + 1)]
    layers[0].add(v)
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == r:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                layers[dist[w]].add(w)
                queue.append(w)
    return layers


def test_ac4_implicit_explicit_equivalence(capsys):
    start = time.time()
    rng = random.Random(99)
    for idx in range(200):
        n = rng.choice([60, 100, 150, 200, 250, 300])
        p = rng.choice([0.01, 0.05])
        r = rng.choice([2, 3])
        g = gnp_sample(n, p, RandomSource(idx))
        adj = g.adjacency_lists()
        gp = graph_power(g, r)
        explicit_delta = int(gp.degrees().max()) if gp.m else 0
        assert power_max_degree(g, r).delta == explicit_delta
        layer_best = power_best = 0
        for v in range(n):
            layers = _layers_oracle(adj, v, r)
            ball = set().union(*layers) - {v}
            for i in range(1, r + 1):
                cnt = Counter()
                for u in layers[i]:
                    for w in adj[u]:
                        cnt[w] += 1
                cnt.pop(v, None)
                if cnt:
                    layer_best = max(layer_best, max(cnt.values()))
            cnt = Counter()
            for u in ball:
                for w in adj[u]:
                    cnt[w] += 1
            for w in ball:
                power_best = max(power_best, cnt.get(w, 0))
            if v % 97 == 0:
                gadj = gp.adjacency_lists()
                expected = sum(len(set(gadj[u]) & ball) for u in ball) // 2
                assert power_neighborhood_edge_count(g, v, r) == expected
        assert codegree_max(g, r) == (layer_best, power_best)
    elapsed = time.time() - start
    report(capsys, "AC4", elapsed < 120,
           f"200 graphs, implicit == explicit == brute force, {elapsed:.1f}s")
    assert elapsed < 120


def test_ac5_deterministic_sandwich(capsys):
    start = time.time()

    def path(n):
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def cyc(n):
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    def star(k):
        return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])

    def comp(n):
        return Graph.from_edges(n, [(i, j) for i in range(n)
                                    for j in range(i + 1, n)])

    structured = [path(20), path(60), cyc(9), cyc(30), cyc(59), star(10),
                  star(40), comp(8), comp(15)]
    rng = random.Random(5)
    violations = 0
    for count in range(500):
        if count < len(structured) * 3:
            g = structured[count % len(structured)]
        else:
            g = gnp_sample(rng.choice([20, 40, 60]),
                           rng.choice([0.05, 0.1, 0.2]), RandomSource(count))
        r = rng.choice([1, 2, 3])
        gp = graph_power(g, r)
        lb = clique_lower_bound(g, r)
        omega = max_clique_exact(gp)
        chi, _ = dsatur_chromatic_exact(gp)
        greedy = greedy_coloring_explicit(gp).palette_size
        delta = power_max_degree(g, r).delta
        if not lb <= omega <= chi <= greedy <= delta + 1:
            violations += 1
    elapsed = time.time() - start
    ok = violations == 0 and elapsed < 300
    report(capsys, "AC5", ok,
           f"500 instances, {violations} chain violations, {elapsed:.1f}s")
    assert violations == 0 and elapsed < 300


def test_ac6_theorem2_desk_scale(capsys):
    """Known red: the forest condition is unattainable at n=2000, d=2.

    The S-set holds ~27% of all vertices there (mean squared-graph degree
    ~ d+d^2 = 6 vs max G-degree 8..9), so its closed neighborhood always
    contains cycles.  The theorem's conclusion itself does hold at this
    scale: DSATUR reaches palette = Delta+1 with a matching clique
    certificate in every observed trial.  Gate asserted as stated.
    """
    start = time.time()
    rep = verify_theorem("th2", seed=SEED, workers=8)
    summary = rep["summary"]
    elapsed = time.time() - start
    rate = rep["certified_equality_rate"]
    report(capsys, "AC6", rep["passed"],
           f"two-phase certified-equality rate {rate:.2f} (gate 0.9), "
           f"two_phase {summary['two_phase_rate']:.2f}, "
           f"proper {summary['proper_rate']:.2f}, {elapsed:.0f}s")
    assert elapsed < 300
    assert rep["passed"], (
        "two-phase forest condition unattainable at this scale; "
        f"measured certified-equality rate {rate:.2f} < 0.9")


def test_ac7_theorem3_desk_scale(capsys):
    """Known red: same forest-condition blocker as AC6 (see notes).

    The deterministic halves hold: clique lower bound <= palette in 100%
    of trials, zero bound violations among successes, all colorings
    proper.  The >= 0.8 two-phase success gate is asserted as stated.
    """
    start = time.time()
    rep = verify_theorem("th3", seed=SEED, workers=8)
    elapsed = time.time() - start
    report(capsys, "AC7", rep["passed"],
           f"success rate {rep['success_rate']:.2f} (gate 0.8), "
           f"lb rate {rep['lb_rate']:.2f}, "
           f"bound violations {rep['bound_violations']}, "
           f"proper {rep['proper_rate']:.2f}, {elapsed:.0f}s")
    assert rep["lb_rate"] == 1.0
    assert rep["bound_violations"] == 0
    assert rep["proper_rate"] == 1.0
    assert elapsed < 600
    assert rep["passed"], (
        f"two-phase success rate {rep['success_rate']:.2f} < 0.8 "
        "(forest condition unattainable at this scale)")


def test_ac8_clique_sandwich(capsys):
    start = time.time()
    rep = verify_theorem("lemma-clique", seed=SEED, workers=8)
    elapsed = time.time() - start
    rates = {p["r"]: (p["summary"]["lower_rate"], p["summary"]["upper_rate"])
             for p in rep["per_radius"]}
    report(capsys, "AC8", rep["passed"],
           f"lower/upper rates {rates} (gates 1.0 / 0.9), {elapsed:.0f}s")
    assert elapsed < 600
    assert rep["passed"]


def test_ac9_theorem1_trend(capsys):
    """Band holds; the monotone-trend sub-gate is known red (see notes).

    The measured maxima are exact (independently confirmed by the pmf
    tail: expected exceedance count ~1 at the observed maximum), but the
    ratio to log n / log_(3) n drifts away from 1 over 10^4..10^6; the
    asymptotic convergence is far slower than any feasible n.
    """
    start = time.time()
    rep = verify_theorem("th1", seed=SEED, workers=8)
    elapsed = time.time() - start
    ratios = [p["mean_ratio"] for p in rep["points"]]
    report(capsys, "AC9", rep["passed"],
           f"mean ratios {[round(x, 3) for x in ratios]} "
           f"(band [0.3,3] {'ok' if rep['in_band'] else 'violated'}, "
           f"monotone {'ok' if rep['monotone_toward_1'] else 'violated'}), "
           f"{elapsed:.0f}s")
    assert elapsed < 900
    assert rep["in_band"]
    assert rep["passed"], (
        f"|ratio-1| not decreasing over n grid: {ratios}")


def test_ac10_degree_pmf_vs_reality(capsys):
    start = time.time()
    rep = verify_theorem("degree-pmf", seed=SEED, workers=8)
    elapsed = time.time() - start
    worst = max((c["sigma_deviation"] for c in rep["checks"]), default=0.0)
    report(capsys, "AC10", rep["passed"],
           f"worst gated deviation {worst:.2f} sigma (gate 4), {elapsed:.0f}s")
    assert elapsed < 600
    assert rep["passed"]


def test_ac11_theorem4_ratio(capsys):
    start = time.time()
    rep = verify_theorem("th4", seed=SEED, workers=2)
    elapsed = time.time() - start
    chi_ratios = rep["summary"]["ratio_chi"]
    alpha_ratios = rep["summary"]["ratio_alpha"]
    report(capsys, "AC11", rep["passed"],
           f"chi ratios [{min(chi_ratios):.2f}, {max(chi_ratios):.2f}], "
           f"alpha ratios [{min(alpha_ratios):.2f}, {max(alpha_ratios):.2f}] "
           f"(gate [0.05,20]), ordering rate "
           f"{rep['summary']['ordering_rate']:.2f}, {elapsed:.0f}s")
    assert elapsed < 600
    assert rep["passed"]


def test_ac12_reproducibility(capsys, tmp_path):
    start = time.time()
    blobs = []
    for workers in (1, 8):
        out = tmp_path / f"w{workers}.jsonl"
        cfg = ExperimentConfig(kind="chi2-equality", n=500, r=2, d=2.0,
                               trials=16, seed=SEED, workers=workers,
                               out=str(out))
        run_experiment(cfg)
        blobs.append(out.read_bytes())
    identical = blobs[0] == blobs[1]
    elapsed = time.time() - start
    report(capsys, "AC12", identical,
           f"byte-identical at workers 1 vs 8: {identical}, {elapsed:.0f}s")
    assert identical
