"""End-to-end acceptance checks.

Each test prints a single [acceptance] PASS/FAIL/SKIP line so the suite output
doubles as a checklist. Thresholds are deliberately looser than the reference
results because epsilon, b, and normalization choices shift the numbers.
"""

import math
import time

import numpy as np
import pytest

from rwcluster.data import SCALERS, builtin_dataset
from rwcluster.dynamics import (apply_step, generate_event_rw1, iterate,
                                naive_transition_row, transition_matrix,
                                transition_row)
from rwcluster.geometry import (ModelParams, ParticleSystem, TopologySnapshot,
                                build_topology, distance_matrix)
from rwcluster.pipeline import RunConfig, clustering_accuracy, run_clustering, sweep_b
from rwcluster.theory import (LineWalkSpec, PairWalkSpec, absorbing_probability,
                              simulate_line_walk, simulate_pair_walk,
                              z_walk_transitions)

SWEEP_B = [5, 10, 15, 20, 25, 30]
UNAVAILABLE = {
    "soybean": "requires the UCI Soybean-small file; no network access in this environment",
    "breast": "requires the UCI Breast Cancer Wisconsin file; no network access in this environment",
    "ionosphere": "requires the UCI Ionosphere file; no network access in this environment",
}


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            suffix = f" ({detail})" if detail else ""
            print(f"[acceptance] {name}: {status}{suffix}")
        assert ok, f"{name}: {detail}"
    return emit


def emit_skip(capsys, name, reason):
    with capsys.disabled():
        print(f"[acceptance] {name}: SKIP ({reason})")
    pytest.skip(reason)


def run_sweep(dataset, variant="rw1", scale="none", b_values=SWEEP_B, n_trials=20,
              target=None):
    features = SCALERS[scale](dataset.features)
    target = dataset.n_classes if target is None else target
    params = ModelParams(b=b_values[0], variant=variant)
    system = ParticleSystem.from_points(features, params, labels=dataset.labels)
    config = RunConfig(params=params, target_clusters=target)
    return sweep_b(system, config, b_values, n_trials=n_trials)


_iris_cache = {}


def iris_rw1_sweep():
    if "entries" not in _iris_cache:
        _iris_cache["entries"] = run_sweep(builtin_dataset("iris"))
    return _iris_cache["entries"]


@pytest.fixture(scope="module")
def gauss300():
    rng = np.random.default_rng(42)
    centers = np.array([[0.0, 0.0], [6.0, 0.0], [3.0, 5.0]])
    points = np.vstack([rng.normal(c, 0.6, size=(100, 2)) for c in centers])
    labels = np.repeat(["a", "b", "c"], 100)
    return points, labels


class TestBenchmarkAccuracy:
    """Criterion 1: best RW1 accuracy over the b-sweep clears each dataset's bar."""

    def test_iris(self, report):
        entries = iris_rw1_sweep()
        best = max(entries, key=lambda e: e.accuracy_max)
        report("1 iris rw1 best accuracy >= 0.85",
               best.accuracy_max >= 0.85,
               f"best {best.accuracy_max:.4f} at b={best.b}")

    def test_wine(self, report):
        wine = builtin_dataset("wine")
        best_acc, best_cfg = -1.0, None
        for scale in ("none", "minmax", "standard"):
            entries = run_sweep(wine, scale=scale)
            for entry in entries:
                if entry.accuracy_max > best_acc:
                    best_acc = entry.accuracy_max
                    best_cfg = f"scale={scale}, b={entry.b}"
        report("1 wine rw1 best accuracy >= 0.85 (scaling explored)",
               best_acc >= 0.85, f"best {best_acc:.4f} with {best_cfg}")

    @pytest.mark.parametrize("name", sorted(UNAVAILABLE))
    def test_unavailable_dataset(self, name, capsys):
        emit_skip(capsys, f"1 {name} rw1 best accuracy", UNAVAILABLE[name])


class TestStochasticVariantStatistics:
    """Criterion 2: 20 RW2 trials on Iris track the RW1 accuracy at the best b."""

    def test_rw2_tracks_rw1(self, report):
        rw1_entries = iris_rw1_sweep()
        best = max(rw1_entries, key=lambda e: e.accuracy_max)
        rw1_acc = best.accuracy_max
        entry = run_sweep(builtin_dataset("iris"), variant="rw2",
                          b_values=[best.b], n_trials=20)[0]
        gap = abs(entry.accuracy_mean - rw1_acc)
        ok = gap <= 0.03 and entry.accuracy_max >= entry.accuracy_mean
        report("2 rw2 mean within 3 points of rw1, max >= mean", ok,
               f"b={best.b}, rw1 {rw1_acc:.4f}, rw2 mean {entry.accuracy_mean:.4f} "
               f"max {entry.accuracy_max:.4f}")


class TestDeterminism:
    """Criterion 3: rw1 and same-seed rw2 replay bit-identically; seeds matter."""

    def build(self):
        rng = np.random.default_rng(7)
        points = np.vstack([rng.normal(c, 0.5, size=(25, 2))
                            for c in [(0.0, 0.0), (7.0, 0.0), (3.5, 6.0)]])
        return points

    def run(self, points, variant, seed=0):
        params = ModelParams(b=8, variant=variant, seed=seed)
        system = ParticleSystem.from_points(points, params)
        return run_clustering(system, RunConfig(params=params))

    def test_replays(self, report):
        points = self.build()
        checks = []
        a, b = self.run(points, "rw1"), self.run(points, "rw1")
        checks.append(np.array_equal(a.assignments, b.assignments)
                      and a.convergence_trace == b.convergence_trace
                      and np.array_equal(a.final_positions, b.final_positions))
        c, d = self.run(points, "rw2", seed=3), self.run(points, "rw2", seed=3)
        checks.append(np.array_equal(c.assignments, d.assignments)
                      and c.convergence_trace == d.convergence_trace
                      and np.array_equal(c.final_positions, d.final_positions))
        e = self.run(points, "rw2", seed=4)
        checks.append(c.convergence_trace != e.convergence_trace)
        report("3 determinism (rw1 replay, rw2 same seed, rw2 seeds differ)",
               all(checks), f"checks={checks}")


class TestNeighborhoodSizeTrends:
    """Criteria 4 and 5: cluster counts shrink with b and early motion shrinks too."""

    def test_cluster_count_monotone(self, gauss300, report):
        points, labels = gauss300
        params = ModelParams(b=5)
        system = ParticleSystem.from_points(points, params, labels=labels)
        entries = sweep_b(system, RunConfig(params=params), [5, 10, 15, 20, 25])
        counts = [e.raw_cluster_count for e in entries]
        ok = all(x >= y for x, y in zip(counts, counts[1:])) and counts[-1] < counts[0]
        report("4 raw cluster count non-increasing in b, smaller at b=25",
               ok, f"counts {counts}")

    def test_first_iteration_motion(self, gauss300, report):
        points, _ = gauss300
        totals = {}
        for b in (5, 25):
            params = ModelParams(b=b, max_iters=1, epsilon=1e-12)
            system = ParticleSystem.from_points(points, params)
            result = run_clustering(system, RunConfig(params=params))
            totals[b] = result.convergence_trace[0]
        report("5 first-iteration total walk length larger at b=5 than b=25",
               totals[5] > totals[25],
               f"b=5 {totals[5]:.2f}, b=25 {totals[25]:.2f}")

    def test_iris_converges_quickly(self, report):
        iris = builtin_dataset("iris")
        params = ModelParams(b=15, max_iters=500)
        system = ParticleSystem.from_points(iris.features, params)
        result = run_clustering(system, RunConfig(params=params))
        report("5 iris b=15 converges within 500 iterations",
               result.converged and result.iterations < 500,
               f"{result.iterations} iterations")


class TestAbsorptionOracle:
    """Criterion 6: closed form vs Monte Carlo on the (p, start) grid, under 30 s."""

    def test_grid(self, report):
        rng = np.random.default_rng(2024)
        start_time = time.perf_counter()
        failures = []
        for p in (0.4, 0.5, 0.6, 0.75):
            for l in (1, 2, 3, 5):
                spec = LineWalkSpec(p=p, q=1.0 - p, l=l)
                closed = absorbing_probability(spec)
                est = simulate_line_walk(spec, trials=100_000, horizon=10_000,
                                         rng=rng)
                if not est.brackets(closed, floor=0.01):
                    failures.append((p, l, closed, est.estimate))
        elapsed = time.perf_counter() - start_time
        ok = not failures and elapsed < 30.0
        report("6 absorption closed form vs MC on 16-point grid in < 30 s",
               ok, f"{elapsed:.1f} s, failures {failures}")


class TestEncounterOracle:
    """Criterion 7: direct pair simulation matches the composed difference walk."""

    def test_direct_vs_composed(self, report):
        rng = np.random.default_rng(99)
        worst = 0.0
        ok = True
        for _ in range(20):
            pa, pb = rng.uniform(0.2, 0.8, size=2)
            gap = int(rng.integers(0, 7))
            spec = PairWalkSpec(pa=pa, qa=1.0 - pa, pb=pb, qb=1.0 - pb, j=0, k=gap)
            est = simulate_pair_walk(spec, trials=30_000, horizon=10_000, rng=rng)
            diff = abs(est.direct.estimate - est.composed.estimate)
            worst = max(worst, diff - 3 * est.combined_stderr)
            if diff > 3 * est.combined_stderr:
                ok = False
        report("7 direct and composed encounter estimates within 3 stderr x20",
               ok, f"worst excess {worst:.4f}")

    def test_difference_walk_rows_stochastic(self, report):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(10_000):
            pa, pb = rng.uniform(0.01, 0.99, size=2)
            spec = PairWalkSpec(pa=pa, qa=1.0 - pa, pb=pb, qb=1.0 - pb, j=0, k=1)
            worst = max(worst, abs(sum(z_walk_transitions(spec)) - 1.0))
        report("7 difference-walk transition triples sum to 1 within 1e-12 x1e4",
               worst <= 1e-12, f"worst deviation {worst:.2e}")


class TestStructuralProperties:
    """Criterion 8: row-stochasticity, bounded motion, label invariance, boundary pull."""

    def test_transition_rows_stochastic(self, report):
        rng = np.random.default_rng(31)
        worst = 0.0
        rows_checked = 0
        while rows_checked < 10_000:
            n = 50
            points = rng.normal(scale=rng.uniform(0.5, 4.0), size=(n, 2))
            params = ModelParams(b=int(rng.integers(2, 12)))
            system = ParticleSystem.from_points(points, params)
            probs = transition_matrix(system.initial_topology, system)
            sums = probs.sum(axis=1)
            active = system.initial_degree > 0
            worst = max(worst, float(np.abs(sums[active] - 1.0).max()))
            rows_checked += int(active.sum())
        report("8 transition rows sum to 1 within 1e-12 over 1e4 rows",
               worst <= 1e-12, f"worst deviation {worst:.2e}")

    def test_bounding_box_never_grows(self, report):
        rng = np.random.default_rng(17)
        ok = True
        for _ in range(100):
            points = rng.normal(scale=2.0, size=(15, 2))
            params = ModelParams(b=4, max_iters=50)
            system = ParticleSystem.from_points(points, params)
            low, high = points.min(axis=0), points.max(axis=0)
            for it in range(50):
                new_positions, _, _ = iterate(system, params, iteration=it)
                system = system.with_positions(new_positions)
                if (new_positions.min(axis=0) < low - 1e-9).any() or \
                        (new_positions.max(axis=0) > high + 1e-9).any():
                    ok = False
        report("8 bounding box non-growth over 100 systems x 50 iterations", ok)

    def test_accuracy_permutation_invariance(self, report):
        rng = np.random.default_rng(23)
        assignments = rng.integers(0, 5, size=80)
        labels = rng.integers(0, 4, size=80)
        base = clustering_accuracy(assignments, labels)
        ok = all(
            clustering_accuracy(rng.permutation(5)[assignments],
                                rng.permutation(4)[labels]) == base
            for _ in range(1_000))
        report("8 accuracy invariant under 1e3 random relabelings", ok,
               f"base {base:.4f}")

    def test_boundary_particle_pull(self, report):
        # boundary particle between a dense own-class group and a close
        # wrong-class neighbor: the distance-only rule steps toward the
        # neighbor and keeps being pulled, the degree-aware rule never does
        gap_wrong = 2.0 * math.log(1.2)
        gap_own = 2.0 * math.log(1.5)
        positions = np.array([[0.0, 0.0], [gap_wrong, 0.0]] +
                             [[-gap_own, 0.0]] * 4)
        degrees = np.array([5, 5, 7, 7, 7, 7])
        dist = distance_matrix(positions)
        topo = TopologySnapshot(distance=dist,
                                adjacency=np.ones((6, 6), dtype=bool),
                                neighbors=[np.arange(6)] * 6, degree=degrees)
        system = ParticleSystem(positions=positions,
                                initial_positions=positions.copy(),
                                initial_distance=dist, initial_topology=topo,
                                interaction_range=100.0)
        theta = 1.1
        naive = naive_transition_row(0, topo)
        smart = transition_row(0, topo, system)
        naive_event = generate_event_rw1(0, naive, dist[0], theta)
        smart_event = generate_event_rw1(0, smart, dist[0], theta)
        moved = positions.copy()
        moved[0] = apply_step(0, naive_event, naive, dist[0], positions).new_position
        dist_after = distance_matrix(moved)
        topo_after = TopologySnapshot(distance=dist_after, adjacency=topo.adjacency,
                                      neighbors=topo.neighbors, degree=degrees)
        smart_after = transition_row(0, topo_after, system.with_positions(moved))
        smart_event_after = generate_event_rw1(0, smart_after, dist_after[0], theta)
        ok = (naive_event.target == 1 and smart_event.target != 1
              and smart_event_after.target != 1)
        report("8 boundary particle: naive rule crosses classes, full rule does not",
               ok, f"naive -> {naive_event.target}, full -> {smart_event.target}")
