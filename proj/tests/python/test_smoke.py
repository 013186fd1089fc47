import numpy as np
import pytest

import dkr


@pytest.fixture()
def instance():
    target = dkr.SyntheticTarget.linear(np.array([1.0, -0.5]), b=0.2, noise_sd=0.05)
    training = dkr.generate_data(target, n=24, d=2, seed=7)
    ensemble = dkr.make_public_private(3, [0, 1], [8, 7, 7], training)
    kernel = dkr.Kernel.gaussian(1.0)
    return training, ensemble, kernel


def test_kernel_eval_and_gram():
    k = dkr.Kernel.linear()
    assert k(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == pytest.approx(11.0)
    pts = [np.array([1.0]), np.array([2.0])]
    g = dkr.gram(k, pts, [0, 1])
    assert np.allclose(g.entries, [[1.0, 2.0], [2.0, 4.0]])
    assert dkr.numerical_rank(g.entries) == 1


def test_generate_data_deterministic():
    target = dkr.SyntheticTarget.sinusoid(freq=2.0, amp=0.5)
    a = dkr.generate_data(target, n=10, d=1, seed=3)
    b = dkr.generate_data(target, n=10, d=1, seed=3)
    assert np.array_equal(a.labels, b.labels)


def test_train_matches_relaxed_oracle(instance):
    training, ensemble, kernel = instance
    lambdas = [0.2, 0.2, 0.2]
    cfg = dkr.TrainConfig()
    cfg.lambdas = lambdas
    cfg.max_cycles = 5000
    cfg.stop_tol = 1e-12
    sol = dkr.solve_relaxed(training, ensemble, kernel, lambdas)
    state = dkr.train(training, ensemble, kernel, cfg, sol.as_product_point())
    report = dkr.verify_against_trainer(sol, state, training)
    assert report.max_function_gap <= 1e-6
    # distance telemetry is monotone non-increasing
    dists = [
        p.dist_to_ref_sq for rec in state.history for p in rec.projections
    ]
    assert all(b <= a * (1 + 1e-12) + 1e-12 for a, b in zip(dists, dists[1:]))


def test_centralized_lemma():
    target = dkr.SyntheticTarget.linear(np.array([0.7]), b=0.0, noise_sd=0.1)
    training = dkr.generate_data(target, n=15, d=1, seed=11)
    ensemble = dkr.make_centralized(2, training)
    kernel = dkr.Kernel.gaussian(0.8)
    sol = dkr.solve_relaxed(training, ensemble, kernel, [0.5, 0.5])
    central = dkr.solve_centralized(training, kernel, 1.0)
    for x in training.points:
        assert dkr.eval_expansion(sol.f_stars[0], training.points, x) == pytest.approx(
            dkr.eval_expansion(central, training.points, x), abs=1e-8
        )


def test_connectivity(instance):
    training, ensemble, kernel = instance
    connected, graph = dkr.is_connected(ensemble, training, kernel)
    # gaussian kernel: distinct points are independent, so shared pairs don't span
    assert not connected
    assert graph.component_count() == 3
    central = dkr.make_centralized(3, training)
    assert dkr.is_connected(central, training, kernel)[0]


def test_conflict_coloring(instance):
    training, ensemble, kernel = instance
    groups = dkr.conflict_coloring(ensemble)
    assert sum(len(g) for g in groups) == 3
    # public examples are shared by everyone, so no two agents can share a color
    assert all(len(g) == 1 for g in groups)
