"""Smoke tests for the compiled python module; plain asserts, no test deps."""

import random
import os
import tempfile

import mllab


def approx(a, b, tol=1e-9):
    return abs(a - b) < tol


def test_model_ops():
    tech = mllab.Technology()
    assert approx(mllab.optimal_effort(tech, 5.0, 0.5), 1.160397, 1e-5)
    assert approx(mllab.optimal_effort(tech, 5.0, 0.0), 0.0)
    assert approx(mllab.expected_output(tech, 5.0, 0.5, 1.0), 2.0)
    assert approx(mllab.gross_score(tech, 4.0, 1.0), 4.0)

    agent = mllab.AgentProfile(4.0, 5.0, 1)
    assert agent.is_overconfident()
    assert mllab.surprise(tech, agent, 0.5, 0.5) < 0.0


def test_equilibrium():
    tech = mllab.Technology()
    eq = mllab.solve_equilibrium(tech, mllab.AgentProfile(4.0, 5.0, 1), 0.5)
    assert approx(eq.phi_limit, 0.4, 1e-8)
    assert not eq.boundary

    boundary = mllab.solve_equilibrium(tech, mllab.AgentProfile(6.0, 3.0, 2), 0.6)
    assert boundary.boundary and boundary.phi_limit == 1.0


def test_beliefs_and_simulation():
    prior = mllab.BeliefGrid.uniform()
    assert approx(sum(prior.mass), 1.0, 1e-9)
    tech = mllab.Technology()
    path = mllab.simulate(
        mllab.AgentProfile(4.0, 5.0, 1), tech, 0.5, prior, 5, 7,
        mllab.SimulationMode.Deterministic)
    assert len(path) == 5
    assert approx(path[1]["phi_point"], 0.4, 1e-12)
    assert path[4]["phi_point"] <= path[0]["phi_point"]


def test_distributions():
    assert approx(mllab.normal_cdf(0.0), 0.5, 1e-12)
    assert approx(mllab.student_t_cdf(0.0, 7.0), 0.5, 1e-12)
    assert mllab.chisq_cdf(0.0, 3.0) == 0.0
    t = mllab.paired_t_one_sided([0, 0, 0], [1, 2, 3], "greater")
    assert approx(t["p_value"], 0.0370899, 1e-5)


def test_panel_and_recovery():
    cfg = mllab.ExperimentConfig()
    rec = mllab.recover_phi(2.0, 1.0, cfg)
    assert approx(rec["phi_hat"], 0.4)
    assert not rec["rejected"]
    assert mllab.classify_overconfident(6, 4, cfg)
    assert not mllab.classify_overconfident(3, 5, cfg)

    spec = mllab.PopulationSpec()
    spec.n_subjects = 15
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "panel.csv")
        rows = mllab.generate_panel_csv(spec, cfg, 11, path)
        assert rows == 15 * cfg.rounds
        with open(path) as f:
            header = f.readline().strip()
        assert header.startswith("subject_id,round,score,mark,bid,phi_hat")


def test_estimators_and_clustering():
    res = mllab.ols([1.0, 3.0], [[0.0, 1.0]], ["x"], True)
    assert approx(res["coef"][0], 1.0)
    assert approx(res["coef"][1], 2.0)

    rng = random.Random(7)
    pts = [(2.0 + rng.gauss(0, 0.05), 0.2 + rng.gauss(0, 0.05)) for _ in range(100)]
    pts += [(2.0 + rng.gauss(0, 0.05), 0.8 + rng.gauss(0, 0.05)) for _ in range(100)]
    sel = mllab.select_model(pts, 1, 6, "bic", 3)
    assert sel["k"] == 2

    curve = mllab.kde([0.1, 0.2, 0.3, 0.4, 0.5, 0.35, 0.25])
    total = 0.0
    for i in range(1, len(curve["x"])):
        total += 0.5 * (curve["density"][i] + curve["density"][i - 1]) * (
            curve["x"][i] - curve["x"][i - 1])
    assert approx(total, 1.0, 1e-3)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed (mllab {mllab.__version__})")


if __name__ == "__main__":
    main()
