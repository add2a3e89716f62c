import json

import jsonschema
import pytest

import divsim


def test_exports_and_version():
    assert divsim.__version__ == "0.1.0"
    for name in [
        "Graph", "div_update", "spectral_summary", "simulate",
        "exact_win_distribution", "coupled_run", "epsilon_schedule",
        "horizons", "azuma_tail", "restart_tail", "bound_report",
        "run_experiment", "run_experiment_file",
    ]:
        assert hasattr(divsim, name)


def test_graph_basics():
    g = divsim.Graph.family("complete", 5)
    assert g.n == 5 and g.m == 10
    assert g.is_regular() and g.connected() and not g.is_bipartite()
    assert g.degree(0) == 4
    assert g.pi(0) == pytest.approx(0.2)
    assert "n=5" in repr(g)

    h = divsim.Graph.from_edges(3, [(0, 1), (1, 2)])
    assert h.n == 3 and h.m == 2 and h.degree(1) == 2

    lines = g.to_edge_list().splitlines()
    assert lines[0] == "5 10" and len(lines) == 11

    with pytest.raises(ValueError):
        divsim.Graph.family("regular", 5, 3)  # n*d must be even


def test_div_update():
    assert divsim.div_update(2, 5) == 3
    assert divsim.div_update(5, 2) == 4
    assert divsim.div_update(3, 3) == 3


def test_spectral_summary():
    s = divsim.spectral_summary(divsim.Graph.family("complete", 5))
    assert s["lambda"] == pytest.approx(0.25, abs=1e-10)
    assert not s["bipartite"]
    c4 = divsim.spectral_summary(divsim.Graph.family("cycle", 4))
    assert c4["bipartite"]
    assert c4["lambda"] == pytest.approx(1.0, abs=1e-9)


def test_simulate_deterministic():
    g = divsim.Graph.family("complete", 8)
    a = divsim.simulate(g, "uniform:3", kind="edge", seed=11)
    b = divsim.simulate(g, "uniform:3", kind="edge", seed=11)
    assert a == b
    assert a["winner"] in (1, 2, 3)
    assert not a["cap_hit"]
    assert a["consensus_step"] == a["steps_taken"]

    done = divsim.simulate(g, "blocks:8x2", seed=1)
    assert done["winner"] == 2 and done["consensus_step"] == 0


def test_exact_win_distribution_frozen():
    p3 = divsim.Graph.family("path", 3)
    vert = divsim.exact_win_distribution(p3, [1, 2, 3])
    assert vert["states"] == 10
    assert vert["residual"] <= 1e-12
    assert vert["probs"][1] == pytest.approx(0.1875, abs=1e-10)
    assert vert["probs"][2] == pytest.approx(0.625, abs=1e-10)

    edge = divsim.exact_win_distribution(p3, [1, 2, 3], kind="edge")
    assert edge["probs"][1] == pytest.approx(2 / 9, abs=1e-10)
    assert edge["probs"][2] == pytest.approx(5 / 9, abs=1e-10)


def test_coupled_run_clean():
    g = divsim.Graph.family("regular", 12, 4, seed=3)
    x = [1 + v % 3 for v in range(12)]
    for mode in ("s-side", "ell-side"):
        res = divsim.coupled_run(g, x, 3, mode=mode, kind="edge", seed=5)
        assert res["violations"] == 0
        assert res["consequence_ok"]
        assert res["div_winner"] in (1, 2, 3)


def test_theory_frozen_values():
    eps1, eps2 = divsim.epsilon_schedule(100, 1 / 99)
    assert eps1 == pytest.approx(4.081216202428324e-4, rel=1e-12)
    assert eps2 == pytest.approx(0.046415888336127795, rel=1e-12)

    h = divsim.horizons(100, 0.25, 0.01, 0.01)
    assert (h["t1"], h["t2"], h["tp"], h["tp_of_eps"]) == (
        1704, 170344, 603398, 60340)

    assert divsim.azuma_tail(100, 1000) == pytest.approx(
        0.013475893998170934, rel=1e-12)
    assert divsim.restart_tail(5) == pytest.approx(
        0.006737946999085467, rel=1e-12)

    rep = divsim.bound_report(100, 5, 0.25, 0.01, 0.01, pi_min=0.01)
    assert rep["eps_schedule"] == {"eps1": 0.25, "eps2": 0.5}
    assert rep["horizons_at_confidence"]["t1"] == 2486
    assert rep["expected_bound"]["structured_bound"] == pytest.approx(4124700.0)
    assert rep["applicable"]


def test_run_experiment_and_schema(src_root):
    cfg = {
        "graph": {"family": "complete", "n": 3},
        "init": "blocks:1x1,1x2,1x3",
        "kind": "vertex",
        "rule": "div",
        "trials": 400,
        "master_seed": 99,
        "targets": {"oracle": True},
    }
    out = divsim.run_experiment(json.dumps(cfg))
    assert out["all_pass"]
    assert out["completed_trials"] == 400
    assert [v["name"] for v in out["verdicts"]] == [
        "oracle:P(1)", "oracle:P(2)", "oracle:P(3)"]

    schema = json.loads(
        (src_root / "docs" / "schemas" / "experiment_summary.schema.json"
         ).read_text())
    jsonschema.validate(out, schema)

    with pytest.raises(ValueError):
        divsim.run_experiment(json.dumps({**cfg, "bogus": 1}))
