import xml.etree.ElementTree as ET

import numpy as np
import pytest

import rarefaction_lab as rl


def test_sample_is_deterministic():
    a = rl.sample(1, 7, seed=3, index=2)
    b = rl.sample(1, 7, seed=3, index=2)
    assert a.degree == 7 and a.n == 1
    assert len(a.coeffs) == 8
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    assert not np.array_equal(a.coeffs, rl.sample(1, 7, seed=3, index=3).coeffs)


def test_polynomial_round_trip_and_evaluation():
    p = rl.sample(2, 3, seed=1)
    q = rl.Polynomial.from_json(p.to_json())
    np.testing.assert_array_equal(p.coeffs, q.coeffs)
    x = [0.6, 0.0, 0.8]
    assert p(x) == pytest.approx(q(x))
    assert p([-0.6, 0.0, -0.8]) == pytest.approx(-p(x))
    with pytest.raises(ValueError):
        p([1.0, 0.0])


def test_distance_fields():
    d = rl.distance(rl.sample(1, 10, seed=5))
    assert d["exact"] > 0
    assert d["asymptotic"] > 0
    assert len(d["argmin_point"]) == 2


def test_roots_of_product_of_lines():
    # x * y * (x - y): monomial coefficients over x^3, x^2 y, x y^2, y^3
    w = np.sqrt([1.0, 3.0, 3.0, 1.0])
    p = rl.Polynomial(1, 3, list(np.array([0.0, 1.0, -1.0, 0.0]) / w))
    r = rl.count_real_roots(p)
    assert r["certified"] and r["real_roots"] == 3


def test_curve_topology_and_svg():
    t = rl.curve_topology(rl.sample(2, 4, seed=2))
    assert t["certified"]
    assert t["b0"] <= rl.harnack_bound(4)
    svg = rl.curve_svg(rl.sample(2, 4, seed=2))
    assert ET.fromstring(svg).tag.endswith("svg")


def test_split_and_approximation():
    s = rl.split(rl.sample(1, 12, seed=4), ell=1)
    assert "c1_perp" in s
    a = rl.approximate(rl.sample(1, 20, seed=4), ell=1)
    assert isinstance(a["criterion_holds"], bool)


def test_bad_dimension_raises():
    with pytest.raises(ValueError):
        rl.sample(2, 400)


def test_experiment_chart_and_threads():
    cfg = {"kind": "rarefaction", "n": 1, "degrees": [3, 5], "samples_per_degree": 200, "master_seed": 9}
    one = rl.run_experiment(cfg, threads=1)
    two = rl.run_experiment(cfg, threads=2)
    assert rl.record_to_csv(one) == rl.record_to_csv(two)
    assert one["config_hash"] == rl.config_hash(one["config"])
    root = ET.fromstring(rl.chart_svg(one))
    assert root.tag.endswith("svg")
