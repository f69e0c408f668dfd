import json
import math

import pytest

import parasphere as ps


def test_prepotential_jet():
    F = ps.Prepotential("z1^3/6", 1)
    assert F.m == 1
    assert not F.is_quadratic()
    jet = F.jet([1 + 1j])
    assert jet.value == pytest.approx((-1 + 1j) / 3)
    assert jet.grad[0] == pytest.approx(1j)
    assert jet.hess(0, 0) == pytest.approx(1 + 1j)
    assert jet.third(0, 0, 0) == pytest.approx(1.0)


def test_parse_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        ps.Prepotential("z3", 2)
    with pytest.raises(ValueError):
        ps.Prepotential("z1^1.5", 1)


def test_metric_and_potential_fixtures():
    F = ps.Prepotential("z1^3/6", 1)
    p = ps.make_point(F, [1 + 1j])
    G = ps.metric_G(p)
    assert G[0][0] == pytest.approx(2.0)
    assert G[0][1] == pytest.approx(-1.0)
    assert G[1][1] == pytest.approx(1.0)
    assert ps.ma_residual(p) < 1e-12

    u = ps.potential_u(F, [1j], [1 + 2j])
    assert u == pytest.approx(7.0 / 3.0)


def test_curvature_fixtures():
    F = ps.Prepotential("z1^3/6", 1)
    assert ps.gauss_curvature(ps.make_point(F, [0.3 + 1j])) == pytest.approx(0.5, abs=1e-4)
    assert ps.gauss_curvature(ps.make_point(F, [2j])) == pytest.approx(1 / 16, abs=1e-4)

    q = ps.Prepotential("(i/2)*z1^2", 1)
    assert abs(ps.scalar_curvature(ps.make_point(q, [0.5 - 0.5j]))) < 1e-8


def test_residual_bundle():
    F = ps.Prepotential("exp(z1)+(i/2)*z1^2", 1)
    p = ps.make_point(F, [0.2 + 0.5j])
    assert p.nondegenerate
    assert ps.conjugacy_residual(p) < 1e-9
    r1, r2 = ps.special_residuals(p)
    assert r1 < 1e-9 and r2 < 1e-9
    assert ps.nijenhuis_residual(p) < 1e-8
    S, lam = ps.shape_tensor(p)
    assert abs(lam) < 1e-5


def test_ambient_signature():
    for m in range(1, 5):
        sig = ps.hermitian_signature(ps.ambient_gamma(m).tolist())
        assert (sig.pos, sig.neg) == (m, m)


def test_run_check_roundtrip():
    cfg = {
        "m": 1,
        "F": "(i/2)*z1^2",
        "base": [[0.0, 0.0]],
        "plan": {"kind": "grid", "x": [-1, 1, 5], "v": [-1, 1, 5]},
    }
    code, report = ps.run_check(json.dumps(cfg))
    assert code == 0
    data = json.loads(report)
    assert data["pass"] is True
    assert data["counts"]["nondegenerate"] == 25
    assert data["residuals"]["monge_ampere"]["max"] < 1e-12

    # deterministic across repeated runs and worker counts
    _, again = ps.run_check(json.dumps(cfg), 1.0, 4)
    assert report == again


def test_degenerate_point_rejected():
    F = ps.Prepotential("z1^3/6", 1)
    p = ps.make_point(F, [1.0 + 0j])
    assert not p.nondegenerate
    with pytest.raises(ValueError):
        ps.conjugacy_residual(p)
