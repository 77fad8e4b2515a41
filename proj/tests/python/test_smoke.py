"""Smoke tests for the python bindings: the compiled core loads and the main
operations behave on small runs."""

import math

import pytest

import vanishdamp as vd


def test_catalog_and_certificates():
    cat = vd.catalog()
    ids = [p.id for p in cat]
    assert len(cat) >= 5
    for name in [
        "scalar-harmonic",
        "dirichlet-wave-20",
        "semilinear-wave-20",
        "degenerate-flat",
        "far-start",
    ]:
        assert name in ids
    p = vd.problem("dirichlet-wave-20")
    cert = p.semi_coercivity()
    assert cert["mu"] == pytest.approx(9.8512112694366447, rel=1e-9)


def test_simulate_energy_monotone():
    p = vd.problem("scalar-harmonic")
    traj = vd.simulate(p, alpha=0.5, h=1e-3, t_end=100.0, weighted_energy_r=[-0.5, 0.0],
                       weighted_speed_q=[0.5])
    E = traj.energy
    assert len(traj) > 20
    assert E[0] == pytest.approx(0.5)
    assert all(E[i + 1] <= E[i] + 1e-9 for i in range(len(E) - 1))
    diss = traj.dissipation
    assert all(diss[i + 1] >= diss[i] for i in range(len(diss) - 1))
    assert vd.dissipation_residual(traj) <= 1e-6 * E[0] * 100.0


def test_fit_on_simulated_run():
    p = vd.problem("degenerate-flat")
    traj = vd.simulate(p, alpha=0.5, h=5e-3, t_end=1e4, weighted_energy_r=[-0.5, 0.0],
                       weighted_speed_q=[0.5, 0.0])
    rep = vd.energy_integrability(traj, -0.5)
    assert rep.saturated
    lem = vd.check_decay_lemma(traj, 0.0, 0.5)
    assert lem.premise_saturated and lem.tail_nonincreasing
    conv = vd.check_convergence(traj, p)
    assert conv.dist_final <= 1e-6
    assert conv.limit_in_argmin


def test_reference_matches_fixed_step():
    p = vd.problem("scalar-harmonic")
    u_ref, w_ref = vd.reference_solve(p, alpha=0.5, t_end=10.0)
    traj = vd.simulate(p, alpha=0.5, h=1e-3, t_end=10.0)
    assert abs(traj.final_u[0] - u_ref[0]) <= 1e-4
    assert u_ref[0] == pytest.approx(-0.10976874277350593, abs=1e-9)


def test_schedule_checkers():
    s = vd.DampingSchedule.power_law(1.0, 0.5)
    ok, largest = vd.check_damping_hypothesis(s, 1.0, 0.5)
    assert ok and largest == pytest.approx(1.0)
    ok2, _ = vd.check_damping_hypothesis(s, 1.0, 0.4)
    assert not ok2
    assert vd.check_derivative_condition(s, 0.5)
    assert not vd.check_derivative_condition(vd.DampingSchedule.constant(1.0), 0.5)


def test_wave_builder_and_errors():
    p = vd.build_wave_problem(2, 3.0, "zero")
    assert p.matrix[0][0] == pytest.approx(2.0)
    with pytest.raises(vd.VanishdampError):
        vd.build_wave_problem(1, 1.0, "zero")
    with pytest.raises(vd.VanishdampError):
        vd.problem("no-such-problem")


def test_csv_export():
    p = vd.problem("scalar-harmonic")
    traj = vd.simulate(p, alpha=0.5, h=1e-2, t_end=10.0, weighted_energy_r=[-0.5])
    csv = traj.to_csv()
    header = csv.splitlines()[0]
    assert header.startswith("t,E,speed_sq,gamma,phi_gap,dissipation,wE_r-0.5")
    assert header.endswith("p,dp")
    assert len(csv.splitlines()) == len(traj) + 1


def test_underflow_reported_as_superpolynomial():
    p = vd.problem("scalar-harmonic")
    traj = vd.simulate(p, schedule="constant", c=1.0, h=1e-2, t_end=2000.0)
    with pytest.raises(vd.VanishdampError):
        vd.fit_decay_rate(traj)
