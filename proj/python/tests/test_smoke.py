import math

import pytest

import dsattack


def test_closed_form_probability():
    spec = dsattack.AttackSpec(0.35, 5)
    assert dsattack.p_dsa(spec) == pytest.approx(0.2287, abs=1e-4)
    assert dsattack.premine_success_prob(spec) == pytest.approx(0.0244, abs=1e-4)
    assert math.isinf(spec.cut)


def test_table_cell():
    spec = dsattack.AttackSpec.with_multiplier(0.35, 5, 4.0, lambda_h=1.0)
    assert dsattack.attack_success_prob(spec) == pytest.approx(0.218, abs=1e-3)
    assert dsattack.expected_success_time(spec) == pytest.approx(8.681, abs=5e-3)
    rows = dsattack.resource_table([5], [0.35])
    assert rows[0]["c_req_const"] == pytest.approx(38.62, abs=0.01)


def test_economics_and_errors():
    model = dsattack.EconomicModel(0.422, 0.44, 20.0)
    spec = dsattack.AttackSpec.with_multiplier(0.35, 5, 4.0)
    assert dsattack.required_value(model, spec) == pytest.approx(16.22, rel=0.01)
    assert math.isinf(dsattack.required_value(model, dsattack.AttackSpec(0.3, 5)))
    with pytest.raises(ValueError):
        dsattack.AttackSpec(1.5, 5)
    with pytest.raises(dsattack.SingularityError):
        dsattack.expected_success_time(dsattack.AttackSpec(0.5, 2))


def test_simulation_is_reproducible():
    spec = dsattack.AttackSpec.with_multiplier(0.35, 5, 4.0)
    a = dsattack.estimate(spec, 20000, seed=7)
    b = dsattack.estimate(spec, 20000, seed=7, threads=2)
    assert a == b
    assert abs(a["p_as_hat"] - dsattack.attack_success_prob(spec)) < 4 * a["se_p_as"]


def test_exact_counts():
    assert dsattack.ballot_number(1, 1) == 2
    assert dsattack.ballot_number(60, 0) == 1583850964596120042686772779038896
    masses = dsattack.enumerate_exact(dsattack.AttackSpec(0.3, 1), 3)
    assert masses[2] == pytest.approx(0.189)
