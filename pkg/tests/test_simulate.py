import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stlstar.formula import parse
from stlstar.satset import monitor
from stlstar.simulate import (
    NON_DAMPED,
    OSCILLATION,
    SPECIES,
    IntegrationError,
    RepressilatorParams,
    fixed_point,
    integrate,
    integrate_states,
    load_grid,
    repressilator_rhs,
    sweep,
    sweep_csv,
)

BASE = RepressilatorParams()


def peaks(x):
    k = np.nonzero((x[1:-1] > x[:-2]) & (x[1:-1] >= x[2:]))[0] + 1
    return x[k]


def test_rhs_transcription_at_zero_repressor():
    d = repressilator_rhs([0, 0, 0, 0, 0, 0], BASE)
    assert d[0] == pytest.approx(400.2)


def test_rhs_protein_decay():
    d = repressilator_rhs([1, 0, 0, 2, 0, 0], BASE)
    assert d[3] == pytest.approx(-0.2)


def test_rhs_repression_is_cyclic():
    # a large p3 shuts down m1 only
    d = repressilator_rhs([0, 0, 0, 0, 0, 1e3], BASE)
    assert d[0] == pytest.approx(400 / (1 + 1e6) + 0.2)
    assert d[1] == d[2] == pytest.approx(400.2)


def test_fixed_point_is_stationary():
    v = fixed_point(BASE)
    assert v == pytest.approx(400 / (1 + v * v) + 0.2, abs=1e-9)
    assert np.max(np.abs(repressilator_rhs([v] * 6, BASE))) < 1e-9


def test_fixed_point_residual_over_ten_time_units():
    v = fixed_point(BASE)
    p = RepressilatorParams(init=(v,) * 6, t_end=10.0, dt=0.01, samples=11)
    _, y = integrate_states(p)
    assert np.max(np.abs(y - v)) <= 1e-6


def test_signal_shape_and_schema():
    s = integrate(BASE)
    assert s.schema.names == SPECIES
    assert s.segments == 79 and s.length == 300
    assert s.values[0].tolist() == list(BASE.init)


def test_sustained_oscillation():
    s = integrate(RepressilatorParams(samples=601))
    pk = peaks(s.column("m1"))[1:]
    assert len(pk) >= 5
    assert np.all(np.diff(pk) >= -1e-3 * pk.max())


def test_leaky_run_damps():
    s = integrate(RepressilatorParams(alpha0=2.0, samples=601))
    pk = peaks(s.column("m1"))
    assert len(pk) >= 3 and np.all(np.diff(pk) < 0)


def test_convergence_order_on_short_horizon():
    p = RepressilatorParams(t_end=20.0, samples=5)
    k = 800  # step 0.00625
    a, b, c = (integrate_states(p, k * m)[1] for m in (1, 2, 4))
    order = math.log2(np.max(np.abs(a - b)) / np.max(np.abs(b - c)))
    assert 3.5 <= order <= 4.5


def test_positivity_on_reference_runs():
    for a0 in (0.0, 0.2, 2.0):
        _, y = integrate_states(RepressilatorParams(alpha0=a0))
        assert y.min() >= -1e-9


def test_blow_up_is_reported():
    # RK4 is unstable on the decay terms once the step is far beyond 2.8
    p = RepressilatorParams(dt=50.0, samples=11, t_end=5000.0)
    with pytest.raises(IntegrationError) as err:
        integrate_states(p)
    assert err.value.t > 0


@pytest.mark.parametrize("kw", [
    {"alpha": 0}, {"beta": -1}, {"dt": 0}, {"t_end": 0}, {"n": 0.5}, {"alpha0": -0.1},
    {"init": (1, 2, 3)}, {"init": (0, 0, 0, 0, 0, -1)}, {"samples": 1},
])
def test_parameter_validation(kw):
    with pytest.raises(ValueError):
        RepressilatorParams(**kw)


@settings(max_examples=40, deadline=None)
@given(st.floats(1, 1000), st.floats(0, 5), st.floats(1, 4))
def test_fixed_point_solves_its_equation(alpha, alpha0, n):
    p = RepressilatorParams(alpha=alpha, alpha0=alpha0, n=n)
    v = fixed_point(p)
    assert v == pytest.approx(alpha / (1 + v ** n) + alpha0, rel=1e-9, abs=1e-9)


# -- sweeps ------------------------------------------------------------------------------


def test_empty_sweep():
    assert sweep([], [OSCILLATION]) == []
    assert sweep_csv([]) == "alpha,alpha0,beta,n,formula,verdict,wall_ms\n"


def test_one_cell_sweep_matches_a_single_run():
    f = "F[0,100] m1 > 100"
    rows = sweep([{}], [f])
    s = integrate(BASE)
    assert len(rows) == 1 and rows[0]["verdict"] == monitor(s, parse(f, s.schema)).verdict.value
    assert rows[0]["alpha0"] == 0.2


def test_sweep_over_leak_separates_damped_runs():
    both = f"({OSCILLATION}) && ({NON_DAMPED})"
    rows = sweep([{"alpha0": 0.2, "samples": 201}, {"alpha0": 2.0, "samples": 201}], [both])
    assert [r["verdict"] for r in rows] == ["SAT", "UNSAT"]


def test_sweep_records_errors_and_continues():
    rows = sweep([{"beta": -1.0}, {}], ["m1 > 0", "q > 0"])
    assert len(rows) == 4
    assert rows[0]["verdict"].startswith("ERROR") and rows[1]["verdict"].startswith("ERROR")
    assert rows[2]["verdict"] in ("SAT", "UNSAT", "BOUNDARY")
    assert rows[3]["verdict"].startswith("ERROR")


def test_load_grid(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("alpha0,samples\n0.2,80\n2,\n")
    assert load_grid(path) == [{"alpha0": 0.2, "samples": 80}, {"alpha0": 2.0}]
    path.write_text("alpha0,gamma\n1,2\n")
    with pytest.raises(ValueError):
        load_grid(path)
