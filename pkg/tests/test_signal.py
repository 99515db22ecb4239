import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stlstar.formula import parse
from stlstar.signal import DomainError, NonMonotoneTime, ShortSignal, Signal, SignalError, check_length, load_csv


def ramp():
    return Signal(["x"], [0, 10], [[0.0], [10.0]])


def test_value_at_interpolates_exactly_on_a_segment():
    s = Signal(["x", "y"], [0, 2, 5], [[0, 1], [4, 1], [1, -2]])
    assert s.value_at("x", 1) == 2.0
    assert s.value_at("x", 2) == 4.0
    assert s.value_at("y", 3.5) == pytest.approx(-0.5)
    assert s.value_at(0, Fraction(5)) == 1.0


def test_value_at_outside_domain():
    with pytest.raises(DomainError):
        ramp().value_at("x", 10.5)
    with pytest.raises(DomainError):
        ramp().value_at("x", -0.1)


def test_constructor_validation():
    with pytest.raises(SignalError):
        Signal(["x"], [0], [[1.0]])
    with pytest.raises(NonMonotoneTime):
        Signal(["x"], [0, 2, 2], [[0], [1], [2]])
    with pytest.raises(SignalError):
        Signal(["x"], [0, 1], [[0], [np.nan]])
    with pytest.raises(SignalError):
        Signal(["x", "y"], [0, 1], [[0], [1]])


def test_csv_round_trip_and_offset():
    text = "time,a,b\n5,1,2\n5.5,3,4\n7,0,0\n"
    s = load_csv(io.StringIO(text))
    assert s.times == (0, Fraction(1, 2), 2)
    assert s.offset == 5
    assert s.schema.names == ("a", "b")
    assert load_csv(io.StringIO(s.to_csv())).times == s.times


@pytest.mark.parametrize("text", [
    "t,x\n0,1\n1,2\n",          # header must start with time
    "time,x\n0,1\n",            # one sample
    "time,x\n0,1\n1\n",         # ragged row
    "time,x\n0,1\n1,abc\n",     # not a number
    "time,x\n0,1\n0,2\n",       # repeated time
    "",
])
def test_bad_csv(text):
    with pytest.raises(SignalError):
        load_csv(io.StringIO(text))


def test_json_round_trip():
    s = Signal(["x", "y"], [0, Fraction(1, 3), 2], [[0, 1], [2, 3], [4, 5]])
    t = Signal.from_json(s.to_json())
    assert t.times[-1] == 2 and np.array_equal(t.values, s.values)


def test_check_length():
    f = parse("F[0,12] x > 0", ["x"])
    short = check_length(ramp(), f)
    assert isinstance(short, ShortSignal) and not short
    assert (short.needed, short.have) == (12, 10)
    assert check_length(ramp(), parse("F[0,10] x > 0", ["x"])) is True


def test_truncate_interpolates_end_point():
    s = ramp().truncate(Fraction(5, 2))
    assert s.length == Fraction(5, 2) and s.values[-1, 0] == 2.5


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=12), st.integers(1, 4), st.floats(0, 1))
def test_refinement_keeps_the_function(vals, factor, u):
    s = Signal(["x"], range(len(vals)), np.array(vals).reshape(-1, 1))
    fine = s.refine(factor)
    assert fine.segments == s.segments * factor
    t = u * float(s.length)
    assert fine.value_at("x", t) == pytest.approx(s.value_at("x", t), abs=1e-9)
