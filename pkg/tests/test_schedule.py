from fractions import Fraction

import pytest

from locksched.schedule import (
    Action,
    Direction,
    InfeasibleScheduleError,
    PeriodicInstance,
    Schedule,
    StreamSpec,
    arrival_at,
    cyclic_average,
    instance_from_json,
    instance_to_json,
    is_feasible,
    lcm_period,
    schedule_from_json,
    schedule_to_json,
    simulate,
)

D, U, W = Action.PROCESS_DOWN, Action.PROCESS_UP, Action.WAIT


def _inst(*specs):
    return PeriodicInstance(tuple(StreamSpec(d, lam, mu) for d, lam, mu in specs))


def test_arrival_at_single_stream():
    inst = _inst((Direction.DOWN, 2, 1))
    assert arrival_at(inst, 3) == (1, 0)
    assert arrival_at(inst, 2) == (0, 0)


def test_arrival_at_two_streams():
    inst = _inst((Direction.DOWN, 2, 1), (Direction.UP, 2, 2))
    assert arrival_at(inst, 4) == (0, 1)
    assert arrival_at(inst, 1) == (1, 0)


def test_arrival_at_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        arrival_at(_inst((Direction.DOWN, 2, 1)), 0)


def test_lcm_period():
    assert lcm_period(_inst((Direction.DOWN, 2, 1), (Direction.UP, 3, 1))) == 6
    assert lcm_period(_inst((Direction.DOWN, 4, 1), (Direction.UP, 6, 1))) == 12
    assert lcm_period(_inst((Direction.DOWN, 5, 1))) == 5


def test_stream_spec_validation():
    with pytest.raises(ValueError):
        StreamSpec(Direction.DOWN, 0, 1)
    with pytest.raises(ValueError):
        StreamSpec(Direction.DOWN, 3, 4)
    with pytest.raises(ValueError):
        StreamSpec(Direction.DOWN, 3, 0)


def test_feasibility_alternation():
    assert is_feasible(Schedule((D, U), Direction.DOWN))
    assert not is_feasible(Schedule((D, W, D), Direction.DOWN))


def test_feasibility_all_wait_is_vacuously_ok():
    assert is_feasible(Schedule((W, W), Direction.DOWN))


def test_feasibility_requires_cyclic_closure():
    # An odd number of lockages cannot wrap around.
    assert not is_feasible(Schedule((D, U, W, D), Direction.DOWN))


def test_simulate_serves_on_arrival():
    inst = _inst((Direction.DOWN, 2, 1), (Direction.UP, 2, 2))
    sched = Schedule((D, U), Direction.DOWN)
    result = simulate(lambda t: arrival_at(inst, t), sched, 20)
    assert result.total_wait == 0
    assert result.n_arrivals == 20


def test_simulate_wait_then_serve():
    """Arrivals D at t = 1 mod 3 with schedule (W, D, U): the t=1 vessel
    waits one period, so the average cost per period is 1/3."""
    inst = _inst((Direction.DOWN, 3, 1))
    sched = Schedule((W, D, U), Direction.DOWN)
    result = simulate(lambda t: arrival_at(inst, t), sched, 12)
    assert result.per_period_cost[0] == 1
    assert result.avg_wait_per_period == Fraction(1, 3)


def test_simulate_detects_misaligned_action():
    with pytest.raises(InfeasibleScheduleError):
        simulate([(1, 0)], [U], 1, initial_alignment=Direction.DOWN)


def test_simulate_sequence_arrivals_past_end_are_zero():
    result = simulate([(1, 0)], [D, U, D, U], 4)
    assert result.total_wait == 0
    assert result.n_arrivals == 1


def test_simulate_action_sequence_must_cover_horizon():
    with pytest.raises(ValueError):
        simulate([(0, 0)], [D], 2)


def test_simulate_tracks_vessel_average():
    # One U vessel at t=1, served at t=2 after an initial D lockage.
    result = simulate([(0, 1)], [D, U], 2, initial_alignment=Direction.DOWN)
    assert result.total_wait == 1
    assert result.avg_wait_per_vessel == Fraction(1, 1)


def test_cyclic_average_steady_state():
    inst = _inst((Direction.DOWN, 2, 1), (Direction.UP, 2, 2))
    assert cyclic_average(inst, Schedule((D, U), Direction.DOWN)) == 0
    # Starting on the wrong phase costs 1 every period.
    assert cyclic_average(inst, Schedule((U, D), Direction.UP)) == 1


def test_schedule_json_round_trip():
    sched = Schedule((D, W, U), Direction.DOWN)
    assert schedule_from_json(schedule_to_json(sched)) == sched


def test_instance_json_round_trip():
    inst = _inst((Direction.DOWN, 2, 1), (Direction.UP, 3, 3))
    assert instance_from_json(instance_to_json(inst)) == inst


def test_action_helpers():
    assert Action.process(Direction.UP) is U
    assert U.processes is Direction.UP
    assert W.processes is None
    assert Direction.DOWN.flip() is Direction.UP
