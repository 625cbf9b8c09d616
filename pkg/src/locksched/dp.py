"""Optimal periodic schedules by dynamic programming over lock states.

The search space is the cyclic single-wait schedules of period T = 8 * Lambda
(Lambda = hyper-period of the arrivals).  A lock state records the current
alignment plus the 0/1 wait counters of both sides since their last service,
giving 8 states; the table is solved once per candidate initial state with a
cyclic wrap-around term.

Two transition-cost conventions are provided.  The canonical convention
weights an arrival i periods before its service by i (so arrivals served in
their own period cost nothing), which matches the per-period queue-length
recurrence exactly; reconstructed schedules are verified against simulation.
The paper-literal convention shifts the service window back by one period and
is kept for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .schedule import (
    Action,
    Direction,
    PeriodicInstance,
    Schedule,
    arrival_at,
    cyclic_average,
    lcm_period,
)

CANONICAL = "canonical"
PAPER_LITERAL = "paper-literal"
_MODES = (CANONICAL, PAPER_LITERAL)

DEFAULT_PERIOD_CAP = 1_000_000


class PeriodCapExceededError(ValueError):
    def __init__(self, required: int, cap: int):
        super().__init__(
            f"DP horizon 8*lcm = {required} exceeds the cap of {cap} periods; "
            "use the rolling-horizon generator instead"
        )
        self.required = required
        self.cap = cap


class LockState(NamedTuple):
    alignment: Direction
    own_waits: int  # waits on the current side since the last switch
    other_waits: int  # waits on the opposite side during its last visit

    def __str__(self) -> str:
        return f"({self.alignment.value},{self.own_waits},{self.other_waits})"


ALL_STATES: Tuple[LockState, ...] = tuple(
    LockState(alignment, own, other)
    for alignment in (Direction.DOWN, Direction.UP)
    for own in (0, 1)
    for other in (0, 1)
)
_STATE_INDEX: Dict[LockState, int] = {s: i for i, s in enumerate(ALL_STATES)}

_INF = float("inf")


def predecessors(state: LockState) -> Tuple[LockState, ...]:
    """States from which ``state`` is reachable in one period.

    A state with own_waits = 0 was just switched into: the predecessor sat on
    the opposite side, its own wait counter becomes this state's other_waits,
    and its other_waits is unconstrained.  Otherwise the step was a single
    wait.
    """
    if state.own_waits == 0:
        prev_alignment = state.alignment.flip()
        return (
            LockState(prev_alignment, state.other_waits, 0),
            LockState(prev_alignment, state.other_waits, 1),
        )
    return (LockState(state.alignment, state.own_waits - 1, state.other_waits),)


class _ArrivalTable:
    """Cyclic per-direction arrival counts with period Lambda."""

    def __init__(self, instance: PeriodicInstance):
        self.period = lcm_period(instance)
        pattern = [arrival_at(instance, t) for t in range(1, self.period + 1)]
        self.a_d = [p[0] for p in pattern]
        self.a_u = [p[1] for p in pattern]

    def get(self, direction: Direction, t: int) -> int:
        idx = (t - 1) % self.period
        return self.a_d[idx] if direction is Direction.DOWN else self.a_u[idx]


def _switch_cost(table: _ArrivalTable, side: Direction, t: int, window: int, mode: str) -> int:
    if mode == CANONICAL:
        return sum(i * table.get(side, t - i) for i in range(window))
    return sum((i - 1) * table.get(side, t - i) for i in range(1, window + 1))


def transition_cost(
    instance: PeriodicInstance, t: int, prev: LockState, state: LockState, mode: str = CANONICAL
) -> int:
    """Waiting cost charged when moving from ``prev`` to ``state`` at period t."""
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if prev not in predecessors(state):
        raise ValueError(f"{prev} is not a predecessor of {state}")
    if state.own_waits > 0:
        return 0
    window = 2 + prev.own_waits + prev.other_waits
    return _switch_cost(_ArrivalTable(instance), prev.alignment, t, window, mode)


@dataclass(frozen=True)
class OptimalResult:
    avg_cost: Fraction
    total_cost: int
    period: int
    schedule: Schedule
    initial_state: LockState
    mode: str


def _transition_lists(table: _ArrivalTable, mode: str):
    """Per t-phase transitions: trans[phase] = [(state_id, pred_id, cost), ...].

    Cost depends on t only through t mod Lambda; phases index t-1 mod Lambda.
    """
    lam = table.period
    trans: List[List[Tuple[int, int, int]]] = []
    for phase in range(lam):
        t = phase + 1
        entries = []
        for s_id, state in enumerate(ALL_STATES):
            for prev in predecessors(state):
                if state.own_waits > 0:
                    cost = 0
                else:
                    window = 2 + prev.own_waits + prev.other_waits
                    cost = _switch_cost(table, prev.alignment, t, window, mode)
                entries.append((s_id, _STATE_INDEX[prev], cost))
        trans.append(entries)
    return trans


def _run_lane(
    trans, T: int, lam: int, start_id: int, keep_back: bool
) -> Tuple[List[float], Optional[List[List[int]]]]:
    values: List[float] = [_INF] * 8
    values[start_id] = 0
    back: Optional[List[List[int]]] = [] if keep_back else None
    for t in range(2, T + 1):
        entries = trans[(t - 1) % lam]
        new = [_INF] * 8
        choice = [-1] * 8
        for s_id, p_id, cost in entries:
            v = values[p_id]
            if v == _INF:
                continue
            v = v + cost
            if v < new[s_id]:
                new[s_id] = v
                choice[s_id] = p_id
        values = new
        if back is not None:
            back.append(choice)
    return values, back


def solve(
    instance: PeriodicInstance, mode: str = CANONICAL, period_cap: int = DEFAULT_PERIOD_CAP
) -> OptimalResult:
    """Minimum long-run average waiting time and an achieving cyclic schedule."""
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    table = _ArrivalTable(instance)
    T = 8 * table.period
    if T > period_cap:
        raise PeriodCapExceededError(T, period_cap)
    trans = _transition_lists(table, mode)
    lam = table.period

    # Wrap-around costs of the period-1 transition S -> S0.
    wrap: Dict[Tuple[int, int], int] = {}
    for s0_id, s0 in enumerate(ALL_STATES):
        for prev in predecessors(s0):
            if s0.own_waits > 0:
                cost = 0
            else:
                window = 2 + prev.own_waits + prev.other_waits
                cost = _switch_cost(table, prev.alignment, 1, window, mode)
            wrap[(_STATE_INDEX[prev], s0_id)] = cost

    best: Optional[Tuple[int, int, int]] = None  # (total, s0_id, s_final_id)
    for s0_id in range(8):
        values, _ = _run_lane(trans, T, lam, s0_id, keep_back=False)
        for prev in predecessors(ALL_STATES[s0_id]):
            p_id = _STATE_INDEX[prev]
            v = values[p_id]
            if v == _INF:
                continue
            total = int(v) + wrap[(p_id, s0_id)]
            if best is None or total < best[0]:
                best = (total, s0_id, p_id)
    assert best is not None, "DP found no feasible cyclic schedule"
    total, s0_id, final_id = best

    # Re-run the winning lane with backpointers and rebuild the state path.
    values, back = _run_lane(trans, T, lam, s0_id, keep_back=True)
    assert back is not None
    path_ids = [0] * T
    path_ids[T - 1] = final_id
    for t in range(T, 1, -1):
        path_ids[t - 2] = back[t - 2][path_ids[t - 1]]
    assert path_ids[0] == s0_id

    states = [ALL_STATES[i] for i in path_ids]
    actions: List[Action] = []
    for t in range(1, T + 1):
        state = states[t - 1]
        prev = states[t - 2]  # t=1 wraps to states[T-1], the cyclic predecessor
        if state.own_waits > 0:
            actions.append(Action.WAIT)
        else:
            actions.append(Action.process(prev.alignment))
    first = actions[0]
    initial_alignment = first.processes if first.processes is not None else states[0].alignment
    schedule = Schedule(actions=tuple(actions), initial_alignment=initial_alignment)

    avg = Fraction(total, T)
    if mode == CANONICAL:
        simulated = cyclic_average(instance, schedule)
        if simulated != avg:
            raise AssertionError(
                f"reconstructed schedule simulates to {simulated}, DP value is {avg}"
            )
    return OptimalResult(
        avg_cost=avg,
        total_cost=total,
        period=T,
        schedule=schedule,
        initial_state=ALL_STATES[s0_id],
        mode=mode,
    )


class BruteForcePeriodError(ValueError):
    """Requested period too large for exhaustive enumeration."""


def brute_force_optimal(instance: PeriodicInstance, period: int) -> Fraction:
    """Exact minimum steady-state average cost over all feasible cyclic
    action sequences of the given period, by exhaustive enumeration.

    Feasible sequences have an even number of processing actions alternating
    between the sides; each candidate is simulated for two joint cycles and
    the second cycle is measured.  Independent of the DP (no single-wait
    restriction: extra waits are enumerated freely).
    """
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    if period > 14:
        raise BruteForcePeriodError(f"period {period} too large for 2^p enumeration")
    table = _ArrivalTable(instance)
    lam = table.period
    a_d, a_u = table.a_d, table.a_u
    any_arrivals = any(a_d) or any(a_u)
    cycle = math.lcm(lam, period)
    horizon = 2 * cycle

    best: Optional[Fraction] = None
    if not any_arrivals:
        return Fraction(0)
    for size in range(2, period + 1, 2):
        for positions in combinations(range(period), size):
            for first_dir in (Direction.DOWN, Direction.UP):
                serve = {}
                d = first_dir
                for pos in positions:
                    serve[pos] = d
                    d = d.flip()
                total = 0
                n_d = n_u = 0
                for t in range(1, horizon + 1):
                    idx = (t - 1) % lam
                    n_d += a_d[idx]
                    n_u += a_u[idx]
                    side = serve.get((t - 1) % period)
                    if side is Direction.DOWN:
                        n_d = 0
                    elif side is Direction.UP:
                        n_u = 0
                    if t > cycle:
                        total += n_d + n_u
                avg = Fraction(total, cycle)
                if best is None or avg < best:
                    best = avg
    if best is None:
        raise BruteForcePeriodError(
            f"no feasible processing sequence of period {period} for a non-empty pattern"
        )
    return best


def result_to_json_dict(result: OptimalResult) -> dict:
    return {
        "mode": result.mode,
        "avg_cost": {"num": result.avg_cost.numerator, "den": result.avg_cost.denominator},
        "total_cost": result.total_cost,
        "period": result.period,
        "initial_state": {
            "alignment": result.initial_state.alignment.value,
            "own_waits": result.initial_state.own_waits,
            "other_waits": result.initial_state.other_waits,
        },
        "schedule": {
            "period": result.schedule.period,
            "initial_alignment": result.schedule.initial_alignment.value,
            "actions": [a.value for a in result.schedule.actions],
        },
    }
