"""Periodic lock scheduling: stream fitting, optimal schedules, policy evaluation."""

from .arrivals import (
    ArrivalDataset,
    ArrivalRecord,
    MalformedRowError,
    MatchingInstance,
    NoArrivalsError,
    bucket_to_periods,
    extract_instance,
    parse_arrivals,
    serialize_arrivals,
)
from .dp import (
    CANONICAL,
    PAPER_LITERAL,
    LockState,
    OptimalResult,
    PeriodCapExceededError,
    brute_force_optimal,
    predecessors,
    solve,
    transition_cost,
)
from .matching import (
    CountMismatchError,
    MatchingSolution,
    Stream,
    StreamSet,
    anchored_streams,
    assignment_cost,
    best_fit,
    oracle_min_cost_bijection,
    solve_matching,
)
from .policies import PolicyRun, adv_fifo, alternating, fifo, realized_periodic
from .rolling import (
    Chunk,
    ChunkRequest,
    GeneratedPlan,
    default_window,
    generate,
    next_chunk,
    windowed_optimum,
)
from .schedule import (
    Action,
    Direction,
    InfeasibleScheduleError,
    PeriodicInstance,
    Schedule,
    SimulationResult,
    StreamSpec,
    arrival_at,
    cyclic_average,
    is_feasible,
    lcm_period,
    simulate,
)
from .two_stream import (
    LambdaOneError,
    TwoStreamParams,
    closed_form_action,
    closed_form_schedule,
    hyper_period,
    lambda_one_schedule,
    lower_bound,
)

__version__ = "1.0.0"

__all__ = [
    "Action",
    "ArrivalDataset",
    "ArrivalRecord",
    "CANONICAL",
    "Chunk",
    "ChunkRequest",
    "CountMismatchError",
    "Direction",
    "GeneratedPlan",
    "InfeasibleScheduleError",
    "LambdaOneError",
    "LockState",
    "MalformedRowError",
    "MatchingInstance",
    "MatchingSolution",
    "NoArrivalsError",
    "OptimalResult",
    "PAPER_LITERAL",
    "PeriodCapExceededError",
    "PeriodicInstance",
    "PolicyRun",
    "Schedule",
    "SimulationResult",
    "Stream",
    "StreamSet",
    "StreamSpec",
    "TwoStreamParams",
    "adv_fifo",
    "alternating",
    "anchored_streams",
    "arrival_at",
    "assignment_cost",
    "best_fit",
    "brute_force_optimal",
    "bucket_to_periods",
    "closed_form_action",
    "closed_form_schedule",
    "cyclic_average",
    "default_window",
    "extract_instance",
    "fifo",
    "generate",
    "hyper_period",
    "is_feasible",
    "lambda_one_schedule",
    "lcm_period",
    "lower_bound",
    "next_chunk",
    "oracle_min_cost_bijection",
    "parse_arrivals",
    "predecessors",
    "realized_periodic",
    "serialize_arrivals",
    "simulate",
    "solve",
    "solve_matching",
    "transition_cost",
    "windowed_optimum",
]
