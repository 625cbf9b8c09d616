"""Exact L1 fitting of anchored periodic streams to irregular arrivals.

All arithmetic is exact: periodicities are rationals T/n_i, so costs are
Fractions and ties are reproducible.  The solver enumerates vessel-count
compositions and anchor vessels, scoring each candidate with the
order-preserving (sorted-to-sorted) assignment, which is optimal for a fixed
stream set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, List, Optional, Sequence, Tuple

import json

from .arrivals import MatchingInstance
from .schedule import Direction


class CountMismatchError(ValueError):
    """Stream counts do not sum to the instance size."""


class OracleSizeError(ValueError):
    """Instance too large for the requested oracle mode."""


@dataclass(frozen=True)
class Stream:
    """One fitted stream: matching points at mu, mu+lam, ..., mu+(count-1)*lam."""

    mu: Fraction
    lam: Fraction
    count: int

    def __post_init__(self) -> None:
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if not 0 < self.mu <= self.lam:
            raise ValueError(f"mu must lie in (0, lambda], got mu={self.mu}, lambda={self.lam}")
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass(frozen=True)
class StreamSet:
    streams: Tuple[Stream, ...]
    T: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "streams", tuple(self.streams))
        for s in self.streams:
            if s.count * s.lam != self.T:
                raise ValueError(f"count*lambda must equal T: {s.count}*{s.lam} != {self.T}")

    @property
    def n(self) -> int:
        return sum(s.count for s in self.streams)


@dataclass(frozen=True)
class MatchingSolution:
    streams: StreamSet
    # assignment[j] = (stream index, occurrence index) matched to the j-th arrival
    assignment: Tuple[Tuple[int, int], ...]
    cost: Fraction


def matching_points(streams: StreamSet) -> List[Tuple[Fraction, int]]:
    """All (time, stream index) matching points, sorted; a true multiset."""
    points = []
    for i, s in enumerate(streams.streams):
        points.extend((s.mu + ell * s.lam, i) for ell in range(s.count))
    points.sort()
    return points


def assignment_cost(instance: MatchingInstance, streams: StreamSet) -> MatchingSolution:
    """Order-preserving assignment: i-th point to i-th arrival.

    This is a minimum-cost bijection for the fixed stream set (an exchange
    argument on the L1 deviations).
    """
    if streams.n != instance.n:
        raise CountMismatchError(f"streams provide {streams.n} points for {instance.n} arrivals")
    points = matching_points(streams)
    occurrence = [0] * len(streams.streams)
    assignment = []
    cost = Fraction(0)
    for arrival, (time, stream_idx) in zip(instance.arrival_minutes, points):
        cost += abs(time - arrival)
        assignment.append((stream_idx, occurrence[stream_idx]))
        occurrence[stream_idx] += 1
    return MatchingSolution(streams=streams, assignment=tuple(assignment), cost=cost)


def anchored_streams(
    instance: MatchingInstance, counts: Sequence[int], anchors: Sequence[int]
) -> StreamSet:
    """Build streams with lam_i = T/counts[i], each anchored at an arrival.

    The offset places a matching point exactly on the anchor arrival:
    mu_i = t(s_i) - j*lam_i for the largest multiple j*lam_i strictly below
    t(s_i), which keeps mu_i in (0, lam_i].
    """
    if sum(counts) != instance.n:
        raise CountMismatchError(f"counts sum to {sum(counts)}, expected {instance.n}")
    streams = []
    for count, anchor in zip(counts, anchors):
        lam = Fraction(instance.T, count)
        t_anchor = instance.arrival_minutes[anchor]
        j = math.ceil(Fraction(t_anchor) / lam) - 1  # largest j with j*lam < t_anchor
        if j < 0:
            j = 0
        streams.append(Stream(mu=t_anchor - j * lam, lam=lam, count=count))
    return StreamSet(streams=tuple(streams), T=instance.T)


def _compositions_nondecreasing(total: int, parts: int, minimum: int = 1) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total // parts + 1):
        for rest in _compositions_nondecreasing(total - first, parts - 1, first):
            yield (first,) + rest


def _compositions_all(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions_all(total - first, parts - 1):
            yield (first,) + rest


def _anchor_tuples(counts: Tuple[int, ...], n: int, pruned: bool) -> Iterator[Tuple[int, ...]]:
    # For equal-count streams the candidate is symmetric under swapping the
    # streams, so anchors within an equal-count run are taken non-decreasing.
    def rec(i: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if i == len(counts):
            yield prefix
            return
        start = 0
        if pruned and i > 0 and counts[i] == counts[i - 1]:
            start = prefix[-1]
        for a in range(start, n):
            yield from rec(i + 1, prefix + (a,))

    yield from rec(0, ())


def solve_matching(instance: MatchingInstance, k: int, prune: bool = True) -> MatchingSolution:
    """Optimal k-stream fit by enumeration of compositions and anchors.

    With ``prune`` the search visits only non-decreasing count tuples and
    multiplicity-aware anchor tuples; the unpruned search is kept for
    equivalence testing.  Ties break on the lexicographically smallest
    (counts, anchors) visited.
    """
    n = instance.n
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    comps = _compositions_nondecreasing(n, k) if prune else _compositions_all(n, k)
    best: Optional[MatchingSolution] = None
    for counts in comps:
        for anchors in _anchor_tuples(counts, n, prune):
            streams = anchored_streams(instance, counts, anchors)
            solution = assignment_cost(instance, streams)
            if best is None or solution.cost < best.cost:
                best = solution
    assert best is not None
    return best


def best_fit(instance: MatchingInstance, k: int, prune: bool = True) -> MatchingSolution:
    """Minimum-cost fit using at most k streams.

    The exactly-k problem is not monotone in k (a perfectly periodic
    3-arrival day fits one stream at cost 0 but any two-stream decomposition
    pays for the mismatched periodicities), so reported fit quality uses the
    non-increasing envelope over stream budgets 1..k.
    """
    n = instance.n
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    best: Optional[MatchingSolution] = None
    for j in range(1, min(k, n) + 1):
        solution = solve_matching(instance, j, prune)
        if best is None or solution.cost < best.cost:
            best = solution
    assert best is not None
    return best


def oracle_min_cost_bijection(
    instance: MatchingInstance, streams: StreamSet, mode: str = "auto"
) -> Fraction:
    """Exact minimum L1 cost over all point-to-arrival bijections.

    Independent of the sorted assignment: either factorial enumeration
    (n <= 9) or an exact integer-scaled Hungarian assignment (n <= 50).
    """
    if streams.n != instance.n:
        raise CountMismatchError(f"streams provide {streams.n} points for {instance.n} arrivals")
    n = instance.n
    times = [t for t, _ in matching_points(streams)]
    if mode == "auto":
        mode = "factorial" if n <= 9 else "hungarian"
    if mode == "factorial":
        if n > 9:
            raise OracleSizeError(f"factorial oracle limited to n <= 9, got {n}")
        best = None
        for perm in permutations(range(n)):
            cost = sum(abs(times[perm[j]] - instance.arrival_minutes[j]) for j in range(n))
            if best is None or cost < best:
                best = cost
        return Fraction(best)
    if mode == "hungarian":
        if n > 50:
            raise OracleSizeError(f"hungarian oracle limited to n <= 50, got {n}")
        from scipy.optimize import linear_sum_assignment
        import numpy as np

        den = math.lcm(*(t.denominator for t in times))
        scaled = [int(t * den) for t in times]
        cost_matrix = np.array(
            [[abs(p - a * den) for p in scaled] for a in instance.arrival_minutes], dtype=np.int64
        )
        rows, cols = linear_sum_assignment(cost_matrix)
        return Fraction(int(cost_matrix[rows, cols].sum()), den)
    raise ValueError(f"unknown oracle mode {mode!r}")


def stream_set_to_json(streams: StreamSet, directions: Optional[Sequence[Direction]] = None) -> str:
    entries = []
    for i, s in enumerate(streams.streams):
        entry = {
            "mu": {"num": s.mu.numerator, "den": s.mu.denominator},
            "lambda": {"num": s.lam.numerator, "den": s.lam.denominator},
            "count": s.count,
        }
        if directions is not None:
            entry["direction"] = directions[i].value
        entries.append(entry)
    return json.dumps({"T": streams.T, "streams": entries})


def stream_set_from_json(text: str) -> Tuple[StreamSet, Optional[List[Direction]]]:
    data = json.loads(text)
    streams = []
    directions: Optional[List[Direction]] = [] if data["streams"] and "direction" in data["streams"][0] else None
    for entry in data["streams"]:
        streams.append(
            Stream(
                mu=Fraction(entry["mu"]["num"], entry["mu"]["den"]),
                lam=Fraction(entry["lambda"]["num"], entry["lambda"]["den"]),
                count=int(entry["count"]),
            )
        )
        if directions is not None:
            directions.append(Direction(entry["direction"]))
    return StreamSet(streams=tuple(streams), T=int(data["T"])), directions
