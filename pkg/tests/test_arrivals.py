import io
from datetime import date, datetime

import pytest

from locksched.arrivals import (
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
from locksched.schedule import Direction


def _parse(text: str) -> ArrivalDataset:
    return parse_arrivals(io.StringIO(text))


def test_parse_truncates_to_minute():
    ds = _parse("timestamp,direction\n2019-01-02T06:30:12,U\n")
    assert len(ds.records) == 1
    rec = ds.records[0]
    assert rec.timestamp == datetime(2019, 1, 2, 6, 30)
    assert rec.direction is Direction.UP
    assert rec.day == date(2019, 1, 2)
    assert rec.minute_of_day == 391


def test_parse_empty_file_gives_empty_dataset():
    assert _parse("timestamp,direction\n").records == ()


def test_parse_sorts_out_of_order_rows():
    ds = _parse(
        "timestamp,direction\n"
        "2019-01-02T10:00:00,D\n"
        "2019-01-02T08:00:00,U\n"
    )
    assert [r.timestamp.hour for r in ds.records] == [8, 10]


def test_parse_rejects_bad_header():
    with pytest.raises(MalformedRowError):
        _parse("time,dir\n")


def test_parse_rejects_bad_direction():
    with pytest.raises(MalformedRowError) as exc:
        _parse("timestamp,direction\n2019-01-02T06:30:00,X\n")
    assert exc.value.line_number == 2


def test_parse_rejects_bad_timestamp():
    with pytest.raises(MalformedRowError):
        _parse("timestamp,direction\nnot-a-time,D\n")


def test_parse_rejects_wrong_field_count():
    with pytest.raises(MalformedRowError):
        _parse("timestamp,direction\n2019-01-02T06:30:00,D,extra\n")


def test_serialize_round_trip():
    text = (
        "timestamp,direction\n"
        "2019-01-02T06:30:00,U\n"
        "2019-01-02T07:15:00,D\n"
    )
    ds = _parse(text)
    assert serialize_arrivals(ds) == text
    assert parse_arrivals(io.StringIO(serialize_arrivals(ds))) == ds


def test_minute_of_day_is_one_based():
    ds = _parse("timestamp,direction\n2019-01-02T00:00:00,D\n")
    assert ds.records[0].minute_of_day == 1


def test_extract_instance_prefix_selection():
    """First min(n, available) arrivals; T is the last selected minute."""
    recs = tuple(
        ArrivalRecord(datetime(2019, 1, 2, (m - 1) // 60, (m - 1) % 60), Direction.DOWN)
        for m in (12, 40, 95)
    )
    ds = ArrivalDataset(recs)
    inst = extract_instance(ds, date(2019, 1, 2), Direction.DOWN, 2)
    assert inst.arrival_minutes == (12, 40)
    assert inst.T == 40
    assert inst.n == 2


def test_extract_instance_caps_n_at_available():
    recs = (ArrivalRecord(datetime(2019, 1, 2, 0, 11), Direction.DOWN),)
    inst = extract_instance(ArrivalDataset(recs), date(2019, 1, 2), Direction.DOWN, 5)
    assert inst.n == 1


def test_extract_instance_missing_direction_errors():
    recs = (ArrivalRecord(datetime(2019, 1, 2, 0, 11), Direction.DOWN),)
    with pytest.raises(NoArrivalsError):
        extract_instance(ArrivalDataset(recs), date(2019, 1, 2), Direction.UP, 1)


def test_matching_instance_validates():
    with pytest.raises(ValueError):
        MatchingInstance(arrival_minutes=(5, 3), T=5, n=2)
    with pytest.raises(ValueError):
        MatchingInstance(arrival_minutes=(1, 2), T=5, n=3)
    with pytest.raises(ValueError):
        MatchingInstance(arrival_minutes=(0, 2), T=5, n=2)


def _day_dataset(minutes_down, minutes_up=()):
    recs = [
        ArrivalRecord(datetime(2019, 1, 2, (m - 1) // 60, (m - 1) % 60), d)
        for ms, d in ((minutes_down, Direction.DOWN), (minutes_up, Direction.UP))
        for m in ms
    ]
    return ArrivalDataset(tuple(recs))


def test_bucket_minute_to_period_ceiling():
    ds = _day_dataset([1, 21, 22])
    counts = bucket_to_periods(ds, date(2019, 1, 2), 21, 3)
    assert counts == [(2, 0), (1, 0), (0, 0)]


def test_bucket_aggregates_duplicates():
    ds = _day_dataset([5, 5, 30])
    counts = bucket_to_periods(ds, date(2019, 1, 2), 21, 2)
    assert counts == [(2, 0), (1, 0)]


def test_bucket_drops_beyond_horizon():
    ds = _day_dataset([100])
    assert bucket_to_periods(ds, date(2019, 1, 2), 21, 2) == [(0, 0), (0, 0)]
