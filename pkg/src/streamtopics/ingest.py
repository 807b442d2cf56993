"""Stream ingestion: newline-delimited records and the event-time clock.

All scheduling downstream (timeslots, communication phases, window
eviction) runs on event time taken from record timestamps, never on wall
clock, so historical streams replay reproducibly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Iterator

logger = logging.getLogger(__name__)

RECORD_KEYS = {"id", "text", "timestamp"}


class StreamError(ValueError):
    """Malformed or inconsistent input stream."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class RawRecord:
    """One stream document; the cluster label is assigned later."""

    id: str
    text: str
    timestamp: datetime


@dataclass
class EventClock:
    """Monotone clock driven by delivered record timestamps."""

    current: datetime | None = None
    epoch: datetime | None = None

    def advance(self, ts: datetime) -> None:
        if self.current is not None and ts < self.current:
            raise ValueError(f"event clock cannot move backwards: {ts} < {self.current}")
        if self.epoch is None:
            self.epoch = ts
        self.current = ts

    def elapsed_since(self, mark: datetime) -> timedelta:
        if self.current is None:
            raise ValueError("clock has not started")
        if mark > self.current:
            raise ValueError(f"mark {mark} is in the future of {self.current}")
        return self.current - mark


def elapsed_since(clock: EventClock, mark: datetime) -> timedelta:
    return clock.elapsed_since(mark)


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC 3339 timestamp to an aware UTC datetime."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    """Render an aware datetime as RFC 3339 with a Z suffix."""
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass
class StreamReader:
    """Iterates RawRecords from a file, advancing the event clock per record.

    Out-of-order timestamps are a hard error unless ``lenient`` is set, in
    which case offending records are dropped and counted. Duplicate ids are
    always an error.
    """

    path: str
    lenient: bool = False
    clock: EventClock = field(default_factory=EventClock)
    dropped: int = 0
    yielded: int = 0

    def __iter__(self) -> Iterator[RawRecord]:
        seen_ids: set[str] = set()
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                record = self._parse_line(line, line_no)
                if record.id in seen_ids:
                    raise StreamError(f"duplicate record id {record.id!r}", line_no)
                seen_ids.add(record.id)
                if self.clock.current is not None and record.timestamp < self.clock.current:
                    if self.lenient:
                        self.dropped += 1
                        logger.debug("dropped out-of-order record %s at line %d", record.id, line_no)
                        continue
                    raise StreamError(
                        f"out-of-order timestamp {format_timestamp(record.timestamp)} "
                        f"(clock at {format_timestamp(self.clock.current)})",
                        line_no,
                    )
                self.clock.advance(record.timestamp)
                self.yielded += 1
                yield record

    def _parse_line(self, line: str, line_no: int) -> RawRecord:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StreamError(f"invalid JSON: {exc.msg}", line_no) from exc
        if not isinstance(obj, dict) or set(obj) != RECORD_KEYS:
            raise StreamError(
                f"record must be an object with exactly keys id, text, timestamp; got {sorted(obj) if isinstance(obj, dict) else type(obj).__name__}",
                line_no,
            )
        if not isinstance(obj["id"], str) or not obj["id"]:
            raise StreamError("id must be a non-empty string", line_no)
        if not isinstance(obj["text"], str):
            raise StreamError("text must be a string", line_no)
        try:
            ts = parse_timestamp(obj["timestamp"])
        except (ValueError, TypeError) as exc:
            raise StreamError(f"bad timestamp {obj['timestamp']!r}: {exc}", line_no) from exc
        return RawRecord(id=obj["id"], text=obj["text"], timestamp=ts)


def open_stream(path: str, lenient: bool = False) -> StreamReader:
    return StreamReader(path=path, lenient=lenient)
