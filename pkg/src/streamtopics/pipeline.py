"""Run orchestration: stream -> engine -> snapshot/stats/manifest files.

The manifest captures everything needed to reproduce a run bit-exactly
with the hashed embedder: the fully resolved config, every CLI-visible
option, per-phase counters, and the event-time span actually consumed.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from streamtopics import __version__, preprocess, topics
from streamtopics.config import Config
from streamtopics.core import Coordinator, DataPoint
from streamtopics.ingest import RawRecord, StreamReader, format_timestamp

logger = logging.getLogger(__name__)

_CHUNK = 128


@dataclass
class RunManifest:
    version: str
    config: dict
    args: dict
    seed: int
    start_event_time: str | None = None
    end_event_time: str | None = None
    records_processed: int = 0
    records_dropped: int = 0
    snapshots_written: int = 0
    counters: dict = field(default_factory=dict)
    phases: list = field(default_factory=list)
    incomplete: bool = True

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _chunks(iterable: Iterable, size: int) -> Iterator[list]:
    chunk = []
    for item in iterable:
        chunk.append(item)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _points(records: Iterable[RawRecord], provider, threads: int) -> Iterator[DataPoint]:
    """Preprocess and embed ahead of assignment; order is always preserved."""

    def prepare(record: RawRecord) -> tuple[RawRecord, list[str], str]:
        return record, preprocess.tokenize(record.text), preprocess.strip_urls(record.text)

    if threads <= 1:
        for record in records:
            record, tokens, stripped = prepare(record)
            yield DataPoint(record.id, tokens, provider.embed(tokens, stripped), record.timestamp)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for chunk in _chunks(records, _CHUNK):
            prepared = list(pool.map(prepare, chunk))
            vectors = provider.embed_many([(tokens, stripped) for _, tokens, stripped in prepared])
            for (record, tokens, _), vector in zip(prepared, vectors):
                yield DataPoint(record.id, tokens, vector, record.timestamp)


def run_stream(
    config: Config,
    reader: StreamReader,
    provider,
    output_path: str,
    stats_path: str | None,
    manifest_path: str | None,
    args: dict | None = None,
    stopwords: set[str] | None = None,
    threads: int = 1,
) -> RunManifest:
    """Drive the full run; the manifest is written even when the run fails."""
    coordinator = Coordinator(config, provider, stopwords=stopwords, threads=threads)
    manifest = RunManifest(
        version=__version__,
        config=config.to_dict(),
        args=dict(args or {}),
        seed=config.seed,
    )
    try:
        with open(output_path, "w", encoding="utf-8") as out:
            for point in _points(iter(reader), provider, threads):
                for snapshot in coordinator.step_point(point):
                    topics.write_snapshot(out, snapshot)
                    manifest.snapshots_written += 1
            for snapshot in coordinator.finalize():
                topics.write_snapshot(out, snapshot)
                manifest.snapshots_written += 1
        if stats_path:
            topics.write_keyword_stats(stats_path, coordinator.keyword_stats)
        manifest.incomplete = False
    finally:
        manifest.records_processed = reader.yielded
        manifest.records_dropped = reader.dropped
        if coordinator.clock.epoch is not None:
            manifest.start_event_time = format_timestamp(coordinator.clock.epoch)
            manifest.end_event_time = format_timestamp(coordinator.clock.current)
        manifest.counters = dict(coordinator.counters)
        manifest.phases = [report.to_dict() for report in coordinator.phase_reports]
        if manifest_path:
            manifest.write(manifest_path)
        if manifest.incomplete:
            logger.error("run aborted; partial outputs flagged incomplete in manifest")
    return manifest
