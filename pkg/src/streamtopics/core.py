"""Coordinator/agent clustering engine.

One Agent is one cluster: its members inside the sliding window, a running
vector sum for the incremental centroid, and a scalar weight. The
Coordinator is the single decision point: it buffers the bootstrap batch,
assigns each point to the nearest agent (or spawns a new one), runs the
periodic communication phase (window eviction, outlier return and
redistribution, weight fading), and emits a snapshot of the top topics at
every timeslot boundary.

Event time drives everything; wall clock is never consulted. With a fixed
seed and the hashed embedder the whole run is deterministic, independent
of the worker count used for the per-agent phase scans.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from streamtopics import kernels, preprocess, topics
from streamtopics.config import Config
from streamtopics.embedding import is_empty, normalized
from streamtopics.ingest import EventClock, RawRecord
from streamtopics.topics import TimeslotSnapshot

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class DataPoint:
    """One stream document after preprocessing and embedding."""

    id: str
    tokens: list[str]
    vector: np.ndarray
    timestamp: datetime
    subject: int | None = None


class Agent:
    """One cluster: ordered members, incremental centroid, scalar weight."""

    def __init__(self, agent_id: int, dim: int, created_at: datetime):
        self.agent_id = agent_id
        self.created_at = created_at
        self.members: list[DataPoint] = []
        self.weight = 0.0
        self._sum = np.zeros(dim, dtype=np.float64)
        self._vec_count = 0
        self._centroid: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def add(self, point: DataPoint) -> None:
        """Append a member; empty-text vectors never touch the centroid."""
        self.members.append(point)
        self.weight += 1.0
        if not is_empty(point.vector):
            self._sum += point.vector
            self._vec_count += 1
            self._centroid = None
        point.subject = self.agent_id

    def centroid(self) -> np.ndarray:
        """Normalized mean of member vectors; empty vector when degenerate."""
        if self._centroid is None:
            if self._vec_count == 0:
                self._centroid = np.zeros_like(self._sum)
            else:
                self._centroid = normalized(self._sum / self._vec_count)
        return self._centroid

    def _rebuild(self, members: list[DataPoint]) -> None:
        # Recompute the sum serially in member order so the incremental
        # state stays bit-identical to a from-scratch recomputation.
        self.members = members
        self._sum = np.zeros_like(self._sum)
        self._vec_count = 0
        for m in members:
            if not is_empty(m.vector):
                self._sum += m.vector
                self._vec_count += 1
        self._centroid = None

    def evict_older_than(self, horizon: datetime) -> list[DataPoint]:
        """Drop members with timestamps before the window horizon."""
        evicted = [m for m in self.members if m.timestamp < horizon]
        if evicted:
            self._rebuild([m for m in self.members if m.timestamp >= horizon])
        return evicted

    def find_outliers(self, threshold: float) -> list[DataPoint]:
        """Remove and return members farther than threshold from the current centroid.

        The centroid is snapshotted once at scan start and not updated as
        members leave; the agent weight is not reduced. Empty-text members
        have no defined distance and are never outliers.
        """
        center = self.centroid()
        if is_empty(center):
            return []
        scored = [m for m in self.members if not is_empty(m.vector)]
        if not scored:
            return []
        dists = kernels.distances_to(np.stack([m.vector for m in scored]), center)
        outliers = {id(m) for m, d in zip(scored, dists) if d > threshold}
        if not outliers:
            return []
        out = [m for m in self.members if id(m) in outliers]
        self._rebuild([m for m in self.members if id(m) not in outliers])
        for m in out:
            m.subject = None
        return out


@dataclass
class PhaseReport:
    """Counts from one communication phase."""

    at: datetime
    evicted: int = 0
    outliers_moved: int = 0
    agents_created: int = 0
    agents_faded: int = 0

    def to_dict(self) -> dict:
        from streamtopics.ingest import format_timestamp

        return {
            "at": format_timestamp(self.at),
            "evicted": self.evicted,
            "outliers_moved": self.outliers_moved,
            "agents_created": self.agents_created,
            "agents_faded": self.agents_faded,
        }


class Coordinator:
    """Single decision point driving assignment, communication, and snapshots.

    ``threads`` only parallelizes the per-agent eviction/outlier scans
    inside a communication phase (with a barrier before redistribution);
    results never depend on the worker count.
    """

    def __init__(self, config: Config, provider, stopwords: set[str] | None = None, threads: int = 1):
        config.validate()
        self.config = config
        self.provider = provider
        self.stopwords = stopwords or set()
        self.threads = max(1, threads)
        self.agents: dict[int, Agent] = {}
        self.next_agent_id = 1
        self.rng = random.Random(config.seed)
        self.clock = EventClock()
        self.counters: Counter = Counter()
        self.phase_reports: list[PhaseReport] = []
        self.keyword_stats: Counter = Counter()
        self.assign_listener = None
        self.trace_assigns = False
        self.assign_trace: list[tuple[str, int, bool]] = []
        self._pending: list[DataPoint] = []
        self._bootstrapped = False
        self._last_comm: datetime | None = None
        self._slot = 0
        self._in_phase = False
        self._finalized = False

    @property
    def dim(self) -> int:
        return self.provider.dim

    def live_agents(self) -> list[Agent]:
        return [self.agents[aid] for aid in sorted(self.agents)]

    def _spawn(self, created_at: datetime) -> Agent:
        agent = Agent(self.next_agent_id, self.dim, created_at)
        self.agents[agent.agent_id] = agent
        self.next_agent_id += 1
        return agent

    def bootstrap(self, first_points: list[DataPoint]) -> None:
        """Distribute the first init_agents*init_agent_cap points by seeded shuffle."""
        expected = self.config.bootstrap_count
        if self.agents:
            raise RuntimeError("bootstrap must run before any agent exists")
        if len(first_points) != expected:
            raise ValueError(f"bootstrap needs exactly {expected} points, got {len(first_points)}")
        shuffled = list(first_points)
        self.rng.shuffle(shuffled)
        cap = self.config.init_agent_cap
        for i in range(self.config.init_agents):
            agent = self._spawn(shuffled[i * cap].timestamp)
            for point in shuffled[i * cap : (i + 1) * cap]:
                agent.add(point)
        self._bootstrapped = True
        logger.info("bootstrapped %d agents with %d points each", self.config.init_agents, cap)

    def assign(self, point: DataPoint) -> int:
        """Place a point: nearest agent within assign_radius, else a new agent.

        Empty-text points go to the most recently created agent without any
        similarity computation (and never touch centroids). Ties resolve to
        the lowest agent id.
        """
        if self.assign_listener is not None:
            self.assign_listener(self, point)
        self.counters["assignments"] += 1
        if is_empty(point.vector):
            self.counters["empty_routed"] += 1
            if self.agents:
                target, created = self.agents[max(self.agents)], False
            else:
                target, created = self._spawn(point.timestamp), True
            target.add(point)
        else:
            candidates = [a for a in self.live_agents() if not is_empty(a.centroid())]
            target = None
            if candidates:
                matrix = np.stack([a.centroid() for a in candidates])
                idx, dist = kernels.nearest_centroid(point.vector, matrix)
                if dist <= self.config.assign_radius:
                    target = candidates[idx]
            created = target is None
            if created:
                target = self._spawn(point.timestamp)
                self.counters["agents_spawned"] += 1
            target.add(point)
        if self.trace_assigns:
            self.assign_trace.append((point.id, target.agent_id, created))
        return target.agent_id

    def communicate(self) -> PhaseReport:
        """One communication phase: evict, collect outliers, redistribute, fade.

        Steps run in order: (1) window eviction on every agent, (2) outlier
        scan against phase-start centroids, (3) redistribution of collected
        outliers through assign() in (timestamp, id) order — new agents are
        allowed and immediately become targets, (4) weight fading and
        deletion below the weight threshold, (5) deletion of empty agents.
        """
        if self.clock.current is None:
            raise RuntimeError("communicate before any record")
        if self._in_phase:
            raise RuntimeError("communication phase already in flight")
        self._in_phase = True
        try:
            report = PhaseReport(at=self.clock.current)
            horizon = self.clock.current - self.config.slid_win_int
            threshold = self.config.outlier_threshold

            def scan(agent: Agent) -> tuple[int, list[DataPoint]]:
                evicted = agent.evict_older_than(horizon)
                return len(evicted), agent.find_outliers(threshold)

            ordered = self.live_agents()
            if self.threads > 1 and len(ordered) > 1:
                with ThreadPoolExecutor(max_workers=self.threads) as pool:
                    results = list(pool.map(scan, ordered))
            else:
                results = [scan(a) for a in ordered]

            collected: list[DataPoint] = []
            for evicted_count, outliers in results:
                report.evicted += evicted_count
                collected.extend(outliers)
            collected.sort(key=lambda p: (p.timestamp, p.id))
            report.outliers_moved = len(collected)

            before = self.next_agent_id
            for point in collected:
                self.assign(point)
                self.counters["redistributed"] += 1
            report.agents_created = self.next_agent_id - before

            keep_rate = 1.0 - self.config.agent_fading_rate
            min_weight = self.config.del_agent_weight_threshold
            faded = []
            for aid in sorted(self.agents):
                agent = self.agents[aid]
                agent.weight *= keep_rate
                if agent.weight < min_weight:
                    faded.append(aid)
            for aid in faded:
                del self.agents[aid]
            report.agents_faded = len(faded)

            empty = [aid for aid, a in self.agents.items() if a.size == 0]
            for aid in empty:
                del self.agents[aid]

            self.counters["comm_phases"] += 1
            self.counters["evicted"] += report.evicted
            self.counters["outliers_moved"] += report.outliers_moved
            self.counters["agents_faded"] += report.agents_faded
            self.counters["empty_agents_deleted"] += len(empty)
            self.phase_reports.append(report)
            self._last_comm = self.clock.current
            return report
        finally:
            self._in_phase = False

    def step(self, record: RawRecord) -> list[TimeslotSnapshot]:
        """Preprocess, embed, and feed one record through the engine."""
        tokens = preprocess.tokenize(record.text)
        vector = self.provider.embed(tokens, preprocess.strip_urls(record.text))
        return self.step_point(DataPoint(record.id, tokens, vector, record.timestamp))

    def step_point(self, point: DataPoint) -> list[TimeslotSnapshot]:
        """Advance the clock, run due phase/snapshot boundaries, place the point.

        A due communication phase runs first, then snapshots for every
        completed timeslot are emitted, and only then is the new slot's
        point processed — snapshots never include it.
        """
        first = self.clock.epoch is None
        self.clock.advance(point.timestamp)
        snapshots: list[TimeslotSnapshot] = []
        if first:
            self._last_comm = self.clock.epoch
        else:
            if self.clock.current - self._last_comm >= self.config.comm_int:
                self.communicate()
            new_slot = self._slot_of(self.clock.current)
            while self._slot < new_slot:
                snapshots.append(self._snapshot_slot(self._slot))
                self._slot += 1
        self.counters["records"] += 1
        if self._bootstrapped:
            self.assign(point)
        else:
            self._pending.append(point)
            if len(self._pending) == self.config.bootstrap_count:
                self.bootstrap(self._pending)
                self._pending = []
        return snapshots

    def finalize(self) -> list[TimeslotSnapshot]:
        """End of stream: flush an underfilled bootstrap buffer, run a last
        communication phase, and emit the in-progress slot's snapshot."""
        if self._finalized:
            return []
        self._finalized = True
        if self._pending and not self._bootstrapped:
            logger.warning(
                "stream ended with %d points, fewer than the %d needed for bootstrap; assigning directly",
                len(self._pending),
                self.config.bootstrap_count,
            )
            pending, self._pending = self._pending, []
            self._bootstrapped = True
            for point in pending:
                self.assign(point)
        if self.clock.epoch is None:
            return []
        self.communicate()
        return [self._snapshot_slot(self._slot)]

    def snapshot_now(self, slot_index: int) -> TimeslotSnapshot:
        """Snapshot of current state for an arbitrary slot index (read-only)."""
        return self._snapshot_slot(slot_index)

    def _snapshot_slot(self, index: int) -> TimeslotSnapshot:
        start = self.clock.epoch + index * self.config.timeslot
        return topics.make_snapshot(
            self.live_agents(),
            slot_index=index,
            slot_start=start,
            slot_end=start + self.config.timeslot,
            no_topics=self.config.no_topics,
            no_keywords=self.config.no_keywords,
            stopwords=self.stopwords,
            stats=self.keyword_stats,
        )

    def _slot_of(self, ts: datetime) -> int:
        return (ts - self.clock.epoch) // self.config.timeslot
