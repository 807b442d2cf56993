"""Snapshot ranking, keyword extraction, and snapshot IO."""

from collections import Counter
from datetime import datetime, timedelta, timezone

from streamtopics.topics import (
    TimeslotSnapshot,
    TopicEntry,
    extract_keywords,
    make_snapshot,
    read_snapshots,
    write_snapshot,
)

T0 = datetime(2020, 1, 1, tzinfo=timezone.utc)


class FakeMember:
    def __init__(self, tokens):
        self.tokens = tokens


class FakeAgent:
    def __init__(self, agent_id, token_lists):
        self.agent_id = agent_id
        self.members = [FakeMember(t) for t in token_lists]

    @property
    def size(self):
        return len(self.members)


class TestExtractKeywords:
    def test_stopwords_excluded(self):
        agent = FakeAgent(1, [["stay"] * 3 + ["home"] * 2 + ["covid"] * 5])
        assert extract_keywords(agent, 2, {"covid"}) == ["stay", "home"]

    def test_lexicographic_among_ties(self):
        agent = FakeAgent(1, [["a", "b"]])
        assert extract_keywords(agent, 5, set()) == ["a", "b"]

    def test_frequency_then_lexicographic(self):
        agent = FakeAgent(1, [["x", "x", "y", "y", "z"]])
        assert extract_keywords(agent, 2, set()) == ["x", "y"]

    def test_only_stopwords_gives_empty_list(self):
        agent = FakeAgent(1, [["the", "the"]])
        assert extract_keywords(agent, 3, {"the"}) == []


class TestMakeSnapshot:
    def agents(self):
        return [
            FakeAgent(1, [["a"]] * 5),
            FakeAgent(2, [["b"]] * 2),
            FakeAgent(3, [["c"]] * 9),
        ]

    def test_ranked_by_size(self):
        snap = make_snapshot(self.agents(), 0, T0, T0 + timedelta(minutes=1), 2, 5, set())
        assert [(t.agent_id, t.size) for t in snap.topics] == [(3, 9), (1, 5)]

    def test_all_agents_when_no_topics_exceeds(self):
        snap = make_snapshot(self.agents(), 0, T0, T0 + timedelta(minutes=1), 10, 5, set())
        assert len(snap.topics) == 3

    def test_size_tie_breaks_by_agent_id(self):
        agents = [FakeAgent(2, [["b"]] * 3), FakeAgent(1, [["a"]] * 3)]
        snap = make_snapshot(agents, 0, T0, T0 + timedelta(minutes=1), 5, 5, set())
        assert [t.agent_id for t in snap.topics] == [1, 2]

    def test_prefix_property(self):
        small = make_snapshot(self.agents(), 0, T0, T0 + timedelta(minutes=1), 2, 5, set())
        large = make_snapshot(self.agents(), 0, T0, T0 + timedelta(minutes=1), 3, 5, set())
        assert [t.agent_id for t in large.topics[:2]] == [t.agent_id for t in small.topics]

    def test_no_agents_empty_topics(self):
        snap = make_snapshot([], 0, T0, T0 + timedelta(minutes=1), 5, 5, set())
        assert snap.topics == []

    def test_pure_function_of_state(self):
        agents = self.agents()
        first = make_snapshot(agents, 0, T0, T0 + timedelta(minutes=1), 2, 5, set())
        second = make_snapshot(agents, 0, T0, T0 + timedelta(minutes=1), 2, 5, set())
        assert first == second

    def test_stats_accumulates_term_frequencies(self):
        stats = Counter()
        agents = [FakeAgent(1, [["hot", "hot", "take"]])]
        make_snapshot(agents, 0, T0, T0 + timedelta(minutes=1), 5, 5, set(), stats=stats)
        assert stats == Counter({"hot": 2, "take": 1})


class TestSnapshotIO:
    def test_roundtrip(self, tmp_path):
        snap = TimeslotSnapshot(
            slot_index=3,
            slot_start=T0,
            slot_end=T0 + timedelta(minutes=1),
            topics=[TopicEntry(agent_id=7, size=4, keywords=["goal", "chelsea"])],
        )
        path = tmp_path / "snaps.jsonl"
        with open(path, "w") as fh:
            write_snapshot(fh, snap)
        loaded = read_snapshots(str(path))
        assert loaded == [snap]

    def test_wire_format_keys(self, tmp_path):
        snap = TimeslotSnapshot(0, T0, T0 + timedelta(minutes=1), [TopicEntry(1, 2, ["x"])])
        path = tmp_path / "snaps.jsonl"
        with open(path, "w") as fh:
            write_snapshot(fh, snap)
        import json

        obj = json.loads(path.read_text())
        assert set(obj) == {"slot", "start", "end", "topics"}
        assert set(obj["topics"][0]) == {"agent", "size", "keywords"}
        assert obj["start"] == "2020-01-01T00:00:00Z"
