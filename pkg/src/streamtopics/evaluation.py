"""Scoring detected topics against ground truth.

Micro-averaged metrics: topic recall over all ground-truth topics,
keyword precision/recall over the keyword sets of matched pairs, and the
harmonic-mean F-score of the two keyword metrics. Topic precision is
deliberately not computed: streams legitimately contain hot topics that
no ground-truth set lists.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

from streamtopics.topics import TimeslotSnapshot, TopicEntry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GtTopic:
    name: str
    keywords: frozenset[str]


@dataclass
class GroundTruth:
    """Expected topics per slot index."""

    slots: dict[int, list[GtTopic]]


def load_ground_truth(path: str) -> GroundTruth:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    slots: dict[int, list[GtTopic]] = {}
    for key, entries in obj["slots"].items():
        topics = []
        for entry in entries:
            keywords = frozenset(str(k).lower() for k in entry["keywords"])
            if not keywords:
                raise ValueError(f"ground-truth topic {entry.get('name')!r} in slot {key} has no keywords")
            topics.append(GtTopic(name=str(entry["name"]), keywords=keywords))
        slots[int(key)] = topics
    return GroundTruth(slots=slots)


@dataclass
class SlotResult:
    gt_topics: int = 0
    matched: int = 0
    pairs: list[tuple[str, int]] = field(default_factory=list)  # (gt name, agent id)


@dataclass
class MetricsReport:
    topic_recall: float
    keyword_precision: float
    keyword_recall: float
    f_score: float
    matched_topics: int
    gt_topics: int
    matched_kws: int
    extracted_kws: int
    gt_kws: int
    per_slot: dict[int, SlotResult]

    def to_dict(self) -> dict:
        return {
            "topic_recall": self.topic_recall,
            "keyword_precision": self.keyword_precision,
            "keyword_recall": self.keyword_recall,
            "f_score": self.f_score,
            "counters": {
                "matched_topics": self.matched_topics,
                "gt_topics": self.gt_topics,
                "matched_kws": self.matched_kws,
                "extracted_kws": self.extracted_kws,
                "gt_kws": self.gt_kws,
            },
            "per_slot": {
                str(i): {"gt_topics": r.gt_topics, "matched": r.matched, "pairs": r.pairs}
                for i, r in sorted(self.per_slot.items())
            },
        }


def match_topic(gt: GtTopic, detected: TopicEntry, fraction: float) -> bool:
    """True when enough ground-truth keywords appear among the detected ones."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    needed = math.ceil(fraction * len(gt.keywords))
    return len(gt.keywords & set(detected.keywords)) >= needed


def score(
    snapshots: list[TimeslotSnapshot],
    gt: GroundTruth,
    fraction: float,
    no_topics: int | None = None,
) -> MetricsReport:
    """Match each slot's ground truth against its detected entries and micro-average.

    Matching is greedy by keyword-intersection size (ties broken by the
    detected entry's rank, then by ground-truth name); a detected entry may
    satisfy at most one ground-truth topic per slot. ``no_topics`` truncates
    each snapshot to its top entries, supporting sweeps over stored output.
    """
    if not any(gt.slots.values()):
        raise ValueError("ground truth is empty")
    by_slot = {s.slot_index: s for s in snapshots}
    matched_topics = gt_topics = matched_kws = extracted_kws = gt_kws = 0
    per_slot: dict[int, SlotResult] = {}

    for slot_index, gt_list in sorted(gt.slots.items()):
        if not gt_list:
            continue
        if slot_index not in by_slot:
            logger.warning("ground-truth slot %d outside the run's snapshot range; skipped", slot_index)
            continue
        result = SlotResult(gt_topics=len(gt_list))
        gt_topics += len(gt_list)
        entries = by_slot[slot_index].topics
        if no_topics is not None:
            entries = entries[:no_topics]

        candidates = []
        for g in gt_list:
            for rank, entry in enumerate(entries):
                if match_topic(g, entry, fraction):
                    overlap = len(g.keywords & set(entry.keywords))
                    candidates.append((-overlap, rank, g.name, tuple(sorted(g.keywords)), g, entry))
        candidates.sort(key=lambda c: c[:4])
        taken_gt: set[int] = set()
        taken_entries: set[int] = set()
        for neg_overlap, rank, _, _, g, entry in candidates:
            if id(g) in taken_gt or id(entry) in taken_entries:
                continue
            taken_gt.add(id(g))
            taken_entries.add(id(entry))
            matched_topics += 1
            matched_kws += -neg_overlap
            gt_kws += len(g.keywords)
            extracted_kws += len(entry.keywords)
            result.matched += 1
            result.pairs.append((g.name, entry.agent_id))
        per_slot[slot_index] = result

    topic_recall = matched_topics / gt_topics if gt_topics else 0.0
    keyword_recall = matched_kws / gt_kws if gt_kws else 0.0
    keyword_precision = matched_kws / extracted_kws if extracted_kws else 0.0
    if keyword_precision + keyword_recall > 0:
        f_score = 2 * keyword_precision * keyword_recall / (keyword_precision + keyword_recall)
    else:
        f_score = 0.0
    return MetricsReport(
        topic_recall=topic_recall,
        keyword_precision=keyword_precision,
        keyword_recall=keyword_recall,
        f_score=f_score,
        matched_topics=matched_topics,
        gt_topics=gt_topics,
        matched_kws=matched_kws,
        extracted_kws=extracted_kws,
        gt_kws=gt_kws,
        per_slot=per_slot,
    )
