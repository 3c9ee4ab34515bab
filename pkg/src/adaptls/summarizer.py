"""Extractive daily summaries: centroid-rank and greedy centroid-opt."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date

from .corpus import (
    Sentence,
    SparseVector,
    Timeline,
    Topic,
    Vectorizer,
    vectorize,
)
from .errors import EmptyTimeline
from .event_ranking import EventCluster

REDUNDANCY_THRESHOLD = 0.8


@dataclass(frozen=True)
class KPolicy:
    """How many sentences go into each daily summary."""

    variant: str  # "expert" | "fixed_one" | "fixed"
    k: int | None = None

    @staticmethod
    def expert() -> "KPolicy":
        return KPolicy("expert")

    @staticmethod
    def one() -> "KPolicy":
        return KPolicy("fixed_one")

    @staticmethod
    def fixed(k: int) -> "KPolicy":
        if k < 1:
            raise ValueError("k must be >= 1")
        return KPolicy("fixed", k)

    def resolve(self, topic: Topic) -> int:
        if self.variant == "fixed_one":
            return 1
        if self.variant == "fixed":
            return self.k
        # expert: average daily-summary length over the reference timelines,
        # rounded to the nearest integer, at least 1
        lengths = [
            len(summary)
            for timeline in topic.reference_timelines
            for _, summary in timeline.entries
        ]
        if not lengths:
            return 1
        mean = sum(lengths) / len(lengths)
        return max(1, int(mean + 0.5))


def candidate_sentences(topic: Topic, day: Date) -> list[Sentence]:
    """Sentences published on `day` plus sentences explicitly mentioning it."""
    seen = set()
    out = []
    for article in sorted(topic.articles, key=lambda a: a.id):
        for sentence in article.sentences:
            matches = article.publish_date == day or any(
                m.resolved == day for m in sentence.mentions
            )
            if matches and (sentence.article_id, sentence.index) not in seen:
                seen.add((sentence.article_id, sentence.index))
                out.append(sentence)
    return out


def _centroid(vectors: list[SparseVector]) -> SparseVector:
    total = SparseVector((), ())
    for v in vectors:
        total = total + v
    return total.scaled(1.0 / len(vectors)).normalized()


def centroid_rank(
    cands: list[Sentence], vec: Vectorizer, k: int
) -> list[Sentence]:
    """Top-k sentences by cosine to the candidate centroid.

    Near-duplicates of an already selected sentence (cosine >= 0.8) are
    skipped; ties keep the incoming order.
    """
    if not cands:
        return []
    vectors = [vectorize(vec, s.tokens) for s in cands]
    centroid = _centroid(vectors)
    order = sorted(
        range(len(cands)), key=lambda i: (-vectors[i].cosine(centroid), i)
    )
    chosen: list[int] = []
    for i in order:
        if len(chosen) >= k:
            break
        if any(
            vectors[i].cosine(vectors[j]) >= REDUNDANCY_THRESHOLD for j in chosen
        ):
            continue
        chosen.append(i)
    return [cands[i] for i in sorted(chosen)]


def centroid_opt(
    cands: list[Sentence], vec: Vectorizer, k: int
) -> list[Sentence]:
    """Greedy set construction maximizing cosine(summary vector, centroid).

    At each step the candidate whose addition gives the highest cosine of the
    normalized summed summary vector to the centroid is added; the build
    stops at k sentences or as soon as no candidate improves the objective.
    """
    if not cands:
        return []
    vectors = [vectorize(vec, s.tokens) for s in cands]
    centroid = _centroid(vectors)
    chosen: list[int] = []
    summary = SparseVector((), ())
    objective = float("-inf")
    while len(chosen) < k:
        best_i = None
        best_value = objective
        for i in range(len(cands)):
            if i in chosen:
                continue
            value = (summary + vectors[i]).normalized().cosine(centroid)
            if value > best_value:
                best_value = value
                best_i = i
        if best_i is None:
            break
        chosen.append(best_i)
        summary = summary + vectors[best_i]
        objective = best_value
    return [cands[i] for i in sorted(chosen)]


def _cluster_candidates(
    topic: Topic, day: Date, cluster: EventCluster, include_outside_mentions: bool
) -> list[Sentence]:
    allowed = cluster.article_ids
    out = []
    seen = set()
    for article in sorted(topic.articles, key=lambda a: a.id):
        for sentence in article.sentences:
            in_cluster = article.id in allowed
            mentions_day = any(m.resolved == day for m in sentence.mentions)
            if in_cluster or (include_outside_mentions and mentions_day):
                key = (sentence.article_id, sentence.index)
                if key not in seen:
                    seen.add(key)
                    out.append(sentence)
    return out


def build_timeline(
    topic: Topic,
    selected: list[tuple[Date, EventCluster | None]],
    kpolicy: KPolicy,
    method: str,
    vec: Vectorizer,
    name: str = "generated",
    include_outside_mentions: bool = True,
) -> Timeline:
    """Summarize each selected date into a timeline entry.

    `method` is "rank" (centroid-rank) or "opt" (centroid-opt).  For event
    selections the candidate pool is the cluster's own sentences, plus
    sentences elsewhere that mention the event date unless
    `include_outside_mentions` is off.  Dates with no candidates are dropped.
    """
    if method not in ("rank", "opt"):
        raise ValueError(f"unknown summarizer method {method!r}")
    summarize = centroid_rank if method == "rank" else centroid_opt
    k = kpolicy.resolve(topic)
    entries = []
    for day, cluster in selected:
        if cluster is None:
            cands = candidate_sentences(topic, day)
        else:
            cands = _cluster_candidates(
                topic, day, cluster, include_outside_mentions
            )
        picked = summarize(cands, vec, k)
        if picked:
            entries.append((day, [s.raw for s in picked]))
    if not entries:
        raise EmptyTimeline(
            f"no selected date of topic {topic.name!r} has candidate sentences"
        )
    return Timeline(name, entries)
