"""Date F1, align-based ROUGE F1 and dataset statistics.

The align metric maps every generated date to the reference date maximizing
rouge-1 F1 weighted by temporal proximity gamma = 1/(1 + |day gap|), then
scores each aligned pair by rouge-n F1 times gamma.  Precision averages the
contributions over generated dates; recall credits each reference date with
the best contribution among the generated dates aligned to it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from datetime import date as Date

from .corpus import Timeline, Topic, tokenize
from .errors import EmptyDataset, EmptyReference, EmptyTimeline
from .temporal import candidate_dates


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_pr(precision: float, recall: float) -> "PRF":
        if precision + recall == 0.0:
            return PRF(precision, recall, 0.0)
        f1 = 2.0 * precision * recall / (precision + recall)
        return PRF(precision, recall, f1)


def date_f1(pred: Timeline, ref: Timeline) -> PRF:
    """Exact-match F1 over the two date sets."""
    ref_dates = set(ref.dates())
    if not ref_dates:
        raise EmptyReference(f"reference timeline {ref.name!r} is empty")
    pred_dates = set(pred.dates())
    overlap = len(pred_dates & ref_dates)
    precision = overlap / len(pred_dates) if pred_dates else 0.0
    recall = overlap / len(ref_dates)
    return PRF.from_pr(precision, recall)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(
        tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


def rouge_n(pred_tokens: list[str], ref_tokens: list[str], n: int) -> PRF:
    """Clipped n-gram overlap precision/recall/F1 (n = 1 or 2)."""
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    pred_counts = _ngrams(pred_tokens, n)
    ref_counts = _ngrams(ref_tokens, n)
    pred_total = sum(pred_counts.values())
    ref_total = sum(ref_counts.values())
    if pred_total == 0 or ref_total == 0:
        return PRF(0.0, 0.0, 0.0)
    overlap = sum((pred_counts & ref_counts).values())
    return PRF.from_pr(overlap / pred_total, overlap / ref_total)


def _entry_tokens(timeline: Timeline) -> dict[Date, list[str]]:
    return {
        day: tokenize(" ".join(summary)) for day, summary in timeline.entries
    }


def _gamma(a: Date, b: Date) -> float:
    return 1.0 / (1.0 + abs((a - b).days))


def align_dates(
    pred: Timeline, ref: Timeline
) -> list[tuple[Date, Date, float]]:
    """m:1 alignment of generated dates onto reference dates.

    Each generated date picks the reference date maximizing
    rouge_1 F1 * gamma; ties go to the temporally nearest, then earlier,
    reference date.
    """
    if not pred.entries or not ref.entries:
        raise EmptyTimeline("align_dates needs two non-empty timelines")
    pred_tokens = _entry_tokens(pred)
    ref_tokens = _entry_tokens(ref)
    alignment = []
    for p_day in pred.dates():
        best = None
        for r_day in ref.dates():
            score = (
                rouge_n(pred_tokens[p_day], ref_tokens[r_day], 1).f1
                * _gamma(p_day, r_day)
            )
            key = (-score, abs((p_day - r_day).days), r_day)
            if best is None or key < best[0]:
                best = (key, r_day)
        alignment.append((p_day, best[1], _gamma(p_day, best[1])))
    return alignment


def align_rouge_f1(pred: Timeline, ref: Timeline, n: int) -> PRF:
    """Align-based ROUGE-n F1 between a generated and a reference timeline."""
    alignment = align_dates(pred, ref)
    pred_tokens = _entry_tokens(pred)
    ref_tokens = _entry_tokens(ref)

    contributions: dict[Date, float] = {}
    best_per_ref: dict[Date, float] = {}
    for p_day, r_day, gamma in alignment:
        value = rouge_n(pred_tokens[p_day], ref_tokens[r_day], n).f1 * gamma
        contributions[p_day] = value
        best_per_ref[r_day] = max(best_per_ref.get(r_day, 0.0), value)

    precision = sum(contributions.values()) / len(pred.entries)
    recall = sum(best_per_ref.get(day, 0.0) for day in ref.dates()) / len(
        ref.entries
    )
    return PRF.from_pr(precision, recall)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class PairResult:
    topic: str
    reference: str
    date_f1: PRF
    ar1: PRF
    ar2: PRF


@dataclass
class EvalReport:
    pairs: list[PairResult] = field(default_factory=list)

    def macro(self) -> dict[str, float]:
        if not self.pairs:
            return {"AR1-F": 0.0, "AR2-F": 0.0, "DATE-F1": 0.0}
        n = len(self.pairs)
        return {
            "AR1-F": sum(p.ar1.f1 for p in self.pairs) / n,
            "AR2-F": sum(p.ar2.f1 for p in self.pairs) / n,
            "DATE-F1": sum(p.date_f1.f1 for p in self.pairs) / n,
        }

    def to_json_obj(self) -> dict:
        def prf(v: PRF) -> dict:
            return {"precision": v.precision, "recall": v.recall, "f1": v.f1}

        return {
            "pairs": [
                {
                    "topic": p.topic,
                    "reference": p.reference,
                    "date_f1": prf(p.date_f1),
                    "ar1": prf(p.ar1),
                    "ar2": prf(p.ar2),
                }
                for p in self.pairs
            ],
            "macro": self.macro(),
        }

    def to_text_table(self, label: str = "dataset") -> str:
        macro = self.macro()
        header = f"{'Method':<20} {'AR1-F':>8} {'AR2-F':>8} {'DATE-F1':>8}"
        row = (
            f"{label:<20} {macro['AR1-F']:>8.3f} "
            f"{macro['AR2-F']:>8.3f} {macro['DATE-F1']:>8.3f}"
        )
        return "\n".join([header, row])


def evaluate_pair(pred: Timeline, ref: Timeline, topic: str) -> PairResult:
    return PairResult(
        topic=topic,
        reference=ref.name,
        date_f1=date_f1(pred, ref),
        ar1=align_rouge_f1(pred, ref, 1),
        ar2=align_rouge_f1(pred, ref, 2),
    )


# ---------------------------------------------------------------------------
# dataset statistics


@dataclass(frozen=True)
class StatsReport:
    topics: int
    timelines: int
    avg_sent_num: float
    avg_docs_num: float
    avg_l: float
    avg_k: float
    avg_duration: float
    avg_dur_comp: float
    avg_sent_comp: float
    avg_date_comp: float
    avg_date_cov: float

    def to_json_obj(self) -> dict:
        return {
            "Topics": self.topics,
            "TLs": self.timelines,
            "AvgSentNum": self.avg_sent_num,
            "AvgDocsNum": self.avg_docs_num,
            "AvgL": self.avg_l,
            "AvgK": self.avg_k,
            "AvgDuration": self.avg_duration,
            "AvgDurComp": self.avg_dur_comp,
            "AvgSentComp": self.avg_sent_comp,
            "AvgDateComp": self.avg_date_comp,
            "AvgDateCov": self.avg_date_cov,
        }

    def to_text_table(self) -> str:
        rows = self.to_json_obj()
        width = max(len(k) for k in rows)
        lines = []
        for key, value in rows.items():
            if isinstance(value, int):
                lines.append(f"{key:<{width}}  {value}")
            else:
                lines.append(f"{key:<{width}}  {value:.4f}")
        return "\n".join(lines)


def dataset_stats(dataset: list[Topic]) -> StatsReport:
    """Per-reference-timeline averages of the corpus/timeline statistics.

    Every average is taken over (topic, reference timeline) pairs; corpus
    quantities (sentence counts, durations, candidate dates) come from the
    pair's topic.  Requires mentions to be annotated.
    """
    pairs = [
        (topic, timeline)
        for topic in dataset
        for timeline in topic.reference_timelines
    ]
    if not pairs:
        raise EmptyDataset("no topic has a reference timeline")

    sent_nums = []
    doc_nums = []
    lengths = []
    ks = []
    durations = []
    dur_comps = []
    sent_comps = []
    date_comps = []
    date_covs = []
    for topic, timeline in pairs:
        total_sentences = len(topic.sentences())
        candidates = candidate_dates(topic)
        corpus_dates = {c.date for c in candidates}
        duration = topic.duration_days

        sent_nums.append(total_sentences)
        doc_nums.append(len(topic.articles))
        lengths.append(timeline.length)
        ks.append(timeline.total_sentences / timeline.length)
        durations.append(duration)
        dur_comps.append(timeline.length / max(duration, 1))
        sent_comps.append(timeline.total_sentences / total_sentences)
        date_comps.append(timeline.length / len(corpus_dates))
        covered = sum(1 for day in timeline.dates() if day in corpus_dates)
        date_covs.append(covered / timeline.length)

    def mean(values):
        return sum(values) / len(values)

    return StatsReport(
        topics=len(dataset),
        timelines=len(pairs),
        avg_sent_num=mean(sent_nums),
        avg_docs_num=mean(doc_nums),
        avg_l=mean(lengths),
        avg_k=mean(ks),
        avg_duration=mean(durations),
        avg_dur_comp=mean(dur_comps),
        avg_sent_comp=mean(sent_comps),
        avg_date_comp=mean(date_comps),
        avg_date_cov=mean(date_covs),
    )
