"""Supervised date scoring: featurize candidate dates, ridge-regress, rank.

The target is binary (does the date appear in any reference timeline of its
topic) and the model is closed-form ridge regression with an unregularized
bias, which is all the tiny 9-feature system needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import date as Date, timedelta
from pathlib import Path

import numpy as np

from .corpus import Topic
from .errors import EmptyDataset, SingularSystem
from .temporal import DateCandidate, candidate_dates

DEFAULT_LAMBDA = 1.0
N_FEATURES = 9


@dataclass(frozen=True)
class DateFeatures:
    mention_count: float  # ln(1 + raw count)
    pub_article_count: float
    pub_sentence_count: float
    mentions_1d: float  # ln(1 + mentions resolved within +-1 day)
    mentions_3d: float
    mentions_7d: float
    mention_share: float
    pos_first: float
    pos_last: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.mention_count,
                self.pub_article_count,
                self.pub_sentence_count,
                self.mentions_1d,
                self.mentions_3d,
                self.mentions_7d,
                self.mention_share,
                self.pos_first,
                self.pos_last,
            ]
        )


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _features(
    cand: DateCandidate,
    mention_counts: dict[Date, int],
    total_mentions: int,
    min_pub: Date,
    max_pub: Date,
) -> DateFeatures:
    def window(days: int) -> int:
        return sum(
            mention_counts.get(cand.date + timedelta(days=off), 0)
            for off in range(-days, days + 1)
        )

    duration = (max_pub - min_pub).days
    if duration > 0:
        pos_first = _clamp01((cand.date - min_pub).days / duration)
        pos_last = _clamp01((max_pub - cand.date).days / duration)
    else:
        pos_first = pos_last = 0.0
    share = cand.mention_count / total_mentions if total_mentions else 0.0
    return DateFeatures(
        mention_count=math.log1p(cand.mention_count),
        pub_article_count=math.log1p(cand.pub_article_count),
        pub_sentence_count=math.log1p(cand.pub_sentence_count),
        mentions_1d=math.log1p(window(1)),
        mentions_3d=math.log1p(window(3)),
        mentions_7d=math.log1p(window(7)),
        mention_share=share,
        pos_first=pos_first,
        pos_last=pos_last,
    )


def _mention_counts(candidates: list[DateCandidate]) -> dict[Date, int]:
    return {c.date: c.mention_count for c in candidates if c.mention_count}


def date_features(cand: DateCandidate, topic: Topic) -> DateFeatures:
    """Feature vector for one candidate date of a topic."""
    candidates = candidate_dates(topic)
    counts = _mention_counts(candidates)
    total = sum(counts.values())
    return _features(cand, counts, total, topic.min_pub, topic.max_pub)


def feature_matrix(topic: Topic) -> tuple[list[DateCandidate], np.ndarray]:
    """All candidates of a topic with their stacked feature rows."""
    candidates = candidate_dates(topic)
    counts = _mention_counts(candidates)
    total = sum(counts.values())
    rows = [
        _features(c, counts, total, topic.min_pub, topic.max_pub).as_array()
        for c in candidates
    ]
    return candidates, np.vstack(rows)


@dataclass(frozen=True)
class Regressor:
    weights: np.ndarray  # shape (9,)
    bias: float
    l2_lambda: float

    def predict(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights + self.bias

    def to_json_obj(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "lambda": float(self.l2_lambda),
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_obj()), encoding="utf-8")

    @staticmethod
    def load(path) -> "Regressor":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return Regressor(
            np.array(obj["weights"], dtype=float),
            float(obj["bias"]),
            float(obj["lambda"]),
        )


def solve_ridge(
    X: np.ndarray, y: np.ndarray, l2_lambda: float
) -> tuple[np.ndarray, float]:
    """Closed-form ridge solution with an unregularized bias column."""
    n = X.shape[0]
    A = np.hstack([X, np.ones((n, 1))])
    penalty = np.diag([l2_lambda] * X.shape[1] + [0.0])
    gram = A.T @ A + penalty
    try:
        solution = np.linalg.solve(gram, A.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(solution)):
        raise SingularSystem("non-finite ridge solution")
    return solution[:-1], float(solution[-1])


def train_regressor(
    training_topics: list[Topic], l2_lambda: float = DEFAULT_LAMBDA
) -> Regressor:
    """Fit the date regressor on topics with reference timelines.

    A date is a positive example iff it appears in any reference timeline of
    its topic.
    """
    rows = []
    targets = []
    for topic in training_topics:
        if not topic.reference_timelines:
            continue
        reference_dates = {
            day
            for timeline in topic.reference_timelines
            for day in timeline.dates()
        }
        candidates, X = feature_matrix(topic)
        rows.append(X)
        targets.extend(
            1.0 if c.date in reference_dates else 0.0 for c in candidates
        )
    if not rows:
        raise EmptyDataset("no training topic has a reference timeline")
    X = np.vstack(rows)
    y = np.array(targets)
    weights, bias = solve_ridge(X, y, l2_lambda)
    return Regressor(weights, bias, l2_lambda)


def score_dates(
    regressor: Regressor, topic: Topic
) -> list[tuple[DateCandidate, float]]:
    """Score every candidate date, best first; ties go to the earlier date."""
    candidates, X = feature_matrix(topic)
    scores = regressor.predict(X)
    scored = list(zip(candidates, (float(s) for s in scores)))
    scored.sort(key=lambda item: (-item[1], item[0].date))
    return scored
