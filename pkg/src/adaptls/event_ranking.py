"""Event detection by Markov clustering and event scoring by date mentions.

Articles become nodes of a cosine-similarity graph (title plus lead
sentences, TF-IDF).  MCL alternates random-walk expansion with inflation on
the column-stochastic matrix until the flow stabilizes; the attractor
structure yields the event clusters.  Each cluster is dated with the most
frequently occurring date among its articles and scored by how often that
date is mentioned inside the cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date

import numpy as np

from .corpus import Topic, Vectorizer, build_vectorizer, tokenize, vectorize
from .errors import EmptyCorpus

DEFAULT_THRESHOLD = 0.1
DEFAULT_EXPANSION = 2
DEFAULT_INFLATION = 2.0
DEFAULT_MAX_ITER = 100
DEFAULT_EPS = 1e-6
DEFAULT_PRUNE = 1e-5

LEAD_SENTENCES = 5


@dataclass(frozen=True)
class SimilarityGraph:
    n: int
    weights: np.ndarray  # dense symmetric (n, n), self-loops = 1

    def edges(self) -> list[tuple[int, int, float]]:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                w = self.weights[i, j]
                if w > 0.0:
                    out.append((i, j, float(w)))
        return out


@dataclass(frozen=True)
class EventCluster:
    article_ids: frozenset[str]
    event_date: Date
    mention_count: int  # mentions of event_date within the cluster's articles


@dataclass(frozen=True)
class MclResult:
    clusters: list[frozenset[int]]
    converged: bool
    iterations: int


def _article_vector(article, vec: Vectorizer):
    tokens = tokenize(article.title)
    for sentence in article.sentences[:LEAD_SENTENCES]:
        tokens.extend(sentence.tokens)
    return vectorize(vec, tokens)


def build_similarity_graph(
    topic: Topic,
    threshold: float = DEFAULT_THRESHOLD,
    vec: Vectorizer | None = None,
) -> SimilarityGraph:
    """Cosine graph over articles; edges below `threshold` are dropped."""
    if not topic.articles:
        raise EmptyCorpus(f"topic {topic.name!r} has no articles")
    if vec is None:
        vec = build_vectorizer(topic)
    vectors = [_article_vector(article, vec) for article in topic.articles]
    n = len(vectors)
    weights = np.zeros((n, n))
    for i in range(n):
        weights[i, i] = 1.0
        for j in range(i + 1, n):
            cos = vectors[i].cosine(vectors[j])
            if cos >= threshold and cos > 0.0:
                weights[i, j] = weights[j, i] = min(cos, 1.0)
    return SimilarityGraph(n, weights)


def _normalize_columns(matrix: np.ndarray) -> np.ndarray:
    sums = matrix.sum(axis=0)
    # A fully pruned column would break stochasticity; pin it to its diagonal.
    dead = sums == 0.0
    if dead.any():
        matrix = matrix.copy()
        idx = np.where(dead)[0]
        matrix[idx, idx] = 1.0
        sums = matrix.sum(axis=0)
    return matrix / sums


def markov_cluster(
    graph: SimilarityGraph,
    expansion: int = DEFAULT_EXPANSION,
    inflation: float = DEFAULT_INFLATION,
    max_iter: int = DEFAULT_MAX_ITER,
    eps: float = DEFAULT_EPS,
    prune: float = DEFAULT_PRUNE,
) -> MclResult:
    """Run MCL on the graph and read clusters off the attractor structure.

    Rows with a positive diagonal claim the columns they support; claims
    sharing a node are merged, and unclaimed nodes become singletons, so the
    result always partitions the node set.
    """
    if expansion < 2:
        raise ValueError("expansion must be >= 2")
    if inflation <= 1.0:
        raise ValueError("inflation must be > 1")

    M = _normalize_columns(graph.weights.astype(float))
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        previous = M
        M = np.linalg.matrix_power(M, expansion)
        M = np.power(M, inflation)
        M[M < prune] = 0.0
        M = _normalize_columns(M)
        if np.abs(M - previous).max() < eps:
            converged = True
            break

    claims = []
    for i in range(graph.n):
        if M[i, i] > 0.0:
            claims.append(set(np.where(M[i, :] > 0.0)[0].tolist()) | {i})

    parent = list(range(graph.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for claim in claims:
        members = sorted(claim)
        for other in members[1:]:
            union(members[0], other)

    groups: dict[int, set[int]] = {}
    for node in range(graph.n):
        groups.setdefault(find(node), set()).add(node)
    clusters = sorted((frozenset(g) for g in groups.values()), key=min)
    return MclResult(clusters, converged, iterations)


def _date_occurrences(nodes, topic: Topic) -> dict[Date, int]:
    counts: dict[Date, int] = {}
    for node in nodes:
        article = topic.articles[node]
        counts[article.publish_date] = counts.get(article.publish_date, 0) + 1
        for sentence in article.sentences:
            for mention in sentence.mentions:
                counts[mention.resolved] = counts.get(mention.resolved, 0) + 1
    return counts


def assign_event_date(cluster_nodes, topic: Topic) -> Date:
    """Most frequent date among the cluster's mentions and publish dates.

    Ties go to the earlier date.
    """
    counts = _date_occurrences(cluster_nodes, topic)
    return min(counts, key=lambda day: (-counts[day], day))


def _cluster_mentions(nodes, topic: Topic, day: Date) -> int:
    total = 0
    for node in nodes:
        for sentence in topic.articles[node].sentences:
            total += sum(1 for m in sentence.mentions if m.resolved == day)
    return total


def make_event_clusters(
    node_sets: list[frozenset[int]], topic: Topic
) -> list[EventCluster]:
    clusters = []
    for nodes in node_sets:
        day = assign_event_date(nodes, topic)
        clusters.append(
            EventCluster(
                article_ids=frozenset(topic.articles[n].id for n in nodes),
                event_date=day,
                mention_count=_cluster_mentions(nodes, topic, day),
            )
        )
    return clusters


def score_events(
    clusters: list[EventCluster], topic: Topic
) -> list[tuple[EventCluster, float]]:
    """Score each event by mentions of its date inside its own articles.

    Sorted best first; ties go to the earlier event date, then the larger
    cluster.
    """
    scored = [(cluster, float(cluster.mention_count)) for cluster in clusters]
    scored.sort(
        key=lambda item: (-item[1], item[0].event_date, -len(item[0].article_ids))
    )
    return scored


def detect_events(
    topic: Topic,
    threshold: float = DEFAULT_THRESHOLD,
    expansion: int = DEFAULT_EXPANSION,
    inflation: float = DEFAULT_INFLATION,
    max_iter: int = DEFAULT_MAX_ITER,
    eps: float = DEFAULT_EPS,
    prune: float = DEFAULT_PRUNE,
    vec: Vectorizer | None = None,
) -> tuple[list[tuple[EventCluster, float]], MclResult]:
    """Full event pipeline: graph, MCL, dating, scoring."""
    graph = build_similarity_graph(topic, threshold, vec)
    result = markov_cluster(graph, expansion, inflation, max_iter, eps, prune)
    clusters = make_event_clusters(result.clusters, topic)
    return score_events(clusters, topic), result
