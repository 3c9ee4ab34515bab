"""Data model, dataset ingestion, sentence splitting, tokenization and TF-IDF.

A dataset is a directory with one sub-directory per topic; each topic
directory holds ``articles.jsonl``, ``timelines.jsonl`` and an optional
``keywords.json`` (see the README for the exact schema).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from datetime import date as Date
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import DateError, EmptyCorpus, NotFound, ParseError

if TYPE_CHECKING:
    from .temporal import DateMention


# ---------------------------------------------------------------------------
# domain types


@dataclass
class Sentence:
    article_id: str
    index: int
    raw: str
    tokens: list[str]
    mentions: list["DateMention"] = field(default_factory=list)


@dataclass
class Article:
    id: str
    publish_date: Date
    title: str
    sentences: list[Sentence]


@dataclass
class Timeline:
    """An ordered list of (date, summary sentences) entries.

    Entries are sorted ascending on construction; duplicate dates or empty
    daily summaries are rejected.
    """

    name: str
    entries: list[tuple[Date, list[str]]]

    def __post_init__(self):
        self.entries = sorted(self.entries, key=lambda e: e[0])
        seen = set()
        for day, summary in self.entries:
            if day in seen:
                raise ValueError(f"duplicate timeline date {day.isoformat()}")
            seen.add(day)
            if not summary:
                raise ValueError(f"empty summary for {day.isoformat()}")

    @property
    def length(self) -> int:
        return len(self.entries)

    @property
    def total_sentences(self) -> int:
        return sum(len(summary) for _, summary in self.entries)

    def dates(self) -> list[Date]:
        return [day for day, _ in self.entries]

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "entries": [
                {"date": day.isoformat(), "summary": list(summary)}
                for day, summary in self.entries
            ],
        }


@dataclass
class Topic:
    name: str
    articles: list[Article]
    queries: list[str] = field(default_factory=list)
    reference_timelines: list[Timeline] = field(default_factory=list)

    def sentences(self) -> list[Sentence]:
        return [s for a in self.articles for s in a.sentences]

    @property
    def min_pub(self) -> Date:
        return min(a.publish_date for a in self.articles)

    @property
    def max_pub(self) -> Date:
        return max(a.publish_date for a in self.articles)

    @property
    def duration_days(self) -> int:
        return (self.max_pub - self.min_pub).days


# ---------------------------------------------------------------------------
# text processing

_TERMINATORS = ".!?。！？"

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

_ASCII_LOWER = str.maketrans(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz"
)


def _is_cjk(ch: str) -> bool:
    # CJK Unified Ideographs plus extension A; enough for news text.
    return "一" <= ch <= "鿿" or "㐀" <= ch <= "䶿"


def sentence_split(text: str) -> list[str]:
    """Split text into sentences, keeping the terminating punctuation.

    A terminator ends a sentence only when followed by whitespace or the end
    of the text.  An ASCII period additionally requires the next non-space
    character to be uppercase, so abbreviations like "U.S. government" do not
    split.  A trailing fragment without a terminator becomes its own sentence.
    """
    if not text:
        return []
    sentences = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        rest = text[i + 1 :]
        stripped = rest.lstrip()
        if rest and not rest[0].isspace():
            continue
        if ch == "." and stripped and not stripped[0].isupper():
            continue
        piece = text[start : i + 1].strip()
        if piece:
            sentences.append(piece)
        start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Split into lowercase tokens on whitespace/punctuation boundaries.

    Digit runs stay intact ("1996-01-17" -> ["1996", "01", "17"]); only ASCII
    letters are lowercased.  CJK text should arrive pre-tokenized; otherwise
    each CJK codepoint falls back to being its own token.
    """
    tokens: list[str] = []
    for match in _WORD_RE.finditer(sentence):
        run = match.group()
        buf = []
        for ch in run:
            if _is_cjk(ch):
                if buf:
                    tokens.append("".join(buf).translate(_ASCII_LOWER))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
        if buf:
            tokens.append("".join(buf).translate(_ASCII_LOWER))
    return tokens


# ---------------------------------------------------------------------------
# TF-IDF


@dataclass(frozen=True)
class SparseVector:
    """L2-normalizable sparse vector as parallel (index, weight) tuples."""

    indices: tuple[int, ...]
    weights: tuple[float, ...]

    @staticmethod
    def from_dict(entries: dict[int, float]) -> "SparseVector":
        items = sorted((i, w) for i, w in entries.items() if w != 0.0)
        return SparseVector(
            tuple(i for i, _ in items), tuple(w for _, w in items)
        )

    def is_zero(self) -> bool:
        return not self.indices

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))

    def dot(self, other: "SparseVector") -> float:
        if len(self.indices) > len(other.indices):
            return other.dot(self)
        lookup = dict(zip(other.indices, other.weights))
        return sum(
            w * lookup[i] for i, w in zip(self.indices, self.weights) if i in lookup
        )

    def cosine(self, other: "SparseVector") -> float:
        denom = self.norm() * other.norm()
        if denom == 0.0:
            return 0.0
        return self.dot(other) / denom

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector(
            self.indices, tuple(w * factor for w in self.weights)
        )

    def __add__(self, other: "SparseVector") -> "SparseVector":
        entries = dict(zip(self.indices, self.weights))
        for i, w in zip(other.indices, other.weights):
            entries[i] = entries.get(i, 0.0) + w
        return SparseVector.from_dict(entries)

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n == 0.0:
            return self
        return self.scaled(1.0 / n)


@dataclass(frozen=True)
class Vectorizer:
    """Sentence-level TF-IDF vocabulary with idf(t) = ln(1 + n/(1 + df))."""

    vocabulary: dict[str, int]
    idf: tuple[float, ...]


def build_vectorizer(topic: Topic) -> Vectorizer:
    sentences = topic.sentences()
    if not sentences:
        raise EmptyCorpus(f"topic {topic.name!r} has no sentences")
    df: dict[str, int] = {}
    for sent in sentences:
        for tok in set(sent.tokens):
            df[tok] = df.get(tok, 0) + 1
    vocabulary = {tok: i for i, tok in enumerate(sorted(df))}
    n_docs = len(sentences)
    idf = [0.0] * len(vocabulary)
    for tok, col in vocabulary.items():
        idf[col] = math.log(1.0 + n_docs / (1.0 + df[tok]))
    return Vectorizer(vocabulary, tuple(idf))


def vectorize(vec: Vectorizer, tokens: list[str]) -> SparseVector:
    """TF-IDF vector for a token list, L2-normalized when non-zero."""
    tf: dict[int, int] = {}
    for tok in tokens:
        col = vec.vocabulary.get(tok)
        if col is not None:
            tf[col] = tf.get(col, 0) + 1
    entries = {col: count * vec.idf[col] for col, count in tf.items()}
    return SparseVector.from_dict(entries).normalized()


# ---------------------------------------------------------------------------
# loading / saving


def _parse_date(value, line_number, file_name) -> Date:
    if not isinstance(value, str):
        raise DateError(f"{file_name}:{line_number}: date must be a string")
    try:
        return Date.fromisoformat(value)
    except ValueError as exc:
        raise DateError(f"{file_name}:{line_number}: {exc}") from exc


def _read_jsonl(path: Path):
    with path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"{path.name}:{line_number}: invalid JSON: {exc}",
                    line_number=line_number,
                ) from exc
            yield line_number, obj


def _article_from_obj(obj, line_number) -> Article:
    for key in ("id", "publish_date", "title", "text"):
        if key not in obj:
            raise ParseError(
                f"articles.jsonl:{line_number}: missing key {key!r}",
                line_number=line_number,
            )
    publish_date = _parse_date(obj["publish_date"], line_number, "articles.jsonl")
    article_id = str(obj["id"])
    sentences = []
    pretokenized = obj.get("pretokenized")
    if pretokenized is not None:
        raws = sentence_split(obj["text"])
        if len(raws) != len(pretokenized):
            # The raw text does not line up with the supplied token lists;
            # fall back to reconstructing raws from the tokens.
            raws = [" ".join(toks) for toks in pretokenized]
        for index, toks in enumerate(pretokenized):
            sentences.append(
                Sentence(article_id, index, raws[index], [str(t) for t in toks])
            )
    else:
        for index, raw in enumerate(sentence_split(obj["text"])):
            sentences.append(Sentence(article_id, index, raw, tokenize(raw)))
    return Article(article_id, publish_date, str(obj["title"]), sentences)


def _timeline_from_obj(obj, line_number) -> Timeline:
    for key in ("name", "entries"):
        if key not in obj:
            raise ParseError(
                f"timelines.jsonl:{line_number}: missing key {key!r}",
                line_number=line_number,
            )
    entries = []
    for entry in obj["entries"]:
        if "date" not in entry or "summary" not in entry:
            raise ParseError(
                f"timelines.jsonl:{line_number}: entry needs date and summary",
                line_number=line_number,
            )
        day = _parse_date(entry["date"], line_number, "timelines.jsonl")
        entries.append((day, [str(s) for s in entry["summary"]]))
    try:
        return Timeline(str(obj["name"]), entries)
    except ValueError as exc:
        raise ParseError(
            f"timelines.jsonl:{line_number}: {exc}", line_number=line_number
        ) from exc


def load_topic(dir_path) -> Topic:
    """Load one topic directory into a Topic."""
    dir_path = Path(dir_path)
    if not dir_path.is_dir():
        raise NotFound(f"topic directory not found: {dir_path}")
    articles_path = dir_path / "articles.jsonl"
    timelines_path = dir_path / "timelines.jsonl"
    for path in (articles_path, timelines_path):
        if not path.is_file():
            raise NotFound(f"missing file: {path}")

    articles = []
    seen_ids = set()
    for line_number, obj in _read_jsonl(articles_path):
        article = _article_from_obj(obj, line_number)
        if article.id in seen_ids:
            raise ParseError(
                f"articles.jsonl:{line_number}: duplicate article id {article.id!r}",
                line_number=line_number,
            )
        seen_ids.add(article.id)
        articles.append(article)

    timelines = [
        _timeline_from_obj(obj, line_number)
        for line_number, obj in _read_jsonl(timelines_path)
    ]

    queries: list[str] = []
    keywords_path = dir_path / "keywords.json"
    if keywords_path.is_file():
        try:
            obj = json.loads(keywords_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"keywords.json: invalid JSON: {exc}") from exc
        queries = [str(q) for q in obj.get("queries", [])]

    return Topic(dir_path.name, articles, queries, timelines)


def save_topic(topic: Topic, dir_path) -> None:
    """Write a topic back out in the dataset directory layout."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    with (dir_path / "articles.jsonl").open("w", encoding="utf-8") as handle:
        for article in topic.articles:
            obj = {
                "id": article.id,
                "publish_date": article.publish_date.isoformat(),
                "title": article.title,
                "text": " ".join(s.raw for s in article.sentences),
                "pretokenized": [list(s.tokens) for s in article.sentences],
            }
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")
    with (dir_path / "timelines.jsonl").open("w", encoding="utf-8") as handle:
        for timeline in topic.reference_timelines:
            handle.write(
                json.dumps(timeline.to_json_obj(), ensure_ascii=False) + "\n"
            )
    if topic.queries:
        (dir_path / "keywords.json").write_text(
            json.dumps({"queries": topic.queries}, ensure_ascii=False),
            encoding="utf-8",
        )


def load_dataset(root) -> list[Topic]:
    """Load every topic directory under `root`, sorted by name."""
    root = Path(root)
    if not root.is_dir():
        raise NotFound(f"dataset directory not found: {root}")
    topics = []
    for child in sorted(root.iterdir()):
        if child.is_dir() and (child / "articles.jsonl").is_file():
            topics.append(load_topic(child))
    if not topics:
        raise NotFound(f"no topic directories under {root}")
    return topics


def filter_by_queries(topic: Topic) -> Topic:
    """Keep only sentences containing at least one query token.

    Off by default in the pipeline; how queries constrain the collection is
    deliberately left configurable.  Articles left without sentences are
    dropped.  With no queries the topic is returned unchanged.
    """
    if not topic.queries:
        return topic
    query_tokens = {tok for q in topic.queries for tok in tokenize(q)}
    articles = []
    for article in topic.articles:
        kept = [
            Sentence(s.article_id, new_index, s.raw, list(s.tokens))
            for new_index, s in enumerate(
                s for s in article.sentences if query_tokens.intersection(s.tokens)
            )
        ]
        if kept:
            articles.append(
                Article(article.id, article.publish_date, article.title, kept)
            )
    return Topic(topic.name, articles, topic.queries, topic.reference_timelines)
