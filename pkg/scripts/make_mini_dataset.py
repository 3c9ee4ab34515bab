#!/usr/bin/env python3
"""Regenerate the checked-in mini dataset under tests/data/mini.

The corpus is small enough that every statistic over it can be checked by
hand; the expected values frozen in the test suite assume exactly this
content.  Run from the repository root:

    python3 scripts/make_mini_dataset.py
"""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "data" / "mini"

TOPICS = {
    "alpha": {
        "articles": [
            {
                "id": "a1",
                "publish_date": "2021-01-01",
                "title": "Flood hits valley",
                "text": "A flood hit the valley. Rivers rose fast.",
            },
            {
                "id": "a2",
                "publish_date": "2021-01-05",
                "title": "Cleanup begins",
                "text": (
                    "Cleanup began on 2021-01-05. Crews cleared roads. "
                    "Rain returned yesterday."
                ),
            },
        ],
        "timelines": [
            {
                "name": "ref",
                "entries": [
                    {"date": "2021-01-01", "summary": ["A flood hit the valley."]},
                    {"date": "2021-01-05", "summary": ["Cleanup began."]},
                ],
            }
        ],
        "queries": ["flood"],
    },
    "beta": {
        "articles": [
            {
                "id": "b1",
                "publish_date": "2021-03-10",
                "title": "Election announced",
                "text": (
                    "An election was announced. "
                    "Voting starts on March 20, 2021."
                ),
            },
            {
                "id": "b2",
                "publish_date": "2021-03-20",
                "title": "Polls open",
                "text": "Polls opened early. Turnout was high. Results came later.",
            },
            {
                "id": "b3",
                "publish_date": "2021-03-21",
                "title": "Results declared",
                "text": "The winner was declared.",
            },
        ],
        "timelines": [
            {
                "name": "ref",
                "entries": [
                    {
                        "date": "2021-03-20",
                        "summary": ["Polls opened early.", "Turnout was high."],
                    },
                    {"date": "2021-03-21", "summary": ["The winner was declared."]},
                ],
            }
        ],
        "queries": [],
    },
    "gamma": {
        "articles": [
            {
                "id": "c1",
                "publish_date": "2021-06-01",
                "title": "Storm forms",
                "text": "A storm formed at sea. Winds grew stronger.",
            },
            {
                "id": "c2",
                "publish_date": "2021-06-03",
                "title": "Storm lands",
                "text": (
                    "The storm made landfall on 2021-06-03. Homes lost power."
                ),
            },
        ],
        "timelines": [
            {
                "name": "ref1",
                "entries": [
                    {"date": "2021-06-01", "summary": ["A storm formed at sea."]},
                    {"date": "2021-06-03", "summary": ["The storm made landfall."]},
                ],
            },
            {
                "name": "ref2",
                "entries": [
                    {"date": "2021-06-03", "summary": ["Homes lost power."]},
                ],
            },
        ],
        "queries": [],
    },
}


def main():
    for name, topic in TOPICS.items():
        topic_dir = ROOT / name
        topic_dir.mkdir(parents=True, exist_ok=True)
        with (topic_dir / "articles.jsonl").open("w", encoding="utf-8") as handle:
            for article in topic["articles"]:
                handle.write(json.dumps(article, ensure_ascii=False) + "\n")
        with (topic_dir / "timelines.jsonl").open("w", encoding="utf-8") as handle:
            for timeline in topic["timelines"]:
                handle.write(json.dumps(timeline, ensure_ascii=False) + "\n")
        if topic["queries"]:
            (topic_dir / "keywords.json").write_text(
                json.dumps({"queries": topic["queries"]}), encoding="utf-8"
            )
    print(f"wrote {len(TOPICS)} topics under {ROOT}")


if __name__ == "__main__":
    main()
