from pathlib import Path

import pytest

from adaptls.corpus import load_dataset
from adaptls.temporal import annotate_topic

MINI_DIR = Path(__file__).parent / "data" / "mini"


@pytest.fixture
def mini_dir() -> Path:
    return MINI_DIR


@pytest.fixture
def mini_dataset():
    topics = load_dataset(MINI_DIR)
    for topic in topics:
        annotate_topic(topic)
    return topics
