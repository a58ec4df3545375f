import json
from pathlib import Path

import pytest

from minicypher.graph import PropertyGraph, load_graph

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> PropertyGraph:
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        return load_graph(json.load(fh))


@pytest.fixture(scope="session")
def teachers() -> PropertyGraph:
    """Four nodes in a KNOWS chain: n1 -> n2 -> n3 -> n4; n2 is the only Student."""
    return load_fixture("teachers.json")


@pytest.fixture(scope="session")
def citation() -> PropertyGraph:
    """Researchers, students and publications with authors/cites/supervises edges."""
    return load_fixture("citation.json")
