import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperec import Hypergraph  # noqa: E402
from oracles import random_hypergraph_edges  # noqa: E402


@pytest.fixture
def nested_pair():
    return Hypergraph.from_edges([[1, 2], [1, 2, 3]])


@pytest.fixture
def synthetic_split():
    """A moderately overlapping synthetic train/query pair."""
    def make(seed):
        rng = random.Random(seed)
        return Hypergraph.from_edges(random_hypergraph_edges(rng, 90, 70, max_size=5))
    return make(11), make(12)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in mod.RESULTS:
        terminalreporter.write_line(mod._line(status, name, detail))
