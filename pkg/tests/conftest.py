import pytest

from regraph.enumerate import all_graphs_up_to
from regraph.graph import RegressionGraph


def singles(*labels):
    return [("response", [x]) for x in labels]


@pytest.fixture
def chain():
    # 1 <- 2 <- 3
    return RegressionGraph.build(singles("1", "2", "3"), arrows=[("1", "2"), ("2", "3")])


@pytest.fixture
def cov_chain():
    return RegressionGraph.build([("response", ["1", "2", "3"])],
                                 dashed=[("1", "2"), ("2", "3")])


@pytest.fixture
def conc_chain():
    return RegressionGraph.build([("context", ["1", "2", "3"])],
                                 full=[("1", "2"), ("2", "3")])


@pytest.fixture
def collider():
    # 1 -> 2 <- 3, so 2 is the response
    return RegressionGraph.build(singles("2", "1", "3"), arrows=[("2", "1"), ("2", "3")])


@pytest.fixture
def confounding():
    """Confounding example with treatments, an intermediate outcome and a hidden U."""
    return RegressionGraph.build(
        singles("Y", "T_r", "A", "T_p", "U"),
        arrows=[("Y", "T_r"), ("Y", "U"), ("Y", "T_p"),
                ("T_r", "A"), ("A", "T_p"), ("A", "U")])


@pytest.fixture(scope="session")
def graphs4():
    return all_graphs_up_to(4)


@pytest.fixture(scope="session")
def graphs3():
    return all_graphs_up_to(3)
