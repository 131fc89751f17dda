import pytest

from bitstree import BitsTree, Segment

FIGURE_SEGMENTS = [Segment("a", 5, 12), Segment("b", 10, 15), Segment("c", 18, 21)]
SEGMENT_D = Segment("d", 2, 7)

# The tree drawn for the three segments above: the shape under which
# inserting d triggers a left-right rotation.
FIGURE1_LAYOUT = (
    12, 15, {"b"},
    (5, 10, {"a"}, None, (10, 12, {"a", "b"}, None, None)),
    (18, 21, {"c"}, None, None),
)

ACCEPTANCE_RESULTS = []


@pytest.fixture
def figure1():
    return BitsTree.from_layout(FIGURE1_LAYOUT, FIGURE_SEGMENTS)


@pytest.fixture
def figure1_inserted():
    tree = BitsTree()
    for seg in FIGURE_SEGMENTS:
        tree.insert(seg)
    return tree


@pytest.fixture
def figure2c(figure1):
    figure1.insert(SEGMENT_D)
    return figure1


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
