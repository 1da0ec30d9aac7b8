import itertools

import pytest
from hypothesis import strategies as st

from bandit_ldim.classes import HypothesisClass, Stream

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test decides")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        passed = rep.passed and not rep.skipped
        prev = _acceptance.get(number, (title, True))
        _acceptance[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, passed = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}")


def make_class(rows, n_labels=None):
    """Class from a list of label-id rows; labels are named '1'.. and instances 'x1'.."""
    rows = [tuple(r) for r in rows]
    m = len(rows[0])
    k = n_labels if n_labels is not None else max(max(r) for r in rows) + 1
    return HypothesisClass(
        instances=[f"x{i + 1}" for i in range(m)],
        labels=[str(i + 1) for i in range(k)],
        table=rows,
        names=[f"h{i + 1}" for i in range(len(rows))],
    )


@st.composite
def tiny_classes(draw, max_x=3, max_y=4, max_h=5):
    m = draw(st.integers(1, max_x))
    k = draw(st.integers(1, max_y))
    every = list(itertools.product(range(k), repeat=m))
    n = draw(st.integers(1, min(max_h, len(every))))
    picks = draw(st.lists(st.sampled_from(every), min_size=n, max_size=n, unique=True))
    return make_class(picks, k)


def realizable_streams(cls, length):
    """Every realizable stream of the given length (one per hypothesis and x-sequence)."""
    seen = set()
    for row in cls.table:
        for xs in itertools.product(range(cls.n_instances), repeat=length):
            ex = tuple((x, row[x]) for x in xs)
            if ex not in seen:
                seen.add(ex)
                yield Stream(ex, True)


def play(learner, stream, protocol="bandit"):
    """Minimal game loop kept separate from the harness: returns the mistake count."""
    mistakes = 0
    for x, y in stream:
        yhat = learner.predict(x)
        if protocol == "bandit":
            learner.observe_bandit(x, yhat, yhat == y)
        else:
            learner.observe_full(x, yhat, y)
        mistakes += yhat != y
    return mistakes
