import pytest

from hfplumb.families import a_chain, sigma_2_3
from hfplumb.plumbing import build_graph


def sigma237():
    return build_graph([-1, -2, -3, -7], [(1, 2), (1, 3), (1, 4)])


def e8():
    return build_graph([-2] * 8, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)])


def d4():
    return build_graph([-2] * 4, [(1, 2), (1, 3), (1, 4)])


def star_minus1_four_legs():
    return build_graph([-1, -2, -2, -2, -2], [(1, 2), (1, 3), (1, 4), (1, 5)])


def two_bad_vertices():
    """Negative definite, det 63, bad vertices 1 and 4."""
    return build_graph([-2, -3, -3, -2, -3, -3], [(1, 2), (1, 3), (1, 4), (4, 5), (4, 6)])


def corpus():
    """Named graphs satisfying the hypotheses (negative definite, <= 1 bad vertex)."""
    graphs = {f"sigma_n{n}": sigma_2_3(n).graph for n in range(1, 11)}
    graphs.update({f"A{s}": a_chain(s) for s in range(1, 9)})
    graphs["D4"] = d4()
    graphs["E8"] = e8()
    graphs["E6"] = build_graph([-2] * 6, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)])
    graphs["star_-3_legs"] = build_graph([-3, -2, -3, -5], [(1, 2), (1, 3), (1, 4)])
    return graphs


def small_corpus(max_s=6):
    return {k: G for k, G in corpus().items() if G.s <= max_s}


@pytest.fixture
def G7():
    return sigma237()


@pytest.fixture(autouse=True)
def _exact_checks(monkeypatch):
    # grading recomputed exactly on every explored edge
    monkeypatch.setenv("HFPLUMB_CHECK", "1")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
