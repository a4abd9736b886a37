import pytest

CRITERIA = {
    1: "axiom suites and single-entry mutations",
    2: "d^2 = 0 and pre-simplicial identities on every realized complex",
    3: "cocommutative reduction against brute-force coinvariant Hochschild",
    4: "HH^0 and HH^1 closed forms",
    5: "quotient complex vs V^op (x)_E bar complex isomorphism",
    6: "degree-0 closed form and Tor/Ext cross-checks",
    7: "cofinality and free-generation oracles on {A} vs {A, A^2}",
    8: "twisting by Yetter-Drinfeld modules",
    9: "byte-identical CLI output",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "passed" if rep.passed else ("skipped" if rep.skipped else "failed")
        _outcomes.setdefault(n, []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        runs = _outcomes.get(n)
        if not runs:
            continue
        bad = [name for name, s in runs if s != "passed"]
        verdict = "PASS" if not bad else "FAIL"
        line = f"criterion {n}: {verdict}  {CRITERIA[n]}  ({len(runs) - len(bad)}/{len(runs)} checks)"
        if bad:
            line += "  failing: " + ", ".join(bad)
        tr.write_line(line)
