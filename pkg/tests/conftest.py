import random

import pytest

from sigrecover.matrix import Matrix


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long scaling checks")


_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.setdefault(marker.args[0], []).append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        if any(o == "failed" for _, o in results):
            verdict = "FAIL"
        elif all(o == "passed" for _, o in results):
            verdict = "PASS"
        elif any(o == "passed" for _, o in results):
            verdict = "PASS (some parts skipped)"
        else:
            verdict = "SKIPPED"
        detail = ", ".join(f"{name}={o}" for name, o in results)
        terminalreporter.write_line(f"criterion {n}: {verdict}  [{detail}]")


def random_rational_matrix(rng: random.Random, d: int, bound: int = 4, den: int = 3) -> Matrix:
    return Matrix([[f"{rng.randint(-bound, bound)}/{rng.randint(1, den)}" for _ in range(d)] for _ in range(d)])


@pytest.fixture
def rng():
    return random.Random(20261019)


def random_op(rng: random.Random, d: int):
    from sigrecover.gauss import Diag, General, Lower, Perm, Upper
    from sigrecover.matrix import random_invertible

    s = rng.randint(1, d)
    coeff = lambda: f"{rng.randint(-4, 4)}/{rng.randint(1, 3)}"
    kind = rng.choice(["lower", "upper", "diag", "perm", "general"])
    if kind == "lower":
        return Lower(s, [coeff() for _ in range(d - s)])
    if kind == "upper":
        return Upper(s, [coeff() for _ in range(d - s)])
    if kind == "diag":
        return Diag(s, f"{rng.choice([-1, 1]) * rng.randint(1, 4)}/{rng.randint(1, 3)}")
    if kind == "perm":
        return Perm(s, rng.randint(s, d))
    return General(s, random_invertible(d, s, 3, rng))
