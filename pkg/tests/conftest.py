import pytest

from qutrit_mub import mub
from qutrit_mub.partition import enumerate_partitions, find_partition_with_structure
from qutrit_mub.reference import two_qutrit_partition, two_qutrit_rows

ACCEPTANCE: dict[int, dict[str, bool]] = {}

CRITERIA = {
    1: "one qutrit: MCS's, partition, unbiasedness, coset layouts",
    2: "two qutrits: census, partition count and structure, worked partition",
    3: "three qutrits: census, profiles, witnesses, coset theorem",
    4: "operator algebra: multiplication rules, observables, Hermitean identities",
    5: "named states: expansion shapes, Aharonov decomposition, reduced states",
    6: "tomography: exact round trips on seeded mixtures",
    7: "property suite: projectors, completeness, operator orthonormality, homomorphism",
}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance check under its criterion number."""
    marker = request.node.get_closest_marker("criterion")
    number = marker.args[0]
    ACCEPTANCE.setdefault(number, {})[request.node.name] = False
    yield
    rep = getattr(request.node, "rep_call", None)
    ACCEPTANCE[number][request.node.name] = bool(rep and rep.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        failed = [name for name, ok in checks.items() if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number} [{status}] {CRITERIA[number]} ({len(checks) - len(failed)}/{len(checks)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def n1_partition():
    return enumerate_partitions(1)[0]


@pytest.fixture(scope="session")
def n2_partitions():
    return enumerate_partitions(2)


@pytest.fixture(scope="session")
def worked_rows():
    return two_qutrit_rows()


@pytest.fixture(scope="session")
def worked_partition():
    return two_qutrit_partition()


@pytest.fixture(scope="session")
def worked_bases(worked_rows):
    return [mub.basis_from_mcs(m) for m in worked_rows]


@pytest.fixture(scope="session")
def witnesses():
    return {k: find_partition_with_structure(k, 3) for k in range(5)}


@pytest.fixture(scope="session")
def witness_bases(witnesses):
    return {k: mub.partition_bases(p) for k, p in witnesses.items() if p is not None}
