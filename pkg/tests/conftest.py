import pytest
import support


@pytest.fixture(scope="session")
def spec():
    return support.example2()


@pytest.fixture(scope="session")
def toy_spec():
    return support.toy()


@pytest.fixture(scope="session")
def ctx():
    return support.example2_context()


@pytest.fixture(scope="session")
def pts(spec):
    return spec.points


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES):
            terminalreporter.write_line(line)
