import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        label = props.get("criterion")
        if label is None:
            return
        _criteria[label] = (report.outcome, props.get("note"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        outcome, note = _criteria[label]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"{verdict}  criterion {label}")
        if note:
            tr.write_line(f"      {note}")
