"""Shared pytest hooks: a one-line-per-criterion summary for the acceptance suite."""

_CRITERIA = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _CRITERIA.append((props["criterion"], report.outcome, props.get("detail", ""),
                      props.get("runtime", float("nan"))))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail, runtime in sorted(_CRITERIA):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name:<40} {runtime:7.2f} s  {detail}")
