import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=15, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    import reporting

    if reporting.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(reporting.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
