import re
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_runtest_makereport(item, call):
    crit = item.get_closest_marker("criterion")
    if crit is None or call.when != "call":
        return
    cid, desc = crit.args
    ok = call.excinfo is None and ACCEPTANCE.get(cid, (True, desc))[0]
    ACCEPTANCE[cid] = (ok, desc)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, description): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda c: (int(re.match(r"\d+", c).group()), c)):
        ok, desc = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {cid:<5} {desc}")
