import functools
import os
import time

from hypothesis import HealthCheck, settings

from gracesize.families import gen_family
from gracesize.pipeline import near_graceful

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def pipeline_run(family: str, n: int, epsilon: float, seed: int):
    """Memoised end-to-end run shared by the example and acceptance tests."""
    tree = gen_family(family, n, seed)
    t0 = time.perf_counter()
    lab, rep = near_graceful(tree, epsilon, seed)
    return tree, lab, rep, time.perf_counter() - t0


# acceptance verdicts, one line per criterion in the terminal summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str):
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
