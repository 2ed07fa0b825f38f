import os
from pathlib import Path

import pytest
from hypothesis import settings

DATA = Path(__file__).parent / "data"
ALICE = DATA / "alice29.txt"

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def alice_bytes() -> bytes:
    return ALICE.read_bytes()


@pytest.fixture(scope="session")
def alice_build(alice_bytes):
    from aggsym import Alphabet, BuildConfig, build, tokenize_base

    alphabet = Alphabet.for_document(alice_bytes)
    return build(tokenize_base(alice_bytes, alphabet), alphabet, BuildConfig(max_aggregates=40))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome not in ("error", "skipped"):
                continue
            if "test_acceptance.py::test_c" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1][len("test_"):]
            detail = dict(rep.user_properties).get("detail", "")
            lines.append((name, {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL"), detail))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status, detail in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())
