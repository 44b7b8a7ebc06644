from __future__ import annotations

import pytest

from themegap.corpus import build_headlines, default_normalizer
from themegap.lexicon import load_lexicon
from themegap.synth import DEFAULT_OUTLETS, SynthSpec, lexicon_text, make_records

ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): end-to-end acceptance criterion"
    )


@pytest.fixture(scope="session")
def normalizer():
    return default_normalizer()


@pytest.fixture(scope="session")
def synth_headlines(normalizer):
    """10k-headline synthetic corpus, normalized."""
    records = make_records(SynthSpec(seed=7, n_headlines=10_000))
    return build_headlines(records, DEFAULT_OUTLETS, normalizer).headlines


@pytest.fixture(scope="session")
def synth_lexicon(normalizer):
    return load_lexicon(lexicon_text(), normalizer)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        name = marker.args[0] if marker.args else item.name
        ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{ACCEPTANCE_RESULTS[name]}  {name}")
