import pytest

from mvpdetect.features import SystemConfig, build_dataset
from mvpdetect.synth import CorpusSpec, synth_corpus

AUX3 = ("DS1", "GCS", "AT")
CORPUS_SEED = 0

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def system3():
    return SystemConfig("DS0", AUX3)


@pytest.fixture(scope="session")
def corpus(system3):
    """500 benign + 500 targeted AE transcripts, wer 0.10."""
    return synth_corpus(CorpusSpec(500, 500, wer=0.10, seed=CORPUS_SEED), system3)


@pytest.fixture(scope="session")
def vectors3(corpus, system3):
    store, manifest = corpus
    return build_dataset(system3, store, manifest)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
