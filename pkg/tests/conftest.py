import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from framescope.lexicon import load_stub_lexicon


@pytest.fixture(scope="session")
def stub_lexicon():
    return load_stub_lexicon()
