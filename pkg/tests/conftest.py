import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gordian.ingest import default_table_path, load_table


@pytest.fixture(scope="session")
def table():
    """The bundled knot table, loaded once per session."""
    return load_table(default_table_path())
