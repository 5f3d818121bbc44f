import os
import pathlib
import shutil

import pytest


@pytest.fixture(scope="session")
def cli() -> str:
    path = os.environ.get("QEKR_CLI")
    if not path:
        candidate = pathlib.Path(__file__).resolve().parents[2] / "build" / "qekr"
        path = str(candidate) if candidate.exists() else shutil.which("qekr")
    if not path:
        pytest.skip("qekr CLI not built")
    return path
