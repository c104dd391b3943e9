import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("TGEOM_CLI") or shutil.which("tgeom") or str(ROOT / "build" / "tgeom")
    if not pathlib.Path(path).exists():
        pytest.skip("tgeom executable not built")
    return path


@pytest.fixture
def case1_spec():
    return {"kind": "case1", "dim": 4, "metric": [1, -1, -1, -1], "b": [1, 0, 0, 0], "alpha": 0.1}


@pytest.fixture
def flat_spec():
    return {"kind": "euclidean", "dim": 3, "metric": [1, 1, 1]}
