import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Keep the power-sum disk cache inside the test session."""
    path = tmp_path_factory.mktemp("ffzeta-cache")
    old = os.environ.get("FFZETA_CACHE")
    os.environ["FFZETA_CACHE"] = str(path)
    yield path
    if old is None:
        os.environ.pop("FFZETA_CACHE", None)
    else:
        os.environ["FFZETA_CACHE"] = old
