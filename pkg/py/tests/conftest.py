import logging
import os
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.dirname(HERE))                   # py/ for the hlestim package
sys.path.insert(0, os.path.dirname(os.path.dirname(HERE)))  # repository root for server.py / reproduce.py

from hlestim.config import load_config  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch):
    """Every test starts from default settings and leaves no HLESTIM_* behind."""
    for name in list(os.environ):
        if name.startswith("HLESTIM_"):
            monkeypatch.delenv(name)
    load_config.cache_clear()
    yield
    for name in list(os.environ):
        if name.startswith("HLESTIM_"):
            del os.environ[name]
    load_config.cache_clear()
    logger = logging.getLogger("hlestim")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)
