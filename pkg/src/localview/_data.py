"""Loader for the packaged instance data."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import yaml


@lru_cache(maxsize=None)
def instance_data() -> dict:
    text = resources.files("localview.data").joinpath("instances.yaml").read_text()
    return yaml.safe_load(text)
