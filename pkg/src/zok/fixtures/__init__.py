"""Bundled surface models; every worked example in the docs runs on these."""

from __future__ import annotations

import os

FIXTURE_NAMES = ("p2", "blowup1", "blowup2", "hirzebruch2")

_HERE = os.path.dirname(__file__)


def fixture_path(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"no bundled model named {name!r}; have {FIXTURE_NAMES}")
    return os.path.join(_HERE, f"{name}.json")


def load_fixture(name: str):
    from ..io import load_model

    return load_model(fixture_path(name))
