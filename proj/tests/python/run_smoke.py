"""Runs the smoke tests when the extension is importable, skips otherwise."""

import importlib.util
import pathlib
import sys

if importlib.util.find_spec("scflp") is None or importlib.util.find_spec("pytest") is None:
    print("scflp package not installed; skipping")
    sys.exit(77)

import pytest

sys.exit(pytest.main(["-q", str(pathlib.Path(__file__).with_name("test_smoke.py"))]))
