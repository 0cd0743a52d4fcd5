"""Shared fixtures: bundled pools, opponent sets, and reference programs.

Session scope matters here: the standard opponent sets keep a process-wide
match cache, so every test that replays the same policy against the same
gauntlet reuses earlier simulations instead of re-running them.
"""

import pytest

from lintscore.metrics import standard_opponents
from lintscore.microlang import Program, parse
from lintscore.pipeline import load_bundle
from lintscore.resources import data_path, policy_sources


@pytest.fixture(scope="session")
def bundle():
    return load_bundle("microrts")


@pytest.fixture(scope="session")
def oset16():
    return standard_opponents(16)


@pytest.fixture(scope="session")
def oset8():
    return standard_opponents(8)


def _load_pool(name):
    return [(ident, parse(text)) for ident, text in sorted(policy_sources(name).items())]


@pytest.fixture(scope="session")
def pool16():
    return _load_pool("pool16")


@pytest.fixture(scope="session")
def pool8():
    return _load_pool("pool8")


@pytest.fixture(scope="session")
def tiered():
    source = data_path("policies", "examples", "tiered_rush.mrl").read_text()
    return parse(source)


@pytest.fixture(scope="session")
def empty_program():
    return Program(())
