import time

import numpy as np
import pytest

from modfix.actions import Block, SpaceX, build_action
from modfix.catalog import builtin_algebra


class Setup:
    def __init__(self, space, act_s, act_g):
        self.space = space
        self.act_s = act_s
        self.act_g = act_g


def weighted_circle():
    space = SpaceX((Block("z1", 1, 1, "complex"), Block("z2", 1, 1, "complex")))
    act_s = build_action(builtin_algebra("circle"), space, {
        "op": "sum",
        "terms": [
            {"op": "weight", "block": "z1", "weight": 1},
            {"op": "weight", "block": "z2", "weight": 2},
        ],
    })
    act_g = build_action(builtin_algebra("u(1)"), space,
                         {"op": "weight", "blocks": ["z1", "z2"], "weight": 1})
    return Setup(space, act_s, act_g)


def su2_triple():
    space = SpaceX(tuple(Block(f"T{k}", 3, 3, "complex") for k in (1, 2, 3)))
    blocks = ["T1", "T2", "T3"]
    act_g = build_action(builtin_algebra("u(3)"), space, {"op": "conjugate", "blocks": blocks})
    act_s = build_action(builtin_algebra("su(2)"), space, {"op": "adjoint", "blocks": blocks})
    return Setup(space, act_s, act_g)


@pytest.fixture(scope="session")
def circle_setup():
    return weighted_circle()


@pytest.fixture(scope="session")
def triple_setup():
    return su2_triple()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so its timing check sees the whole suite
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
