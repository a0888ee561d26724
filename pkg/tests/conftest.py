import zlib

import numpy as np
import pytest

from qcg.basis import gellmann_basis, hw_basis, pauli_basis

_ACCEPTANCE = []


@pytest.fixture
def rng(request):
    # per-test deterministic stream
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


@pytest.fixture(params=["pauli1", "pauli2", "gm3", "gm4", "hw2", "hw3", "hw4"])
def any_basis(request):
    return {
        "pauli1": lambda: pauli_basis(1),
        "pauli2": lambda: pauli_basis(2),
        "gm3": lambda: gellmann_basis(3),
        "gm4": lambda: gellmann_basis(4),
        "hw2": lambda: hw_basis(2),
        "hw3": lambda: hw_basis(3),
        "hw4": lambda: hw_basis(4),
    }[request.param]()


@pytest.fixture
def criterion():
    """Record and assert one acceptance criterion; lines are echoed in the terminal summary."""
    def check(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" :: {detail}" if detail else "")
        print(line)
        _ACCEPTANCE.append(line)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
