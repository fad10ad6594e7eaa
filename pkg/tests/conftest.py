"""Shared test helpers: independent oracles and acceptance reporting."""

from __future__ import annotations

import numpy as np
import pytest


def naive_evaluate(inst, bits) -> float:
    """Direct re-summation of the defining objective, independent of
    the packed table-index arithmetic used by the library."""
    total = 0.0
    for i in range(inst.n):
        idx = int(bits[i])
        for nb in inst.neighbors[i]:
            idx = 2 * idx + int(bits[nb])
        total += float(inst.tables[i][idx])
    return total


def exhaustive_best_value(inst) -> float:
    """Enumerate all 2^n strings through naive_evaluate (tiny n only)."""
    best = -np.inf
    for code in range(1 << inst.n):
        bits = [(code >> (inst.n - 1 - j)) & 1 for j in range(inst.n)]
        best = max(best, naive_evaluate(inst, bits))
    return best


_acceptance_lines: list[str] = []


def record_acceptance(criterion: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"ACCEPTANCE {criterion:2d}: {status} - {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
