import random

import numpy as np
import pytest

from targetop import ChannelSpec, OperationRecord, RegistrationEvent

UNIT_CHANNELS = (ChannelSpec("in", "input", 1.0), ChannelSpec("out", "output", 1.0))

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def record(events, channels=UNIT_CHANNELS):
    return OperationRecord(channels, tuple(RegistrationEvent(*e) for e in events))


@pytest.fixture
def paper_record():
    """Reduced operation: input cost 2 at t=2, output cost 3 at t=8."""
    return record([(2, "in", 2), (8, "out", 3)])


@pytest.fixture
def buffering_record():
    """Same operation with conserved quantity: 2 units in, 2 units out at ps=1.5."""
    channels = (ChannelSpec("in", "input", 1.0), ChannelSpec("out", "output", 1.5))
    return record([(2, "in", 2), (8, "out", 2)], channels)


def random_operation(rng: random.Random, n_min=2, n_max=20, t_max=100.0, a_max=10.0):
    """Random record on the unit manifest with at least one input and one output."""
    n = rng.randint(n_min, n_max)
    roles = ["in", "out"] + [rng.choice(("in", "out")) for _ in range(n - 2)]
    rng.shuffle(roles)
    events = []
    for ch in roles:
        amount = 0.0
        while amount == 0.0:
            amount = rng.uniform(0.0, a_max)
        events.append((rng.uniform(0.0, t_max), ch, amount))
    return record(events)


# Oracles: closed-form ramp sums straight from the impulses, independent of
# the step-function / piecewise-linear machinery.

def ramp_sum(impulses, t, absolute=False):
    """sum a_i * max(0, t - t_i) over impulses, in floats."""
    return sum((abs(a) if absolute else a) * max(0.0, t - ti) for ti, a in impulses)


def dense_difference(re, pe, grid):
    """vpe - vre on a numpy grid, via t*A(t) - B(t) with cumulative sums."""
    times = np.array([float(t) for t, _ in list(re) + list(pe)])
    amounts = np.array([float(abs(a)) for _, a in re] + [float(a) for _, a in pe])
    signs = np.array([-1.0] * len(re) + [1.0] * len(pe))
    order = np.argsort(times, kind="stable")
    times, w = times[order], (amounts * signs)[order]
    A = np.concatenate(([0.0], np.cumsum(w)))
    B = np.concatenate(([0.0], np.cumsum(w * times)))
    idx = np.searchsorted(times, grid, side="right")
    return grid * A[idx] - B[idx]


def brute_force_crossing(re, pe, t_from, step=1e-4, chunk=1_000_000, t_cap=1e5):
    """First t >= t_from where vpe - vre reaches 0: dense scan, then bisection."""
    def d(t):
        return float(dense_difference(re, pe, np.array([t]))[0])

    if d(t_from) >= 0:
        return t_from
    lo = t_from
    while lo < t_cap:
        grid = lo + step * np.arange(1, chunk + 1)
        vals = dense_difference(re, pe, grid)
        hit = np.flatnonzero(vals >= 0)
        if hit.size:
            k = hit[0]
            a = grid[k - 1] if k else lo
            b = grid[k]
            for _ in range(80):
                m = 0.5 * (a + b)
                if d(m) >= 0:
                    b = m
                else:
                    a = m
            return b
        lo = grid[-1]
    return None
