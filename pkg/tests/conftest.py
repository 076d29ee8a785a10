import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from airtap import default_config
from airtap.engine import FingerState


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def rig(config):
    return config.array


def make_trace(events, t_end, dt=0.01):
    """Build a trace from (t, x, y, down) events, zero-order held to t_end.

    Samples are emitted every dt so the trace looks like a real panel
    stream; event times must land on the dt grid.
    """
    events = sorted(events)
    out = []
    state = (0.0, 0.0, False)
    n = round(t_end / dt)
    for i in range(n + 1):
        t = i * dt
        while events and events[0][0] <= t + 1e-12:
            _, x, y, down = events.pop(0)
            state = (x, y, down)
        out.append(FingerState((state[0], state[1]), state[2], t))
    return out


@pytest.fixture
def tap_and_hold_trace():
    """Press inside the red object at t=0.0005 and hold for half a second."""
    out = [FingerState((0.0, 0.0), False, 0.0)]
    for i in range(1, 51):
        out.append(FingerState((-0.080, 0.0), True, 0.0005 + (i - 1) * 0.01))
    out.append(FingerState((-0.080, 0.0), True, 0.5005))
    return out
