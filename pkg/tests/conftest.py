import numpy as np
import pytest

from movingframes.atlas import FrameField
from movingframes.frames import Frame, parseval_normalize

SQ2 = np.sqrt(0.5)


def random_parseval(rng, k, n):
    return parseval_normalize(Frame(rng.standard_normal((n, k))))


def mercedes_benz():
    angles = 2 * np.pi * np.arange(3) / 3
    return Frame(np.sqrt(2 / 3) * np.vstack([np.cos(angles), np.sin(angles)]))


def rotation_loop(samples, seed=1):
    """Row spaces of ``[I_2 0] R(t)`` with ``R(t)`` a closed loop in SO(4)."""
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    ts = np.linspace(0.0, 2 * np.pi, samples)
    frames = []
    for t in ts:
        blk = np.zeros((4, 4))
        for (i, j), w in (((0, 2), 1.0), ((1, 3), 2.0)):
            c, s = np.cos(w * t), np.sin(w * t)
            blk[i, i] = blk[j, j] = c
            blk[i, j], blk[j, i] = s, -s
        frames.append(Frame(np.eye(4)[:2] @ (Q @ blk @ Q.T)))
    return FrameField("path", np.column_stack([ts, np.zeros_like(ts)]), frames)


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
