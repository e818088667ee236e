import os
import sys
import time

# Make tests/oracles.py importable regardless of invocation directory.
sys.path.insert(0, os.path.dirname(__file__))

SESSION_T0 = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    print(f"\ntotal suite wall time: {time.perf_counter() - SESSION_T0:.1f}s")
