"""Shared fixtures: session-wide CQ cache and end-to-end verify runs."""

import os
import subprocess
import sys
import time

import pytest


@pytest.fixture(scope="session")
def session_cache(tmp_path_factory):
    """One CQ transfer cache shared across the whole test session."""
    return str(tmp_path_factory.mktemp("cq-cache"))


@pytest.fixture(scope="session")
def verify_fast_runs(tmp_path_factory, session_cache):
    """Two end-to-end `verify --tier fast` CLI runs sharing a warm cache.

    Returns the two report payloads (bytes), exit codes, and wall times.
    Used both by the CLI report tests and by the determinism acceptance
    criterion, so the expensive runs happen once.
    """
    env = dict(os.environ, THERMOBEM_CACHE=session_cache)
    runs = []
    for i in range(2):
        out = str(tmp_path_factory.mktemp(f"verify{i}"))
        t0 = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "thermobem.cli", "verify",
             "--tier", "fast", "--threads", "4", "--out", out],
            env=env, capture_output=True, text=False)
        wall = time.perf_counter() - t0
        report_path = os.path.join(out, "report.json")
        payload = (open(report_path, "rb").read()
                   if os.path.exists(report_path) else b"")
        runs.append({"exit": proc.returncode, "wall": wall,
                     "payload": payload, "stderr": proc.stderr})
    return runs
