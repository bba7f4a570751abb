"""Concurrent tester execution against a live HTTP target.

One tester per test case.  Testers start at exponentially staggered
offsets, each owns its activity log file and its RNG, and they share only
the immutable case list and the target address.  A step's outcome is
decided by three rules: 2xx status class, the page marker for the node
must be present, and the fixture fault marker must be absent.
"""

from __future__ import annotations

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urljoin

import requests

from ..errors import TargetDown
from .cases import TestCase, TestProfile
from .crawler import Credentials
from .mock import FAULT_MARKER

__all__ = ["HarnessConfig", "run_evaluation", "META_ACTIONS"]

log = logging.getLogger(__name__)

META_ACTIONS = ("begin", "login", "end")  # step_index -1, not walk steps


@dataclass(frozen=True)
class HarnessConfig:
    duration_s: float = 100.0
    arrival_mean_s: float = 4.0
    workers: int = 100
    request_timeout_s: float = 10.0
    error_marker: str = FAULT_MARKER

    def __post_init__(self):
        if self.duration_s <= 0 or self.arrival_mean_s <= 0:
            raise ValueError("duration and arrival mean must be positive")
        if self.workers < 1:
            raise ValueError("need at least one worker")


def _now_ms() -> int:
    return int(time.time() * 1000)


class _TesterLog:
    def __init__(self, path: Path, tester_id: int):
        self.path = path
        self.tester_id = tester_id
        self._fh = open(path, "w", encoding="utf-8")

    def record(self, case_id: str, step_index: int, action: str, outcome: str, node: str):
        self._fh.write(
            f"{_now_ms()}\t{self.tester_id}\t{case_id}\t{step_index}\t{action}\t{outcome}\t{node}\n"
        )

    def close(self):
        self._fh.close()


def _classify(status: int, text: str, node_path: str, error_marker: str) -> str:
    if 500 <= status < 600:
        return f"fault:http-{status}"
    if not 200 <= status < 300:
        return "nav_error"
    if error_marker in text:
        return "fault:error-marker"
    if f"page:{node_path}" not in text:
        return "fault:missing-marker"
    return "ok"


def _execute_step(session: requests.Session, target: str, step, cfg: HarnessConfig) -> str:
    url = urljoin(target, step.node_path)
    try:
        if step.action == "read":
            response = session.get(url, timeout=cfg.request_timeout_s)
        else:
            data = dict(step.data)
            data["op"] = step.action
            response = session.post(url, data=data, timeout=cfg.request_timeout_s)
    except requests.RequestException:
        return "nav_error"
    return _classify(response.status_code, response.text, step.node_path, cfg.error_marker)


def _login(session: requests.Session, target: str, view: str, creds: Credentials,
           cfg: HarnessConfig) -> bool:
    try:
        # don't follow the redirect: the landing page's own health is a
        # separate observation and must not mask a successful login
        response = session.post(
            urljoin(target, creds.login_path),
            data={"view": view, "username": creds.username, "password": creds.password},
            allow_redirects=False,
            timeout=cfg.request_timeout_s,
        )
    except requests.RequestException:
        return False
    return response.status_code < 400


def _run_tester(
    tester_id: int,
    case: TestCase,
    profile: TestProfile,
    target: str,
    cfg: HarnessConfig,
    log_path: Path,
    t0: float,
    offset: float,
) -> None:
    delay = t0 + offset - time.monotonic()
    if delay > 0:
        time.sleep(delay)
    deadline = t0 + cfg.duration_s
    tlog = _TesterLog(log_path, tester_id)
    try:
        tlog.record(case.id, -1, "begin", "ok", "-")
        session = requests.Session()
        if profile.credentials is not None:
            ok = _login(session, target, case.view, profile.credentials, cfg)
            tlog.record(case.id, -1, "login", "ok" if ok else "nav_error", "-")
            if not ok:
                return
        for index, step in enumerate(case.steps):
            if time.monotonic() >= deadline:
                break
            outcome = _execute_step(session, target, step, cfg)
            tlog.record(case.id, index, step.action, outcome, step.node_path)
    finally:
        tlog.record(case.id, -1, "end", "ok", "-")
        tlog.close()


def run_evaluation(
    target: str,
    cases: list[TestCase],
    profiles: dict[str, TestProfile],
    cfg: HarnessConfig,
    log_dir: str | Path,
    seed: int,
) -> list[Path]:
    """Execute the cases concurrently; returns the per-tester log files.

    Raises TargetDown when the pre-run probe cannot reach the target at
    all.  Mid-run connection failures degrade to nav_error outcomes so one
    flaky page never kills an evaluation.
    """
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    try:
        requests.get(target, timeout=cfg.request_timeout_s)
    except requests.RequestException as exc:
        raise TargetDown(f"target {target} did not answer the probe: {exc}") from exc

    rng = random.Random(f"{seed}/arrivals")
    offsets = []
    clock = 0.0
    for _ in cases:
        clock += rng.expovariate(1.0 / cfg.arrival_mean_s)
        offsets.append(clock)

    t0 = time.monotonic()
    paths: list[Path] = []
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = []
        for i, (case, offset) in enumerate(zip(cases, offsets)):
            if offset >= cfg.duration_s:
                continue  # this tester would arrive after the window closes
            path = log_dir / f"tester-{i:05d}.log"
            paths.append(path)
            futures.append(
                pool.submit(
                    _run_tester, i, case, profiles[case.view], target, cfg, path, t0, offset
                )
            )
        for future in futures:
            future.result()
    return paths
