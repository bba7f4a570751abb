"""Deterministic single-run event loop for the ideal-conditions model.

Users arrive with exponential gaps, are admitted when the server has spare
capacity AND an independent uniform draw clears the 1/(n+1) rule for the
current queue size n, then hold a normally distributed service time.  An
admitted user either departs normally or, with the configured fault
probability, exits early at a uniform point inside its service interval,
counting one error.

Replayability: every run owns a private RNG stream derived from
(seed, run_index) and draws in a fixed documented order per arrival:
next interarrival gap, admission uniform (only when below capacity), view
choice, service time, fault uniform, error-position uniform.  The error
position is drawn even when no fault fires so that runs with different
fault probabilities share all other randomness.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field

from ..errors import InvariantBreach
from .config import SimConfig

ARRIVAL = "arrival"
DEPARTURE = "departure"
ERROR_EXIT = "error"

SERVICE_FLOOR = 0.01  # seconds; Normal(3, 1) goes negative with p ~ 0.0013


def stream_for_run(seed: int, run_index: int) -> random.Random:
    """Private RNG stream for one run; string seeding keeps it stable
    across processes and platforms."""
    return random.Random(f"{seed}/run{run_index}")


def admit_decision(queue_size: int, capacity: int, rng: random.Random) -> bool:
    """Capacity gate plus the 1/(n+1) thinning rule."""
    if queue_size >= capacity:
        return False
    return rng.random() < 1.0 / (queue_size + 1)


@dataclass
class UserRef:
    uid: int
    view: str


@dataclass
class SimState:
    rng: random.Random
    clock: float = 0.0
    queue_size: int = 0
    events: list = field(default_factory=list)
    seq: int = 0
    arrivals_scheduled: int = 0
    arrivals_processed: int = 0
    admitted: int = 0
    rejected_capacity: int = 0
    rejected_balked: int = 0
    departed: int = 0
    errors: int = 0
    truncated_services: int = 0
    view_counts: dict = field(default_factory=dict)
    next_uid: int = 0

    @property
    def rejected(self) -> int:
        return self.rejected_capacity + self.rejected_balked

    def schedule(self, when: float, kind: str, payload=None) -> None:
        heapq.heappush(self.events, (when, self.seq, kind, payload))
        self.seq += 1


def init_run(cfg: SimConfig, run_index: int) -> SimState:
    """Fresh state with counters at zero and the first arrival scheduled."""
    state = SimState(rng=stream_for_run(cfg.seed, run_index))
    first = state.rng.expovariate(1.0 / cfg.interarrival_mean)
    state.schedule(first, ARRIVAL)
    state.arrivals_scheduled = 1
    return state


def _choose_view(state: SimState, cfg: SimConfig) -> str:
    u = state.rng.random()
    acc = 0.0
    views = list(cfg.view_mix.items())
    for view, weight in views:
        acc += weight
        if u < acc:
            return view
    return views[-1][0]


def arrive(state: SimState, cfg: SimConfig) -> SimState:
    """Process one arrival: schedule the next one, run the admission gates,
    and hand admitted users to add_departure."""
    state.arrivals_processed += 1
    if state.arrivals_scheduled < cfg.events_per_run:
        gap = state.rng.expovariate(1.0 / cfg.interarrival_mean)
        state.schedule(state.clock + gap, ARRIVAL)
        state.arrivals_scheduled += 1

    if state.queue_size >= cfg.capacity:
        state.rejected_capacity += 1
        return state
    if not state.rng.random() < 1.0 / (state.queue_size + 1):
        state.rejected_balked += 1
        return state

    user = UserRef(uid=state.next_uid, view=_choose_view(state, cfg))
    state.next_uid += 1
    state.queue_size += 1
    state.admitted += 1
    state.view_counts[user.view] = state.view_counts.get(user.view, 0) + 1
    return add_departure(state, cfg, user)


def add_departure(state: SimState, cfg: SimConfig, user: UserRef) -> SimState:
    """Draw the service time and schedule either the normal departure or an
    early error exit at a uniform point inside the service interval."""
    t = state.rng.normalvariate(cfg.service_mean, cfg.service_std)
    if t < SERVICE_FLOOR:
        t = SERVICE_FLOOR
        state.truncated_services += 1
    faulted = state.rng.random() < cfg.fault_probability
    at = state.rng.random() * t  # consumed even without a fault: keeps
    # streams aligned across fault_probability settings
    if faulted:
        state.schedule(state.clock + at, ERROR_EXIT, user)
    else:
        state.schedule(state.clock + t, DEPARTURE, user)
    return state


def departure(state: SimState, kind: str = DEPARTURE) -> SimState:
    """Take one user out of the system; error exits also count one error."""
    if state.queue_size <= 0:
        raise InvariantBreach("departure with empty queue: event ordering bug")
    state.queue_size -= 1
    state.departed += 1
    if kind == ERROR_EXIT:
        state.errors += 1
    return state


@dataclass(frozen=True)
class RunResult:
    defect_density: int
    admitted: int
    rejected: int
    duration: float


def run_single(cfg: SimConfig, run_index: int, trace=None) -> RunResult:
    """Drive one run to exhaustion: cfg.events_per_run arrivals, then drain.

    trace, when given, is called as trace(clock, kind, queue_size) after
    every processed event.
    """
    if cfg.events_per_run == 0:
        return RunResult(0, 0, 0, 0.0)
    state = init_run(cfg, run_index)
    while state.events:
        when, _, kind, payload = heapq.heappop(state.events)
        if when < state.clock:
            raise InvariantBreach("event time went backwards")
        state.clock = when
        if kind == ARRIVAL:
            arrive(state, cfg)
        else:
            departure(state, kind)
        if trace is not None:
            trace(state.clock, kind, state.queue_size)
    if state.admitted != state.departed:
        raise InvariantBreach(
            f"drained run left {state.admitted - state.departed} users in the system"
        )
    return RunResult(
        defect_density=state.errors,
        admitted=state.admitted,
        rejected=state.rejected,
        duration=state.clock,
    )
