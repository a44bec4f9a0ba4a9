"""Preemptive fixed-priority uniprocessor simulator over explicit releases.

Discrete time, unit quanta: at each instant the released, unfinished job of
the highest-priority task runs; a release preempts lower-priority work in the
same instant.  Every job costs exactly c_i units.  The simulator is the
ground-truth cross-validator for the analysis side: observed responses can
never exceed the computed worst case, and one bundled scenario reproduces a
documented schedule strip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .core import TaskSystem, validate
from .errors import HorizonTooSmall, InvalidInstance


@dataclass(frozen=True)
class JobRelease:
    arrival: int
    release: int


@dataclass(frozen=True)
class ReleasePattern:
    """Per-task job lists; index aligned with the task system."""

    jobs: tuple[tuple[JobRelease, ...], ...]

    def __init__(self, jobs: Iterable[Iterable[JobRelease | tuple[int, int]]]):
        norm = tuple(
            tuple(j if isinstance(j, JobRelease) else JobRelease(*j) for j in per_task)
            for per_task in jobs
        )
        object.__setattr__(self, "jobs", norm)


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    task: int | None  # None = idle


@dataclass(frozen=True)
class CompletedJob:
    task: int
    index: int
    arrival: int
    release: int
    completion: int


@dataclass(frozen=True)
class ScheduleTrace:
    horizon: int
    segments: tuple[Segment, ...]
    jobs: tuple[CompletedJob, ...]


def validate_pattern(ts: TaskSystem, rp: ReleasePattern) -> None:
    validate(ts)
    if len(rp.jobs) != len(ts.tasks):
        raise InvalidInstance(
            f"pattern covers {len(rp.jobs)} tasks, system has {len(ts.tasks)}"
        )
    for idx, (task, jobs) in enumerate(zip(ts.tasks, rp.jobs)):
        prev_arrival = None
        for job in jobs:
            if job.arrival < 0:
                raise InvalidInstance(f"task {idx}: negative arrival {job.arrival}")
            if prev_arrival is not None and job.arrival - prev_arrival < task.p:
                raise InvalidInstance(
                    f"task {idx}: arrivals {prev_arrival},{job.arrival} closer than p={task.p}"
                )
            if not 0 <= job.release - job.arrival <= task.jitter:
                raise InvalidInstance(
                    f"task {idx}: release delay {job.release - job.arrival} outside "
                    f"[0, jitter={task.jitter}]"
                )
            prev_arrival = job.arrival


def simulate(ts: TaskSystem, rp: ReleasePattern, horizon: int) -> ScheduleTrace:
    """Run the schedule on [0, horizon); raises HorizonTooSmall if a job
    released inside the window cannot finish."""
    validate_pattern(ts, rp)
    if horizon < 1:
        raise InvalidInstance(f"horizon must be >= 1, got {horizon}")

    # (release, task, job index) of jobs released inside the window
    pending = []
    for tidx, jobs in enumerate(rp.jobs):
        for jidx, job in enumerate(jobs):
            if job.release < horizon:
                pending.append((job.release, tidx, jidx, job))
    remaining = {(t, j): ts.tasks[t].c for _, t, j, _ in pending}
    released: list[tuple[int, int, int]] = []  # (task, release-order, job idx)
    pending.sort()
    completions: list[CompletedJob] = []
    timeline: list[int | None] = []

    cursor = 0
    for now in range(horizon):
        while cursor < len(pending) and pending[cursor][0] <= now:
            _, t, j, _ = pending[cursor]
            released.append((t, pending[cursor][0], j))
            cursor += 1
        ready = [key for key in released if remaining[(key[0], key[2])] > 0]
        if not ready:
            timeline.append(None)
            continue
        # highest priority first; among a task's own jobs, earliest release first
        t, _, j = min(ready, key=lambda key: (key[0], key[1], key[2]))
        timeline.append(t)
        remaining[(t, j)] -= 1
        if remaining[(t, j)] == 0:
            job = rp.jobs[t][j]
            completions.append(CompletedJob(t, j, job.arrival, job.release, now + 1))

    unfinished = [key for key, rem in remaining.items() if rem > 0]
    if unfinished:
        t, j = unfinished[0]
        raise HorizonTooSmall(
            f"job {j} of task {t} released at {rp.jobs[t][j].release} does not finish "
            f"within horizon {horizon}"
        )

    segments = []
    start = 0
    for i in range(1, horizon + 1):
        if i == horizon or timeline[i] != timeline[start]:
            segments.append(Segment(start, i, timeline[start]))
            start = i
    completions.sort(key=lambda c: (c.task, c.index))
    return ScheduleTrace(horizon, tuple(segments), tuple(completions))


def observed_responses(
    trace: ScheduleTrace, measure: Literal["release", "arrival"] = "release"
) -> list[int]:
    """Per completed job, completion minus release (or arrival)."""
    if measure not in ("release", "arrival"):
        raise InvalidInstance(f"unknown measure {measure!r}")
    origin = (lambda j: j.release) if measure == "release" else (lambda j: j.arrival)
    return [job.completion - origin(job) for job in trace.jobs]


def render_gantt(trace: ScheduleTrace, ts: TaskSystem, width: int | None = None) -> str:
    """Monospace strip per task plus a processor row; '#' marks execution."""
    horizon = trace.horizon if width is None else min(width, trace.horizon)
    rows = []
    per_task = []
    for tidx in range(len(ts.tasks)):
        cells = ["."] * horizon
        for seg in trace.segments:
            if seg.task == tidx:
                for x in range(seg.start, min(seg.end, horizon)):
                    cells[x] = "#"
        per_task.append("".join(cells))
    for tidx, strip in enumerate(per_task):
        rows.append(f"task{tidx:<2d} |{strip}|")
    proc = ["."] * horizon
    for seg in trace.segments:
        if seg.task is not None:
            for x in range(seg.start, min(seg.end, horizon)):
                proc[x] = str(seg.task % 10)
    rows.append(f"cpu    |{''.join(proc)}|")
    return "\n".join(rows)
