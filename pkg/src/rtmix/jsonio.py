"""JSON schemas for every instance kind the CLI consumes or emits.

Task systems:   {"tasks": [{"c": int, "d": int|null, "p": int, "jitter": int}, ...]}
                (priority = array order, index 0 highest)
Mixing:         {"w0": int, "terms": [{"w": int, "a": int, "b": int}, ...]}
Releases:       {"releases": [[{"arrival": int, "release": int}, ...], ...]}
4-block:        {"n","r","s","t","q","D","C","B","A","b0","rhs","w0","j","wj","u"}
                (matrices row-major)
"""

from __future__ import annotations

import json
from typing import Any

from .blockip import SimpleFourBlock
from .core import Task, TaskSystem, validate
from .errors import InvalidInstance
from .mixing import MixInstance, MixSolution
from .sim import ReleasePattern, ScheduleTrace


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidInstance(msg)


def task_system_to_dict(ts: TaskSystem) -> dict:
    return {
        "tasks": [
            {"c": t.c, "d": t.d, "p": t.p, "jitter": t.jitter} for t in ts.tasks
        ]
    }


def task_system_from_dict(data: Any) -> TaskSystem:
    _require(isinstance(data, dict) and "tasks" in data, "expected {'tasks': [...]}")
    tasks = []
    for entry in data["tasks"]:
        _require(isinstance(entry, dict), "each task must be an object")
        unknown = set(entry) - {"c", "d", "p", "jitter"}
        _require(not unknown, f"unknown task fields: {sorted(unknown)}")
        tasks.append(
            Task(
                c=entry.get("c"),
                p=entry.get("p"),
                jitter=entry.get("jitter", 0),
                d=entry.get("d"),
            )
        )
    ts = TaskSystem(tasks)
    validate(ts)
    return ts


def mix_instance_to_dict(inst: MixInstance) -> dict:
    return {
        "w0": inst.w0,
        "terms": [{"w": t.w, "a": t.a, "b": t.b} for t in inst.terms],
    }


def mix_instance_from_dict(data: Any) -> MixInstance:
    _require(isinstance(data, dict) and "w0" in data and "terms" in data,
             "expected {'w0': ..., 'terms': [...]}")
    terms = []
    for entry in data["terms"]:
        _require(isinstance(entry, dict), "each term must be an object")
        unknown = set(entry) - {"w", "a", "b"}
        _require(not unknown, f"unknown term fields: {sorted(unknown)}")
        terms.append((entry.get("w"), entry.get("a"), entry.get("b")))
    inst = MixInstance(data["w0"], terms)
    from .mixing import validate as validate_mix

    validate_mix(inst)
    return inst


def mix_solution_to_dict(sol: MixSolution) -> dict:
    return {"s": sol.s, "x": list(sol.x), "objective": sol.objective}


def release_pattern_to_dict(rp: ReleasePattern) -> dict:
    return {
        "releases": [
            [{"arrival": j.arrival, "release": j.release} for j in per_task]
            for per_task in rp.jobs
        ]
    }


def release_pattern_from_dict(data: Any) -> ReleasePattern:
    _require(isinstance(data, dict) and "releases" in data, "expected {'releases': [...]}")
    jobs = []
    for per_task in data["releases"]:
        jobs.append([(e["arrival"], e["release"]) for e in per_task])
    return ReleasePattern(jobs)


def trace_to_dict(trace: ScheduleTrace) -> dict:
    return {
        "horizon": trace.horizon,
        "segments": [
            {"start": s.start, "end": s.end, "task": s.task} for s in trace.segments
        ],
        "jobs": [
            {
                "task": j.task,
                "index": j.index,
                "arrival": j.arrival,
                "release": j.release,
                "completion": j.completion,
            }
            for j in trace.jobs
        ],
    }


def four_block_to_dict(p: SimpleFourBlock) -> dict:
    return {
        "n": p.n,
        "r": p.r,
        "s": p.s,
        "t": p.t,
        "q": 1,
        "D": [list(row) for row in p.D],
        "C": [[list(row) for row in block] for block in p.C],
        "B": [[list(row) for row in block] for block in p.B],
        "A": [[list(row) for row in block] for block in p.A],
        "b0": p.b0,
        "rhs": [list(r) for r in p.rhs],
        "w0": list(p.w0),
        "j": p.j,
        "wj": list(p.wj),
        "u": list(p.u),
    }


def four_block_from_dict(data: Any) -> SimpleFourBlock:
    _require(isinstance(data, dict), "expected a 4-block object")
    _require(data.get("q", 1) == 1, "exactly one coupling inequality is supported")
    try:
        return SimpleFourBlock(
            n=data["n"],
            r=data["r"],
            s=data["s"],
            t=data["t"],
            D=tuple(tuple(row) for row in data["D"]),
            C=tuple(tuple(tuple(row) for row in block) for block in data["C"]),
            B=tuple(tuple(tuple(row) for row in block) for block in data["B"]),
            A=tuple(tuple(tuple(row) for row in block) for block in data["A"]),
            b0=data["b0"],
            rhs=tuple(tuple(r) for r in data["rhs"]),
            w0=tuple(data["w0"]),
            j=data["j"],
            wj=tuple(data["wj"]),
            u=tuple(data["u"]),
        )
    except KeyError as exc:
        raise InvalidInstance(f"missing 4-block field {exc}") from None


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path} is not valid JSON: {exc}") from None
