"""Behavior-tree engine and the typed runtime parameter store.

Composites are memoryless: every tick restarts from the first child, so
higher-priority conditions are re-checked continuously.  The parameter store
mirrors the experiment-state and perception parameters the operator can tune
live; every write is type-checked, range-handled, and emits a change event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .errors import ParameterRangeError, UnknownParameter

__all__ = [
    "Status",
    "Node",
    "Sequence",
    "Selector",
    "Inverter",
    "Leaf",
    "TickContext",
    "tick",
    "ParamStore",
    "set_experiment_state",
    "check_experiment_state",
    "tree_to_json",
]


class Status(Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    RUNNING = "running"


@dataclass
class TickContext:
    """Carried through one tick: the world, the parameter store, and the visit trace."""

    world: object
    params: "ParamStore"
    trace: list[tuple[str, Status]] = field(default_factory=list)


class Node:
    def __init__(self, name: str, children: list["Node"] | None = None):
        self.name = name
        self.children = children or []

    def tick(self, ctx: TickContext) -> Status:
        raise NotImplementedError

    def _record(self, ctx: TickContext, status: Status) -> Status:
        ctx.trace.append((self.name, status))
        return status


class Sequence(Node):
    """AND node: SUCCESS only if every child succeeds; short-circuits otherwise."""

    def tick(self, ctx: TickContext) -> Status:
        for child in self.children:
            status = child.tick(ctx)
            if status != Status.SUCCESS:
                return self._record(ctx, status)
        return self._record(ctx, Status.SUCCESS)


class Selector(Node):
    """OR node: SUCCESS as soon as any child succeeds; FAILURE only if all fail."""

    def tick(self, ctx: TickContext) -> Status:
        for child in self.children:
            status = child.tick(ctx)
            if status != Status.FAILURE:
                return self._record(ctx, status)
        return self._record(ctx, Status.FAILURE)


class Inverter(Node):
    """Swaps SUCCESS and FAILURE; RUNNING passes through."""

    def __init__(self, name: str, child: Node):
        super().__init__(name, [child])

    def tick(self, ctx: TickContext) -> Status:
        status = self.children[0].tick(ctx)
        if status == Status.SUCCESS:
            status = Status.FAILURE
        elif status == Status.FAILURE:
            status = Status.SUCCESS
        return self._record(ctx, status)


class Leaf(Node):
    """Action/condition node delegating to a callback(ctx) -> Status."""

    def __init__(self, name: str, behavior: Callable[[TickContext], Status]):
        super().__init__(name)
        self.behavior = behavior

    def tick(self, ctx: TickContext) -> Status:
        return self._record(ctx, self.behavior(ctx))


def tick(node: Node, world, params: "ParamStore") -> tuple[Status, list[tuple[str, Status]]]:
    """Tick a tree once; returns the root status and the depth-first visit trace."""
    ctx = TickContext(world=world, params=params)
    status = node.tick(ctx)
    return status, ctx.trace


def tree_to_json(node: Node) -> dict:
    """Serializable structure (kind, name, children) for the live tree view."""
    return {
        "name": node.name,
        "kind": type(node).__name__,
        "children": [tree_to_json(c) for c in node.children],
    }


# --- parameter store ---------------------------------------------------------

@dataclass(frozen=True)
class _ParamSpec:
    kind: type  # bool, int, float, or list (queue)
    lo: float | None = None
    hi: float | None = None
    clamp: bool = True  # clamp into range; False rejects out-of-range writes
    default: object = None


def _default_specs() -> dict[str, _ParamSpec]:
    return {
        # experiment-state panel
        "tip_rack_count": _ParamSpec(int, 0, 12, clamp=True, default=12),
        "holding_pipette": _ParamSpec(bool, default=False),
        "pipette_status": _ParamSpec(int, 0, 4, clamp=True, default=0),
        # actuator writes must never silently mis-set a volume: reject, don't clamp
        "pipette_actuator_pos": _ParamSpec(int, 1300, 1850, clamp=False, default=1850),
        "needs_split": _ParamSpec(list, default=()),
        "needs_media": _ParamSpec(list, default=()),
        "needs_yeast": _ParamSpec(list, default=()),
        "shaker_active": _ParamSpec(bool, default=True),
        # perception panel
        "target": _ParamSpec(int, 0, 4, clamp=True, default=0),
        "plate_type": _ParamSpec(int, 0, 2, clamp=True, default=0),
        "desired_well": _ParamSpec(int, 0, 95, clamp=True, default=0),
        "april_tag_id": _ParamSpec(int, 0, 20, clamp=True, default=0),
        "plate_length_offset": _ParamSpec(float, default=0.0),
        "plate_width_offset": _ParamSpec(float, default=0.0),
        "plate_left_correction": _ParamSpec(float, default=0.0),
        "plate_top_correction": _ParamSpec(float, default=0.0),
        "tag_offset_x": _ParamSpec(float, default=0.0),
        "tag_offset_y": _ParamSpec(float, default=0.0),
        "using_homography": _ParamSpec(bool, default=True),
    }


class ParamStore:
    """Typed runtime parameters with range handling and change notification.

    Integer counters clamp into their range; the pipette actuator position
    rejects out-of-range writes outright.  Queue parameters hold well indices.
    Every effective write fires each subscribed callback once with
    (name, new_value).
    """

    def __init__(self):
        self._specs = _default_specs()
        self._values = {name: (list(spec.default) if spec.kind is list else spec.default)
                        for name, spec in self._specs.items()}
        self._subscribers: list[Callable[[str, object], None]] = []

    def names(self) -> list[str]:
        return list(self._specs)

    def subscribe(self, callback: Callable[[str, object], None]) -> None:
        self._subscribers.append(callback)

    def get(self, name: str):
        try:
            value = self._values[name]
        except KeyError:
            raise UnknownParameter(name) from None
        return list(value) if isinstance(value, list) else value

    def spec(self, name: str) -> _ParamSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise UnknownParameter(name) from None

    def set(self, name: str, value) -> None:
        spec = self.spec(name)
        value = self._coerce(name, spec, value)
        self._values[name] = value
        self._notify(name, value)

    def increment(self, name: str, amount: int = 1) -> None:
        self.set(name, self.get(name) + amount)

    def decrement(self, name: str, amount: int = 1) -> None:
        self.set(name, self.get(name) - amount)

    def push(self, name: str, item: int) -> None:
        queue = self._require_queue(name)
        queue.append(int(item))
        self._notify(name, list(queue))

    def pop(self, name: str) -> int:
        queue = self._require_queue(name)
        if not queue:
            raise IndexError(f"queue {name} is empty")
        item = queue.pop(0)
        self._notify(name, list(queue))
        return item

    def peek(self, name: str) -> int | None:
        queue = self._require_queue(name)
        return queue[0] if queue else None

    def dump(self) -> dict:
        return {name: self.get(name) for name in self._specs}

    def _require_queue(self, name: str) -> list:
        if self.spec(name).kind is not list:
            raise TypeError(f"{name} is not a queue parameter")
        return self._values[name]

    def _coerce(self, name: str, spec: _ParamSpec, value):
        if spec.kind is bool:
            if not isinstance(value, (bool, int)):
                raise TypeError(f"{name} expects a boolean")
            return bool(value)
        if spec.kind is list:
            return [int(v) for v in value]
        if spec.kind is int and isinstance(value, bool):
            raise TypeError(f"{name} expects a number")
        if not isinstance(value, (int, float)):
            raise TypeError(f"{name} expects a number")
        value = spec.kind(value)
        if spec.lo is not None and not spec.lo <= value <= spec.hi:
            if not spec.clamp:
                raise ParameterRangeError(
                    f"{name}={value} outside [{spec.lo}, {spec.hi}]"
                )
            value = spec.kind(min(max(value, spec.lo), spec.hi))
        return value

    def _notify(self, name: str, value) -> None:
        for callback in self._subscribers:
            callback(name, value)


# --- parameter-backed leaf behaviors ----------------------------------------

def set_experiment_state(name: str, param: str, action: str = "set", value=None) -> Leaf:
    """Leaf that mutates one store parameter; always returns SUCCESS.

    UnknownParameter propagates as an exception: a tree referencing a missing
    parameter is malformed, not a runtime condition.
    """
    if action not in ("set", "increment", "decrement", "push", "pop"):
        raise ValueError(f"unknown action {action}")

    def behavior(ctx: TickContext) -> Status:
        store = ctx.params
        if action == "set":
            store.set(param, value)
        elif action == "increment":
            store.increment(param, 1 if value is None else value)
        elif action == "decrement":
            store.decrement(param, 1 if value is None else value)
        elif action == "push":
            store.push(param, value)
        else:
            if store.peek(param) is not None:
                store.pop(param)
        return Status.SUCCESS

    return Leaf(name, behavior)


_COMPARATORS = {
    "eq": lambda a, b: a == b,
    "ne": lambda a, b: a != b,
    "gt": lambda a, b: a > b,
    "lt": lambda a, b: a < b,
    "ge": lambda a, b: a >= b,
    "le": lambda a, b: a <= b,
}


def check_experiment_state(name: str, param: str, cmp: str, value=None) -> Leaf:
    """Leaf condition on one store parameter: SUCCESS iff the comparison holds."""
    if cmp not in _COMPARATORS and cmp not in ("empty", "nonempty"):
        raise ValueError(f"unknown comparison {cmp}")

    def behavior(ctx: TickContext) -> Status:
        current = ctx.params.get(param)
        if cmp == "empty":
            ok = len(current) == 0
        elif cmp == "nonempty":
            ok = len(current) > 0
        else:
            ok = _COMPARATORS[cmp](current, value)
        return Status.SUCCESS if ok else Status.FAILURE

    return Leaf(name, behavior)
