"""Two-register counter machines with guarded instructions.

A machine is a finite set of states with a distinguished halting state and a
list of entries ``(source, instruction, target)``.  The seven instructions
and their guards:

    halt    always enabled; jumps to the halting state and zeroes both
            registers, so the run lands exactly on the halting configuration
    incra   always enabled; a += 1
    incrb   always enabled; b += 1
    decra   enabled when a >= 1; a -= 1
    decrb   enabled when b >= 1; b -= 1
    isza    enabled when a == 0
    iszb    enabled when b == 0

Validation enforces determinism (disjoint guard domains per source state),
forbids self-loops, and keeps the halting state a sink that only halt can
reach — so "the run reached the halting configuration" coincides with "the
trace ends in halt", which the logical encoding relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import (
    HaltFromHalting,
    HaltingTarget,
    MachineError,
    NondeterministicState,
    ParseError,
    SelfLoop,
    UnknownState,
)
from .signatures import is_identifier

HALT = "halt"
INCRA = "incra"
INCRB = "incrb"
DECRA = "decra"
DECRB = "decrb"
ISZA = "isza"
ISZB = "iszb"

INSTRUCTIONS = (HALT, INCRA, INCRB, DECRA, DECRB, ISZA, ISZB)

# Guard domains for the determinism check: None means "always enabled";
# otherwise (register, required-zero?) carves out half of that register's axis.
_GUARDS: dict[str, tuple[str, bool] | None] = {
    HALT: None,
    INCRA: None,
    INCRB: None,
    DECRA: ("a", False),
    DECRB: ("b", False),
    ISZA: ("a", True),
    ISZB: ("b", True),
}


@dataclass(frozen=True, slots=True)
class Entry:
    source: str
    instruction: str
    target: str


@dataclass(frozen=True, slots=True)
class Configuration:
    state: str
    a: int
    b: int


@dataclass(frozen=True)
class Machine:
    states: frozenset[str]
    halting: str
    entries: tuple[Entry, ...]


@dataclass(frozen=True, slots=True)
class Halted:
    trace: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Stuck:
    config: Configuration
    trace: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class OutOfFuel:
    config: Configuration
    trace: tuple[str, ...]


RunResult = Halted | Stuck | OutOfFuel


def _guards_overlap(i1: str, i2: str) -> bool:
    g1, g2 = _GUARDS[i1], _GUARDS[i2]
    if g1 is None or g2 is None:
        return True
    if g1[0] != g2[0]:
        return True  # different registers: both guards satisfiable at once
    return g1[1] == g2[1]


def validate_machine(m: Machine) -> None:
    """Raise a :class:`~selogic.errors.MachineError` subclass on any defect."""
    if m.halting not in m.states:
        raise UnknownState(f"halting state {m.halting!r} is not declared")
    for st in m.states:
        if not is_identifier(st):
            raise UnknownState(f"malformed state name {st!r}")
    for e in m.entries:
        if e.instruction not in INSTRUCTIONS:
            raise MachineError(f"unknown instruction {e.instruction!r}")
        if e.source not in m.states:
            raise UnknownState(f"entry source {e.source!r} is not declared")
        if e.target not in m.states:
            raise UnknownState(f"entry target {e.target!r} is not declared")
        if e.source == m.halting:
            raise HaltFromHalting(f"entry leaves the halting state {m.halting!r}")
        if e.instruction == HALT:
            if e.target != m.halting:
                raise MachineError(
                    f"halt entry from {e.source!r} must target the halting state"
                )
        else:
            if e.target == m.halting:
                raise HaltingTarget(
                    f"{e.instruction} entry from {e.source!r} jumps into the halting state"
                )
            if e.source == e.target:
                raise SelfLoop(f"entry loops on state {e.source!r}")
    for idx, e1 in enumerate(m.entries):
        for e2 in m.entries[idx + 1 :]:
            if e1.source == e2.source and _guards_overlap(e1.instruction, e2.instruction):
                raise NondeterministicState(
                    f"entries {e1.instruction!r} and {e2.instruction!r} from "
                    f"{e1.source!r} have overlapping guards"
                )


def halting_config(m: Machine) -> Configuration:
    return Configuration(m.halting, 0, 0)


def _enabled(e: Entry, c: Configuration) -> bool:
    guard = _GUARDS[e.instruction]
    if guard is None:
        return True
    value = c.a if guard[0] == "a" else c.b
    return value == 0 if guard[1] else value >= 1


def fired_entry(m: Machine, c: Configuration) -> Entry | None:
    """The unique entry enabled at ``c``, or ``None`` when the machine is stuck."""
    if c.state not in m.states:
        raise UnknownState(f"configuration state {c.state!r} is not declared")
    if c.a < 0 or c.b < 0:
        raise ValueError("registers cannot be negative")
    hits = [e for e in m.entries if e.source == c.state and _enabled(e, c)]
    assert len(hits) <= 1, "validated machines are deterministic"
    return hits[0] if hits else None


def step(m: Machine, c: Configuration) -> tuple[str, Configuration] | None:
    """The unique enabled transition, or ``None`` when the machine is stuck."""
    e = fired_entry(m, c)
    if e is None:
        return None
    match e.instruction:
        case "halt":
            nxt = Configuration(m.halting, 0, 0)
        case "incra":
            nxt = Configuration(e.target, c.a + 1, c.b)
        case "incrb":
            nxt = Configuration(e.target, c.a, c.b + 1)
        case "decra":
            nxt = Configuration(e.target, c.a - 1, c.b)
        case "decrb":
            nxt = Configuration(e.target, c.a, c.b - 1)
        case "isza" | "iszb":
            nxt = Configuration(e.target, c.a, c.b)
        case _:
            raise UnknownState(f"unknown instruction {e.instruction!r}")
    return e.instruction, nxt


def run(m: Machine, c0: Configuration, max_steps: int) -> RunResult:
    """Drive the machine until it halts, sticks, or runs out of fuel.

    Halting means reaching the halting configuration (halting state, both
    registers zero); starting there counts with an empty trace.
    """
    c = c0
    trace: list[str] = []
    target = halting_config(m)
    for _ in range(max_steps):
        if c == target:
            return Halted(tuple(trace))
        outcome = step(m, c)
        if outcome is None:
            return Stuck(c, tuple(trace))
        instr, c = outcome
        trace.append(instr)
    if c == target:
        return Halted(tuple(trace))
    return OutOfFuel(c, tuple(trace))


# --- machine files ----------------------------------------------------------

def parse_machine(text: str, filename: str | None = None) -> tuple[Machine, Configuration]:
    """Line-oriented format::

        states: q0 q1 qf
        halting: qf
        init: q0 a=2 b=0
        q0 incra q1      # entry lines: source instruction [target]
        q1 halt

    ``halt`` entries omit the target.  ``#`` comments and blank lines are
    allowed.  The parsed machine is validated before being returned.
    """
    states: list[str] | None = None
    halting: str | None = None
    init: Configuration | None = None
    entries: list[Entry] = []

    def bad(lineno: int, msg: str):
        raise ParseError(msg, lineno, 1, filename)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, rest = stripped.partition(":")
        if sep and key.strip() in ("states", "halting", "init"):
            key = key.strip()
            rest = rest.strip()
            if key == "states":
                states = rest.split()
            elif key == "halting":
                halting = rest
            else:
                parts = rest.split()
                if (
                    len(parts) != 3
                    or not parts[1].startswith("a=")
                    or not parts[2].startswith("b=")
                ):
                    bad(lineno, "init line must look like 'init: state a=N b=N'")
                try:
                    a, b = int(parts[1][2:]), int(parts[2][2:])
                except ValueError:
                    bad(lineno, "register values must be integers")
                if a < 0 or b < 0:
                    bad(lineno, "registers cannot be negative")
                init = Configuration(parts[0], a, b)
            continue
        parts = stripped.split()
        if len(parts) == 2 and parts[1] == HALT:
            if halting is None:
                bad(lineno, "halt entry before the 'halting:' line")
            entries.append(Entry(parts[0], HALT, halting))
        elif len(parts) == 3:
            entries.append(Entry(parts[0], parts[1], parts[2]))
        else:
            bad(lineno, f"malformed entry line {stripped!r}")
    if states is None:
        raise ParseError("missing 'states:' line", 1, 1, filename)
    if halting is None:
        raise ParseError("missing 'halting:' line", 1, 1, filename)
    if init is None:
        raise ParseError("missing 'init:' line", 1, 1, filename)
    machine = Machine(frozenset(states), halting, tuple(entries))
    validate_machine(machine)
    if init.state not in machine.states:
        raise UnknownState(f"initial state {init.state!r} is not declared")
    return machine, init


def print_machine(m: Machine, init: Configuration) -> str:
    lines = [
        "states: " + " ".join(sorted(m.states)),
        f"halting: {m.halting}",
        f"init: {init.state} a={init.a} b={init.b}",
    ]
    for e in m.entries:
        if e.instruction == HALT:
            lines.append(f"{e.source} halt")
        else:
            lines.append(f"{e.source} {e.instruction} {e.target}")
    return "\n".join(lines) + "\n"


def load_machine(path: str | Path) -> tuple[Machine, Configuration]:
    p = Path(path)
    return parse_machine(p.read_text(), filename=str(p))


# --- trace files ------------------------------------------------------------

def parse_trace(text: str, filename: str | None = None) -> tuple[str, ...]:
    trace: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped not in INSTRUCTIONS:
            raise ParseError(f"unknown instruction {stripped!r}", lineno, 1, filename)
        trace.append(stripped)
    return tuple(trace)


def print_trace(trace: tuple[str, ...]) -> str:
    return "".join(f"{i}\n" for i in trace)
