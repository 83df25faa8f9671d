"""Stable Morse functions on compact surfaces with boundary, as event traces.

A trace lists the singular values of ``f: V -> W`` (``W`` the line or the
circle) in increasing order. Between events the regular level set is a
disjoint union of circles and arcs, recorded as ``(circles, arcs)``. Each
event names its codimension-one fiber class and the regular components that
pass through it untouched.

Trace file grammar::

    trace   := line*
    line    := comment | "target:" ("line" | "circle")
             | "initial:" "circles=" INT "arcs=" INT
             | "event" "v=" REAL "class=" NAME "reg_circles=" INT
               "reg_arcs=" INT "after=" INT "," INT
    comment := "#" ...

Count file grammar: one ``NAME = INT`` per line, ``#`` comments.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .catalog import ClassName, ClassNameError, default_catalog, list_classes, parse_class_name
from .universal import ParityConstraint, build_complex, derive_constraints

State = tuple[int, int]
TARGETS = ("line", "circle")

# Change of Euler characteristic of the sublevel set when an event is passed
# going up, as (side 0 -> side 1, side 1 -> side 0) with sides as in the
# catalog's local= field.
CHI_CHANGE = {
    "bI^2": (1, 1),
    "bI^3": (-1, -1),
    "bI^4": (-1, -1),
    "bI^5": (-1, -1),
    "bI^6": (1, 0),
    "bI^7": (0, -1),
    "bI^8": (0, -1),
    "bI^9": (-1, -1),
    "bI^10": (-1, -1),
}

MORSE_CIRCLE_ARC = ("bI^2 + bI^3 + bI^4 + bI^7", "bI^6 + bI^7 + bI^8")


class TraceParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class TraceEvent:
    value: float
    fiber_class: ClassName
    regular: State
    state_after: State

    @property
    def parity(self) -> str:
        return "o" if sum(self.regular) % 2 else "e"

    def counted_class(self) -> ClassName:
        return self.fiber_class.with_parity(self.parity)


@dataclass(frozen=True)
class MorseTrace:
    target: str = "line"
    events: tuple[TraceEvent, ...] = ()
    initial: State = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "initial", tuple(self.initial))

    def states(self) -> list[State]:
        """Level-set composition before each event, then after the last."""
        return [self.initial] + [e.state_after for e in self.events]

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Violation:
    index: Optional[int]
    rule: str
    message: str

    def __str__(self) -> str:
        where = "trace" if self.index is None else f"event {self.index}"
        return f"{where}: [{self.rule}] {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


class InvalidTraceError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid trace:\n" + str(report))


def validate_trace(t: MorseTrace) -> ValidationReport:
    """Check every trace invariant; violations are returned, not raised."""
    cat = default_catalog()
    out: list[Violation] = []
    if t.target not in TARGETS:
        out.append(Violation(None, "target", f"target must be line or circle, got {t.target!r}"))
    if min(t.initial) < 0:
        out.append(Violation(None, "nonnegative", f"initial state {t.initial} is negative"))
    if t.target == "line" and t.initial != (0, 0):
        out.append(Violation(None, "initial-empty",
                             f"a line-target trace starts from the empty level set, got {t.initial}"))
    prev_value = -math.inf
    before = t.initial
    for i, ev in enumerate(t.events):
        if not math.isfinite(ev.value) or ev.value <= prev_value:
            out.append(Violation(i, "increasing-values",
                                 f"value {ev.value} does not exceed the previous value {prev_value}"))
        prev_value = ev.value
        after = ev.state_after
        if min(after) < 0 or min(ev.regular) < 0:
            out.append(Violation(i, "nonnegative", "component counts must be nonnegative"))
            before = after
            continue
        try:
            entry = cat.get(ev.fiber_class)
        except KeyError:
            entry = None
        rule = entry.transition if entry is not None else None
        if rule is None or entry.codim != 1 or entry.excluded_from_complex:
            out.append(Violation(i, "class-codim",
                                 f"{ev.fiber_class} is not a codimension-one Morse fiber class"))
            before = after
            continue
        if ev.fiber_class.refined and ev.fiber_class.parity != ev.parity:
            out.append(Violation(i, "parity-label",
                                 f"{ev.fiber_class} carries {sum(ev.regular)} regular components"))
        dc, da = after[0] - before[0], after[1] - before[1]
        if dc not in rule.delta_circles or da not in rule.delta_arcs:
            out.append(Violation(i, "delta-rule",
                                 f"{ev.fiber_class.base} cannot change (circles, arcs) by ({dc}, {da})"))
        flipped = (sum(after) - sum(before)) % 2 == 1
        if flipped != rule.flips_component_parity:
            want = "flip" if rule.flips_component_parity else "keep"
            out.append(Violation(i, "parity-flip",
                                 f"{ev.fiber_class.base} must {want} the parity of the component count"))
        reg = ev.regular
        if reg[0] > before[0] or reg[1] > before[1] or reg[0] > after[0] or reg[1] > after[1]:
            out.append(Violation(i, "regular-fits",
                                 f"regular part {reg} does not fit in {before} -> {after}"))
        else:
            lo = (before[0] - reg[0], before[1] - reg[1])
            hi = (after[0] - reg[0], after[1] - reg[1])
            if not rule.allows(lo, hi):
                out.append(Violation(i, "local-transition",
                                     f"{ev.fiber_class.base} does not turn {lo} into {hi}"))
        before = after
    goal = (0, 0) if t.target == "line" else t.initial
    if before != goal:
        out.append(Violation(None, "closure",
                             f"final level set {before} differs from {goal}"))
    return ValidationReport(tuple(out))


class CountVector(Counter):
    """Occurrence counts keyed by refined class names."""

    def total_of(self, name: ClassName) -> int:
        return sum(self.get(n, 0) for n in name.expand())

    def __str__(self) -> str:
        return format_counts(self)


def count_fibers(t: MorseTrace) -> CountVector:
    report = validate_trace(t)
    if not report.valid:
        raise InvalidTraceError(report)
    return CountVector(ev.counted_class() for ev in t.events)


def euler_characteristic(t: MorseTrace) -> int:
    """Euler characteristic of the source surface, from the sublevel changes."""
    report = validate_trace(t)
    if not report.valid:
        raise InvalidTraceError(report)
    cat = default_catalog()
    chi = 0
    before = t.initial
    for ev in t.events:
        sides = cat.get(ev.fiber_class).transition.sides
        lo = (before[0] - ev.regular[0], before[1] - ev.regular[1])
        forward, backward = CHI_CHANGE[ev.fiber_class.base]
        chi += forward if lo == sides[0] else backward
        before = ev.state_after
    return chi


def morse_constraints() -> list[ParityConstraint]:
    """Parity laws every stable Morse function on a compact surface obeys.

    The first comes from the degree-zero coboundary; the other two are
    fixed circle/arc bookkeeping laws.
    """
    cs = derive_constraints(build_complex("morse_21"), 0)
    cs += [ParityConstraint.parse(s) for s in MORSE_CIRCLE_ARC]
    return cs


@dataclass(frozen=True)
class ConstraintResult:
    constraint: ParityConstraint
    total: int

    @property
    def even(self) -> bool:
        return self.total % 2 == 0


@dataclass(frozen=True)
class CoexistenceReport:
    results: tuple[ConstraintResult, ...] = ()

    @property
    def ok(self) -> bool:
        return all(r.even for r in self.results)

    def violated(self) -> list[ConstraintResult]:
        return [r for r in self.results if not r.even]


def check_coexistence(counts, cs: Iterable[ParityConstraint],
                      universe: Optional[Iterable[ClassName]] = None) -> CoexistenceReport:
    """Evaluate each constraint's count sum.

    Keys of ``counts`` must be refined names in ``universe``; by default the
    universe is every refined (3,2) class of the constraints' codimension.
    """
    cs = list(cs)
    if universe is None:
        codims = {n.codim for c in cs for n in c.support} or {n.codim for n in counts}
        universe = set()
        for k in codims:
            universe |= {e.name for e in list_classes((3, 2), k, "full")}
    universe = set(universe)
    for key, value in counts.items():
        if key not in universe:
            raise KeyError(f"count for {key} is outside the constraint universe")
        if value < 0:
            raise ValueError(f"negative count for {key}")
    results = tuple(ConstraintResult(c, sum(counts.get(n, 0) for n in c.support)) for c in cs)
    return CoexistenceReport(results)


# ---------------------------------------------------------------------------
# generation

class TraceGenerationError(RuntimeError):
    pass


def _moves(orientable: bool) -> list[tuple[ClassName, State, State]]:
    moves = []
    for e in default_catalog():
        rule = e.transition
        if e.codim != 1 or e.excluded_from_complex or rule is None or rule.sides is None:
            continue
        if orientable and e.orientable_excluded:
            continue
        lo, hi = rule.sides
        moves.append((e.name, lo, hi))
        if lo != hi:
            moves.append((e.name, hi, lo))
    return moves


def _cost(state: State, goal: State) -> int:
    return abs(state[0] - goal[0]) + abs(state[1] - goal[1])


def _apply(state: State, lo: State, hi: State) -> Optional[tuple[State, State]]:
    reg = (state[0] - lo[0], state[1] - lo[1])
    if min(reg) < 0:
        return None
    return reg, (reg[0] + hi[0], reg[1] + hi[1])


def random_trace(seed: int, length_budget: int, target: str = "line",
                 orientable: bool = False, max_retries: int = 10) -> MorseTrace:
    """A valid trace with at most ``length_budget`` events, deterministic per seed.

    Events are drawn uniformly from the moves that still leave room to
    return to the starting level set, then the trace is closed with
    definite-fold births and deaths.
    """
    if length_budget < 0:
        raise TraceGenerationError(f"length budget must be nonnegative, got {length_budget}")
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    rng = random.Random(seed)
    moves = _moves(orientable)
    birth_death = {
        "circle": ClassName("bI^2"),
        "arc": ClassName("bI^6"),
    }
    for _ in range(max_retries):
        initial = (0, 0) if target == "line" else (rng.randint(0, 2), rng.randint(0, 2))
        n = rng.randint(0, length_budget)
        steps: list[tuple[ClassName, State, State]] = []
        state = initial
        while len(steps) < n:
            options = []
            for name, lo, hi in moves:
                applied = _apply(state, lo, hi)
                if applied and len(steps) + 1 + _cost(applied[1], initial) <= n:
                    options.append((name, applied))
            if not options:
                break
            name, (reg, state) = options[rng.randrange(len(options))]
            steps.append((name, reg, state))
        while state != initial:
            c, a = state
            if c != initial[0]:
                name, d = birth_death["circle"], (1 if c < initial[0] else -1, 0)
                reg = (min(c, c + d[0]), a)
            else:
                name, d = birth_death["arc"], (0, 1 if a < initial[1] else -1)
                reg = (c, min(a, a + d[1]))
            state = (c + d[0], a + d[1])
            steps.append((name, reg, state))
        if len(steps) > length_budget:
            continue
        span = len(steps) + 1
        events = [TraceEvent((i + 1) / span if target == "circle" else float(i + 1), name, reg, after)
                  for i, (name, reg, after) in enumerate(steps)]
        t = MorseTrace(target, tuple(events), initial)
        if validate_trace(t).valid:
            return t
    raise TraceGenerationError(f"no valid trace within budget {length_budget} after {max_retries} tries")


# ---------------------------------------------------------------------------
# trace algebra

def concatenate(first: MorseTrace, second: MorseTrace) -> MorseTrace:
    """Run ``second`` after ``first``; the level sets must match at the seam."""
    if first.target != second.target:
        raise ValueError("targets differ")
    end = first.states()[-1]
    if end != second.initial:
        raise ValueError(f"seam mismatch: {end} vs {second.initial}")
    offset = (first.events[-1].value if first.events else 0.0)
    if second.events:
        offset = offset - second.events[0].value + 1.0
    shifted = [replace(e, value=e.value + offset) for e in second.events]
    return MorseTrace(first.target, first.events + tuple(shifted), first.initial)


def rotate(t: MorseTrace, k: int) -> MorseTrace:
    """Start a circle-target trace at its ``k``-th event instead."""
    if t.target != "circle":
        raise ValueError("only circle-target traces can be rotated")
    if not t.events:
        return t
    k %= len(t.events)
    if k == 0:
        return t
    initial = t.events[k - 1].state_after
    order = t.events[k:] + t.events[:k]
    events = [replace(e, value=float(i + 1)) for i, e in enumerate(order)]
    return MorseTrace("circle", tuple(events), initial)


# ---------------------------------------------------------------------------
# file formats

def _kv(tokens: Sequence[str], lineno: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise TraceParseError(lineno, f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k in out:
            raise TraceParseError(lineno, f"duplicate key {k!r}")
        out[k] = v
    return out


def _int(kv: dict, key: str, lineno: int) -> int:
    try:
        return int(kv.pop(key))
    except KeyError:
        raise TraceParseError(lineno, f"missing {key}=") from None
    except ValueError:
        raise TraceParseError(lineno, f"{key} must be an integer") from None


def parse_trace(text: str) -> MorseTrace:
    target = None
    initial = None
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("target:"):
            if target is not None:
                raise TraceParseError(lineno, "target given twice")
            target = line.split(":", 1)[1].strip()
            if target not in TARGETS:
                raise TraceParseError(lineno, f"target must be line or circle, got {target!r}")
        elif line.startswith("initial:"):
            if initial is not None:
                raise TraceParseError(lineno, "initial given twice")
            kv = _kv(line.split(":", 1)[1].split(), lineno)
            initial = (_int(kv, "circles", lineno), _int(kv, "arcs", lineno))
            if kv:
                raise TraceParseError(lineno, f"unknown keys {sorted(kv)}")
        elif line.split()[0] == "event":
            kv = _kv(line.split()[1:], lineno)
            try:
                value = float(kv.pop("v"))
            except KeyError:
                raise TraceParseError(lineno, "missing v=") from None
            except ValueError:
                raise TraceParseError(lineno, "v must be a real number") from None
            if "class" not in kv:
                raise TraceParseError(lineno, "missing class=")
            try:
                cls = parse_class_name(kv.pop("class"))
            except ClassNameError as exc:
                raise TraceParseError(lineno, str(exc)) from None
            reg = (_int(kv, "reg_circles", lineno), _int(kv, "reg_arcs", lineno))
            if "after" not in kv:
                raise TraceParseError(lineno, "missing after=")
            try:
                c, a = kv.pop("after").split(",")
                after = (int(c), int(a))
            except ValueError:
                raise TraceParseError(lineno, "after must be <circles>,<arcs>") from None
            if kv:
                raise TraceParseError(lineno, f"unknown keys {sorted(kv)}")
            events.append(TraceEvent(value, cls, reg, after))
        else:
            raise TraceParseError(lineno, f"unrecognised line {line!r}")
    if target is None:
        raise TraceParseError(0, "missing target:")
    return MorseTrace(target, tuple(events), initial if initial is not None else (0, 0))


def format_trace(t: MorseTrace) -> str:
    lines = [f"target: {t.target}", f"initial: circles={t.initial[0]} arcs={t.initial[1]}"]
    for e in t.events:
        lines.append(f"event v={e.value!r} class={e.fiber_class} reg_circles={e.regular[0]} "
                     f"reg_arcs={e.regular[1]} after={e.state_after[0]},{e.state_after[1]}")
    return "\n".join(lines) + "\n"


def read_trace(path: Union[str, Path]) -> MorseTrace:
    return parse_trace(Path(path).read_text())


def parse_counts(text: str) -> CountVector:
    counts = CountVector()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise TraceParseError(lineno, "expected '<class> = <count>'")
        name_text, value_text = line.rsplit("=", 1)
        try:
            name = parse_class_name(name_text)
        except ClassNameError as exc:
            raise TraceParseError(lineno, str(exc)) from None
        if not name.refined:
            raise TraceParseError(lineno, f"{name} must carry an _o or _e suffix")
        try:
            value = int(value_text)
        except ValueError:
            raise TraceParseError(lineno, f"count must be an integer, got {value_text.strip()!r}") from None
        if value < 0:
            raise TraceParseError(lineno, "count must be nonnegative")
        counts[name] += value
    return counts


def format_counts(counts) -> str:
    return "".join(f"{n} = {counts[n]}\n" for n in sorted(counts) if counts[n])


def read_counts(path: Union[str, Path]) -> CountVector:
    return parse_counts(Path(path).read_text())
