"""Cobordism invariants of stable Morse functions from degree-one cocycles.

A cocycle ``c`` of a (3,2) complex is pushed to the Morse complex by the
suspension map, and its value on a function is the parity of the number of
singular values whose fiber lies in the support of the image.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .cochain import Cochain, NotACocycleError, format_cochain, is_cocycle, parse_cochain
from .morse import MorseTrace, count_fibers, random_trace
from .universal import build_complex, resolve_variant, suspension_map

REPRESENTATIVES = {
    "alpha": "bI^2 + bI^3 + bI^4 + bI^5 + bI^9 + bI^10",
    "beta": "bI^6 + bI^7 + bI^8",
    "gamma": "bI^2_o + bI^3_e + bI^4_e + bI^6_o + bI^8_e",
}

# a second representative of the same class, where one is known
ALTERNATE_REPRESENTATIVES = {
    "beta": "bI^2 + bI^3 + bI^4 + bI^7",
    "gamma": "bI^2_e + bI^3_o + bI^4_o + bI^6_e + bI^8_o",
}


@dataclass(frozen=True)
class NamedClass:
    tag: str
    representative: Cochain


def named_class(tag: str) -> NamedClass:
    try:
        return NamedClass(tag, parse_cochain(REPRESENTATIVES[tag], 1))
    except KeyError:
        raise KeyError(f"unknown class {tag!r}; expected alpha, beta or gamma") from None


def resolve_cochain(expr: Union[str, Cochain]) -> Cochain:
    """``alpha``/``beta``/``gamma`` or a cochain expression of degree one."""
    if isinstance(expr, Cochain):
        return expr
    if expr.strip() in REPRESENTATIVES:
        return named_class(expr.strip()).representative
    return parse_cochain(expr, 1)


@lru_cache(maxsize=256)
def _suspended(c: Cochain, variant: str) -> Cochain:
    if c.degree != 1:
        raise ValueError(f"invariants come from degree-one cochains, got degree {c.degree}")
    if not is_cocycle(build_complex(variant), c):
        raise NotACocycleError(f"{format_cochain(c, compact=True)} is not a cocycle of {variant}")
    return suspension_map(variant)(c)


def evaluate(c: Union[str, Cochain], t: MorseTrace, variant: str = "admissible_32") -> int:
    """Value in Z/2 of the invariant of ``c`` on the function ``t``.

    ``c`` must be a cocycle of ``variant``; otherwise the count is not a
    cobordism invariant and :class:`NotACocycleError` is raised.
    """
    pushed = _suspended(resolve_cochain(c), resolve_variant(variant))
    counts = count_fibers(t)
    return sum(counts.get(n, 0) for n in pushed.support) % 2


@dataclass(frozen=True)
class ProbeReport:
    cochain: Cochain
    seeds: Sequence[int]
    budget: int
    always_zero: bool
    witnesses: tuple[tuple[object, MorseTrace], ...]
    evaluated: int
    nonzero: int = 0

    def __str__(self) -> str:
        status = "always zero" if self.always_zero else f"nonzero on {self.nonzero}"
        seeds = f"seeds {min(self.seeds)}..{max(self.seeds)}" if self.seeds else "no seeds"
        return (f"{format_cochain(self.cochain, compact=True)}: {status} over "
                f"{self.evaluated} traces ({seeds}, budget {self.budget}; empirical)")


def triviality_probe(c: Union[str, Cochain], seeds: Iterable[int] = range(1000), budget: int = 24,
                     variant: str = "admissible_32", extra: Iterable[tuple[object, MorseTrace]] = (),
                     max_witnesses: int = 5) -> ProbeReport:
    """Evaluate ``c`` on extra traces and on ``random_trace(seed, budget)``.

    ``extra`` items are ``(label, trace)`` pairs checked before the seeds.
    """
    c = resolve_cochain(c)
    seeds = seeds if isinstance(seeds, range) else tuple(seeds)
    witnesses = []
    nonzero = 0
    labelled = list(extra) + [(seed, random_trace(seed, budget)) for seed in seeds]
    for label, t in labelled:
        if evaluate(c, t, variant):
            nonzero += 1
            if len(witnesses) < max_witnesses:
                witnesses.append((label, t))
    return ProbeReport(c, seeds, budget, nonzero == 0, tuple(witnesses), len(labelled), nonzero)
