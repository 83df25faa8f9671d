"""Registry of singular fiber classes for the dimension pairs (2,1) and (3,2).

Class names follow the grammar::

    b0 | bI^<1-10> | bII^{<i>,<j>} | bII^<11-39> | bII^<a-f>

with an optional parity suffix ``_o`` / ``_e`` recording whether the fiber
carries an odd or even number of regular components. The geometric level-set
pictures are not modelled; a class is its name plus the flags in
``data/catalog.txt``.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

PARITIES = ("o", "e")
PAIR_RANGE = range(2, 11)
CONNECTED_CODIM2 = tuple(range(11, 40))
LETTERS = ("a", "b", "c", "d", "e", "f")

DIM_PAIRS = ((2, 1), (3, 2))
VARIANTS = ("full", "admissible")


class ClassNameError(ValueError):
    """Raised for text that is not a valid fiber class name."""

    def __init__(self, text: str, token: str, reason: str):
        self.text = text
        self.token = token
        super().__init__(f"bad class name {text!r}: {reason} (at {token!r})")


class NameNormalizedWarning(UserWarning):
    """A disjoint-union name was given with unsorted component indices."""


@dataclass(frozen=True)
class ClassName:
    """A fiber class, optionally refined by regular-component parity.

    ``base`` is the canonical unrefined spelling (``"bII^{2,10}"``) and
    ``parity`` is ``"o"``, ``"e"`` or ``None``.
    """

    base: str
    parity: Optional[str] = None

    def __post_init__(self):
        if self.parity not in (None, "o", "e"):
            raise ValueError(f"bad parity {self.parity!r}")

    @property
    def refined(self) -> bool:
        return self.parity is not None

    @property
    def codim(self) -> int:
        if self.base == "b0":
            return 0
        return 1 if self.base.startswith("bI^") else 2

    def unrefined(self) -> "ClassName":
        return ClassName(self.base)

    def with_parity(self, parity: Optional[str]) -> "ClassName":
        return ClassName(self.base, parity)

    def flipped(self) -> "ClassName":
        if self.parity is None:
            return self
        return ClassName(self.base, "e" if self.parity == "o" else "o")

    def expand(self) -> tuple["ClassName", ...]:
        """Refined names covered by this name (``F`` means ``F_o + F_e``)."""
        if self.parity is not None:
            return (self,)
        return (ClassName(self.base, "o"), ClassName(self.base, "e"))

    def sort_key(self) -> tuple:
        return _base_key(self.base) + ({None: 0, "o": 1, "e": 2}[self.parity],)

    def __lt__(self, other: "ClassName") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.base if self.parity is None else f"{self.base}_{self.parity}"


_NAME_RE = re.compile(
    r"""^(?:
        (?P<b0>b0)
      | bI\^(?:(?P<one>\d+)|\{(?P<oneb>\d+)\})
      | bII\^\{(?P<i>\d+),\s*(?P<j>\d+)\}
      | bII\^(?:(?P<two>\d+)|\{(?P<twob>\d+)\})
      | bII\^(?P<letter>[A-Za-z])
    )(?:_(?P<parity>[A-Za-z]+))?$""",
    re.VERBOSE,
)


def parse_class_name(text: str) -> ClassName:
    """Parse a class name; raise :class:`ClassNameError` on malformed input.

    ``bII^{i,j}`` with ``i > j`` is accepted, reordered, and reported with a
    :class:`NameNormalizedWarning`.
    """
    s = text.strip()
    m = _NAME_RE.match(s)
    if m is None:
        token = s.split("_")[0] if s else s
        raise ClassNameError(text, token, "does not match the class name grammar")
    parity = m.group("parity")
    if parity is not None and parity not in PARITIES:
        raise ClassNameError(text, "_" + parity, "parity suffix must be _o or _e")
    if m.group("b0"):
        return ClassName("b0", parity)
    one = m.group("one") or m.group("oneb")
    if one is not None:
        k = int(one)
        if not 1 <= k <= 10:
            raise ClassNameError(text, one, "bI index must be in 1..10")
        return ClassName(f"bI^{k}", parity)
    if m.group("i") is not None:
        i, j = int(m.group("i")), int(m.group("j"))
        for tok, v in ((m.group("i"), i), (m.group("j"), j)):
            if v not in PAIR_RANGE:
                raise ClassNameError(text, tok, "component index must be in 2..10")
        if i > j:
            warnings.warn(f"{text!r} normalized to bII^{{{j},{i}}}", NameNormalizedWarning,
                          stacklevel=2)
            i, j = j, i
        return ClassName(f"bII^{{{i},{j}}}", parity)
    two = m.group("two") or m.group("twob")
    if two is not None:
        k = int(two)
        if not 11 <= k <= 39:
            raise ClassNameError(text, two, "bII index must be in 11..39")
        return ClassName(f"bII^{k}", parity)
    letter = m.group("letter")
    if letter not in LETTERS:
        raise ClassNameError(text, letter, "bII letter must be in a..f")
    return ClassName(f"bII^{letter}", parity)


def _base_key(base: str) -> tuple:
    if base == "b0":
        return (0, 0, 0, 0, "")
    if base.startswith("bI^"):
        return (1, 0, int(base[3:]), 0, "")
    rest = base[4:]
    if rest.startswith("{"):
        i, j = rest[1:-1].split(",")
        return (2, 0, int(i), int(j), "")
    if rest.isdigit():
        return (2, 1, int(rest), 0, "")
    return (2, 2, 0, 0, rest)


def all_base_names() -> list[ClassName]:
    """Every unrefined name admitted by the grammar, in canonical order."""
    names = [ClassName("b0")]
    names += [ClassName(f"bI^{k}") for k in range(1, 11)]
    names += [ClassName(f"bII^{{{i},{j}}}") for i in PAIR_RANGE for j in PAIR_RANGE if i <= j]
    names += [ClassName(f"bII^{k}") for k in CONNECTED_CODIM2]
    names += [ClassName(f"bII^{x}") for x in LETTERS]
    return names


@dataclass(frozen=True)
class TransitionRule:
    """How the regular level set changes across a codimension-one fiber.

    ``sides`` holds the (circles, arcs) composition of the components that
    take part in the event just below and just above it, in one of the two
    orientations; the event may be traversed either way.
    """

    delta_circles: frozenset[int]
    delta_arcs: frozenset[int]
    flips_component_parity: bool
    sides: Optional[tuple[tuple[int, int], tuple[int, int]]] = None

    def allows(self, before: tuple[int, int], after: tuple[int, int]) -> bool:
        if self.sides is None:
            return False
        return (before, after) in (self.sides, self.sides[::-1])


@dataclass(frozen=True)
class FiberClass:
    name: ClassName
    codim: int
    orientable_excluded: bool
    admissible: bool
    excluded_from_complex: bool = False
    transition: Optional[TransitionRule] = None
    dim_pair: Optional[tuple[int, int]] = None

    @property
    def dim_pairs(self) -> tuple[tuple[int, int], ...]:
        # codim 0/1 fibers of Morse functions suspend to the (3,2) ones
        return DIM_PAIRS if self.codim <= 1 else ((3, 2),)


def _parse_int_set(text: str) -> frozenset[int]:
    text = text.strip("{}")
    if not text:
        return frozenset()
    return frozenset(int(x) for x in text.split(","))


def _parse_pair(text: str) -> tuple[int, int]:
    c, a = text.split(",")
    return int(c), int(a)


def _parse_flag(key: str, value: str, lineno: int) -> bool:
    if value not in ("0", "1"):
        raise ValueError(f"line {lineno}: {key} must be 0 or 1, got {value!r}")
    return value == "1"


def parse_catalog(text: str) -> list[FiberClass]:
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *fields = line.split()
        try:
            name = parse_class_name(head)
        except ClassNameError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if name.refined:
            raise ValueError(f"line {lineno}: catalog names must be unrefined")
        if name in seen:
            raise ValueError(f"line {lineno}: duplicate entry {name}")
        seen.add(name)
        kv = {}
        for field in fields:
            if "=" not in field:
                raise ValueError(f"line {lineno}: expected key=value, got {field!r}")
            k, v = field.split("=", 1)
            kv[k] = v
        missing = {"codim", "orientable_excluded", "admissible"} - kv.keys()
        if missing:
            raise ValueError(f"line {lineno}: missing {sorted(missing)}")
        codim = int(kv.pop("codim"))
        if codim != name.codim:
            raise ValueError(f"line {lineno}: codim={codim} disagrees with name {name}")
        orient = _parse_flag("orientable_excluded", kv.pop("orientable_excluded"), lineno)
        adm = _parse_flag("admissible", kv.pop("admissible"), lineno)
        excluded = _parse_flag("excluded", kv.pop("excluded", "0"), lineno)
        transition = None
        if {"dc", "da", "flips"} <= kv.keys():
            sides = None
            if "local" in kv:
                lo, hi = kv.pop("local").split("/")
                sides = (_parse_pair(lo), _parse_pair(hi))
            transition = TransitionRule(
                _parse_int_set(kv.pop("dc")),
                _parse_int_set(kv.pop("da")),
                _parse_flag("flips", kv.pop("flips"), lineno),
                sides,
            )
        if kv:
            raise ValueError(f"line {lineno}: unknown fields {sorted(kv)}")
        entries.append(FiberClass(name, codim, orient, adm, excluded, transition))
    return entries


class Catalog:
    def __init__(self, entries: Iterable[FiberClass]):
        self._entries = {e.name: e for e in entries}

    @classmethod
    def load(cls, path: Union[str, Path, None] = None) -> "Catalog":
        if path is None:
            text = resources.files("singular_fibers").joinpath("data/catalog.txt").read_text()
        else:
            text = Path(path).read_text()
        return cls(parse_catalog(text))

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda e: e.name.sort_key()))

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: ClassName) -> bool:
        return name.unrefined() in self._entries

    def get(self, name: Union[str, ClassName]) -> FiberClass:
        if isinstance(name, str):
            name = parse_class_name(name)
        try:
            return self._entries[name.unrefined()]
        except KeyError:
            raise KeyError(f"{name} is not in the catalog") from None

    def list_classes(self, dim_pair=(3, 2), codim: int = 1, variant: str = "full",
                     refined: bool = True) -> list[FiberClass]:
        """Classes that span the degree-``codim`` cochains of a complex.

        Classes flagged ``excluded`` never enter a complex; the admissible
        variant also drops classes with ``admissible=0``.
        """
        dim_pair = tuple(dim_pair)
        if codim not in (0, 1, 2):
            raise ValueError(f"codim must be 0, 1 or 2, got {codim}")
        if dim_pair not in DIM_PAIRS:
            raise ValueError(f"unknown dimension pair {dim_pair}")
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        out = []
        for e in self:
            if e.codim != codim or e.excluded_from_complex or dim_pair not in e.dim_pairs:
                continue
            if variant == "admissible" and not e.admissible:
                continue
            e = replace(e, dim_pair=dim_pair)
            if refined:
                out.extend(replace(e, name=n) for n in e.name.expand())
            else:
                out.append(e)
        return out


@lru_cache(maxsize=None)
def default_catalog() -> Catalog:
    return Catalog.load()


def list_classes(dim_pair=(3, 2), codim: int = 1, variant: str = "full",
                 refined: bool = True) -> list[FiberClass]:
    return default_catalog().list_classes(dim_pair, codim, variant, refined)


def coarsen(c):
    """Project a refined cochain onto unrefined classes.

    The coefficient of ``B`` is ``c(B_o) + c(B_e)`` in GF(2), so a class
    present in both parities drops out. Accepts a :class:`Cochain` (returns
    one of the same degree) or an iterable of refined names or name strings
    (returns a frozenset).
    """
    from .cochain import Cochain

    support = c.support if isinstance(c, Cochain) else c
    out: set[ClassName] = set()
    for name in support:
        if isinstance(name, str):
            name = parse_class_name(name)
        if not name.refined:
            raise ValueError(f"coarsen expects refined names, got {name}")
        out ^= {name.unrefined()}
    if isinstance(c, Cochain):
        return Cochain(c.degree, frozenset(out))
    return frozenset(out)
