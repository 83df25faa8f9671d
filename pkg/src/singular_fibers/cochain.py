"""Finite cochain complexes over GF(2) with named bases."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from . import gf2
from .catalog import ClassName, parse_class_name
from .gf2 import BitMatrix, BitVector


class ComplexError(ValueError):
    pass


class NotACocycleError(ComplexError):
    pass


class CochainMapError(ComplexError):
    def __init__(self, degree: int, message: str):
        self.degree = degree
        super().__init__(f"degree {degree}: {message}")


@dataclass(frozen=True)
class Cochain:
    """A GF(2) formal sum of class names; addition is symmetric difference."""

    degree: int
    support: frozenset[ClassName] = frozenset()

    def __post_init__(self):
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))

    @classmethod
    def of(cls, degree: int, names: Iterable) -> "Cochain":
        out: set[ClassName] = set()
        for n in names:
            if isinstance(n, str):
                n = parse_class_name(n)
            out ^= {n}
        return cls(degree, frozenset(out))

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.degree != other.degree:
            raise ComplexError(f"cannot add degree {self.degree} and {other.degree} cochains")
        return Cochain(self.degree, self.support ^ other.support)

    def __bool__(self) -> bool:
        return bool(self.support)

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(sorted(self.support))

    def __str__(self) -> str:
        return format_cochain(self)


def parse_cochain(text: str, degree: Optional[int] = None) -> Cochain:
    """Parse ``name (+ name)*``; an unrefined name stands for ``name_o + name_e``.

    ``0`` or blank text is the zero cochain. Without an explicit degree the
    codimension of the named classes is used.
    """
    text = text.strip()
    names: list[ClassName] = []
    if text and text != "0":
        for term in text.split("+"):
            term = term.strip()
            if not term:
                raise ComplexError(f"empty term in cochain {text!r}")
            names.extend(parse_class_name(term).expand())
    codims = {n.codim for n in names}
    if degree is None:
        if len(codims) > 1:
            raise ComplexError(f"mixed codimensions in cochain {text!r}")
        degree = codims.pop() if codims else 0
    elif codims and codims != {degree}:
        raise ComplexError(f"cochain {text!r} is not of degree {degree}")
    return Cochain.of(degree, names)


def format_cochain(c: Cochain, compact: bool = False) -> str:
    """Render in the text syntax; ``compact`` writes ``F`` for ``F_o + F_e``."""
    names = sorted(c.support)
    if not names:
        return "0"
    if compact:
        present = set(names)
        out = []
        for n in names:
            if n.parity == "o" and n.flipped() in present:
                out.append(n.unrefined())
            elif n.parity == "e" and n.flipped() in present:
                continue
            else:
                out.append(n)
        names = out
    return " + ".join(str(n) for n in names)


@dataclass(frozen=True)
class CohomologySummary:
    degree: int
    dimension: int
    generators: tuple[Cochain, ...]


@dataclass
class CochainComplexZ2:
    """Graded named bases with coboundaries ``deltas[k]: C^k -> C^(k+1)``.

    ``deltas[k]`` has ``len(bases[k+1])`` rows and ``len(bases[k])``
    columns. Missing degrees are zero spaces and missing deltas are zero maps.
    Construction does not validate; see :func:`check_complex`.
    """

    bases: Mapping[int, Sequence[ClassName]]
    deltas: Mapping[int, BitMatrix]
    name: str = ""
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.bases = {k: tuple(v) for k, v in self.bases.items()}
        self.deltas = dict(self.deltas)
        self._index = {k: {n: i for i, n in enumerate(v)} for k, v in self.bases.items()}

    @property
    def degrees(self) -> range:
        ks = [k for k, v in self.bases.items() if v]
        if not ks:
            return range(0)
        return range(min(ks), max(ks) + 1)

    def basis(self, k: int) -> tuple[ClassName, ...]:
        return self.bases.get(k, ())

    def dim(self, k: int) -> int:
        return len(self.basis(k))

    def delta(self, k: int) -> BitMatrix:
        m = self.deltas.get(k)
        if m is None:
            return BitMatrix.zeros(self.dim(k + 1), self.dim(k))
        return m

    def index(self, k: int, name: ClassName) -> int:
        try:
            return self._index.get(k, {})[name]
        except KeyError:
            raise ComplexError(f"{name} is not a degree-{k} basis element of "
                               f"{self.name or 'the complex'}") from None

    def to_vector(self, c: Cochain) -> BitVector:
        return BitVector.from_support(self.dim(c.degree),
                                      (self.index(c.degree, n) for n in c.support))

    def from_vector(self, k: int, v: BitVector) -> Cochain:
        if v.length != self.dim(k):
            raise ComplexError(f"vector length {v.length} != dim C^{k} = {self.dim(k)}")
        basis = self.basis(k)
        return Cochain(k, frozenset(basis[i] for i in v.support()))

    def coboundary(self, c: Cochain) -> Cochain:
        return self.from_vector(c.degree + 1, self.delta(c.degree) @ self.to_vector(c))


def complex_problems(C: CochainComplexZ2) -> list[str]:
    """Human-readable reasons why ``C`` is not a cochain complex."""
    problems = []
    for k, m in sorted(C.deltas.items()):
        want = (C.dim(k + 1), C.dim(k))
        if (m.rows, m.cols) != want:
            problems.append(f"degree {k}: delta is {m.rows}x{m.cols}, expected {want[0]}x{want[1]}")
    if problems:
        return problems
    for k in sorted(C.deltas):
        if k + 1 in C.deltas:
            comp = C.delta(k + 1) @ C.delta(k)
            if not comp.is_zero():
                problems.append(f"degree {k}: delta_{k + 1} o delta_{k} != 0")
    return problems


def check_complex(C: CochainComplexZ2) -> bool:
    return not complex_problems(C)


def betti(C: CochainComplexZ2, k: int) -> int:
    """``dim ker delta_k - rank delta_(k-1)``."""
    return C.dim(k) - gf2.rank(C.delta(k)) - gf2.rank(C.delta(k - 1))


def is_cocycle(C: CochainComplexZ2, c: Cochain) -> bool:
    return not C.coboundary(c)


def is_coboundary(C: CochainComplexZ2, c: Cochain) -> bool:
    return gf2.solve(C.delta(c.degree - 1), C.to_vector(c)) is not None


def cohomologous(C: CochainComplexZ2, c1: Cochain, c2: Cochain) -> bool:
    """True iff ``c1 + c2`` is a coboundary. Both must be cocycles."""
    for c in (c1, c2):
        if not is_cocycle(C, c):
            raise NotACocycleError(f"{format_cochain(c, compact=True)} is not a cocycle")
    return is_coboundary(C, c1 + c2)


def cohomology_basis(C: CochainComplexZ2, k: int) -> CohomologySummary:
    """Canonical cocycle representatives of a basis of ``H^k``.

    Kernel vectors are taken in reduced echelon order, each reduced modulo
    the coboundaries, and kept when independent of those already chosen.
    """
    image = gf2.Echelon(C.dim(k))
    for v in gf2.image_basis(C.delta(k - 1)):
        image.add(v.bits)
    span = gf2.Echelon(C.dim(k))
    for b in image.basis():
        span.add(b)
    gens = []
    for v in gf2.kernel_basis(C.delta(k)):
        rep = image.reduce(v.bits)
        if span.add(rep):
            gens.append(C.from_vector(k, BitVector(C.dim(k), rep)))
    return CohomologySummary(k, len(gens), tuple(gens))


class CochainMap:
    """Per-degree matrices ``maps[k]: source C^k -> target C^k``.

    Commutation with the coboundaries is checked on construction.
    """

    def __init__(self, source: CochainComplexZ2, target: CochainComplexZ2,
                 maps: Mapping[int, BitMatrix]):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        degrees = set(source.degrees) | set(target.degrees)
        for k in sorted(degrees):
            m = self.matrix(k)
            if (m.rows, m.cols) != (target.dim(k), source.dim(k)):
                raise CochainMapError(k, f"matrix is {m.rows}x{m.cols}, expected "
                                         f"{target.dim(k)}x{source.dim(k)}")
        for k in sorted(degrees | {min(degrees, default=0) - 1}):
            lhs = target.delta(k) @ self.matrix(k)
            rhs = self.matrix(k + 1) @ source.delta(k)
            if lhs != rhs:
                raise CochainMapError(k, "map does not commute with the coboundary")

    def matrix(self, k: int) -> BitMatrix:
        m = self.maps.get(k)
        if m is None:
            return BitMatrix.zeros(self.target.dim(k), self.source.dim(k))
        return m

    def __call__(self, c: Cochain) -> Cochain:
        return apply_cochain_map(self, c)


def apply_cochain_map(f: CochainMap, c: Cochain) -> Cochain:
    v = f.matrix(c.degree) @ f.source.to_vector(c)
    return f.target.from_vector(c.degree, v)
