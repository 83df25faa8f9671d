"""The concrete universal complexes and the parity constraints they imply.

Three complexes are built:

* ``full_32``        all proper stable maps of 3-manifolds with boundary
                     into surfaces, classes refined by regular-component
                     parity (dimensions 2 / 18 / 160);
* ``admissible_32``  maps that are submersions near the boundary, which
                     removes bII^d, bII^e, bII^f (2 / 18 / 154);
* ``morse_21``       stable Morse functions on surfaces with boundary
                     (2 / 18 / 0; distinct critical values leave no
                     codimension-two fibers).

The degree-one coboundary is encoded here structurally and, independently,
as literal text in ``data/expected_formulae.txt``; the test suite diffs the
two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from . import gf2
from .catalog import ClassName, list_classes
from .cochain import (
    Cochain,
    CochainComplexZ2,
    CochainMap,
    ComplexError,
    complex_problems,
    format_cochain,
    parse_cochain,
)
from .gf2 import BitMatrix, BitVector

VARIANTS = ("full_32", "admissible_32", "morse_21")
VARIANT_ALIASES = {"full": "full_32", "admissible": "admissible_32", "morse": "morse_21"}

# codim-1 classes whose fibers change the parity of the number of
# level-set components; b0 is adjacent to exactly these
PARITY_FLIPPING = (2, 3, 4, 6, 8)

# Connected codim-2 terms of delta_1(bI^mu_o) as (label, parity); parity None
# means both parities. The _e row is the same with parities exchanged.
_CONNECTED_ODD_ROW = {
    2: (("a", "e"), ("b", "e"), ("d", "o")),
    3: (("13", "e"), ("22", "o"), ("a", "o")),
    4: (("13", "e"), ("22", "o"), ("23", "o"), ("24", None), ("b", "o"), ("f", "o")),
    5: (("15", None), ("23", "o"), ("25", None), ("30", "o"), ("38", "o"), ("e", "o")),
    6: (("c", "e"), ("d", "o"), ("e", "e"), ("f", "e")),
    7: (("22", None), ("23", "e"), ("d", "o"), ("f", "o")),
    8: (("23", "o"), ("24", None), ("c", "o"), ("e", "o")),
    9: (("27", None), ("35", "e"), ("37", "o")),
    10: (("30", "e"), ("32", None), ("33", None), ("35", "o"), ("37", "o"), ("38", "o"),
         ("39", None)),
}

NON_ADMISSIBLE = tuple(ClassName(f"bII^{x}") for x in ("d", "e", "f"))


def resolve_variant(v: str) -> str:
    v = VARIANT_ALIASES.get(v, v)
    if v not in VARIANTS:
        raise ValueError(f"unknown complex variant {v!r}; expected one of "
                         f"{', '.join(VARIANTS)} or full/admissible/morse")
    return v


def _swap(parity: Optional[str], flip: bool) -> Optional[str]:
    if parity is None or not flip:
        return parity
    return "e" if parity == "o" else "o"


def delta0_row(name: ClassName) -> Cochain:
    """Coboundary of ``b0_o`` or ``b0_e``: every parity-flipping class."""
    if name.base != "b0" or not name.refined:
        raise ValueError(f"expected b0_o or b0_e, got {name}")
    terms = []
    for mu in PARITY_FLIPPING:
        terms.extend(ClassName(f"bI^{mu}").expand())
    return Cochain.of(1, terms)


def delta1_row(name: ClassName) -> Cochain:
    """Coboundary of a refined ``bI^mu`` in the full (3,2) complex.

    Crossing another parity-flipping fiber bI^nu produces the disjoint union
    bII^{mu,nu} in both parities; the connected terms follow the table above.
    """
    if not name.base.startswith("bI^") or not name.refined:
        raise ValueError(f"expected a refined bI class, got {name}")
    mu = int(name.base[3:])
    if mu not in _CONNECTED_ODD_ROW:
        raise ValueError(f"{name} has no coboundary row")
    terms: list[ClassName] = []
    for nu in PARITY_FLIPPING:
        if nu != mu:
            i, j = sorted((mu, nu))
            terms.extend(ClassName(f"bII^{{{i},{j}}}").expand())
    flip = name.parity == "e"
    for label, parity in _CONNECTED_ODD_ROW[mu]:
        cls = ClassName(f"bII^{label}")
        terms.extend(cls.expand() if parity is None else (cls.with_parity(_swap(parity, flip)),))
    return Cochain.of(2, terms)


def _matrix(rows_of: dict, source: tuple, target: tuple) -> BitMatrix:
    index = {n: i for i, n in enumerate(target)}
    cols = []
    for name in source:
        image = rows_of[name]
        cols.append(BitVector.from_support(
            len(target), (index[n] for n in image.support if n in index)))
    return BitMatrix.from_columns(len(target), cols)


def _bases(variant: str) -> dict[int, tuple[ClassName, ...]]:
    if variant == "morse_21":
        return {k: tuple(c.name for c in list_classes((2, 1), k, "full")) for k in (0, 1)} | {2: ()}
    cat_variant = "full" if variant == "full_32" else "admissible"
    return {k: tuple(c.name for c in list_classes((3, 2), k, cat_variant)) for k in (0, 1, 2)}


@lru_cache(maxsize=None)
def build_complex(variant: str = "full_32") -> CochainComplexZ2:
    """Build one of the three universal complexes (cached, treat as read-only).

    The admissible variant keeps delta_1 but drops the rows of the deleted
    bII^d, bII^e, bII^f classes. Raises :class:`ComplexError` if the encoded
    data fails delta o delta = 0.
    """
    variant = resolve_variant(variant)
    bases = _bases(variant)
    d0 = _matrix({n: delta0_row(n) for n in bases[0]}, bases[0], bases[1])
    d1 = _matrix({n: delta1_row(n) for n in bases[1]}, bases[1], bases[2])
    C = CochainComplexZ2(bases, {0: d0, 1: d1}, name=variant)
    problems = complex_problems(C)
    if problems:
        raise ComplexError(f"{variant}: " + "; ".join(problems))
    return C


@lru_cache(maxsize=None)
def suspension_map(source: str = "admissible_32") -> CochainMap:
    """Cochain map from a (3,2) complex to ``morse_21``.

    Identity on names in degrees 0 and 1, zero in degree 2.
    """
    src = build_complex(resolve_variant(source))
    if src.name == "morse_21":
        raise ValueError("suspension starts from a (3,2) complex")
    tgt = build_complex("morse_21")
    maps = {}
    for k in (0, 1):
        cols = [BitVector.unit(tgt.dim(k), tgt.index(k, n)) for n in src.basis(k)]
        maps[k] = BitMatrix.from_columns(tgt.dim(k), cols)
    maps[2] = BitMatrix.zeros(tgt.dim(2), src.dim(2))
    return CochainMap(src, tgt, maps)


def suspension(k: int, source: str = "admissible_32") -> BitMatrix:
    if k not in (0, 1, 2):
        raise ValueError(f"suspension degree must be 0, 1 or 2, got {k}")
    return suspension_map(source).matrix(k)


@dataclass(frozen=True)
class ParityConstraint:
    """The counts of ``support`` (refined names) must have an even sum.

    An unrefined class counts as its two refinements, so ``{B_o, B_e}`` in
    the support is the same as ``|B|``. ``source`` records the generator
    whose coboundary produced the constraint, when there is one.
    """

    support: frozenset[ClassName]
    source: Optional[ClassName] = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))
        for n in self.support:
            if not n.refined:
                raise ValueError(f"constraint support must be refined, got {n}")

    @classmethod
    def parse(cls, text: str, source: Optional[ClassName] = None) -> "ParityConstraint":
        c = parse_cochain(text)
        if not c.support:
            raise ValueError("a parity constraint must be nonempty")
        return cls(c.support, source)

    @property
    def coarse(self) -> bool:
        """True when every class appears in both parities."""
        return all(n.flipped() in self.support for n in self.support)

    def evaluate(self, counts) -> int:
        return sum(counts.get(n, 0) for n in self.support) % 2

    def sort_key(self) -> tuple:
        return tuple(n.sort_key() for n in sorted(self.support))

    def __str__(self) -> str:
        return format_cochain(Cochain(0, self.support), compact=True)


def derive_constraints(C: CochainComplexZ2, k: int) -> list[ParityConstraint]:
    """One constraint per degree-``k`` generator: the support of its coboundary.

    Empty and repeated supports are dropped; generator order is kept.
    """
    out: list[ParityConstraint] = []
    seen = set()
    for g in C.basis(k):
        image = C.coboundary(Cochain(k, frozenset([g])))
        if not image.support or image.support in seen:
            continue
        seen.add(image.support)
        out.append(ParityConstraint(image.support, g))
    return out


def coarsen_constraints(cs: Iterable[ParityConstraint]) -> list[ParityConstraint]:
    """Sum the o- and e-constraints of each generator base.

    Terms present in both rows cancel; what remains is (for the complexes
    here) a constraint on unrefined counts. Requires ``source`` on every
    input constraint.
    """
    groups: dict[ClassName, frozenset] = {}
    for c in cs:
        if c.source is None:
            raise ValueError(f"constraint {c} has no source generator")
        base = c.source.unrefined()
        groups[base] = groups.get(base, frozenset()) ^ c.support
    out = []
    for base in sorted(groups):
        if groups[base]:
            out.append(ParityConstraint(groups[base], base))
    return out


def _universe(cs: Iterable[ParityConstraint]) -> list[ClassName]:
    names: set[ClassName] = set()
    for c in cs:
        names |= c.support
    return sorted(names)


def constraint_vectors(cs: Iterable[ParityConstraint],
                       universe: Optional[list[ClassName]] = None) -> tuple[list[ClassName], list[int]]:
    cs = list(cs)
    if universe is None:
        universe = _universe(cs)
    index = {n: i for i, n in enumerate(universe)}
    vecs = [BitVector.from_support(len(universe), (index[n] for n in c.support)).bits for c in cs]
    return universe, vecs


def constraint_rank(cs: Iterable[ParityConstraint]) -> int:
    universe, vecs = constraint_vectors(cs)
    return len(gf2.row_reduce(vecs, len(universe))[1])


def constraint_basis(cs: Iterable[ParityConstraint]) -> list[ParityConstraint]:
    """Reduced echelon basis of the span, columns in class-name order."""
    universe, vecs = constraint_vectors(cs)
    reduced, _ = gf2.row_reduce(vecs, len(universe))
    out = []
    for bits in reduced:
        v = BitVector(len(universe), bits)
        out.append(ParityConstraint(frozenset(universe[i] for i in v.support())))
    return sorted(out, key=lambda c: c.sort_key())


def same_span(a: Iterable[ParityConstraint], b: Iterable[ParityConstraint]) -> bool:
    """Mutual membership of two constraint families over a shared universe."""
    a, b = list(a), list(b)
    universe = _universe(a + b)
    _, va = constraint_vectors(a, universe)
    _, vb = constraint_vectors(b, universe)

    def contains(basis: list[int], others: list[int]) -> bool:
        ech = gf2.Echelon(len(universe))
        for v in basis:
            ech.add(v)
        return all(ech.contains(v) for v in others)

    return contains(va, vb) and contains(vb, va)


# ---------------------------------------------------------------------------
# literal transcription shipped as data

def load_expected_formulae(path: Union[str, Path, None] = None) -> dict[str, list[tuple[Optional[str], str]]]:
    """Parse ``expected_formulae.txt`` into ``{section: [(lhs, rhs), ...]}``.

    Lines look like ``lhs -> rhs``, ``lhs = rhs`` or a bare ``rhs``; ``#``
    starts a comment and ``[name]`` opens a section.
    """
    if path is None:
        text = resources.files("singular_fibers").joinpath("data/expected_formulae.txt").read_text()
    else:
        text = Path(path).read_text()
    sections: dict[str, list[tuple[Optional[str], str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ValueError(f"line {lineno}: entry outside a section")
        for sep in ("->", "="):
            if sep in line:
                lhs, rhs = line.split(sep, 1)
                sections[current].append((lhs.strip(), rhs.strip()))
                break
        else:
            sections[current].append((None, line))
    return sections


def transcribed_rows(sections, key: str) -> dict[ClassName, Cochain]:
    """Coboundary rows of one ``delta`` section as ``{generator: image}``."""
    from .catalog import parse_class_name

    degree = {"delta0": 1, "delta1": 2}[key]
    out = {}
    for lhs, rhs in sections.get(key, []):
        out[parse_class_name(lhs)] = parse_cochain(rhs, degree)
    return out


def transcribed_constraints(sections, key: str) -> list[ParityConstraint]:
    return [ParityConstraint.parse(rhs) for _, rhs in sections.get(key, [])]
