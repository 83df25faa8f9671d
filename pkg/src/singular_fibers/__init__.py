"""Universal complexes of singular fibers and Morse function invariants."""
from .catalog import Catalog, ClassName, ClassNameError, coarsen, list_classes, parse_class_name
from .cochain import (
    Cochain,
    CochainComplexZ2,
    CochainMap,
    ComplexError,
    NotACocycleError,
    betti,
    check_complex,
    cohomologous,
    cohomology_basis,
    format_cochain,
    is_cocycle,
    parse_cochain,
)
from .invariants import evaluate, named_class, triviality_probe
from .morse import (
    MorseTrace,
    TraceEvent,
    check_coexistence,
    count_fibers,
    euler_characteristic,
    morse_constraints,
    parse_trace,
    random_trace,
    validate_trace,
)
from .universal import (
    ParityConstraint,
    build_complex,
    coarsen_constraints,
    constraint_basis,
    derive_constraints,
    suspension,
    suspension_map,
)

__version__ = "0.1.0"
