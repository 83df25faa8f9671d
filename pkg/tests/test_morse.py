import pytest

from singular_fibers.catalog import ClassName, parse_class_name
from singular_fibers.morse import (
    CountVector,
    InvalidTraceError,
    MorseTrace,
    TraceEvent,
    TraceGenerationError,
    TraceParseError,
    check_coexistence,
    concatenate,
    count_fibers,
    euler_characteristic,
    format_counts,
    format_trace,
    morse_constraints,
    parse_counts,
    parse_trace,
    random_trace,
    rotate,
    validate_trace,
)
from singular_fibers.universal import build_complex, derive_constraints
from singular_fibers.verify import packaged_trace


def ev(value, cls, reg, after):
    return TraceEvent(float(value), parse_class_name(cls), tuple(reg), tuple(after))


def disk():
    return packaged_trace("disk.trace")


def annulus():
    # a disk with a hole: boundary minimum, the arc splits at the hole,
    # rejoins above it, boundary maximum
    return MorseTrace("line", (
        ev(1, "bI^6", (0, 0), (0, 1)),
        ev(2, "bI^8", (0, 0), (0, 2)),
        ev(3, "bI^8", (0, 0), (0, 1)),
        ev(4, "bI^6", (0, 0), (0, 0)),
    ))


def two_disks():
    # a second disk born while the first is still present
    return MorseTrace("line", (
        ev(1, "bI^2", (0, 0), (1, 0)),
        ev(2, "bI^6", (1, 0), (1, 1)),
        ev(3, "bI^7", (0, 1), (0, 2)),
        ev(4, "bI^6", (0, 1), (0, 1)),
        ev(5, "bI^6", (0, 0), (0, 0)),
    ))


def test_disk():
    t = disk()
    assert validate_trace(t).valid
    assert euler_characteristic(t) == 1
    assert count_fibers(t) == CountVector({ClassName("bI^2", "e"): 1, ClassName("bI^7", "e"): 1,
                                           ClassName("bI^6", "e"): 1})


def test_annulus():
    t = annulus()
    assert validate_trace(t).valid
    assert euler_characteristic(t) == 0
    assert count_fibers(t) == {ClassName("bI^6", "e"): 2, ClassName("bI^8", "e"): 2}


def test_regular_components_set_the_parity():
    t = two_disks()
    assert validate_trace(t).valid
    counts = count_fibers(t)
    assert counts[ClassName("bI^6", "o")] == 2
    assert counts[ClassName("bI^7", "o")] == 1
    assert euler_characteristic(t) == 2


def test_empty_trace():
    t = packaged_trace("empty.trace")
    assert validate_trace(t).valid
    assert count_fibers(t) == {}
    assert euler_characteristic(t) == 0


@pytest.mark.parametrize("events, initial, rule", [
    ((ev(2, "bI^2", (0, 0), (1, 0)), ev(1, "bI^2", (0, 0), (0, 0))), (0, 0), "increasing-values"),
    ((ev(1, "bI^2", (0, 0), (1, 0)),), (0, 0), "closure"),
    ((ev(1, "bI^2", (0, 0), (0, 1)), ev(2, "bI^6", (0, 0), (0, 0))), (0, 0), "delta-rule"),
    ((ev(1, "bI^2_o", (0, 0), (1, 0)), ev(2, "bI^2", (0, 0), (0, 0))), (0, 0), "parity-label"),
    ((ev(1, "bI^1", (0, 0), (0, 0)),), (0, 0), "class-codim"),
    ((ev(1, "bII^c", (0, 0), (0, 0)),), (0, 0), "class-codim"),
    ((), (1, 0), "initial-empty"),
    ((ev(1, "bI^2", (1, 0), (1, 0)),), (0, 0), "regular-fits"),
    ((ev(1, "bI^5", (0, 0), (0, 0)),), (0, 0), "local-transition"),
    ((ev(1, "bI^2", (0, 0), (-1, 0)),), (0, 0), "nonnegative"),
])
def test_validation_rules(events, initial, rule):
    report = validate_trace(MorseTrace("line", events, initial))
    assert not report.valid
    assert rule in report.rules()


def test_invalid_traces_are_not_counted():
    bad = MorseTrace("line", (ev(1, "bI^2", (0, 0), (1, 0)),))
    with pytest.raises(InvalidTraceError):
        count_fibers(bad)
    with pytest.raises(InvalidTraceError):
        euler_characteristic(bad)


def test_concatenation_is_additive():
    pieces = [disk(), annulus(), two_disks(), random_trace(11, 10), random_trace(12, 10)]
    for a in pieces:
        for b in pieces:
            t = concatenate(a, b)
            assert validate_trace(t).valid
            assert count_fibers(t) == count_fibers(a) + count_fibers(b)
            assert euler_characteristic(t) == euler_characteristic(a) + euler_characteristic(b)


def test_concatenation_needs_matching_seam():
    with pytest.raises(ValueError):
        concatenate(disk(), random_trace(1, 6, target="circle"))


@pytest.mark.parametrize("seed", range(20))
def test_cyclic_shift_keeps_counts(seed):
    t = random_trace(seed, 16, target="circle")
    for k in range(len(t) + 1):
        r = rotate(t, k)
        assert validate_trace(r).valid
        assert count_fibers(r) == count_fibers(t)
        assert euler_characteristic(r) == euler_characteristic(t)


def test_rotate_rejects_line_targets():
    with pytest.raises(ValueError):
        rotate(disk(), 1)


@pytest.mark.parametrize("target", ["line", "circle"])
def test_random_traces_are_valid_and_deterministic(target):
    for seed in range(200):
        t = random_trace(seed, 20, target=target)
        assert validate_trace(t).valid, seed
        assert len(t) <= 20
        assert t == random_trace(seed, 20, target=target)


def test_orientable_traces_avoid_non_orientable_fibers():
    for seed in range(200):
        t = random_trace(seed, 20, orientable=True)
        assert not {e.fiber_class.base for e in t.events} & {"bI^9", "bI^10"}


def test_random_traces_use_every_move_somewhere():
    seen = {e.fiber_class.base for seed in range(300) for e in random_trace(seed, 24).events}
    assert seen == {f"bI^{k}" for k in range(2, 11)}


def test_budget_zero_and_negative():
    assert len(random_trace(0, 0)) == 0
    with pytest.raises(TraceGenerationError):
        random_trace(0, -1)


@pytest.mark.parametrize("target", ["line", "circle"])
def test_parity_laws_on_random_traces(target):
    cs = morse_constraints()
    assert len(cs) == 3
    for seed in range(1000):
        report = check_coexistence(count_fibers(random_trace(seed, 24, target=target)), cs)
        assert report.ok, seed


def test_coexistence_reports_violations():
    counts = parse_counts("bII^{2,9}_o = 1\n")
    report = check_coexistence(counts, derive_constraints(build_complex("full"), 1))
    assert [i for i, r in enumerate(report.results, 1) if not r.even] == [15, 16]
    with pytest.raises(KeyError):
        check_coexistence({ClassName("b0", "o"): 1}, morse_constraints())


def test_trace_text_round_trip():
    for t in (disk(), annulus(), random_trace(4, 15, target="circle")):
        assert parse_trace(format_trace(t)) == t


@pytest.mark.parametrize("text, lineno", [
    ("initial: circles=0 arcs=0\n", 0),
    ("target: line\nevent v=1 class=bI^2 reg_circles=0 reg_arcs=0\n", 2),
    ("target: plane\n", 1),
    ("target: line\n# ok\nevent v=x class=bI^2 reg_circles=0 reg_arcs=0 after=1,0\n", 3),
    ("target: line\nevent v=1 class=bI^99 reg_circles=0 reg_arcs=0 after=1,0\n", 2),
    ("target: line\nsomething else\n", 2),
    ("target: line\nevent v=1 class=bI^2 reg_circles=0 reg_arcs=0 after=1,0 extra=1\n", 2),
])
def test_trace_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(TraceParseError) as info:
        parse_trace(text)
    assert info.value.lineno == lineno


def test_counts_file():
    c = parse_counts("# comment\nbI^2_o = 2\nbI^2_o=1\nbII^c_e = 0\n")
    assert c[ClassName("bI^2", "o")] == 3
    assert format_counts(c) == "bI^2_o = 3\n"
    assert c.total_of(ClassName("bI^2")) == 3
    for bad, lineno in (("bI^2 = 1\n", 1), ("\nbI^2_o = -1\n", 2), ("bI^2_o 1\n", 1)):
        with pytest.raises(TraceParseError) as info:
            parse_counts(bad)
        assert info.value.lineno == lineno
