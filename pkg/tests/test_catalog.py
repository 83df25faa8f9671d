import warnings

import pytest

from singular_fibers.catalog import (
    Catalog,
    ClassName,
    ClassNameError,
    NameNormalizedWarning,
    all_base_names,
    coarsen,
    default_catalog,
    list_classes,
    parse_catalog,
    parse_class_name,
)
from singular_fibers.cochain import Cochain, parse_cochain
from singular_fibers.universal import PARITY_FLIPPING, build_complex


def refined_names():
    return [n for b in all_base_names() for n in b.expand()]


def test_every_refined_name_round_trips():
    names = refined_names()
    assert len(names) == 2 * len(all_base_names())
    for n in names:
        assert parse_class_name(str(n)) == n


@pytest.mark.parametrize("text, base, parity", [
    ("b0_o", "b0", "o"),
    ("bI^10_e", "bI^10", "e"),
    ("bII^{2,8}", "bII^{2,8}", None),
    ("bII^13_o", "bII^13", "o"),
    ("bII^f", "bII^f", None),
    ("  bI^7  ", "bI^7", None),
])
def test_parse_examples(text, base, parity):
    n = parse_class_name(text)
    assert (n.base, n.parity) == (base, parity)


@pytest.mark.parametrize("text, token", [
    ("bII^g", "g"),
    ("bI^11", "11"),
    ("bI^2_x", "_x"),
    ("bII^40", "40"),
    ("", ""),
])
def test_bad_names_point_at_the_offending_token(text, token):
    with pytest.raises(ClassNameError) as info:
        parse_class_name(text)
    assert info.value.token == token


def test_reversed_pair_is_normalized_with_warning():
    with pytest.warns(NameNormalizedWarning):
        n = parse_class_name("bII^{8,3}")
    assert str(n) == "bII^{3,8}"


def test_sorted_order_matches_listing_convention():
    got = [str(n) for n in sorted([parse_class_name(s) for s in
                                   ("bII^a", "bII^13", "bII^{2,3}", "bI^10", "bI^2_e", "bI^2_o", "bI^2", "b0")])]
    assert got == ["b0", "bI^2", "bI^2_o", "bI^2_e", "bI^10", "bII^{2,3}", "bII^13", "bII^a"]


def test_codimensions():
    assert parse_class_name("b0").codim == 0
    assert parse_class_name("bI^5_o").codim == 1
    assert parse_class_name("bII^{4,4}").codim == 2


def test_refined_counts_per_variant():
    assert len(list_classes((3, 2), 0, "full")) == 2
    assert len(list_classes((3, 2), 1, "full")) == 18
    assert len(list_classes((3, 2), 2, "full")) == 160
    assert len(list_classes((3, 2), 2, "admissible")) == 154
    assert len(list_classes((2, 1), 1, "full")) == 18
    assert list_classes((2, 1), 2, "full") == []


def test_bI1_never_enters_a_complex():
    names = {e.name.unrefined() for e in list_classes((3, 2), 1)}
    assert ClassName("bI^1") not in names
    assert default_catalog().get("bI^1").excluded_from_complex


def test_orientable_exclusions():
    flagged = {str(e.name) for e in default_catalog() if e.orientable_excluded}
    assert flagged == {"bI^9", "bI^10"} | {f"bII^{k}" for k in range(26, 40)}


def test_admissible_drops_exactly_def():
    full = {e.name for e in list_classes((3, 2), 2, "full", refined=False)}
    adm = {e.name for e in list_classes((3, 2), 2, "admissible", refined=False)}
    assert {str(n) for n in full - adm} == {"bII^d", "bII^e", "bII^f"}


def test_flips_column_matches_b0_coboundary():
    flips = {int(str(e.name)[3:]) for e in list_classes((3, 2), 1, refined=False)
             if e.transition.flips_component_parity}
    assert flips == set(PARITY_FLIPPING)
    C = build_complex("full")
    image = C.coboundary(Cochain.of(0, [ClassName("b0", "o")]))
    assert {int(n.base[3:]) for n in image.support} == flips


def test_get_accepts_refined_names():
    assert default_catalog().get("bI^7_e").name == ClassName("bI^7")
    with pytest.raises(KeyError):
        Catalog([]).get("bI^7")


def test_list_classes_rejects_bad_arguments():
    with pytest.raises(ValueError):
        list_classes((4, 3), 1)
    with pytest.raises(ValueError):
        list_classes((3, 2), 3)
    with pytest.raises(ValueError):
        list_classes((3, 2), 1, "bogus")


def test_parse_catalog_reports_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        parse_catalog("b0 codim=0 orientable_excluded=0 admissible=1\nbI^2 codim=x\n")


def test_coarsen_examples():
    assert coarsen(["bI^2_o", "bI^2_e", "bI^3_o"]) == {ClassName("bI^3")}
    assert coarsen(["bI^5_e"]) == {ClassName("bI^5")}
    c = parse_cochain("bI^6 + bI^7_o", 1)
    assert coarsen(c) == Cochain(1, frozenset({ClassName("bI^7")}))
    with pytest.raises(ValueError):
        coarsen([ClassName("bI^2")])


def test_no_warnings_for_canonical_names():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for n in refined_names():
            parse_class_name(str(n))
