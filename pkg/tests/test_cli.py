import subprocess
import sys
from importlib import resources

import pytest

from singular_fibers.cli import main

DATA = resources.files("singular_fibers").joinpath("data")
DISK = str(DATA.joinpath("disk.trace"))
EMPTY = str(DATA.joinpath("empty.trace"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def porcelain(out):
    return dict(line.split("=", 1) for line in out.splitlines())


@pytest.fixture
def corrupted_formulae(tmp_path):
    text = DATA.joinpath("expected_formulae.txt").read_text()
    row = "bI^5_o  -> bII^{2,5} + bII^{3,5} + bII^{4,5} + bII^{5,6} + bII^{5,8} + bII^15 + "
    assert row in text
    path = tmp_path / "formulae.txt"
    path.write_text(text.replace(row, row.replace("bII^15 + ", "")))
    return str(path)


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "--porcelain", "verify-paper", "--trials", "100")
    assert code == 0
    kv = porcelain(out)
    assert kv["failed"] == "0" and kv["passed"] == "12"


def test_verify_paper_fault_injection(capsys, corrupted_formulae):
    code, out, _ = run(capsys, "verify-paper", "--trials", "10", "--formulae", corrupted_formulae)
    assert code == 1
    failing = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(failing) == 1 and "double-entry" in failing[0]
    assert "delta1: row bI^5_o" in out


def test_verify_paper_missing_formulae_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify-paper", "--formulae", str(tmp_path / "nope.txt"))
    assert code == 2 and "error" in err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify-paper", "--bogus"])
    assert info.value.code == 2


def test_bad_variant_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["cohomology", "--variant", "bogus", "--degree", "1"])
    assert info.value.code == 2


@pytest.mark.parametrize("variant, degree, dim", [
    ("full", 0, "1"), ("full", 1, "2"), ("admissible", 1, "3"), ("morse", 1, "17"),
    ("full", 2, "145"), ("admissible", 2, "140"),
])
def test_cohomology_dimensions(capsys, variant, degree, dim):
    code, out, _ = run(capsys, "cohomology", "--variant", variant, "--degree", str(degree), "--porcelain")
    assert code == 0
    assert porcelain(out)["dimension"] == dim


def test_h0_generator_text(capsys):
    _, out, _ = run(capsys, "cohomology", "--variant", "full", "--degree", "0")
    assert out.splitlines() == ["H^0(full_32) dimension 1", "  [1] b0_o + b0_e"]


def test_complex_check(capsys):
    code, out, _ = run(capsys, "--porcelain", "complex", "check")
    kv = porcelain(out)
    assert code == 0
    assert kv["full_32.dims"] == "2/18/160" and kv["admissible_32.dims"] == "2/18/154"
    assert kv["full_32.betti"] == "1/2/145"


@pytest.mark.parametrize("level, count", [("refined", "18"), ("coarse", "9"), ("basis", "7")])
def test_constraints_derive(capsys, level, count):
    code, out, _ = run(capsys, "constraints", "derive", "--level", level, "--porcelain")
    assert code == 0 and porcelain(out)["count"] == count


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--codim", "2", "--porcelain")
    assert code == 0 and porcelain(out)["count"] == "160"
    _, out, _ = run(capsys, "catalog", "list", "--codim", "2", "--variant", "admissible", "--porcelain")
    assert porcelain(out)["count"] == "154"


def test_coexist_single_odd_term(capsys, tmp_path):
    f = tmp_path / "c.counts"
    f.write_text("bII^{2,9}_o = 1\n")
    code, out, _ = run(capsys, "coexist", str(f))
    assert code == 1
    assert "[15]" in out and "ODD" in out
    code, out, _ = run(capsys, "coexist", str(f), "--porcelain")
    kv = porcelain(out)
    assert kv["codim2.15"] == "odd" and kv["codim2.1"] == "even" and kv["ok"] == "0"


def test_coexist_even_counts_and_codim1(capsys, tmp_path):
    f = tmp_path / "c.counts"
    f.write_text("bI^6_e = 2\nbI^8_e = 2\nbII^c_o = 2\n")
    code, out, _ = run(capsys, "coexist", str(f), "--porcelain")
    assert code == 0 and porcelain(out)["ok"] == "1"


@pytest.mark.parametrize("text", ["bII^{2,9}_o = one\n", "bII^{2,9} = 1\n", "bII^zz_o = 1\n"])
def test_coexist_parse_error_names_the_line(capsys, tmp_path, text):
    f = tmp_path / "c.counts"
    f.write_text("# header\n" + text)
    code, _, err = run(capsys, "coexist", str(f))
    assert code == 2 and "line 2" in err


def test_coexist_rejects_codim0(capsys, tmp_path):
    f = tmp_path / "c.counts"
    f.write_text("b0_o = 1\n")
    code, _, err = run(capsys, "coexist", str(f))
    assert code == 2 and "b0_o" in err


def test_morse_invariant_on_disk(capsys):
    assert run(capsys, "morse", "invariant", DISK, "--class", "alpha") == (0, "1\n", "")
    assert run(capsys, "morse", "invariant", DISK, "--class", "beta")[1] == "0\n"
    assert run(capsys, "morse", "invariant", DISK, "--class", "bI^6 + bI^7 + bI^8")[1] == "0\n"
    code, _, err = run(capsys, "morse", "invariant", DISK, "--class", "bI^6")
    assert code == 2 and "not a cocycle" in err


def test_morse_validate(capsys, tmp_path):
    assert run(capsys, "morse", "validate", EMPTY)[0] == 0
    bad = tmp_path / "bad.trace"
    bad.write_text("target: line\nevent v=1 class=bI^2 reg_circles=0 reg_arcs=0 after=1,0\n")
    code, out, _ = run(capsys, "morse", "validate", str(bad), "--porcelain")
    assert code == 1 and porcelain(out)["violation.1"] == "closure"
    garbled = tmp_path / "garbled.trace"
    garbled.write_text("target: line\n\nevent v=1 class=bI^2\n")
    code, _, err = run(capsys, "morse", "validate", str(garbled))
    assert code == 2 and "line 3" in err


def test_morse_counts(capsys):
    code, out, _ = run(capsys, "morse", "counts", DISK, "--porcelain")
    kv = porcelain(out)
    assert code == 0
    assert kv["euler_characteristic"] == "1" and kv["count.bI^7_e"] == "1"


def test_morse_random_output_validates(capsys, tmp_path):
    code, out, _ = run(capsys, "morse", "random", "--seed", "3", "--target", "circle")
    assert code == 0
    f = tmp_path / "r.trace"
    f.write_text(out)
    assert run(capsys, "morse", "validate", str(f))[0] == 0


def test_reports_are_byte_identical(capsys):
    for argv in (["verify-paper", "--trials", "50"], ["cohomology", "--variant", "full", "--degree", "2"],
                 ["constraints", "derive", "--level", "basis"]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "singular_fibers", "morse", "invariant", DISK],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
