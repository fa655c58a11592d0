import json
import os

import pytest

from trilnd import descriptor
from trilnd.cli import main, parse_derivation_spec
from trilnd.elementary import FamilyKind
from trilnd.errors import ParseError
from trilnd.fixtures import FIXTURES

HERE = os.path.dirname(__file__)
DESCRIPTORS = os.path.join(HERE, "..", "descriptors")


def path(name):
    return os.path.join(DESCRIPTORS, f"{name}.yaml")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_descriptor_files_match_fixtures():
    for name, make in FIXTURES.items():
        assert descriptor.load(path(name)) == make()


def test_descriptor_round_trip(fixtures):
    for data in fixtures.values():
        assert descriptor.loads(descriptor.dumps(data)) == data


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", path("quartic"))
    assert code == 0


def test_validate_duplicate_scalars(tmp_path, capsys):
    f = tmp_path / "dup.yaml"
    f.write_text("kind: type1\nblocks: [[2], [3]]\na: [1, 1]\n")
    code, out, _ = run(capsys, "validate", str(f), "--machine")
    assert code == 2
    codes = {v["code"] for v in json.loads(out)["violations"]}
    assert "DuplicateScalar" in codes


def test_parse_error_position(tmp_path, capsys):
    f = tmp_path / "bad.yaml"
    f.write_text("kind: type1\nblocks: [[2], [3]]\na: [1, 1//2]\n")
    with pytest.raises(ParseError) as info:
        descriptor.load(str(f))
    # the second slash is the first character outside the p/q grammar
    assert (info.value.line, info.value.column) == (3, 10)
    code, _, err = run(capsys, "grading", str(f))
    assert code == 2 and "3" in err


def test_grading_text_and_json_agree(capsys):
    code, out, _ = run(capsys, "grading", path("quartic"))
    assert code == 0
    assert "invariant factors: 1, 2" in out
    assert "torsion: [2]" in out
    assert "all 𝔤_i homogeneous: yes" in out
    code, out, _ = run(capsys, "grading", path("quartic"), "--machine")
    rec = json.loads(out)
    assert rec["invariant_factors"] == [1, 2]
    assert rec["free_rank"] == 2 and rec["torsion"] == [2]
    assert rec["relations_homogeneous"] is True


def test_derivations_quartic(capsys):
    code, out, _ = run(capsys, "derivations", path("quartic"), "--machine")
    fams = json.loads(out)["families"]
    assert len(fams) == 2
    assert sorted(f["i0"] for f in fams) == [0, 2]
    assert all(tuple(f["C"]) == (1, 2, 1) for f in fams)


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", path("rigid23"))
    assert code == 0 and "rigid: true" in out
    code, out, _ = run(capsys, "classify", path("gap_case"), "--machine")
    rec = json.loads(out)
    assert rec["cor1_gap"] is True and rec["rigid"] is False


def test_apply_and_kernel(capsys):
    code, out, _ = run(capsys, "apply", path("quartic"), "dcb:1,2,1;1,-1,0", "T[0][1]*T[1][2]")
    assert code == 0
    assert out.strip() == "T[1][1]^2*T[1][2] - 2*T[0][1]^2"
    code, out, _ = run(capsys, "kernel", path("quartic"), "dcb:1,2,1;0,1,-1", "T[1][1]")
    assert code == 0 and "yes" in out
    code, out, _ = run(capsys, "kernel", path("quartic"), "dcb:1,2,1;0,1,-1", "--generate", "--limit", "3",
                       "--machine")
    assert len(json.loads(out)["elements"]) == 3


def test_kernel_rejects_inhomogeneous(capsys):
    code, _, err = run(capsys, "kernel", path("quartic"), "dcb:1,2,1;0,1,-1", "T[1][1] + 1")
    assert code == 1


def test_flow_sl2(capsys):
    code, out, _ = run(capsys, "flow", path("sl2"), "dc:1,1")
    assert code == 0
    assert "T[1][1] -> T[1][1] + t*T[2][2]" in out
    assert "relations preserved: yes" in out


def test_bad_template_is_usage_error(capsys):
    code, _, err = run(capsys, "flow", path("sl2"), "ds:1")
    assert code == 2
    code, _, err = run(capsys, "flow", path("sl2"), "zz:1")
    assert code == 2


def test_search_sl2(capsys):
    code, out, _ = run(capsys, "search", path("sl2"), "--max-degree", "1", "--machine")
    assert code == 0
    rec = json.loads(out)
    assert rec["unmatched"] == 0 and rec["missing"] == []
    assert rec["survivors"]


def test_derivation_string_parser():
    assert parse_derivation_spec("ds:2") == (FamilyKind.DS, {"p": 2})
    kind, kw = parse_derivation_spec("dcb:1,2,1;0,1/2,-1/2")
    assert kind is FamilyKind.DELTA_C_BETA_21 and kw["C"] == (1, 2, 1)
    with pytest.raises(ParseError):
        parse_derivation_spec("dcb:1,2,1;0,1//2,1")
