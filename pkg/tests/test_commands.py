"""Tests the commands infrastructure and the reports of every command."""

import json
import os
from contextlib import nullcontext as does_not_raise
from pathlib import Path
from typing import Any, ContextManager, Dict, List, NamedTuple, Optional, Type

import pytest

import mlcech
import mlcech.commands as commands
from mlcech.configure import _configure_argument_parser

INPUTS = os.path.join("tests", "inputs")
PLANE = '{"kind": "plane"}'
PLANE_ARGV = ["plane-ml", "--domain", PLANE, "--poles", os.path.join(INPUTS, "plane_poles.json")]
TORUS_ARGV = ["torus-ml", "--lattice", "1,i"]
TORUS_PARTS = os.path.join(INPUTS, "torus_parts.json")


class CommandSpecs(NamedTuple):
    class_: Type[commands.Command]
    argv: List[str]


COMMANDS = [
    CommandSpecs(commands.Cech, ["cech", "-i", os.path.join(INPUTS, "s1_cover.json")]),
    CommandSpecs(commands.P1, ["p1", "--divisor", '{"inf": 3}']),
    CommandSpecs(commands.RRSweep, ["rr-sweep", "-n", "5"]),
    CommandSpecs(commands.MLP1, ["ml-p1", "--parts", os.path.join(INPUTS, "ml_parts.json")]),
    CommandSpecs(commands.PlaneML, PLANE_ARGV + ["-N", "2"]),
    CommandSpecs(commands.TorusML, TORUS_ARGV + ["--parts", TORUS_PARTS]),
    CommandSpecs(commands.Tables, ["tables", "--n", "2"]),
]
COMMAND_INSTS = [c.class_(_configure_argument_parser().parse_args(c.argv)) for c in COMMANDS]
COMMAND_CLASS_ATTRIBUTES = [
    "name",
    "aliases",
]


def _run(argv: List[str], capsys: pytest.CaptureFixture) -> str:
    code = mlcech.main(argv)
    assert code == mlcech.EXIT_OK, f"{argv} exited with {code}"
    return capsys.readouterr().out


def _report(argv: List[str], capsys: pytest.CaptureFixture) -> Dict[str, Any]:
    return json.loads(_run(argv, capsys))


@pytest.mark.parametrize(
    "path,expectation",
    [
        # raises `FileNotFoundError` if `path` is not in an existing directory
        (os.path.join("invalid", "report.json"), pytest.raises(FileNotFoundError)),
        (os.path.join("tests", "invld", "report.csv"), pytest.raises(FileNotFoundError)),
        # otherwise does not raise any error
        (None, does_not_raise()),
        ("-", does_not_raise()),
        ("report.json", does_not_raise()),
        (os.path.join("tests", "report.csv"), does_not_raise()),
    ],
)
def test_command__check_output(path: Optional[str], expectation: ContextManager) -> None:
    with expectation:
        commands.Command._check_output(path)


def test_get_command_classes() -> None:
    # check that the output of get_command_classes() == `COMMANDS`
    command_classes = commands.get_command_classes()
    commands_classes = [c.class_ for c in COMMANDS]
    assert len(command_classes) == len(commands_classes), "length mismatch"
    for cmd in command_classes:
        assert cmd in commands_classes, f"{cmd} not found"


def test_command_class_attributes() -> None:
    # in the current implementation, they are the abstract properties of `Command`
    command_class_attributes = [
        name
        for name in commands.Command.__abstractmethods__
        if isinstance(getattr(commands.Command, name), property)
    ]
    assert len(command_class_attributes) == len(COMMAND_CLASS_ATTRIBUTES), "length mismatch"
    for cmd in command_class_attributes:
        assert cmd in COMMAND_CLASS_ATTRIBUTES, f"{cmd} not found"


@pytest.mark.parametrize("cmd_cls_attr", COMMAND_CLASS_ATTRIBUTES)
def test_abstract_class_attributes(cmd_cls_attr: str) -> None:
    """Abstract class attributes need an abstract property and a getter; the
    property is checked by `test_command_class_attributes`, the getter here."""
    getter = f"get_{cmd_cls_attr}"
    assert hasattr(commands.Command, getter), f"{getter} isn't an attribute"
    assert callable(getattr(commands.Command, getter)), f"{getter} isn't an method"


@pytest.mark.parametrize("cmd_cls_attr", COMMAND_CLASS_ATTRIBUTES)
@pytest.mark.parametrize("cmd_inst", COMMAND_INSTS)
def test_class_attributes(cmd_cls_attr: str, cmd_inst: commands.Command) -> None:
    assert hasattr(cmd_inst, cmd_cls_attr), f"{cmd_cls_attr} isn't an attribute of {cmd_inst}"
    attr = getattr(cmd_inst, cmd_cls_attr)
    assert not callable(attr), f"{cmd_cls_attr} is a method of {cmd_inst}"
    assert (
        attr == getattr(cmd_inst, f"get_{cmd_cls_attr}")()
    ), f"{cmd_cls_attr} class variable doesn't match getter in {cmd_inst}"


@pytest.mark.parametrize("cmd_inst", COMMAND_INSTS)
def test_name(cmd_inst: commands.Command) -> None:
    name = cmd_inst.get_name().replace("-", "")
    assert name.isalnum(), f"{cmd_inst} isn't alphanumeric"
    assert name.islower(), f"{cmd_inst} isn't lowercase"


@pytest.mark.parametrize("cmd_inst", COMMAND_INSTS)
def test_aliases(cmd_inst: commands.Command) -> None:
    assert len(cmd_inst.get_aliases()) == 1, f"{cmd_inst} aliases length isn't 1"
    assert len(cmd_inst.get_aliases()[0]) == 1, f"{cmd_inst} alias length isn't 1"


def test_aliases_unique() -> None:
    aliases = [a for c in commands.get_command_classes() for a in c.aliases]
    assert len(set(aliases)) == len(aliases), f"repeated aliases in {aliases}"


@pytest.mark.parametrize(
    "window,expectation",
    [(None, does_not_raise()), (3, does_not_raise()), (2, pytest.raises(ValueError))],
)
def test_p1__check_window(window: Optional[int], expectation: ContextManager) -> None:
    with expectation:
        commands.P1._check_window(window)


@pytest.mark.parametrize(
    "coeff_range,max_degree,samples,expectation",
    [
        ([-3, 3], 8, 500, does_not_raise()),
        ([0, 0], 0, 1, does_not_raise()),
        ([3, -3], 8, 500, pytest.raises(ValueError)),
        ([-3, 3], -1, 500, pytest.raises(ValueError)),
        ([-3, 3], 8, 0, pytest.raises(ValueError)),
    ],
)
def test_rrsweep__check_sweep(
    coeff_range: List[int], max_degree: int, samples: int, expectation: ContextManager
) -> None:
    with expectation:
        commands.RRSweep._check_sweep(coeff_range, max_degree, samples)


@pytest.mark.parametrize(
    "stages,depth,expectation",
    [
        (2, None, does_not_raise()),
        (2, 2, does_not_raise()),
        (0, None, pytest.raises(ValueError)),
        (2, 0, pytest.raises(ValueError)),
        (2, 3, pytest.raises(ValueError)),
    ],
)
def test_planeml__check_stages(
    stages: int, depth: Optional[int], expectation: ContextManager
) -> None:
    with expectation:
        commands.PlaneML._check_stages(stages, depth)


def test_cech(capsys: pytest.CaptureFixture) -> None:
    report = _report(["cech", "-i", os.path.join(INPUTS, "s1_cover.json"), "-r"], capsys)
    assert report["ranks"] == [1, 1]
    assert report["command"] == "cech"
    assert report["schema_version"] == 1
    assert len(report["representatives"][1]) == 1
    report = _report(["cech", "-i", os.path.join(INPUTS, "interval_cover.json")], capsys)
    assert report["ranks"] == [1, 0]


def test_p1(capsys: pytest.CaptureFixture) -> None:
    report = _report(["p1", "--divisor", '{"inf": 3}'], capsys)
    assert (report["h0"], report["h1"], report["rr"]) == (4, 0, True)
    assert report["divisor"] == {"inf": 3}
    assert report["closed_form"] == {"h0": 4, "h1": 0}
    report = _report(["p1", "--divisor", '[["0", -3]]', "--add-point", "i"], capsys)
    assert (report["h0"], report["h1"]) == (0, 2)
    assert report["skyscraper"]["euler_change"] == 1


def test_rr_sweep(capsys: pytest.CaptureFixture) -> None:
    report = _report(["rr-sweep", "-n", "20"], capsys)
    assert report["failures"] == 0
    assert report["checked"] == len(report["rows"])
    for row in report["rows"]:
        assert row["lhs"] == row["rhs"] == row["degree"] + 1, f"{row}"
        assert abs(row["degree"]) <= 8
    header = _run(["rr-sweep", "-n", "3", "-f", "csv"], capsys).splitlines()[0]
    assert header == "divisor,degree,window,h0,h1,lhs,rhs,holds"


def test_ml_p1(capsys: pytest.CaptureFixture) -> None:
    report = _report(["ml-p1", "--parts", os.path.join(INPUTS, "ml_parts.json")], capsys)
    assert report["class_is_zero"]
    assert report["reproduces_parts"]
    assert report["ranks"][1] == 0


def test_plane_ml(capsys: pytest.CaptureFixture) -> None:
    report = _report(PLANE_ARGV + ["-N", "2"], capsys)
    assert [s["poles"] for s in report["stages"]] == [1, 1]
    for stage in report["stages"]:
        assert stage["certified_bound"] <= 2.0 ** -stage["n"]
    for check in report["verification"]:
        assert check["error"] <= 1e-6, f"{check}"
    argv = PLANE_ARGV + ["-N", "2", "--grid=-2:2:5,-1:1:3", "-f", "csv"]
    lines = _run(argv, capsys).splitlines()
    assert lines[0] == "z_re,z_im,f_re,f_im,bound"
    assert len(lines) == 1 + 15, "points outside K_2 are kept"
    # the corners (±2, ±1) lie outside K_2 = {|z| ≤ 2}
    empty = [line for line in lines[1:] if line.endswith(",,,")]
    assert sorted(empty) == ["-2.0,-1.0,,,", "-2.0,1.0,,,", "2.0,-1.0,,,", "2.0,1.0,,,"]
    report = _report(PLANE_ARGV + ["-N", "2", "--grid=-2:2:5,-1:1:3"], capsys)
    assert report["uncertified_points"] == 4
    corner = next(r for r in report["rows"] if (r["z_re"], r["z_im"]) == (2.0, 1.0))
    assert corner["f_re"] is None and corner["bound"] is None
    inside = next(r for r in report["rows"] if (r["z_re"], r["z_im"]) == (1.0, 1.0))
    assert inside["bound"] == 0.0


def test_plane_ml_csv_needs_grid(capsys: pytest.CaptureFixture) -> None:
    assert mlcech.main(PLANE_ARGV + ["-N", "2", "-f", "csv"]) == mlcech.EXIT_SCHEMA
    assert capsys.readouterr().out == ""


def test_torus_ml(capsys: pytest.CaptureFixture) -> None:
    report = _report(TORUS_ARGV + ["--parts", TORUS_PARTS, "--check"], capsys)
    assert report["solvable"]
    assert report["residue_sum"] == {"re": 0.0, "im": 0.0}
    assert report["max_periodicity_dev"] <= 1e-6
    assert report["max_coefficient_error"] <= 1e-5
    report = _report(TORUS_ARGV + ["--parts", '[{"pole": "1/2+1/2i", "coeffs": [1]}]'], capsys)
    assert not report["solvable"]
    assert report["max_periodicity_dev"] is None
    assert "g2" not in report


def test_tables(capsys: pytest.CaptureFixture) -> None:
    report = _report(["tables", "--n", "2"], capsys)
    assert report["betti"] == [1, 0, 1, 0, 1]
    assert report["hodge"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    od = {(r["p"], r["q"]): r["value"] for r in report["rows"] if r["table"] == "od"}
    assert od[(2, 0)] == 6 and od[(-3, 2)] == 1 and od[(-1, 0)] == 0
    report = _report(["tables", "--n", "1", "--d-range", "-10", "10"], capsys)
    assert report["od_cech_agrees"]
    assert report["omega1_ranks"] == [0, 1]


def test_explain(capsys: pytest.CaptureFixture) -> None:
    report = _report(["p1", "--divisor", "{}", "--explain", "-s", "theta=0.25"], capsys)
    assert report["command"] == "explain"
    assert report["theta"] == 0.25
    assert report["r_cut"] == 600.0
    lines = _run(["p1", "--divisor", "{}", "--explain", "-f", "csv"], capsys).splitlines()
    assert lines[0] == "key,value"
    assert "theta,0.5" in lines and "seed,0" in lines


def test_key_value_csv(capsys: pytest.CaptureFixture) -> None:
    lines = _run(["p1", "--divisor", '{"inf": 3}', "-f", "csv"], capsys).splitlines()
    assert lines[0] == "key,value"
    assert "h0,4" in lines


@pytest.mark.parametrize(
    "argv,code",
    [
        (["p1", "--divisor", os.path.join(INPUTS, "malformed.json")], mlcech.EXIT_SCHEMA),
        (["p1", "--divisor", '{"inf": 3'], mlcech.EXIT_SCHEMA),
        (["p1", "--divisor", '{"inf": 3}', "-m", "2"], mlcech.EXIT_SCHEMA),
        (["p1", "--divisor", '{"inf": 3}', "-s", "theta=2"], mlcech.EXIT_SCHEMA),
        (["tables", "--n", "0"], mlcech.EXIT_SCHEMA),
        (["cech"], mlcech.EXIT_SCHEMA),
        (["cech", "-i", os.path.join(INPUTS, "missing_restriction.json")], mlcech.EXIT_MATH),
        # coincident poles
        (
            ["ml-p1", "--parts", '[{"pole": "1", "coeffs": [1]}, {"pole": "1", "coeffs": [0, 1]}]'],
            mlcech.EXIT_MATH,
        ),
        (
            TORUS_ARGV
            + ["--parts", '[{"pole": "1/4", "coeffs": [1]}, {"pole": "5/4+i", "coeffs": [-1]}]'],
            mlcech.EXIT_MATH,
        ),
        (["p1", "--divisor", os.path.join(INPUTS, "does_not_exist.json")], mlcech.EXIT_IO),
        (["tables", "--n", "1", "-o", os.path.join("invalid", "out.json")], mlcech.EXIT_IO),
    ],
)
def test_exit_codes(argv: List[str], code: int, capsys: pytest.CaptureFixture) -> None:
    assert mlcech.main(argv) == code
    assert capsys.readouterr().out == "", "failures leave no partial output"


@pytest.mark.parametrize(
    "argv",
    [
        ["rr-sweep", "-n", "10", "-f", "csv"],
        ["ml-p1", "--parts", os.path.join(INPUTS, "ml_parts.json")],
        PLANE_ARGV + ["-N", "2", "--grid=-2:2:3,-1:1:3"],
        ["tables", "--n", "3", "-f", "csv"],
    ],
)
def test_determinism(argv: List[str], tmp_path: Path) -> None:
    outputs = []
    for k in range(2):
        path = tmp_path / f"report{k}"
        assert mlcech.main(argv + ["-o", str(path)]) == mlcech.EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
