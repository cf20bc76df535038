import json

import numpy as np
import pytest

from rickard import io
from rickard.algebra import Algebra, PiPoint, kh_regular, regular_module, same_module, standard_splitting
from rickard.cli import main
from rickard.idempotent import build_E
from rickard.resolution import resolution


def test_module_roundtrip(tmp_path):
    M = kh_regular(standard_splitting(Algebra(3, 2)))
    path = tmp_path / "m.json"
    io.save_module(M, path)
    assert same_module(io.load_module(path), M)


def test_point_roundtrip():
    pt = PiPoint((1, 2), (((1, 1), 1),))
    assert io.point_from_dict(io.point_to_dict(pt)) == pt
    assert io.parse_point("1,1", 2) == PiPoint((1, 1))
    assert io.parse_point('{"linear": [0, 1]}', 2) == PiPoint((0, 1))


def test_missing_field_is_named():
    with pytest.raises(io.SchemaError, match="'dim'"):
        io.module_from_dict({"p": 2, "r": 1, "action": [[[0]]]})


def test_out_of_range_entry_is_located():
    obj = {"p": 2, "r": 1, "dim": 1, "action": [[[3]]]}
    with pytest.raises(io.SchemaError, match=r"action\[0\]\[0\]\[0\]"):
        io.module_from_dict(obj)


def test_bad_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"p": 2,\n "r": }\n')
    with pytest.raises(io.SchemaError, match="line 2"):
        io.load_module(path)


def test_unsupported_version_rejected():
    with pytest.raises(io.SchemaError, match="version"):
        io.module_from_dict({"version": 9, "p": 2, "r": 1, "dim": 0, "action": [[]]})


def test_point_wrong_rank_rejected():
    with pytest.raises(io.SchemaError):
        io.parse_point("1,1,1", 2)


def test_dumps_are_json():
    json.dumps(io.resolution_dump(resolution(2, 2), 3))
    dump = io.truncation_dump(build_E(3, standard_splitting(Algebra(2, 2))))
    assert len(dump["layers"]) == 4
    assert io.to_jsonable({"a": np.int64(3), "b": np.zeros(2)}) == {"a": 3, "b": [0.0, 0.0]}


def test_cli_omega_of_trivial(capsys):
    assert main(["module", "omega", "k"]) == 0
    assert "= 3" in capsys.readouterr().out


def test_cli_builds_truncation(capsys):
    assert main(["idempotent", "build", "--n", "6"]) == 0
    out = capsys.readouterr().out
    assert "dim 14" in out
    assert "7 layers" in out


def test_cli_writes_report(tmp_path):
    out = tmp_path / "run"
    assert main(["fingen", "extract", "k", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] is True
    assert report["config"]["truncation"] == 8


def test_cli_reads_module_file(tmp_path, capsys):
    path = tmp_path / "kG.json"
    io.save_module(regular_module(2, 2), path)
    assert main(["module", "variety", str(path)]) == 0
    assert "rank variety: empty" in capsys.readouterr().out


def test_cli_invalid_module_is_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 2, "r": 2, "dim": 1, "action": [[[1]], [[0]]]}))
    assert main(["module", "omega", str(path)]) == 2


def test_cli_missing_file_is_usage_error():
    assert main(["module", "omega", "no-such-file.json"]) == 2


def test_cli_small_truncation_rejected():
    assert main(["fingen", "extract", "k", "--truncation", "2"]) == 2


def test_cli_unknown_command_is_usage_error():
    assert main(["frobnicate"]) == 2


def test_cli_zero_map_is_range_error(tmp_path):
    E = build_E(8, standard_splitting(Algebra(2, 2)))
    path = tmp_path / "f.json"
    path.write_text(json.dumps(np.zeros((1, E.dim), dtype=int).tolist()))
    assert main(["hom", "degree", "k", "--map", str(path)]) == 1


def test_cli_cone_dimension(capsys):
    assert main(["realize", "cone", "--zeta", "2:1", "--n", "5"]) == 0
    assert "dim 4" in capsys.readouterr().out
