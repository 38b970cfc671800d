import subprocess
import sys

import pytest

from cachecalc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_gamma_range_and_list():
    assert [str(g) for g in cli.parse_gamma("0:1/4:1")] == ["0", "1/4", "1/2", "3/4", "1"]
    assert [str(g) for g in cli.parse_gamma("1/3, 1/2")] == ["1/3", "1/2"]
    assert cli.parse_gamma("") == []
    with pytest.raises(cli.SpecError):
        cli.parse_gamma("0:0:1")
    with pytest.raises(cli.SpecError):
        cli.parse_gamma("a,b")


def test_fig2_table(capsys):
    code, out, _ = run(capsys, "--K", "3", "--N", "3", "--gamma", "0:1/60:1", "--schemes", "linp,uncoded,converse")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# meta: K=3 N=3 seed=0 prime=")
    assert lines[1].startswith("# note:")
    assert lines[2] == "gamma\tlinp\tuncoded\tconverse"
    rows = {r.split("\t")[0]: r.split("\t")[1] for r in lines[3:]}
    assert rows["1/3"] == "1" and rows["1/2"] == "3/4" and rows["2/3"] == "1/3" and rows["1"] == "0"
    assert len(lines) == 3 + 61


def test_csv_differs_only_in_delimiter(capsys):
    args = ["--K", "3", "--N", "2", "--gamma", "0,1/2,1", "--schemes", "linp,mds,yma"]
    _, tsv, _ = run(capsys, *args)
    _, csv, _ = run(capsys, *args, "--format", "csv")
    assert csv == tsv.replace("\t", ",")
    assert "NA" in tsv.splitlines()[3]  # mds has no value at gamma = 0


def test_output_is_byte_deterministic(tmp_path):
    outs = []
    for name in ("a.tsv", "b.tsv"):
        path = tmp_path / name
        assert cli.main(["--K", "3", "--N", "3", "--gamma", "1/6,1/2", "--sim", "--trials", "2", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[2].endswith(b"sim_load\tsim_ok")


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--K", "3", "--N", "3", "--gamma", "1/2", "--trials", "3")
    assert code == 0
    assert out.splitlines()[-1] == "gamma=1/2 lp=3/4 sim=3/4 decode=3/3 fallback=0"


@pytest.mark.parametrize(
    "argv",
    [
        ["--K", "3", "--N", "3", "--gamma", "1:1/2:0"],
        ["--K", "3", "--N", "3", "--gamma", "2"],
        ["--K", "3", "--N", "3", "--gamma", "1/2,1/3"],
        ["--K", "3", "--N", "3", "--gamma", "1/2", "--schemes", "bogus"],
        ["--K", "3", "--N", "3", "--gamma", "1/2", "--schemes", "uncoded", "--sim"],
        ["--K", "0", "--N", "3", "--gamma", "1/2"],
    ],
)
def test_invalid_specs_exit_nonzero(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code != 0
    assert "error" in err
    assert out == ""


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "--K", "2", "--N", "2", "--gamma", "1/2", "--out", str(tmp_path / "no" / "such" / "f.tsv"))
    assert code != 0 and "error" in err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "cachecalc", "--K", "2", "--N", "2", "--gamma", "1/2", "--schemes", "table1"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "1/2\t1/2"
