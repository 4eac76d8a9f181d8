import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from suanshu.cli import main

SCHEMA = json.loads(resources.files("suanshu").joinpath("data/report.schema.json").read_text(encoding="utf-8"))


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def json_lines(text):
    objs = [json.loads(line) for line in text.splitlines()]
    for obj in objs:
        jsonschema.validate(obj, SCHEMA)
    return objs


def test_parse_examples():
    code, out, _ = run("parse", "七斗三分升一", "半", "盾九分之五")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split("\t")[1:3] == ["7 dou + 1/3 sheng", "reduced=7 dou + 1/3 sheng"]
    assert "category=b1" in lines[0]
    assert "form=half" in lines[1]
    assert "lard" in lines[2] and "category=c2" in lines[2] and "mw_omitted" in lines[2]


def test_parse_json():
    code, out, _ = run("parse", "--output", "json", "十六尺有十八分尺十二")
    [obj] = json_lines(out)
    assert code == 0
    assert obj["value"] == "16 chi + 12/18 chi"
    assert obj["reduced"] == "16 chi + 2/3 chi"
    assert obj["magnitude"] == "50/3 chi"
    assert obj["form"] == "b" and obj["category"] == "b2"


def test_parse_from_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("半\n\n三分\n"))
    code, out, _ = run("parse")
    assert code == 0 and len(out.splitlines()) == 2


def test_parse_failure_exit_code():
    code, out, err = run("parse", "--output", "json", "半", "分分")
    assert code == 2
    objs = json_lines(out)
    assert "error" in objs[1]
    assert "分分" in err


def test_parse_dimension_hint():
    _, out, _ = run("parse", "--output", "json", "--dimension", "weight", "一石")
    assert json_lines(out)[0]["units"] == ["shi-weight"]


@pytest.mark.parametrize("argv,text", [
    (["--int", "16", "--frac", "12/18", "--unit", "chi", "--form", "d"], "十六尺有十八分尺之十二"),
    (["--frac", "1/3", "--form", "mono"], "三分"),
    (["--int", "2016"], "二千一十六"),
    (["--frac", "23/30", "--insertion", "object"], "卅分之廿三"),
    (["--frac", "23/30", "--insertion", "object", "--ligatures", "plain"], "三十分之二十三"),
    (["--frac", "2/5", "--unit", "尺", "--zhi", "force"], "五分尺之二"),
    (["16 chi + 12/18 chi", "--form", "b", "--you", "force"], "十六尺有十八分尺十二"),
])
def test_render(argv, text):
    code, out, _ = run("render", *argv)
    assert code == 0 and out == text + "\n"


def test_render_bad_combination():
    code, _, err = run("render", "--frac", "2/5", "--form", "b")
    assert code == 2 and err
    code, _, _ = run("render", "--frac", "1/3", "--form", "mono", "--zhi", "force")
    assert code == 1
    code, _, _ = run("render")
    assert code == 1


def test_stats():
    code, out, _ = run("stats")
    assert code == 0
    assert "a:35 b:54 c:7 d:47" in out
    code, out, _ = run("stats", "--output", "json")
    [obj] = json_lines(out)
    assert obj["table2"]["cells"] == [[76, 2], [13, 51]]


def test_stats_undocumented_discrepancy(tmp_path):
    lines = resources.files("suanshu").joinpath("data/corpus.tsv").read_text(encoding="utf-8").splitlines()
    trimmed = tmp_path / "trimmed.tsv"
    trimmed.write_text("\n".join(line for line in lines if not line.startswith("ex-17\t")) + "\n", encoding="utf-8")
    code, _, err = run("stats", str(trimmed))
    assert code == 2
    assert "undocumented" in err


def test_verify():
    code, out, _ = run("verify")
    assert code == 0
    assert out.splitlines()[0].startswith("roundtrip: 183/183 pass")
    code, out, _ = run("verify", "--output", "json")
    assert [o["name"] for o in json_lines(out)] == ["roundtrip", "statements", "series"]


def test_missing_corpus():
    code, _, err = run("stats", "/nonexistent/corpus.tsv")
    assert code == 1 and "not found" in err


def test_reduce_and_convert():
    assert run("reduce", "162/2016")[:2] == (0, "9/112\n")
    assert run("convert", "1/5 cun", "--to", "chi")[:2] == (0, "1/50 chi\n")
    assert run("convert", "1 jin", "--to", "zhu")[:2] == (0, "384 zhu\n")
    assert run("convert", "1 chi", "--to", "cun", "--power", "2")[:2] == (0, "100 cun^2\n")
    assert run("convert", "1 shi", "--to", "dou", "--dimension", "capacity")[:2] == (0, "10 dou\n")
    code, out, _ = run("convert", "4147 1/5 zhu", "--decompose", "--chain", "jin,liang,zhu")
    assert code == 0 and out == "10 jin + 12 liang + 19 zhu + 1/5 zhu\t十斤十二兩十九銖五分銖一\n"
    code, out, _ = run("convert", "--output", "json", "七斗三分升一", "--to", "sheng")
    assert json_lines(out)[0]["value"] == "211/3"


def test_usage_errors():
    assert run("convert", "1 shi", "--to", "dou")[0] == 1
    assert run("convert", "1 furlong", "--to", "chi")[0] == 1
    assert run("convert", "1 chi")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("parse", "--zhi", "sometimes", "半")[0] == 1
    assert run("reduce", "x/y")[0] == 2


def test_deterministic():
    assert run("stats", "--output", "json") == run("stats", "--output", "json")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "suanshu", "reduce", "162/2016"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "9/112\n"
