import csv
import json
from importlib import resources

import jsonschema
import pytest

from suanshu.core import InsertionContext
from suanshu.corpus import (COLUMNS, CorpusSchemaError, default_corpus_path, load_corpus, read_records,
                            resolve_series, roundtrip_verify, stats, verify_series, verify_statements)


@pytest.fixture(scope="module")
def records():
    return load_corpus()


def _by_id(records, rid):
    return next(r for r in records if r.id == rid)


def _schema(name):
    return json.loads(resources.files("suanshu").joinpath(f"data/{name}").read_text(encoding="utf-8"))


def _tsv(rows):
    return ["\t".join(COLUMNS)] + ["\t".join(r) for r in rows]


def test_rows_match_schema():
    schema = _schema("corpus.schema.json")
    with default_corpus_path().open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE))
    assert rows
    for row in rows:
        jsonschema.validate(row, schema)


def test_every_expression_parses(records):
    exprs = [r for r in records if r.kind == "expr"]
    assert all(r.quantity is not None or "copyist_error" in r.flags for r in exprs)
    assert not [r.id for r in exprs if r.problems]


def test_record_for_distribution_example(records):
    rec = _by_id(records, "ex-75")
    assert rec.category == "c2"
    assert rec.insertion_context is InsertionContext.OBJECT


def test_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    assert load_corpus(path) == []


def test_bad_header():
    with pytest.raises(CorpusSchemaError):
        read_records(["id\tsurface", "x\t三分"])


def test_bad_cells():
    good = ["x", "expr", "-", "mono", "-", "-", "三分", "1/3", "mono", "uninserted", "0", "0", "-", "1", "-", "-", "-"]
    read_records(_tsv([good]))
    for col, bad in (("kind", "thing"), ("inventory", "z9"), ("count", "0"), ("flags", "sparkly"),
                     ("zhi", "yes"), ("value", "one third")):
        row = list(good)
        row[COLUMNS.index(col)] = bad
        with pytest.raises(CorpusSchemaError):
            read_records(_tsv([row]))
    with pytest.raises(CorpusSchemaError):
        read_records(_tsv([good, good]))


def test_unparseable_surface_is_kept(tmp_path):
    row = ["x", "expr", "-", "mono", "-", "-", "分分", "1/3", "mono", "uninserted", "0", "0", "-", "1", "-", "-", "-"]
    path = tmp_path / "c.tsv"
    path.write_text("\n".join(_tsv([row])) + "\n", encoding="utf-8")
    recs = load_corpus(path)
    assert recs[0].quantity is None and recs[0].problems
    assert not roundtrip_verify(recs).ok


def test_stats_headline_counts(records):
    report = stats(records)
    c = report.counts
    assert (c["a"], c["b"], c["c"], c["d"]) == (35, 54, 7, 47)
    assert (c["a1"], c["b1"], c["c1"], c["d1"]) == (24, 11, 0, 11)
    assert report.table1 == [[18, 4], [10, 18]]
    assert report.table2 == [[76, 2], [13, 51]]
    assert c["table2_total"] == 142


def test_stats_discrepancies_are_all_documented(records):
    report = stats(records)
    assert report.undocumented == []
    keys = {d.key for d in report.discrepancies}
    assert {"mono", "rate_mono", "record:ex-56", "record:ex-96"} <= keys


def test_stats_single_record(records):
    report = stats([_by_id(records, "ex-17")])
    nonzero = {k: v for k, v in report.counts.items() if v}
    assert nonzero == {"b1": 1, "b": 1, "bidim_unit": 1, "bidim": 1, "total_expressions": 1,
                       "table2_total": 1, "table2_row_uninserted": 1, "table2_col_no_zhi": 1}
    assert report.table2 == [[1, 0], [0, 0]]
    assert "rate_zhi_given_inserted" not in report.rates


def test_stats_report_formats(records):
    report = stats(records)
    jsonschema.validate(report.to_dict(), _schema("report.schema.json"))
    text = report.to_text()
    assert "a:35 b:54 c:7 d:47" in text
    assert "NEW" not in text


def test_roundtrip(records):
    report = roundtrip_verify(records)
    assert report.ok, report.to_text()
    by_id = {c.id: c for c in report.checks}
    assert by_id["int-2"].ok and not by_id["int-2"].relaxed
    for rid in ("ex-31", "ex-59", "ex-71", "ex-113", "ex-114", "ex-115"):
        assert by_id[rid].ok and by_id[rid].relaxed


def test_tripled_measure_word_warns(records, caplog):
    load_corpus()
    assert any("third time" in m for m in caplog.messages)


def test_statements(records):
    report = verify_statements(records)
    assert report.ok, report.to_text()
    assert len(report.checks) == 13


def test_series(records):
    got = resolve_series(records)
    assert {k: v.denominators[0] for k, v in got.items()} == {"S128": 7, "S129": 72, "S130": 47, "S131": 36}
    assert verify_series(records).ok
