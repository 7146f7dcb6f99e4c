from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import pytest

from fskit.services.ingestion import (
    COLLECTION,
    TABLE,
    TOPOLOGY,
    Collection,
    DataDirectoryIngestor,
    DocumentError,
    document_kind,
    dump_collection,
    dump_fss,
    format_grade,
    inputs_digest,
    load_collection,
    load_crisp_topology,
    load_fss,
    parse_collection,
    parse_csv,
    parse_fss,
    save_collection,
    save_fss,
)

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


def test_forest_json_and_csv_agree():
    from_json = load_fss(DATA_DIR / "forest.json")
    from_csv = load_fss(DATA_DIR / "forest.csv")
    assert from_json == from_csv
    assert from_json.universe.objects == ("A", "B", "C")
    np.testing.assert_array_equal(from_json.grades[0], [0.8, 0.3, 0.5])


def test_saved_table_is_byte_identical(tmp_path):
    original = (DATA_DIR / "forest.json").read_text(encoding="utf-8")
    f = load_fss(DATA_DIR / "forest.json")
    assert dump_fss(f) == original
    target = save_fss(f, tmp_path / "out" / "forest.json")
    assert target.read_bytes() == (DATA_DIR / "forest.json").read_bytes()


def test_saved_collection_is_byte_identical(tmp_path):
    source = DATA_DIR / "indiscrete.json"
    collection = load_collection(source)
    assert set(collection.points) == {"px", "py"}
    target = save_collection(collection, tmp_path / "copy.json")
    assert target.read_bytes() == source.read_bytes()


def test_grades_use_the_shortest_exact_decimal():
    assert format_grade(0.1) == "0.1"
    assert format_grade(1.0) == "1.0"
    assert float(format_grade(1 / 3)) == 1 / 3


def test_bad_json_reports_its_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"universe": ["A"],\n  "parameters": ["e1"] oops}', encoding="utf-8")
    with pytest.raises(DocumentError) as info:
        load_fss(path)
    assert info.value.line == 2
    assert info.value.column is not None
    assert "line 2" in str(info.value)


def test_bad_grade_names_its_cell():
    with pytest.raises(DocumentError) as info:
        parse_fss({"universe": ["A", "B"], "parameters": ["e1"], "grades": [["0.5", "high"]]})
    assert info.value.cell == ("e1", "B")
    with pytest.raises(DocumentError) as info:
        parse_fss({"universe": ["A"], "parameters": ["e1"], "grades": [[1.5]]})
    assert info.value.cell == ("e1", "A")


def test_structural_problems_are_document_errors():
    with pytest.raises(DocumentError, match="duplicate"):
        parse_fss({"universe": ["A", "A"], "parameters": ["e1"], "grades": [["0", "1"]]})
    with pytest.raises(DocumentError, match="universe"):
        parse_fss({"universe": [], "parameters": ["e1"], "grades": [[]]})
    with pytest.raises(DocumentError, match="rows"):
        parse_fss({"universe": ["A"], "parameters": ["e1", "e2"], "grades": [["0"]]})
    with pytest.raises(DocumentError):
        parse_fss({"universe": ["A"], "parameters": ["e1"], "grades": [["0"]], "extra": 1})


def test_csv_rows_must_match_the_header():
    with pytest.raises(DocumentError) as info:
        parse_csv("parameter,A,B\ne1,0.1,0.2\ne2,0.3\n")
    assert info.value.line == 3
    with pytest.raises(DocumentError):
        parse_csv("\n\n")


def test_collections_allow_sets_over_fewer_parameters():
    collection = parse_collection(
        {
            "universe": ["x", "y"],
            "parameters": ["e1", "e2"],
            "sets": {
                "whole": {"grades": [["0.5", "0"], ["1", "0.25"]]},
                "part": {"parameters": ["e2"], "grades": [["0.75", "0"]]},
            },
            "points": {"p": {"support": "y", "grades": ["0.5", "1"]}},
        }
    )
    assert collection.sets["part"].params.parameters == ("e2",)
    assert collection.points["p"].support == "y"
    assert '"parameters": [\n        "e2"' in dump_collection(collection)


def test_collection_errors_name_the_entry():
    header = {"universe": ["x"], "parameters": ["e1"]}
    with pytest.raises(DocumentError, match="sets.bad"):
        parse_collection({**header, "sets": {"bad": {"parameters": ["e9"], "grades": [["0"]]}}})
    with pytest.raises(DocumentError, match="points.p"):
        parse_collection({**header, "points": {"p": {"support": "z", "grades": ["1"]}}})
    with pytest.raises(DocumentError, match="points.p"):
        parse_collection({**header, "points": {"p": {"support": "x", "grades": ["0"]}}})


def test_a_grade_table_loads_as_a_one_set_collection():
    collection = load_collection(DATA_DIR / "forest.json")
    assert isinstance(collection, Collection)
    assert list(collection.sets) == ["forest"]


def test_crisp_topology_documents():
    universe, opens = load_crisp_topology(DATA_DIR / "sierpinski.json")
    assert universe.objects == ("a", "b")
    assert opens == [frozenset(), frozenset({"a"}), frozenset({"a", "b"})]


def test_crisp_topology_rejects_unknown_objects(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"universe": ["a"], "opens": [[], ["b"]]}', encoding="utf-8")
    with pytest.raises(DocumentError, match="opens.1"):
        load_crisp_topology(path)


def test_document_kinds():
    assert document_kind({"universe": [], "opens": []}) == TOPOLOGY
    assert document_kind({"universe": [], "parameters": [], "sets": {}}) == COLLECTION
    assert document_kind({"universe": [], "parameters": [], "grades": []}) == TABLE
    with pytest.raises(DocumentError, match="grade table"):
        load_fss(DATA_DIR / "sierpinski.json")


def test_documents_resolve_against_the_data_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    ingestor = DataDirectoryIngestor(DATA_DIR.parent)
    assert ingestor.resolve("forest.json") == DATA_DIR / "forest.json"
    local = tmp_path / "forest.json"
    local.write_text("{}", encoding="utf-8")
    assert ingestor.resolve("forest.json") == Path("forest.json")
    with pytest.raises(DocumentError):
        ingestor.resolve("missing.json")


def test_collect_documents_lists_kinds_and_digests(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    (data / "table.csv").write_text("parameter,A\ne1,0.5\n", encoding="utf-8")
    (data / "space.json").write_text('{"universe": ["a"], "opens": [[], ["a"]]}', encoding="utf-8")
    (data / "notes.txt").write_text("ignored", encoding="utf-8")
    documents = DataDirectoryIngestor(tmp_path).collect_documents()
    assert [(d["name"], d["kind"]) for d in documents] == [("space.json", TOPOLOGY), ("table.csv", TABLE)]
    assert documents[1]["sha1"] == hashlib.sha1(b"parameter,A\ne1,0.5\n").hexdigest()
    assert DataDirectoryIngestor(tmp_path / "elsewhere").collect_documents() == []


def test_inputs_digest_follows_argument_order(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    first.write_bytes(b"one")
    second.write_bytes(b"two")
    assert inputs_digest([first, second]) == hashlib.sha1(b"onetwo").hexdigest()
    assert inputs_digest([second, first]) != inputs_digest([first, second])
