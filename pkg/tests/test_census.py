import json

import pytest

from graphfactor.census import (
    CensusRecord,
    enumerate_graphs,
    read_catalog,
    run_census,
    verify_catalog,
    write_catalog,
)
from graphfactor.errors import CatalogSchemaError, ParameterError, TheoremViolationError
from graphfactor.graphs import (
    AcyclicClass,
    canonical_key,
    classify_acyclic,
    complete,
    cycle,
    disjoint_union,
    edgeless,
    encode_graph6,
    graph_bits,
    has_isolated_vertex,
    matching,
)
from graphfactor.search import SearchConfig, fix_labeling
from graphfactor.exact import adjacency
from oracles import brute_class_reps


CLASS_LADDER = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


def test_enumerate_counts_match_ladder():
    for n, count in CLASS_LADDER.items():
        assert len(enumerate_graphs(n)) == count


def test_enumerate_counts_match_brute_force():
    for n in (3, 4, 5):
        assert len(enumerate_graphs(n)) == len(brute_class_reps(n))


def test_enumerate_ordered_by_canonical_key():
    for n in (4, 5):
        keys = [graph_bits(g) for g in enumerate_graphs(n)]
        assert keys == sorted(keys)
        assert all(canonical_key(g) == graph_bits(g) for g in enumerate_graphs(n))


def test_enumerate_representatives_are_canonical():
    for g in enumerate_graphs(5):
        assert fix_labeling(g) == adjacency(g)


def test_enumerate_range_errors():
    with pytest.raises(ParameterError):
        enumerate_graphs(0)
    with pytest.raises(ParameterError):
        enumerate_graphs(8)


def test_census_order_3_single_trivial_class():
    records = run_census(3)
    assert len(records) == 4
    yes = [r for r in records if r.verdict == "yes"]
    assert len(yes) == 1
    assert yes[0].graph6 == encode_graph6(edgeless(3))
    assert yes[0].screen.trivial
    assert yes[0].factor_pairs  # the zero-times-zero pair
    ruled = {r.graph6: r for r in records if r.verdict == "no"}
    assert len(ruled) == 3


def test_census_order_6_c6_factor_pair(order6_records):
    key = canonical_key(cycle(6))
    rec = next(r for r in order6_records if r.canonical_key == key)
    assert rec.verdict == "yes"
    two_triangles = encode_graph6(
        next(
            g
            for g in enumerate_graphs(6)
            if canonical_key(g) == canonical_key(disjoint_union(complete(3), complete(3)))
        )
    )
    three_matching = encode_graph6(
        next(
            g
            for g in enumerate_graphs(6)
            if canonical_key(g) == canonical_key(matching(3))
        )
    )
    assert tuple(sorted((two_triangles, three_matching))) in {
        tuple(sorted(p)) for p in rec.factor_pairs
    }


def test_census_yes_records_have_even_edges(order6_records):
    for rec in order6_records:
        if rec.verdict == "yes":
            assert rec.edge_count % 2 == 0
            assert rec.factor_pairs


def test_census_trees_and_odd_forests_are_no(order6_records):
    for rec in order6_records:
        g = next(
            x for x in enumerate_graphs(rec.n) if canonical_key(x) == rec.canonical_key
        )
        kind, ncomp = classify_acyclic(g)
        if kind is AcyclicClass.TREE and g.order >= 2:
            assert rec.verdict == "no"
        if (
            kind in (AcyclicClass.TREE, AcyclicClass.FOREST_MULTI)
            and not has_isolated_vertex(g)
            and ncomp % 2 == 1
        ):
            assert rec.verdict == "no"


def test_census_screen_soundness(order6_records):
    for rec in order6_records:
        if rec.screen.overall == "ruled_out":
            assert rec.verdict == "no"
            assert not rec.witnesses and not rec.factor_pairs


def test_census_all_violationlists_empty(order6_records):
    assert all(r.violations.empty for r in order6_records)


def test_catalog_roundtrip(tmp_path):
    records = run_census(5)
    path = tmp_path / "n5.jsonl"
    write_catalog(records, path)
    assert read_catalog(path) == records


def test_catalog_empty_roundtrip(tmp_path):
    path = tmp_path / "empty.jsonl"
    write_catalog([], path)
    assert path.read_text() == ""
    assert read_catalog(path) == []


def test_catalog_schema_error_names_line_and_field(tmp_path):
    records = run_census(3)
    path = tmp_path / "n3.jsonl"
    write_catalog(records, path)
    lines = path.read_text().splitlines()
    broken = json.loads(lines[2])
    del broken["verdict"]
    lines[2] = json.dumps(broken)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CatalogSchemaError) as exc:
        read_catalog(path)
    assert "line 3" in str(exc.value)
    assert "verdict" in str(exc.value)


def test_catalog_invalid_json_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("{not json}\n")
    with pytest.raises(CatalogSchemaError) as exc:
        read_catalog(path)
    assert "line 1" in str(exc.value)


def test_census_determinism_bytes(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    write_catalog(run_census(5), a)
    write_catalog(run_census(5), b)
    assert a.read_bytes() == b.read_bytes()


def test_census_parallel_matches_serial(tmp_path):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "parallel.jsonl"
    write_catalog(run_census(5, jobs=1), serial)
    write_catalog(run_census(5, jobs=2), parallel)
    assert serial.read_bytes() == parallel.read_bytes()


def test_verify_full_order_6_clean(order6_records):
    report = verify_catalog(order6_records)
    assert report.total_violations == 0
    assert report.records_checked == len(order6_records)
    # soundness tallies cover every record for every rule
    for tally in report.rules.values():
        assert tally.instances_checked == len(order6_records)


def test_verify_c6_only_catalog(order6_records):
    key = canonical_key(cycle(6))
    rec = next(r for r in order6_records if r.canonical_key == key)
    report = verify_catalog([rec])
    assert report.total_violations == 0
    fired = {aid for aid, t in report.assertions.items() if t.instances_checked}
    assert {"W0", "V1", "V2", "V3", "V5", "V6", "V7", "V8", "V13", "S1"} <= fired
    for aid in ("V4", "V9", "V10", "V11", "V12"):
        assert report.assertions[aid].instances_checked == 0


def test_verify_reports_corrupted_witness(order6_records, tmp_path):
    key = canonical_key(cycle(6))
    rec = next(r for r in order6_records if r.canonical_key == key)
    obj = rec.to_json()
    row = list(obj["witnesses"][0]["b"][0])
    row[1] = "1" if row[1] == "0" else "0"
    obj["witnesses"][0]["b"][0] = "".join(row)
    path = tmp_path / "corrupt.jsonl"
    path.write_text(json.dumps(obj) + "\n")
    report = verify_catalog(read_catalog(path))
    assert report.assertions["W0"].violations >= 1
    assert report.total_violations >= 1


def test_census_keep_going_surfaces_violations_instead_of_raising(order6_records):
    # A crafted record with a bad verdict shows up as integrity evidence.
    rec = order6_records[0]
    tampered = CensusRecord(
        **{
            **{f: getattr(rec, f) for f in rec.__dataclass_fields__},
            "verdict": "yes" if rec.verdict == "no" else "no",
        }
    )
    report = verify_catalog([tampered])
    assert report.total_violations >= 1


def test_run_census_order_cap_respected():
    with pytest.raises(ParameterError):
        run_census(6, SearchConfig(mode="all", order_cap=5))


def test_run_census_aborts_with_offending_record(monkeypatch):
    from graphfactor import census as census_mod
    from graphfactor.conditions import Violation, ViolationList

    fake = ViolationList(
        (Violation("V1", "forced", "forced", "injected for the abort test"),)
    )
    monkeypatch.setattr(census_mod, "validate_factorization", lambda f, tol: fake)
    with pytest.raises(TheoremViolationError) as exc:
        run_census(3)
    # the offending record is printed in full, including its graph6 form
    assert '"graph6"' in str(exc.value)
    assert '"V1"' in str(exc.value)
    # keep_going downgrades the abort to reporting
    records = run_census(3, keep_going=True)
    assert any(not r.violations.empty for r in records)


def test_record_json_roundtrip(order6_records):
    for rec in order6_records[:10]:
        assert CensusRecord.from_json(rec.to_json()) == rec
