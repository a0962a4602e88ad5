import pytest

from deceptscan.analyzer import scan_bytes
from deceptscan.corpus import (
    DOCUMENTED_OVERLAPS,
    MANIFEST_NAME,
    generate_corpus,
    generate_sample,
    read_manifest,
    technique_ids,
)
from deceptscan.findings import RULES, UnknownTechniqueId

# Written out by hand; must not be derived from the generator's own table.
OVERLAPS = {"LNK-07": {"LNK-07", "OTH-04"}}
SILENT = {"BASELINE", "GEN-ONLY-4.1", "GEN-ONLY-4.4"}


def expected_for(tid: str) -> set[str]:
    if tid in SILENT:
        return set()
    return OVERLAPS.get(tid, {tid})


def test_identifier_inventory():
    ids = technique_ids()
    assert len(ids) == len(set(ids)) == 49
    assert set(ids) == SILENT | set(RULES)
    assert len(RULES) == 46


def test_overlaps_are_documented():
    assert {k: set(v) for k, v in DOCUMENTED_OVERLAPS.items()} == OVERLAPS


@pytest.mark.parametrize("tid", technique_ids())
def test_sample_fires_exactly_its_rules(tid):
    sample = generate_sample(tid)
    assert set(sample.expected_rules) == expected_for(tid)
    assert {f.rule_id for f in scan_bytes(sample.message_bytes)} == expected_for(tid)


def test_generator_only_flag():
    assert [t for t in technique_ids() if generate_sample(t).generator_only] == ["GEN-ONLY-4.1", "GEN-ONLY-4.4"]


def test_unknown_technique_id():
    with pytest.raises(UnknownTechniqueId) as info:
        generate_sample("XYZ")
    assert str(info.value) == "unknown technique id: 'XYZ'"


def test_corpus_files_and_manifest(tmp_path):
    records = generate_corpus(tmp_path)
    eml = sorted(p.name for p in tmp_path.glob("*.eml"))
    assert len(eml) == 49 and (tmp_path / MANIFEST_NAME).is_file()
    assert read_manifest(tmp_path / MANIFEST_NAME) == records
    for rec in records:
        assert set(rec) == {"technique_id", "path", "expected_rules", "generator_only"}
        assert (tmp_path / rec["path"]).is_file()
        got = set(rec["expected_rules"].split(",")) - {""}
        assert got == expected_for(rec["technique_id"])


def test_corpus_is_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    generate_corpus(a)
    generate_corpus(b)
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_message_ids_use_invalid_tld():
    for tid in technique_ids():
        raw = generate_sample(tid).message_bytes
        assert b"@deceptscan.invalid>" in raw
