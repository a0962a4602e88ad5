import pytest

from deceptscan.config import RuleConfig
from deceptscan.corpus import generate_sample
from deceptscan.detect import detect_content
from deceptscan.message import parse_message

from builders import build, findings


def content(html: str):
    return [(f.rule_id, f.location, f.evidence) for f in findings(build(html=html))]


def test_password_input():
    html = '<form action="https://x.org"><input type="password" name=p></form>'
    assert content(html) == [("OTH-01", "html[0]", '<input type="password" name=p>')]


def test_credential_wording_inside_form_only():
    assert content("<form><p>Enter your Password</p></form>") == [("OTH-01", "html[0]", "Password")]
    assert content("<p>password reset done</p>") == []


def test_pinned_image_link_is_heuristic():
    (f,) = findings(build(html='<a href="https://x.org" style="position:fixed;top:0"><img src="cid:b"></a>'))
    assert (f.rule_id, f.location, f.confidence.value) == ("OTH-02", "link[0]", "heuristic")


def test_unpinned_image_link_is_clean():
    assert content('<a href="https://trusted-page.com/"><img src="cid:b"></a>') == []


@pytest.mark.parametrize("ref", [
    '<img src="file:///C:/Users/Bob/Pictures/DCM-00001.jpg">',
    '<img src="C:\\Users\\Bob\\a.jpg">',
    '<img src="/home/bob/a.png">',
])
def test_local_reference_grammars(ref):
    ((rule, loc, _),) = content(ref)
    assert (rule, loc) == ("OTH-03", "external_ref[0]")


def test_local_reference_evidence_is_the_path():
    ((_, _, evidence),) = content('<img src="file:///C:/Users/Bob/Pictures/DCM-00001.jpg">')
    assert evidence == "file:///C:/Users/Bob/Pictures/DCM-00001.jpg"


def test_remote_image_is_not_local():
    assert content('<img src="https://trusted-page.com/logo.png">') == []


def test_external_stylesheet():
    (f,) = findings(build(html='<link rel="stylesheet" href="https://x.org/s.css">'))
    assert (f.rule_id, f.confidence.value) == ("OTH-04", "heuristic")


def test_plain_text_message_has_no_content_findings():
    raw = b"From: a@trusted-page.com\nContent-Type: text/plain\n\npassword file:///etc/passwd\n"
    assert detect_content(parse_message(raw), RuleConfig()) == []


def test_baseline_is_clean():
    assert detect_content(parse_message(generate_sample("BASELINE").message_bytes), RuleConfig()) == []
