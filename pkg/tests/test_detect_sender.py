import pytest

from deceptscan.config import RuleConfig
from deceptscan.corpus import generate_sample
from deceptscan.detect import detect_sender
from deceptscan.message import parse_message
from deceptscan.text import bidi_render

from builders import build, findings, rules
from test_message import ENCODED_WORD


def test_legitimate_brand_sender_is_clean():
    assert rules(build("Alice <alice@trusted-page.com>")) == set()


def test_brand_in_subdomain():
    (f,) = findings(build("eve@trusted-page.com.malicious-page.com"))
    assert f.rule_id == "SND-11" and f.evidence == "trusted-page.com" and f.location == "From"


def test_fullwidth_at_in_display_name():
    (f,) = findings(build(f"{ENCODED_WORD} <eve@malicious-page.com>"))
    assert f.rule_id == "SND-04" and f.evidence == "alice\uff20trusted-page.com"


@pytest.mark.parametrize("from_value,expected", [
    ("trusted-page.com@malicious-page.com", {"SND-02"}),
    ("first.last@malicious-page.com", set()),
    ('"alice@trusted-page.com" <eve@malicious-page.com>', {"SND-03"}),
    ('"alice@malicious-page.com" <eve@malicious-page.com>', set()),
    ("alice@xn--trustd-page-skj.com", {"SND-06"}),
    ("\u202emoc.egap-detsurt@ecila", {"SND-07"}),
    ("eve@[203.0.113.66]", {"SND-08"}),
    ("eve@203.0.113.66", {"SND-08"}),
    ("alice@dzmdk9psqr.com", {"SND-09"}),
    ("alice@very-trusted-page.com", {"SND-10"}),
    ("alice@trusted-pages.com", {"SND-13"}),
    ("alice@untrusted-page.com", set()),
    ("alice@trusted-page.net", {"SND-12"}),
    ("alice@trusted-paqe.com", {"SND-13"}),
    ("alice@mail.trusted-page.com", set()),
])
def test_sender_rules(from_value, expected):
    assert rules(build(from_value)) == expected


def test_long_sender_by_subdomain_length():
    host = "trusted-page.com-" + "8ed0f97a45dfd4gf5" * 2 + ".malicious-page.com"
    (f,) = findings(build(f"alice@{host}"))
    assert f.rule_id == "SND-05" and f.evidence == "trusted-page.com"


def test_long_sender_by_visible_width():
    # short subdomain, but the full address is wider than the visible area
    local = "a" * 50
    assert rules(build(f"{local}@trusted-page.com.x.malicious-page.com")) == {"SND-05", "SND-11"}


def test_auth_mismatch_needs_headers():
    hdr = (("Return-Path", "<eve@malicious-page.com>"),)
    (f,) = findings(build(extra_headers=hdr))
    assert f.rule_id == "SND-01" and f.location == "Return-Path" and f.confidence.value == "heuristic"
    auth = (("Authentication-Results", "mx.example; dkim=pass header.d=malicious-page.com"),)
    assert rules(build(extra_headers=auth)) == {"SND-01"}
    ok = (("Return-Path", "<alice@mail.trusted-page.com>"),)
    assert rules(build(extra_headers=ok)) == set()


def test_no_from_header_no_findings():
    assert detect_sender(parse_message(build(None)), RuleConfig()) == []


def test_brand_self_exemption_with_other_brands():
    cfg = RuleConfig(brand_domains=("trusted-page.com", "trusted-page.net"))
    assert rules(build("alice@trusted-page.net"), cfg) == set()


@pytest.mark.parametrize("rule_id", ["SND-02", "SND-11"])
def test_disabling_one_rule_removes_only_it(rule_id):
    raw = build("trusted-page.com@trusted-page.com.malicious-page.com")
    assert rules(raw) == {"SND-02", "SND-11"}
    cfg = RuleConfig(disabled_rules=frozenset({rule_id}))
    assert rules(raw, cfg) == {"SND-02", "SND-11"} - {rule_id}


def test_evidence_occurs_in_from_or_its_rendering():
    for tid in ("SND-02", "SND-03", "SND-05", "SND-06", "SND-07", "SND-08", "SND-09",
                "SND-10", "SND-11", "SND-12", "SND-13"):
        msg = parse_message(generate_sample(tid).message_bytes)
        raw_from = msg.header("From")
        for f in detect_sender(msg, RuleConfig()):
            assert f.evidence in raw_from or f.evidence in bidi_render(raw_from).displayed, (tid, f)
