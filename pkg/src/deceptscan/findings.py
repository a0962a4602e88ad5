"""Finding records and the rule registry."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum


class Indicator(str, Enum):
    SENDER = "sender"
    LINK = "link"
    ATTACHMENT = "attachment"
    CONTENT = "content"


class Confidence(str, Enum):
    DEFINITE = "definite"
    HEURISTIC = "heuristic"


INDICATOR_ORDER = {Indicator.SENDER: 0, Indicator.LINK: 1, Indicator.ATTACHMENT: 2, Indicator.CONTENT: 3}


class UnknownTechniqueId(KeyError):
    """Raised for a rule or technique ID that is not in the registry."""

    def __str__(self) -> str:
        return f"unknown technique id: {self.args[0]!r}"


@dataclass(frozen=True)
class Finding:
    rule_id: str
    indicator: Indicator
    location: str
    evidence: str
    confidence: Confidence
    section: str
    description: str

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["indicator"] = self.indicator.value
        rec["confidence"] = self.confidence.value
        return rec


@dataclass(frozen=True)
class RuleInfo:
    rule_id: str
    indicator: Indicator
    section: str
    title: str
    mechanism: str
    example: str


def _r(rule_id: str, indicator: Indicator, section: str, title: str, mechanism: str, example: str) -> RuleInfo:
    return RuleInfo(rule_id, indicator, section, title, mechanism, example)


_S, _L, _A, _C = Indicator.SENDER, Indicator.LINK, Indicator.ATTACHMENT, Indicator.CONTENT

RULES: dict[str, RuleInfo] = {r.rule_id: r for r in (
    _r("SND-01", _S, "§4.1", "authentication mismatch hint",
       "Return-Path or Authentication-Results names a host outside the From domain.",
       "From alice@trusted-page.com with smtp.mailfrom=malicious-page.com"),
    _r("SND-02", _S, "§4.2", "domain-like local part",
       "The mailbox name before the @ reads as a domain name.",
       "trusted-page.com@malicious-page.com"),
    _r("SND-03", _S, "§4.3.2", "address in display name",
       "The display name is an address from another domain than the real sender.",
       '"alice@trusted-page.com" <eve@malicious-page.com>'),
    _r("SND-04", _S, "§4.3.3", "look-alike address in display name",
       "The display name imitates an address using confusable characters such as U+FF20.",
       "alice\uff20trusted-page.com <eve@malicious-page.com>"),
    _r("SND-05", _S, "§4.5", "exceedingly long sender",
       "A padded subdomain pushes the real domain out of the visible area.",
       "eve@trusted-page.com-8ed0f97a45dfd4gf5-....malicious-page.com"),
    _r("SND-06", _S, "§4.6", "homographic sender domain",
       "The decoded IDN host renders like a protected brand.",
       "eve@xn--trustd-page-skj.com (trust\u0435d-page.com)"),
    _r("SND-07", _S, "§4.7", "bidi override in sender",
       "Bidi control characters reorder how the sender is displayed.",
       "\\u202Eed.egap-detsurt@ecila displayed as alice@trusted-page.com"),
    _r("SND-08", _S, "§4.8.1", "IP literal sender host",
       "The sender host is an address literal rather than a name.",
       "eve@[203.0.113.66]"),
    _r("SND-09", _S, "§4.8.2", "random-character sender domain",
       "The registrable domain reads like a random character sequence.",
       "eve@dzmdk9psqr.com"),
    _r("SND-10", _S, "§4.9", "brand-extension sender domain",
       "A protected brand label is extended with extra tokens.",
       "eve@very-trusted-page.com"),
    _r("SND-11", _S, "§4.10", "brand in sender subdomain",
       "A protected brand domain sits in the subdomain of another domain.",
       "eve@trusted-page.com.malicious-page.com"),
    _r("SND-12", _S, "§4.11", "brand under another eTLD",
       "The brand label is registered under a different public suffix.",
       "eve@trusted-page.net"),
    _r("SND-13", _S, "§4.12", "mangled brand sender domain",
       "The domain is one small edit away from a protected brand.",
       "eve@trusted-paqe.com"),
    _r("LNK-01", _L, "§5.1", "fake tooltip",
       "The title attribute shows a URL on another domain than the link target.",
       '<a href="https://malicious-page.com/" title="https://trusted-page.com/">'),
    _r("LNK-02", _L, "§5.2", "percent-encoded host",
       "Percent escapes in the host change which domain the link resolves to.",
       "https://trusted-page.com%2Emalicious-page.com/"),
    _r("LNK-03", _L, "§5.3", "base tag resolution",
       "A base element turns a domain-looking relative href into a link elsewhere.",
       '<base href="https://malicious-page.com/"> + href="trusted-page.com"'),
    _r("LNK-04", _L, "§5.4", "form posing as link",
       "A form submit control acts as a link whose target is not shown on hover.",
       '<form action="https://malicious-page.com/f"><input type="submit">'),
    _r("LNK-05", _L, "§5.5", "link text and target mismatch",
       "The visible link text names another domain than the target.",
       '<a href="https://malicious-page.com/">trusted-page.com</a>'),
    _r("LNK-06", _L, "§5.5.3", "look-alike scheme in link text",
       "Link text starts with a non-ASCII imitation of http(s) to dodge URL matching.",
       "\u04bbttps://trusted-page.com/"),
    _r("LNK-07", _L, "§5.6", "mutable link rendering",
       "External CSS plus equally labelled links to different domains allow a post-delivery swap.",
       '<link rel="stylesheet" href="https://malicious-page.com/s.css">'),
    _r("LNK-08", _L, "§5.7", "brand in path, query or fragment",
       "A brand string appears after the host, where recipients may mistake it for the domain.",
       "https://malicious-page.com/trusted-page.com"),
    _r("LNK-09", _L, "§5.8", "omitted slash",
       "A domain-like fragment or query directly after the host mimics the real host.",
       "https://malicious-page.com#.trusted-page.com/"),
    _r("LNK-10", _L, "§5.9", "userinfo deception",
       "A brand or domain in the userinfo precedes the real host.",
       "https://trusted-page.com@malicious-page.com/"),
    _r("LNK-11", _L, "§5.10", "URL shortener",
       "A shortener hides the final destination.",
       "https://shortener.com/abc123"),
    _r("LNK-12", _L, "§5.11", "redirect carrier",
       "A redirect parameter carries an absolute URL, possibly percent-encoded.",
       "https://trusted-page.com/?url=%68%74%74%70%73..."),
    _r("LNK-13", _L, "§5.12", "homographic link domain",
       "The link host renders like a protected brand.",
       "https://trust\u0435d-page.com/"),
    _r("LNK-14", _L, "§5.13.1", "IP literal link host",
       "The link host is an address literal.",
       "http://203.0.113.66/"),
    _r("LNK-15", _L, "§5.13.2", "random-character link domain",
       "The registrable domain reads like a random character sequence.",
       "https://dzmdk9psqr.com/"),
    _r("LNK-16", _L, "§5.13.3", "generic keyword domain",
       "An unrelated domain built from descriptive keywords.",
       "https://mail-provider.com/"),
    _r("LNK-17", _L, "§5.14", "brand-extension link domain",
       "A protected brand label is extended with extra tokens.",
       "https://very-trusted-page.com/"),
    _r("LNK-18", _L, "§5.15", "brand in link subdomain",
       "A protected brand domain sits in the subdomain of another domain.",
       "https://trusted-page.com.malicious-page.com/"),
    _r("LNK-19", _L, "§5.16", "brand under another eTLD",
       "The brand label is registered under a different public suffix.",
       "https://trusted-page.net/"),
    _r("LNK-20", _L, "§5.17", "mangled brand link domain",
       "The domain is one small edit away from a protected brand.",
       "https://trusted-paqe.com/"),
    _r("LNK-21", _L, "§5.18", "exceedingly long link host",
       "A padded subdomain starting with a brand hides the real domain.",
       "https://trusted-page.com-<filler>.malicious-page.com/"),
    _r("LNK-22", _L, "§5.19-§5.22", "non-web scheme",
       "tel (USSD, premium, plain), data, mailto with attachment, or custom scheme links.",
       "tel:**21*00113371337#"),
    _r("LNK-23", _L, "§5.23", "possible QR code",
       "An inline image next to a scan prompt may move the URL out of the message.",
       '<p>Scan the QR code <img src="cid:qr"></p>'),
    _r("ATT-01", _A, "§6.1", "double extension",
       "An executable extension hides behind a document or image extension.",
       "cv.pdf.exe, Agenda.pdf.exe"),
    _r("ATT-02", _A, "§6.2.1", "uncommon executable",
       "An executable or script type recipients rarely recognise as dangerous.",
       "invoice.jar"),
    _r("ATT-03", _A, "§6.2.2", "domain-like executable name",
       "An executable extension that is also a TLD makes the filename read as a domain.",
       "trusted-page.com"),
    _r("ATT-04", _A, "§6.2.3", "mangled extension",
       "An executable extension one edit away from a document extension.",
       "Agenda.pif"),
    _r("ATT-05a", _A, "§6.3", "exceedingly long filename",
       "Padding whitespace pushes the real extension past the truncation point.",
       "Agenda.pdf<60 spaces>.exe"),
    _r("ATT-05b", _A, "§6.4", "bidi override in filename",
       "Bidi controls make the displayed extension differ from the real one.",
       "Agenda-\\u202Efdp.exe displayed as Agenda-exe.pdf"),
    _r("OTH-01", _C, "§7.1.1", "credential prompt in body",
       "The body carries a password field or credential form.",
       '<input type="password">'),
    _r("OTH-02", _C, "§7.1.2", "clickjacking imitation",
       "An image-only link pinned to a window edge imitates client UI.",
       '<a style="position:fixed;right:0"><img src="cid:scrollbar"></a>'),
    _r("OTH-03", _C, "§7.2", "local resource reference",
       "The body references a local file, which can leak data on render or reply.",
       "file:///C:/Users/Bob/Pictures/DCM-00001.jpg"),
    _r("OTH-04", _C, "§4.13/§5.6", "mutable rendering",
       "An external stylesheet lets the sender change presentation after delivery.",
       '<link rel="stylesheet" href="https://malicious-page.com/s.css">'),
)}

# Techniques with no content-level signature; samples exist to document the gap.
GENERATOR_ONLY: dict[str, RuleInfo] = {
    "GEN-ONLY-4.1": _r("GEN-ONLY-4.1", _S, "§4.1", "sender spoofing",
                       "A forged From header with no header-consistency trail.",
                       "From: Alice <alice@trusted-page.com> sent by Eve"),
    "GEN-ONLY-4.4": _r("GEN-ONLY-4.4", _S, "§4.4", "notification service abuse",
                       "A legitimate service sends a notification that embeds attacker content.",
                       "notifications@trusted-page.com sharing a malicious-page.com link"),
}

BASELINE_ID = "BASELINE"


def rule_info(rule_id: str) -> RuleInfo:
    info = RULES.get(rule_id) or GENERATOR_ONLY.get(rule_id)
    if info is None:
        raise UnknownTechniqueId(rule_id)
    return info


def make_finding(rule_id: str, location: str, evidence: str, description: str,
                 confidence: Confidence = Confidence.DEFINITE) -> Finding:
    info = RULES[rule_id]
    return Finding(rule_id, info.indicator, location, evidence, confidence, info.section, description)


def explain(rule_id: str) -> str:
    info = rule_info(rule_id)
    return (
        f"{info.rule_id} ({info.indicator.value}): {info.title}\n"
        f"section: {info.section}\n"
        f"mechanism: {info.mechanism}\n"
        f"example: {info.example}\n"
    )
