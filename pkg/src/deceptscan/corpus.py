"""Labeled exemplar messages: one per technique plus a benign baseline.

Every sample starts from the same scenario (Alice at trusted-page.com shares
a presentation link and an agenda with Bob) and swaps exactly one element.
Output is byte-deterministic.
"""

from __future__ import annotations

import base64
import json
import re
from dataclasses import dataclass, field, replace
from email.header import Header
from pathlib import Path
from typing import Iterable, Optional
from urllib.parse import quote

from .findings import BASELINE_ID, GENERATOR_ONLY, RULES, UnknownTechniqueId
from .message import EmailMessage

BOUNDARY = "=_deceptscan_0001"
MANIFEST_NAME = "manifest.jsonl"
DEFAULT_DATE = "Tue, 14 Mar 2023 09:30:00 +0100"
PRESENTATION_URL = "https://trusted-page.com/presentation/d/8f3a1c"

# ---------------------------------------------------------------------------
# Writer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AttachmentSpec:
    filename: str
    mime: str = "application/pdf"
    size: int = 1024


def _filler(size: int) -> bytes:
    pattern = b"deceptscan sample attachment payload\n"
    return (pattern * (size // len(pattern) + 1))[:size]


def _disposition(filename: str) -> str:
    if filename.isascii() and filename.isprintable():
        escaped = filename.replace("\\", "\\\\").replace('"', '\\"')
        return f'attachment; filename="{escaped}"'
    return f"attachment; filename*=utf-8''{quote(filename, safe='')}"


def _boundary_of(content_type: Optional[str]) -> Optional[str]:
    if not content_type:
        return None
    m = re.search(r'boundary="?([^";]+)"?', content_type, re.IGNORECASE)
    return m.group(1) if m else None


def write_message(headers: Iterable[tuple[str, str]], body_text: Optional[str],
                  html_parts: Iterable[str], attachments: Iterable[AttachmentSpec]) -> bytes:
    """Serialize a multipart/mixed message.

    ``headers`` must include a multipart Content-Type whose boundary is used
    verbatim. Text parts are 8bit UTF-8; attachments are base64 filler.
    """
    headers = list(headers)
    ctype = next((v for k, v in headers if k.lower() == "content-type"), None)
    boundary = _boundary_of(ctype)
    lines = [f"{name}: {value}" for name, value in headers]
    if boundary is None:
        lines += ["", body_text or ""]
        return "\n".join(lines).encode("utf-8")
    lines.append("")
    lines.append("This is a multi-part message in MIME format.")
    if body_text is not None:
        lines += [f"--{boundary}", 'Content-Type: text/plain; charset="utf-8"',
                  "Content-Transfer-Encoding: 8bit", "", body_text]
    for html in html_parts:
        lines += [f"--{boundary}", 'Content-Type: text/html; charset="utf-8"',
                  "Content-Transfer-Encoding: 8bit", "", html]
    for att in attachments:
        payload = base64.encodebytes(_filler(att.size)).decode("ascii").rstrip("\n")
        lines += [f"--{boundary}", f"Content-Type: {att.mime}",
                  f"Content-Disposition: {_disposition(att.filename)}",
                  "Content-Transfer-Encoding: base64", "", payload]
    lines.append(f"--{boundary}--")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def serialize(msg: EmailMessage) -> bytes:
    """Write a parsed message back out with :func:`write_message`."""
    attachments = [AttachmentSpec(a.filename_raw, a.declared_mime or "application/octet-stream", a.size_bytes)
                   for a in msg.attachments]
    return write_message(msg.headers, msg.body_text, msg.html_parts, attachments)


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    from_value: Optional[str] = "Alice <alice@trusted-page.com>"
    return_path: Optional[str] = "alice@trusted-page.com"
    extra_headers: tuple[tuple[str, str], ...] = ()
    subject: str = "Presentation for tomorrow"
    head_html: str = ""
    link_html: str = f'<a href="{PRESENTATION_URL}">Open presentation</a>'
    link_text: str = PRESENTATION_URL
    extra_html: str = ""
    attachments: tuple[AttachmentSpec, ...] = (AttachmentSpec("Agenda.pdf"),)

    def headers(self, technique_id: str) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        if self.return_path is not None:
            out.append(("Return-Path", f"<{self.return_path}>"))
        out.extend(self.extra_headers)
        if self.from_value is not None:
            out.append(("From", self.from_value))
        slug = technique_id.lower().replace(".", "-")
        out += [
            ("To", "Bob <bob@trusted-page.com>"),
            ("Subject", self.subject),
            ("Date", DEFAULT_DATE),
            ("Message-ID", f"<{slug}.sample@deceptscan.invalid>"),
            ("MIME-Version", "1.0"),
            ("Content-Type", f'multipart/mixed; boundary="{BOUNDARY}"'),
        ]
        return out

    def html(self) -> str:
        head = f"<head>{self.head_html}</head>" if self.head_html else ""
        return (
            f"<html>{head}<body>\n"
            "<p>Hi Bob,</p>\n"
            f"<p>here are the slides for tomorrow's meeting: {self.link_html}</p>\n"
            f"{self.extra_html}"
            "<p>The agenda is attached.</p>\n"
            "<p>Best,<br>Alice</p>\n"
            "</body></html>"
        )

    def text(self) -> str:
        return (
            "Hi Bob,\n\n"
            f"here are the slides for tomorrow's meeting: {self.link_text}\n"
            "The agenda is attached.\n\nBest,\nAlice"
        )

    def render(self, technique_id: str) -> bytes:
        return write_message(self.headers(technique_id), self.text(), [self.html()], self.attachments)


BASE = Scenario()


def _sender(address: str, display: Optional[str] = "Alice") -> Scenario:
    value = f"{display} <{address}>" if display else address
    return replace(BASE, from_value=value, return_path=address)


def _link(href: str, text: str = "Open presentation", attrs: str = "") -> Scenario:
    return replace(BASE, link_html=f'<a href="{href}"{attrs}>{text}</a>', link_text=href)


def _attachment(filename: str, mime: str = "application/octet-stream") -> Scenario:
    return replace(BASE, attachments=(AttachmentSpec(filename, mime),))


_LONG_HOST = "trusted-page.com-8ed0f97a45dfd4gf5-3c9e1b7a2f6d4e8c0b5a.malicious-page.com"
_CSS = '<link rel="stylesheet" href="https://malicious-page.com/style.css">'
_ENCODED_NAME = Header("alice\uff20trusted-page.com", "utf-8").encode()

# technique id -> (scenario, expected rule ids)
SAMPLES: dict[str, tuple[Scenario, frozenset[str]]] = {
    BASELINE_ID: (BASE, frozenset()),
    "GEN-ONLY-4.1": (replace(BASE, extra_headers=(
        ("Received", "from mail.malicious-page.com (mail.malicious-page.com [203.0.113.66]) "
                     "by mx.trusted-page.com"),)), frozenset()),
    "GEN-ONLY-4.4": (replace(
        _sender("notifications@trusted-page.com", "Trusted Page"),
        subject="Alice shared a document with you",
        link_html='<a href="https://malicious-page.com/presentation/d/8f3a1c">Open presentation</a>',
        link_text="https://malicious-page.com/presentation/d/8f3a1c"), frozenset()),
    "SND-01": (replace(BASE, return_path="eve@malicious-page.com", extra_headers=(
        ("Authentication-Results", "mx.trusted-page.com; spf=pass smtp.mailfrom=malicious-page.com"),)),
        frozenset({"SND-01"})),
    "SND-02": (_sender("trusted-page.com@malicious-page.com", None), frozenset({"SND-02"})),
    "SND-03": (replace(_sender("eve@malicious-page.com"),
                       from_value='"alice@trusted-page.com" <eve@malicious-page.com>'), frozenset({"SND-03"})),
    "SND-04": (replace(_sender("eve@malicious-page.com"),
                       from_value=f"{_ENCODED_NAME} <eve@malicious-page.com>"), frozenset({"SND-04"})),
    "SND-05": (_sender(f"alice@{_LONG_HOST}"), frozenset({"SND-05"})),
    "SND-06": (_sender("alice@xn--trustd-page-skj.com"), frozenset({"SND-06"})),
    "SND-07": (_sender("\u202emoc.egap-detsurt@ecila", None), frozenset({"SND-07"})),
    "SND-08": (_sender("eve@[203.0.113.66]", "Eve"), frozenset({"SND-08"})),
    "SND-09": (_sender("alice@dzmdk9psqr.com"), frozenset({"SND-09"})),
    "SND-10": (_sender("alice@very-trusted-page.com"), frozenset({"SND-10"})),
    "SND-11": (_sender("eve@trusted-page.com.malicious-page.com", "Eve"), frozenset({"SND-11"})),
    "SND-12": (_sender("alice@trusted-page.net"), frozenset({"SND-12"})),
    "SND-13": (_sender("alice@trusted-paqe.com"), frozenset({"SND-13"})),
    "LNK-01": (_link("https://malicious-page.com/presentation/d/8f3a1c",
                     attrs=f' title="{PRESENTATION_URL}"'), frozenset({"LNK-01"})),
    "LNK-02": (_link("https://trusted-page.com%2E%6D%61%6C%69%63%69%6F%75%73%2D%70%61%67%65%2E%63%6F%6D"
                     "/presentation/d/8f3a1c"), frozenset({"LNK-02"})),
    "LNK-03": (replace(_link("trusted-page.com"),
                       head_html='<base href="https://malicious-page.com/">'), frozenset({"LNK-03"})),
    "LNK-04": (replace(BASE, link_html=(
        '<form action="https://malicious-page.com/presentation/d/8f3a1c" method="get" style="display:inline">'
        '<input type="submit" value="Open presentation" '
        'style="border:none;background:none;color:blue;text-decoration:underline;cursor:pointer">'
        "</form>"), link_text="Open presentation"), frozenset({"LNK-04"})),
    "LNK-05": (_link("https://malicious-page.com/presentation/d/8f3a1c", text=PRESENTATION_URL),
               frozenset({"LNK-05"})),
    "LNK-06": (_link("https://malicious-page.com/presentation/d/8f3a1c",
                     text="\u04bbttps://trusted-page.com/presentation/d/8f3a1c"), frozenset({"LNK-06"})),
    "LNK-07": (replace(BASE, head_html=_CSS, extra_html=(
        '<p class="alt">Mirror: <a href="https://malicious-page.com/presentation/d/8f3a1c">'
        "Open presentation</a></p>\n")), frozenset({"LNK-07", "OTH-04"})),
    "LNK-08": (_link("https://malicious-page.com/trusted-page.com"), frozenset({"LNK-08"})),
    "LNK-09": (_link("https://malicious-page.com#.trusted-page.com/"), frozenset({"LNK-09"})),
    "LNK-10": (_link("https://trusted-page.com@malicious-page.com/presentation/d/8f3a1c"),
               frozenset({"LNK-10"})),
    "LNK-11": (_link("https://shortener.com/abc123"), frozenset({"LNK-11"})),
    "LNK-12": (_link("https://trusted-page.com/?url=%68%74%74%70%73%3A%2F%2Fmalicious-page.com"
                     "%2Fpresentation%2Fd%2F8f3a1c"), frozenset({"LNK-12"})),
    "LNK-13": (_link("https://trust\u0435d-page.com/presentation/d/8f3a1c"), frozenset({"LNK-13"})),
    "LNK-14": (_link("http://203.0.113.66/presentation/d/8f3a1c"), frozenset({"LNK-14"})),
    "LNK-15": (_link("https://dzmdk9psqr.com/presentation/d/8f3a1c"), frozenset({"LNK-15"})),
    "LNK-16": (_link("https://mail-provider.com/presentation/d/8f3a1c"), frozenset({"LNK-16"})),
    "LNK-17": (_link("https://very-trusted-page.com/presentation/d/8f3a1c"), frozenset({"LNK-17"})),
    "LNK-18": (_link("https://trusted-page.com.malicious-page.com/presentation/d/8f3a1c"),
               frozenset({"LNK-18"})),
    "LNK-19": (_link("https://trusted-page.net/presentation/d/8f3a1c"), frozenset({"LNK-19"})),
    "LNK-20": (_link("https://trusted-paqe.com/presentation/d/8f3a1c"), frozenset({"LNK-20"})),
    "LNK-21": (_link(f"https://{_LONG_HOST}/presentation/d/8f3a1c"), frozenset({"LNK-21"})),
    "LNK-22": (_link("tel:**21*00113371337#", text="Call the presentation hotline"), frozenset({"LNK-22"})),
    "LNK-23": (replace(BASE, link_html="see below", link_text="see below", extra_html=(
        '<p>Scan the QR code to open the presentation on your phone: '
        '<img src="cid:qr-code" alt="QR code" width="120" height="120"></p>\n')), frozenset({"LNK-23"})),
    "ATT-01": (_attachment("Agenda.pdf.exe"), frozenset({"ATT-01"})),
    "ATT-02": (_attachment("invoice.jar", "application/java-archive"), frozenset({"ATT-02"})),
    "ATT-03": (_attachment("trusted-page.com"), frozenset({"ATT-03"})),
    "ATT-04": (_attachment("Agenda.pif"), frozenset({"ATT-04"})),
    "ATT-05a": (_attachment("Agenda.pdf" + " " * 60 + ".exe"), frozenset({"ATT-05a"})),
    "ATT-05b": (_attachment("Agenda-\u202efdp.exe"), frozenset({"ATT-05b"})),
    "OTH-01": (replace(BASE, extra_html=(
        '<form action="https://malicious-page.com/login" method="post">\n'
        "<p>Your session expired. Please re-enter your password to view the presentation.</p>\n"
        '<input type="password" name="pw">\n'
        "</form>\n")), frozenset({"OTH-01"})),
    "OTH-02": (replace(BASE, extra_html=(
        '<p><a href="https://malicious-page.com/presentation/d/8f3a1c" '
        'style="position:fixed;right:0;top:0"><img src="cid:scrollbar" width="16" height="600"></a></p>\n')),
        frozenset({"OTH-02"})),
    "OTH-03": (replace(BASE, extra_html=(
        '<p><img src="file:///C:/Users/Bob/Pictures/DCM-00001.jpg" width="1" height="1"></p>\n')),
        frozenset({"OTH-03"})),
    "OTH-04": (replace(BASE, head_html=_CSS), frozenset({"OTH-04"})),
}

# Expected sets that deviate from {technique_id}; each is an unavoidable co-firing.
DOCUMENTED_OVERLAPS: dict[str, frozenset[str]] = {
    tid: rules for tid, (_, rules) in SAMPLES.items()
    if tid in RULES and rules != {tid}
}


@dataclass(frozen=True)
class CorpusSample:
    technique_id: str
    message_bytes: bytes = field(repr=False)
    expected_rules: frozenset[str]
    generator_only: bool

    @property
    def filename(self) -> str:
        return f"{self.technique_id}.eml"


def technique_ids() -> list[str]:
    return [BASELINE_ID, *GENERATOR_ONLY, *RULES]


def generate_sample(technique_id: str) -> CorpusSample:
    if technique_id not in SAMPLES:
        raise UnknownTechniqueId(technique_id)
    scenario, expected = SAMPLES[technique_id]
    return CorpusSample(technique_id, scenario.render(technique_id), expected,
                        technique_id in GENERATOR_ONLY)


def manifest_record(sample: CorpusSample) -> dict:
    return {
        "technique_id": sample.technique_id,
        "path": sample.filename,
        "expected_rules": ",".join(sorted(sample.expected_rules)),
        "generator_only": sample.generator_only,
    }


def generate_corpus(out_dir: str | Path) -> list[dict]:
    """Write every sample plus ``manifest.jsonl`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for tid in technique_ids():
        sample = generate_sample(tid)
        (out / sample.filename).write_bytes(sample.message_bytes)
        records.append(manifest_record(sample))
    lines = [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in records]
    (out / MANIFEST_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return records


def read_manifest(path: str | Path) -> list[dict]:
    text = Path(path).read_text(encoding="utf-8")
    return [json.loads(line) for line in text.splitlines() if line.strip()]
