"""Rendering-environment rules OTH-01 to OTH-04."""

from __future__ import annotations

import re

from ..config import RuleConfig
from ..findings import Confidence, Finding, make_finding
from ..message import EmailMessage, RefKind

_PASSWORD_INPUT = re.compile(r"<input\b[^>]*\btype\s*=\s*[\"']?password\b[^>]*>", re.IGNORECASE)
_FORM = re.compile(r"<form\b.*?(?:</form\s*>|$)", re.IGNORECASE | re.DOTALL)
_TAG = re.compile(r"<[^>]*>")
_PINNED = re.compile(
    r"position\s*:\s*(?:absolute|fixed)|\b(?:top|right|bottom|left)\s*:\s*0(?:px)?\b", re.IGNORECASE)


def _credential_form(html: str, config: RuleConfig) -> str | None:
    m = _PASSWORD_INPUT.search(html)
    if m:
        return m.group(0)
    for form in _FORM.finditer(html):
        text = _TAG.sub(" ", form.group(0))
        for word in config.credential_keywords:
            hit = re.search(rf"\b{re.escape(word)}\b", text, re.IGNORECASE)
            if hit:
                return hit.group(0)
    return None


def detect_content(msg: EmailMessage, config: RuleConfig) -> list[Finding]:
    out: list[Finding] = []
    for i, html in enumerate(msg.html_parts):
        evidence = _credential_form(html, config)
        if evidence is not None:
            out.append(make_finding("OTH-01", f"html[{i}]", evidence,
                                    "message body asks for credentials like a client prompt"))

    for link in msg.links:
        if link.image_only and link.style_attr and _PINNED.search(link.style_attr):
            out.append(make_finding("OTH-02", f"link[{link.source_index}]", link.style_attr,
                                    "image-only link pinned to the window edge imitates client UI",
                                    Confidence.HEURISTIC))

    for i, ref in enumerate(msg.external_refs):
        loc = f"external_ref[{i}]"
        if ref.local:
            out.append(make_finding("OTH-03", loc, ref.url,
                                    "reference to a local file; may leak on render or be embedded in a reply"))
        elif ref.kind is RefKind.STYLESHEET:
            out.append(make_finding("OTH-04", loc, ref.url,
                                    "external stylesheet can change the rendering after delivery",
                                    Confidence.HEURISTIC))
    return out
