from __future__ import annotations

from deceptscan.analyzer import analyze
from deceptscan.config import RuleConfig
from deceptscan.corpus import AttachmentSpec, write_message
from deceptscan.message import parse_message


def build(from_value: str | None = "Alice <alice@trusted-page.com>", html: str | None = None,
          attachments: tuple[str, ...] = (), extra_headers: tuple[tuple[str, str], ...] = ()) -> bytes:
    headers = list(extra_headers)
    if from_value is not None:
        headers.append(("From", from_value))
    headers += [("To", "bob@trusted-page.com"), ("Content-Type", 'multipart/mixed; boundary="t"')]
    return write_message(headers, "text", [html] if html is not None else [],
                         [AttachmentSpec(a, "application/octet-stream", 16) for a in attachments])


def rules(raw: bytes, config: RuleConfig | None = None) -> set[str]:
    return {f.rule_id for f in analyze(parse_message(raw), config)}


def findings(raw: bytes, config: RuleConfig | None = None):
    return analyze(parse_message(raw), config)


def anchor(href: str, text: str = "Open presentation", attrs: str = "") -> str:
    return f'<p><a href="{href}"{attrs}>{text}</a></p>'
