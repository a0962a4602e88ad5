"""Run every detector over a message and order the findings."""

from __future__ import annotations

import re
from typing import Optional

from .config import RuleConfig
from .detect import detect_attachments, detect_content, detect_links, detect_sender
from .findings import INDICATOR_ORDER, Finding
from .message import EmailMessage, parse_message

_DIGITS = re.compile(r"(\d+)")


def natural_key(text: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in _DIGITS.split(text))


def finding_key(f: Finding) -> tuple:
    return (INDICATOR_ORDER[f.indicator], f.rule_id, natural_key(f.location), f.evidence)


def analyze(msg: EmailMessage, config: Optional[RuleConfig] = None) -> list[Finding]:
    config = config or RuleConfig()
    found = (
        detect_sender(msg, config)
        + detect_links(msg, config)
        + detect_attachments(msg, config)
        + detect_content(msg, config)
    )
    if config.disabled_rules:
        found = [f for f in found if f.rule_id not in config.disabled_rules]
    return sorted(found, key=finding_key)


def scan_bytes(raw: bytes, config: Optional[RuleConfig] = None) -> list[Finding]:
    return analyze(parse_message(raw), config)
