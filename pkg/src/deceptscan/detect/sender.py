"""Sender-indicator rules SND-01 to SND-13."""

from __future__ import annotations

import ipaddress
import re

from ..config import RuleConfig
from ..findings import Confidence, Finding, make_finding
from ..message import EmailMessage
from ..text import bidi_render, looks_like_domain, skeleton_map
from ..urls import decode_host, try_split
from . import hosts

_ADDR_SPEC = re.compile(r"[^\s@<>\"'()\[\],;:]+@[^\s@<>\"'()\[\],;:]+")
_AUTH_HOST_FIELDS = re.compile(r"\b(?:smtp\.mailfrom|header\.d|header\.i|header\.from)\s*=\s*([^\s;()]+)",
                               re.IGNORECASE)

_HOST_RULES = {
    hosts.HOMOGRAPH: ("SND-06", Confidence.DEFINITE),
    hosts.RANDOM: ("SND-09", Confidence.HEURISTIC),
    hosts.BRAND_EXTENSION: ("SND-10", Confidence.DEFINITE),
    hosts.BRAND_SUBDOMAIN: ("SND-11", Confidence.DEFINITE),
    hosts.OTHER_ETLD: ("SND-12", Confidence.DEFINITE),
    hosts.MANGLED: ("SND-13", Confidence.DEFINITE),
    hosts.LONG: ("SND-05", Confidence.HEURISTIC),
}


def _registrable(host: str | None, config: RuleConfig) -> str | None:
    if not host:
        return None
    split = try_split(decode_host(host), config.psl)
    return split.registrable_domain if split else None


def _is_ip_literal(host: str) -> bool:
    if host.startswith("[") and host.endswith("]"):
        return True
    try:
        ipaddress.ip_address(host)
    except ValueError:
        return False
    return True


def _auth_mismatch(msg: EmailMessage, from_reg: str, config: RuleConfig) -> list[Finding]:
    candidates: list[tuple[str, str]] = []
    if msg.sender.return_path_host:
        candidates.append(("Return-Path", msg.sender.return_path_host))
    for value in msg.header_all("Authentication-Results"):
        for host in _AUTH_HOST_FIELDS.findall(value):
            candidates.append(("Authentication-Results", host.rsplit("@", 1)[-1]))
    for header, host in candidates:
        reg = _registrable(host, config)
        if reg is not None and reg != from_reg:
            return [make_finding("SND-01", header, host,
                                 f"{header} names {reg} while From uses {from_reg}",
                                 Confidence.HEURISTIC)]
    return []


def _display_name_address(name: str, address_reg: str | None, config: RuleConfig) -> list[Finding]:
    out = []
    m = _ADDR_SPEC.search(name)
    if m:
        reg = _registrable(m.group(0).rsplit("@", 1)[1], config)
        if reg is not None and reg != address_reg:
            out.append(make_finding("SND-03", "From", m.group(0),
                                    f"display name shows an address at {reg}"))
        return out
    skel, origin, _ = skeleton_map(name, config.confusables)
    m = _ADDR_SPEC.search(skel)
    if m:
        start = origin[m.start()]
        end = origin[m.end() - 1] + 1
        original = name[start:end]
        if original != m.group(0):
            out.append(make_finding("SND-04", "From", original,
                                    f"display name imitates the address {m.group(0)}"))
    return out


def detect_sender(msg: EmailMessage, config: RuleConfig) -> list[Finding]:
    sender = msg.sender
    if not sender.present:
        return []
    out: list[Finding] = []
    raw_from = sender.raw_value or ""

    rendering = bidi_render(raw_from)
    if rendering.had_controls:
        out.append(make_finding("SND-07", "From", rendering.displayed,
                                "bidi control characters reorder the displayed sender"))

    from_reg = _registrable(sender.host, config) if sender.host and not _is_ip_literal(sender.host) else None

    if from_reg is not None:
        out.extend(_auth_mismatch(msg, from_reg, config))

    if sender.local_part:
        local = sender.local_part
        # dotted personal names ("first.last") must not match, so the final
        # label has to be a known suffix
        suffixes = config.psl.single_label_suffixes()
        if (looks_like_domain(local, suffixes, config.confusables)
                and local.rsplit(".", 1)[-1].lower() in suffixes) or local.lower() in config.brand_domains:
            out.append(make_finding("SND-02", "From", local, "local part reads as a domain name"))

    if sender.display_name:
        out.extend(_display_name_address(sender.display_name, from_reg, config))

    host = sender.host
    if host:
        if _is_ip_literal(host):
            out.append(make_finding("SND-08", "From", host, "sender host is an IP address literal"))
        else:
            view = hosts.host_view(host, decode_host(host), config)
            for kind, evidence, detail in hosts.check_host(view, config, address_width=len(sender.address or "")):
                rule_id, confidence = _HOST_RULES[kind]
                out.append(make_finding(rule_id, "From", evidence, detail, confidence))
    return out
