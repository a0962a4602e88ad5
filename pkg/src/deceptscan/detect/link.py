"""Link-indicator rules LNK-01 to LNK-23."""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Optional
from urllib.parse import unquote

from ..config import RuleConfig
from ..findings import Confidence, Finding, make_finding
from ..message import EmailMessage, LinkInstance, LinkKind, RefKind
from ..text import looks_like_domain, skeleton, skeleton_map
from ..urls import (
    HostKind,
    ParsedUrl,
    SchemeClass,
    classify_scheme,
    is_absolute_url,
    parse_url,
    try_split,
)
from . import hosts

MAX_DECODE_DEPTH = 3

_HOST_RULES = {
    hosts.HOMOGRAPH: ("LNK-13", Confidence.DEFINITE),
    hosts.RANDOM: ("LNK-15", Confidence.HEURISTIC),
    hosts.KEYWORD: ("LNK-16", Confidence.HEURISTIC),
    hosts.BRAND_EXTENSION: ("LNK-17", Confidence.DEFINITE),
    hosts.BRAND_SUBDOMAIN: ("LNK-18", Confidence.DEFINITE),
    hosts.OTHER_ETLD: ("LNK-19", Confidence.DEFINITE),
    hosts.MANGLED: ("LNK-20", Confidence.DEFINITE),
    hosts.LONG: ("LNK-21", Confidence.HEURISTIC),
}

_LEADING_SCHEME = re.compile(r"^\s*([^\s:/]+):")
_OMITTED_SLASH = re.compile(r"^\.?([^/?#\s]+)/")
_PHONE_NOISE = re.compile(r"[\s\-().]")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _registrable(url: ParsedUrl, config: RuleConfig) -> Optional[str]:
    if url.host_kind is HostKind.DNS_NAME and url.decoded_host:
        split = try_split(url.decoded_host, config.psl)
        return split.registrable_domain if split else None
    if url.host_kind in (HostKind.IPV4, HostKind.IPV6):
        return url.decoded_host
    return None


def _text_domain(text: str, config: RuleConfig) -> Optional[str]:
    """Registrable domain named by link text, if the text reads as a URL or domain."""
    text = text.strip()
    if not text:
        return None
    if is_absolute_url(text):
        return _registrable(parse_url(text), config)
    candidate = text.rstrip("/").lower()
    if looks_like_domain(candidate, config.psl.single_label_suffixes(), config.confusables):
        split = try_split(candidate, config.psl)
        if split is not None and split.etld in config.psl.rules:
            return split.registrable_domain
    # a brand written as words, e.g. "Trusted Page"
    words = "-".join(text.lower().split())
    for brand in config.brand_domains:
        split = try_split(brand, config.psl)
        if split is not None and words == split.second_level:
            return brand
    return None


def decode_redirect_value(value: str, depth: int = MAX_DECODE_DEPTH) -> Optional[str]:
    """Percent-decode ``value`` up to ``depth`` times; return the first absolute URL seen."""
    current = value
    for level in range(depth + 1):
        if is_absolute_url(current):
            return current
        if level == depth:
            break
        decoded = unquote(current)
        if decoded == current:
            break
        current = decoded
    return None


def _query_params(query: str) -> list[tuple[str, str]]:
    out = []
    for chunk in query.split("&"):
        if not chunk:
            continue
        name, _, value = chunk.partition("=")
        out.append((unquote(name).lower(), value))
    return out


def _brand_in_suffix_string(text: str, config: RuleConfig) -> Optional[str]:
    """Find a brand (with '-'/'.' folded) in ``text``; returns the matched original span."""
    skel, origin, _ = skeleton_map(text, config.confusables)
    folded = skel.lower().replace(".", "-")
    suffixes = sorted(config.psl.rules, key=len, reverse=True)
    for brand in config.brand_domains:
        split = try_split(brand, config.psl)
        if split is None:
            continue
        sld = split.second_level.replace(".", "-")
        alternatives = "|".join(re.escape(s.replace(".", "-")) for s in suffixes)
        m = re.search(rf"(?<![a-z0-9]){re.escape(sld)}-(?:{alternatives})(?![a-z0-9])", folded)
        if m:
            return text[origin[m.start()]:origin[m.end() - 1] + 1]
    return None


def _brand_mentioned(text: str, config: RuleConfig) -> bool:
    low = skeleton(text, config.confusables).lower()
    return any(b in low for b in config.brand_domains)


# ---------------------------------------------------------------------------
# Non-web schemes
# ---------------------------------------------------------------------------

def _non_web(url: ParsedUrl, href: str, cls: SchemeClass, config: RuleConfig) -> Optional[str]:
    """Sub-kind description for LNK-22, or None when the link is harmless."""
    if cls is SchemeClass.TEL:
        number = unquote(url.path)
        if "*" in number or "#" in number:
            return "tel link with a USSD / supplementary-service code"
        digits = _PHONE_NOISE.sub("", number)
        for prefix in config.premium_prefixes:
            if digits.startswith(_PHONE_NOISE.sub("", prefix)):
                return "tel link to a premium-rate number"
        return "tel link with a plain phone number"
    if cls is SchemeClass.DATA:
        media = url.path.split(",", 1)[0].split(";", 1)[0].strip().lower()
        if media == "text/html":
            return "data URL carrying an HTML payload"
        visible = unquote(url.path)[: config.thresholds.visible_width]
        if _brand_mentioned(visible, config):
            return "data URL starting with a trusted-looking string"
        return "data URL"
    if cls is SchemeClass.MAILTO:
        params = {name for name, _ in _query_params(url.query or "")}
        if params & {"attach", "attachment"}:
            return "mailto link preselecting a local attachment"
        return None
    if cls is SchemeClass.CUSTOM:
        return f"custom URL scheme {url.scheme}:"
    return None


# ---------------------------------------------------------------------------
# Per-link evaluation
# ---------------------------------------------------------------------------

def _check_link(link: LinkInstance, config: RuleConfig) -> list[Finding]:
    loc = f"link[{link.source_index}]"
    out: list[Finding] = []

    def add(rule_id: str, evidence: str, description: str,
            confidence: Confidence = Confidence.DEFINITE) -> None:
        out.append(make_finding(rule_id, loc, evidence, description, confidence))

    if link.kind is LinkKind.FORM_SUBMIT:
        add("LNK-04", link.href_raw or link.anchor_text,
            "form submit control acts as a link; its target is not shown on hover")

    token = _LEADING_SCHEME.match(link.anchor_text)
    if token and not token.group(1).isascii() \
            and skeleton(token.group(1), config.confusables).lower() in ("http", "https"):
        add("LNK-06", token.group(1), "link text starts with a look-alike URL scheme")

    if link.href_effective is None:
        return out
    href = link.href_effective
    url = parse_url(href)
    cls = classify_scheme(url)
    if cls is SchemeClass.RELATIVE:
        return out
    target = _registrable(url, config)

    if link.title_attr:
        tip = _text_domain(link.title_attr, config)
        if tip is not None and tip != target:
            add("LNK-01", link.title_attr, f"tooltip names {tip} but the link targets {target}")

    text_dom = _text_domain(link.anchor_text, config)
    if text_dom is not None and target is not None and text_dom != target:
        add("LNK-05", link.anchor_text, f"link text names {text_dom} but the link targets {target}")

    base_trick = False
    if link.base_applied and link.href_raw is not None:
        raw = link.href_raw.strip()
        if looks_like_domain(raw, config.psl.single_label_suffixes(), config.confusables) \
                or _brand_mentioned(raw, config):
            base_trick = True
            add("LNK-03", raw, f"relative href resolves through a base element to {href}")

    if cls is not SchemeClass.WEB:
        kind = _non_web(url, href, cls, config)
        if kind is not None:
            add("LNK-22", href, kind)
        return out

    if url.host_kind in (HostKind.IPV4, HostKind.IPV6):
        add("LNK-14", url.host or "", "link host is an IP address literal")
        return out
    if not url.host:
        return out

    view = hosts.host_view(url.host, url.decoded_host or url.host.lower(), config)
    own_brand = hosts.is_brand(view, config)

    encoded_host = False
    if "%" in url.host:
        raw_split = try_split(url.host.lower(), config.psl)
        raw_reg = raw_split.registrable_domain if raw_split else None
        if raw_reg != target:
            encoded_host = True
            add("LNK-02", url.host, f"percent-encoded host decodes to {url.decoded_host}")

    omitted_slash = False
    if url.path == "":
        for part in (url.fragment, url.query):
            m = _OMITTED_SLASH.match(part or "")
            if m and looks_like_domain(m.group(1), config.psl.single_label_suffixes(), config.confusables):
                omitted_slash = True
                add("LNK-09", m.group(1), "domain-like text right after the host imitates the real host")
                break

    if url.userinfo is not None and (
            looks_like_domain(unquote(url.userinfo), config.psl.single_label_suffixes(), config.confusables)
            or _brand_mentioned(unquote(url.userinfo), config)):
        add("LNK-10", url.userinfo, f"userinfo precedes the real host {url.host}")

    if target in config.shortener_domains:
        details = [f"shortener {target} hides the destination"]
        segments = [s for s in url.path.split("/") if s]
        if len(segments) > 1:
            details.append(f"trailing text after the identifier: {'/'.join(segments[1:])}")
        if segments and _brand_in_suffix_string(segments[0], config):
            details.append("identifier carries a brand name")
        add("LNK-11", url.host, "; ".join(details))

    for name, value in _query_params(url.query or ""):
        if name in config.redirect_param_names:
            dest = decode_redirect_value(value)
            if dest is not None:
                add("LNK-12", dest, f"parameter {name!r} carries a redirect target")
                break

    if not own_brand and not base_trick and not omitted_slash:
        tail = url.path
        if url.query is not None:
            tail += "?" + url.query
        if url.fragment is not None:
            tail += "#" + url.fragment
        hit = _brand_in_suffix_string(unquote(tail), config)
        if hit is not None:
            add("LNK-08", hit, f"brand string after the host of {target}")

    if not encoded_host:
        for kind, evidence, detail in hosts.check_host(view, config, keywords=True):
            rule_id, confidence = _HOST_RULES[kind]
            add(rule_id, evidence, detail, confidence)
    return out


def _scan_prompt(link: LinkInstance, config: RuleConfig) -> Optional[str]:
    for word in config.scan_prompts:
        m = re.search(rf"\b{re.escape(word)}\b", link.block_text, re.IGNORECASE)
        if m:
            return m.group(0)
    return None


def _mutable_rendering(msg: EmailMessage, config: RuleConfig) -> list[Finding]:
    if not any(r.kind is RefKind.STYLESHEET and not r.local for r in msg.external_refs):
        return []
    groups: dict[str, list[LinkInstance]] = defaultdict(list)
    for link in msg.links:
        if link.anchor_text and link.href_effective and link.kind is not LinkKind.INLINE_IMAGE:
            groups[link.anchor_text].append(link)
    out = []
    for text, members in groups.items():
        domains = {_registrable(parse_url(m.href_effective), config) for m in members}
        if len(members) >= 2 and len(domains) >= 2:
            out.append(make_finding(
                "LNK-07", f"link[{members[0].source_index}]", text,
                f"{len(members)} links labelled {text!r} lead to different domains and external CSS can swap them",
                Confidence.HEURISTIC))
    return out


def detect_links(msg: EmailMessage, config: RuleConfig) -> list[Finding]:
    out: list[Finding] = []
    for link in msg.links:
        if link.kind is LinkKind.INLINE_IMAGE:
            word = _scan_prompt(link, config)
            if word is not None:
                out.append(make_finding("LNK-23", f"link[{link.source_index}]", link.block_text,
                                        f"inline image next to the prompt {word!r} may be a QR code",
                                        Confidence.HEURISTIC))
            continue
        out.extend(_check_link(link, config))
    out.extend(_mutable_rendering(msg, config))
    return out
