"""Host-structure predicates shared by the sender and link detectors.

Each check returns ``(kind, evidence, detail)`` tuples; the callers map the
kind onto their own rule IDs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..config import RuleConfig
from ..text import mangle_distance, randomness_score, skeleton
from ..urls import DomainSplit, try_split

HOMOGRAPH = "homograph"
RANDOM = "random"
BRAND_EXTENSION = "brand_extension"
BRAND_SUBDOMAIN = "brand_subdomain"
OTHER_ETLD = "other_etld"
MANGLED = "mangled"
LONG = "long"
KEYWORD = "keyword"


@dataclass(frozen=True)
class HostView:
    raw: str          # as written in the message
    decoded: str      # percent- and IDNA-decoded, lowercase
    split: Optional[DomainSplit]


def host_view(raw: str, decoded: str, config: RuleConfig) -> HostView:
    return HostView(raw, decoded, try_split(decoded, config.psl))


def verbatim(raw: str, needle: str) -> str:
    """The slice of ``raw`` matching ``needle`` case-insensitively, else ``raw``."""
    pos = raw.lower().find(needle.lower())
    return raw[pos:pos + len(needle)] if pos >= 0 else raw


def _brand_splits(config: RuleConfig) -> list[DomainSplit]:
    out = []
    for brand in config.brand_domains:
        split = try_split(brand, config.psl)
        if split is not None:
            out.append(split)
    return out


def is_brand(view: HostView, config: RuleConfig) -> bool:
    return view.split is not None and view.split.registrable_domain in config.brand_domains


def homograph_brand(view: HostView, config: RuleConfig) -> Optional[str]:
    """Brand whose look-alike the registrable domain is, if any."""
    if view.split is None or view.split.registrable_domain.isascii():
        return None
    skel = try_split(skeleton(view.decoded, config.confusables).lower(), config.psl)
    if skel is not None and skel.registrable_domain in config.brand_domains:
        return skel.registrable_domain
    return None


def check_host(view: HostView, config: RuleConfig, *, address_width: int = 0,
               keywords: bool = False) -> list[tuple[str, str, str]]:
    split = view.split
    if split is None:
        return []
    out: list[tuple[str, str, str]] = []
    registrable = split.registrable_domain
    sld = split.second_level

    homograph = homograph_brand(view, config)
    if homograph is not None:
        out.append((HOMOGRAPH, view.raw, f"renders like {homograph}"))

    if is_brand(view, config):
        return out

    th = config.thresholds
    score = randomness_score(skeleton(sld, config.confusables).lower())
    if score >= th.random:
        out.append((RANDOM, verbatim(view.raw, registrable), f"randomness score {score:.2f}"))

    if keywords:
        for word in config.generic_keywords:
            if word in sld:
                out.append((KEYWORD, verbatim(view.raw, registrable), f"generic keyword {word!r}"))
                break

    subdomains = ".".join(split.subdomains)
    for brand in _brand_splits(config):
        bsld = brand.second_level
        if sld != bsld and re.search(rf"(?:^|[-.]){re.escape(bsld)}(?:$|[-.])", sld):
            out.append((BRAND_EXTENSION, verbatim(view.raw, registrable), f"extends brand {brand.registrable_domain}"))
        if subdomains and re.search(rf"(?:^|\.){re.escape(brand.registrable_domain)}(?:$|\.)", subdomains):
            out.append((BRAND_SUBDOMAIN, verbatim(view.raw, brand.registrable_domain),
                        f"brand {brand.registrable_domain} in subdomain of {registrable}"))
        if sld == bsld and split.etld != brand.etld:
            out.append((OTHER_ETLD, verbatim(view.raw, registrable), f"brand label under .{split.etld}"))
        elif homograph is None and sld != bsld:
            dist = mangle_distance(registrable, brand.registrable_domain, config.visual_pairs)
            if 0 < dist <= th.mangle_max:
                out.append((MANGLED, verbatim(view.raw, registrable),
                            f"{dist} edit(s) from {brand.registrable_domain}"))
        if subdomains and (len(subdomains) > th.long_subdomain or address_width > th.visible_width):
            prefix = skeleton(view.decoded[: th.visible_width], config.confusables).lower()
            if bsld in prefix[: len(subdomains)]:
                out.append((LONG, verbatim(view.raw, subdomains[: len(bsld) + 1 + len(brand.etld)]),
                            f"subdomain of {len(subdomains)} characters hides {registrable}"))
    return out
