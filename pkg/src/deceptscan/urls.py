"""URL decomposition, scheme classification and registrable-domain splitting."""

from __future__ import annotations

import ipaddress
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional
from urllib.parse import unquote


class HostKind(str, Enum):
    DNS_NAME = "dns_name"
    IPV4 = "ipv4"
    IPV6 = "ipv6"
    NONE = "none"


class SchemeClass(str, Enum):
    WEB = "web"
    TEL = "tel"
    DATA = "data"
    MAILTO = "mailto"
    CUSTOM = "custom"
    RELATIVE = "relative"


class HostIsSuffixOnly(ValueError):
    """The host is itself a public suffix, so it has no registrable domain."""


# ---------------------------------------------------------------------------
# Public suffix snapshot
# ---------------------------------------------------------------------------

_EMBEDDED_PSL = """\
// minimal snapshot shipped with deceptscan
com
net
org
edu
gov
mil
int
info
biz
io
co
ly
gd
me
eu
de
fr
nl
ru
jp
uk
co.uk
org.uk
ac.uk
gov.uk
co.jp
// wildcard and exception rules
*.ck
!www.ck
*.kawasaki.jp
!city.kawasaki.jp
"""


@dataclass(frozen=True)
class PublicSuffixSnapshot:
    """Public suffix rules in the public-suffix-list line format.

    ``rules`` holds exact suffixes, ``wildcards`` the parent of each ``*.x``
    rule and ``exceptions`` each ``!x`` rule, all lowercased.
    """

    rules: frozenset[str]
    wildcards: frozenset[str] = frozenset()
    exceptions: frozenset[str] = frozenset()
    version_tag: str = "embedded"

    @classmethod
    def parse(cls, text: str, version_tag: str = "custom") -> "PublicSuffixSnapshot":
        rules, wild, exc = set(), set(), set()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith(("//", "#")):
                continue
            rule = line.split()[0].lower().rstrip(".")
            if rule.startswith("!"):
                exc.add(rule[1:])
            elif rule.startswith("*."):
                wild.add(rule[2:])
            else:
                rules.add(rule)
        return cls(frozenset(rules), frozenset(wild), frozenset(exc), version_tag)

    @classmethod
    def from_file(cls, path: str | Path) -> "PublicSuffixSnapshot":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), version_tag=path.name)

    def single_label_suffixes(self) -> frozenset[str]:
        return frozenset(r for r in self.rules if "." not in r)

    def suffix_length(self, labels: list[str]) -> int:
        """Number of trailing labels forming the public suffix (at least 1)."""
        lowered = [lab.lower() for lab in labels]
        n = len(lowered)
        best = 1  # implicit "*" rule
        for i in range(n):
            cand = ".".join(lowered[i:])
            if cand in self.exceptions:
                # an exception rule's suffix is the rule minus its leftmost label
                return n - i - 1
            size = n - i
            if cand in self.rules and size > best:
                best = size
            if i > 0 and cand in self.wildcards and size + 1 > best:
                best = size + 1
        return best


DEFAULT_PSL = PublicSuffixSnapshot.parse(_EMBEDDED_PSL, version_tag="embedded-1")


@dataclass(frozen=True)
class DomainSplit:
    subdomains: tuple[str, ...]
    registrable_domain: str
    etld: str

    @property
    def second_level(self) -> str:
        return self.registrable_domain[: -len(self.etld) - 1]

    def join(self) -> str:
        return ".".join((*self.subdomains, self.registrable_domain))


def split_domain(host: str, psl: PublicSuffixSnapshot = DEFAULT_PSL) -> DomainSplit:
    """Split ``host`` into subdomains, registrable domain and eTLD.

    Label case is preserved; matching is case-insensitive.
    """
    labels = host.split(".")
    k = psl.suffix_length(labels)
    if k >= len(labels):
        raise HostIsSuffixOnly(host)
    etld = ".".join(labels[len(labels) - k:])
    registrable = ".".join(labels[len(labels) - k - 1:])
    return DomainSplit(tuple(labels[: len(labels) - k - 1]), registrable, etld)


def try_split(host: Optional[str], psl: PublicSuffixSnapshot = DEFAULT_PSL) -> Optional[DomainSplit]:
    if not host or "." not in host.strip("."):
        return None
    try:
        return split_domain(host.lower().rstrip("."), psl)
    except HostIsSuffixOnly:
        return None


# ---------------------------------------------------------------------------
# IDNA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdnaResult:
    text: str
    decode_failed: bool = False

    def __str__(self) -> str:
        return self.text


def _decode_ace_label(label: str) -> Optional[str]:
    body = label[4:]
    try:
        decoded = body.encode("ascii").decode("punycode")
    except (UnicodeError, ValueError):
        return None
    if decoded.isascii() or not decoded:
        return None
    if any(unicodedata.category(ch) in ("Cc", "Cs", "Cn") for ch in decoded):
        return None
    # reject non-canonical encodings (the codec accepts some garbage)
    if decoded.encode("punycode").decode("ascii").lower() != body.lower():
        return None
    return decoded


def decode_idna(host: str) -> IdnaResult:
    """Decode ACE (``xn--``) labels; labels that fail to decode stay as they are."""
    failed = False
    out = []
    for label in host.split("."):
        if label[:4].lower() == "xn--":
            decoded = _decode_ace_label(label)
            if decoded is None:
                failed = True
                out.append(label)
            else:
                out.append(decoded)
        else:
            out.append(label)
    return IdnaResult(".".join(out), failed)


# ---------------------------------------------------------------------------
# URL parsing
# ---------------------------------------------------------------------------

_SCHEME_RE = re.compile(r"^([A-Za-z][A-Za-z0-9+.\-]*):")
_AUTHORITY_SCHEMES = frozenset({"http", "https", "ftp", "ftps", "ws", "wss", "file", ""})
_OPAQUE_SPLIT_SCHEMES = frozenset({"mailto"})
_PORT_RE = re.compile(r"^(0|[1-9][0-9]{0,4})$")


@dataclass(frozen=True)
class ParsedUrl:
    scheme: str
    userinfo: Optional[str]
    host: Optional[str]
    host_kind: HostKind
    port: Optional[int]
    path: str
    query: Optional[str]
    fragment: Optional[str]
    decoded_host: Optional[str]
    has_authority: bool = False
    raw_scheme: str = ""

    def reassemble(self) -> str:
        out = []
        if self.raw_scheme:
            out.append(self.raw_scheme + ":")
        if self.has_authority:
            out.append("//")
            if self.userinfo is not None:
                out.append(self.userinfo + "@")
            out.append(self.host or "")
            if self.port is not None:
                out.append(f":{self.port}")
        out.append(self.path)
        if self.query is not None:
            out.append("?" + self.query)
        if self.fragment is not None:
            out.append("#" + self.fragment)
        return "".join(out)

    @property
    def is_absolute(self) -> bool:
        return bool(self.scheme)


def _host_kind(host: str) -> HostKind:
    if not host:
        return HostKind.NONE
    if host.startswith("[") and host.endswith("]"):
        return HostKind.IPV6
    try:
        ipaddress.IPv4Address(host)
    except ValueError:
        return HostKind.DNS_NAME
    return HostKind.IPV4


def _split_tail(rest: str) -> tuple[str, Optional[str], Optional[str]]:
    fragment = query = None
    if "#" in rest:
        rest, fragment = rest.split("#", 1)
    if "?" in rest:
        rest, query = rest.split("?", 1)
    return rest, query, fragment


def decode_host(host: str) -> str:
    """Percent-decode then IDNA-decode a host, lowercased."""
    return decode_idna(unquote(host)).text.lower()


def parse_url(text: str) -> ParsedUrl:
    """Decompose ``text`` into its components without ever failing.

    Only hierarchical schemes get an authority; ``mailto`` keeps its query and
    fragment split; ``tel``, ``data`` and unknown schemes keep everything after
    the colon in ``path``. Userinfo ends at the last ``@`` of the authority.
    """
    m = _SCHEME_RE.match(text)
    raw_scheme = m.group(1) if m else ""
    scheme = raw_scheme.lower()
    rest = text[m.end():] if m else text

    if scheme not in _AUTHORITY_SCHEMES:
        if scheme in _OPAQUE_SPLIT_SCHEMES:
            path, query, fragment = _split_tail(rest)
        else:
            path, query, fragment = rest, None, None
        return ParsedUrl(scheme, None, None, HostKind.NONE, None, path, query, fragment,
                         None, has_authority=False, raw_scheme=raw_scheme)

    rest, query, fragment = _split_tail(rest)
    if not rest.startswith("//"):
        return ParsedUrl(scheme, None, None, HostKind.NONE, None, rest, query, fragment,
                         None, has_authority=False, raw_scheme=raw_scheme)

    rest = rest[2:]
    slash = rest.find("/")
    authority, path = (rest, "") if slash < 0 else (rest[:slash], rest[slash:])
    userinfo = None
    if "@" in authority:
        userinfo, authority = authority.rsplit("@", 1)
    host, port = authority, None
    if not authority.endswith("]") and ":" in authority:
        head, tail = authority.rsplit(":", 1)
        if _PORT_RE.match(tail):
            host, port = head, int(tail)
    kind = _host_kind(host)
    decoded = decode_host(host) if kind is HostKind.DNS_NAME else (host.lower() or None)
    return ParsedUrl(scheme, userinfo, host, kind, port, path, query, fragment, decoded,
                     has_authority=True, raw_scheme=raw_scheme)


def classify_scheme(url: ParsedUrl) -> SchemeClass:
    if url.scheme in ("http", "https"):
        return SchemeClass.WEB
    if url.scheme == "tel":
        return SchemeClass.TEL
    if url.scheme == "data":
        return SchemeClass.DATA
    if url.scheme == "mailto":
        return SchemeClass.MAILTO
    if url.scheme == "":
        return SchemeClass.RELATIVE
    return SchemeClass.CUSTOM


def is_absolute_url(text: str) -> bool:
    """True for ``scheme://...`` strings with a non-empty host."""
    u = parse_url(text.strip())
    return bool(u.scheme) and u.has_authority and bool(u.host)
