"""Parse raw RFC 5322 / MIME messages into the indicator model.

The model exposes what a recipient judges trust by: the sender identity
from ``From``, every link-like element of the HTML body, and attachment
filenames. Parsing is lenient; only a missing header/body separator fails.
"""

from __future__ import annotations

import email
import email.policy
import re
from dataclasses import dataclass, field
from email.header import decode_header
from enum import Enum
from html.parser import HTMLParser
from typing import Optional
from urllib.parse import urljoin

from .urls import parse_url


class HeaderSectionMissing(ValueError):
    """Raised when no blank line separates the header section from the body."""


class LinkKind(str, Enum):
    ANCHOR = "anchor"
    FORM_SUBMIT = "form_submit"
    IMAGE_LINK = "image_link"
    INLINE_IMAGE = "inline_image"


class RefKind(str, Enum):
    STYLESHEET = "stylesheet"
    IMAGE = "image"
    OTHER = "other"


@dataclass(frozen=True)
class SenderIdentity:
    present: bool
    display_name: Optional[str] = None
    address: Optional[str] = None
    local_part: Optional[str] = None
    host: Optional[str] = None
    authentication_results: Optional[str] = None
    return_path_host: Optional[str] = None
    raw_value: Optional[str] = None
    raw_display_name: Optional[str] = None


@dataclass(frozen=True)
class LinkInstance:
    source_index: int
    kind: LinkKind
    href_raw: Optional[str]
    href_effective: Optional[str]
    anchor_text: str
    title_attr: Optional[str] = None
    base_applied: bool = False
    styled_as_link: bool = False
    style_attr: Optional[str] = None
    image_only: bool = False
    block_text: str = ""


@dataclass(frozen=True)
class AttachmentMeta:
    index: int
    filename_raw: str
    declared_mime: Optional[str]
    size_bytes: int


@dataclass(frozen=True)
class ExternalRef:
    kind: RefKind
    url: str
    local: bool


@dataclass(frozen=True)
class EmailMessage:
    raw_bytes: bytes = field(repr=False, compare=False)
    headers: tuple[tuple[str, str], ...]
    sender: SenderIdentity
    body_html: Optional[str]
    body_text: Optional[str]
    links: tuple[LinkInstance, ...]
    attachments: tuple[AttachmentMeta, ...]
    external_refs: tuple[ExternalRef, ...]
    html_parts: tuple[str, ...] = ()

    def header(self, name: str) -> Optional[str]:
        lname = name.lower()
        for key, value in self.headers:
            if key.lower() == lname:
                return value
        return None

    def header_all(self, name: str) -> list[str]:
        lname = name.lower()
        return [v for k, v in self.headers if k.lower() == lname]


# ---------------------------------------------------------------------------
# Local-path grammar
# ---------------------------------------------------------------------------

_FILE_SCHEME = re.compile(r"^\s*file:", re.IGNORECASE)
_DRIVE_PATH = re.compile(r"^\s*[A-Za-z]:\\")


def is_local_reference(url: str, image_or_source: bool) -> bool:
    """``file:`` URLs, ``C:\\`` paths, and rooted ``/`` paths in image/source attributes."""
    if _FILE_SCHEME.match(url) or _DRIVE_PATH.match(url):
        return True
    stripped = url.strip()
    return image_or_source and stripped.startswith("/") and not stripped.startswith("//")


# ---------------------------------------------------------------------------
# HTML scanning
# ---------------------------------------------------------------------------

_BLOCK_TAGS = frozenset(
    "p div td th li ul ol table tr body html section article header footer "
    "blockquote center h1 h2 h3 h4 h5 h6 form".split()
)
_VOID_SKIP = frozenset({"script", "style", "title", "head"})
_CSS_IMPORT = re.compile(r"""@import\s+(?:url\(\s*)?["']?([^"')\s;]+)""", re.IGNORECASE)
_CSS_URL = re.compile(r"""url\(\s*["']?([^"')]+?)["']?\s*\)""", re.IGNORECASE)
_LINK_STYLE = re.compile(r"underline|color\s*:\s*(blue|#00f\b|#0000ee|#0000ff|#00e\b)", re.IGNORECASE)
_WS = re.compile(r"\s+")


def _norm_text(s: str) -> str:
    return _WS.sub(" ", s).strip()


class _Block:
    __slots__ = ("tag", "text", "images")

    def __init__(self, tag: str) -> None:
        self.tag = tag
        self.text: list[str] = []
        self.images: list[dict] = []


class _LinkScanner(HTMLParser):
    """Forgiving single-pass scanner; link records are resolved in ``finish``."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.records: list[dict] = []
        self.refs: list[tuple[RefKind, str, bool]] = []
        self.base_href: Optional[str] = None
        self._anchor: Optional[dict] = None
        self._form: Optional[dict] = None
        self._button: Optional[dict] = None
        self._blocks: list[_Block] = [_Block("#root")]
        self._skip: Optional[str] = None
        self._style_buf: list[str] = []

    # -- helpers -------------------------------------------------------
    def _new_record(self, kind: LinkKind, href: Optional[str], **extra) -> dict:
        rec = {"kind": kind, "href": href, "text": [], "title": None, "styled": False,
               "style": None, "has_image": False, "alt": [], "block": None}
        rec.update(extra)
        self.records.append(rec)
        return rec

    def _add_ref(self, kind: RefKind, url: Optional[str], image_or_source: bool) -> None:
        if not url:
            return
        low = url.strip().lower()
        if low.startswith(("cid:", "data:", "mid:", "#")):
            return
        self.refs.append((kind, url.strip(), is_local_reference(url, image_or_source)))

    def _close_anchor(self) -> None:
        self._anchor = None

    def _close_block(self, block: _Block) -> None:
        text = _norm_text(" ".join(block.text))
        for rec in block.images:
            rec["block"] = text

    # -- HTMLParser callbacks -------------------------------------------
    def handle_starttag(self, tag: str, attrs_list) -> None:
        attrs = {k.lower(): (v if v is not None else "") for k, v in attrs_list}
        if self._skip:
            return
        if tag in _VOID_SKIP and tag != "head":
            if tag == "style":
                self._style_buf = []
            self._skip = tag
            return
        style = attrs.get("style")
        if style:
            for url in _CSS_URL.findall(style):
                self._add_ref(RefKind.IMAGE, url, True)

        if tag in _BLOCK_TAGS:
            self._blocks.append(_Block(tag))
        if tag == "base" and "href" in attrs and self.base_href is None:
            self.base_href = attrs["href"]
        elif tag == "a":
            self._close_anchor()
            if "href" in attrs:
                self._anchor = self._new_record(LinkKind.ANCHOR, attrs["href"],
                                                title=attrs.get("title"), style=style)
        elif tag == "img":
            src = attrs.get("src")
            self._add_ref(RefKind.IMAGE, src, True)
            if self._anchor is not None:
                self._anchor["has_image"] = True
                if attrs.get("alt"):
                    self._anchor["alt"].append(attrs["alt"])
                if style:
                    self._anchor["style"] = ";".join(filter(None, [self._anchor["style"], style]))
            else:
                rec = self._new_record(LinkKind.INLINE_IMAGE, src, title=attrs.get("title"), style=style)
                if attrs.get("alt"):
                    rec["text"].append(attrs["alt"])
                self._blocks[-1].images.append(rec)
        elif tag == "link":
            rel = attrs.get("rel", "").lower().split()
            kind = RefKind.STYLESHEET if "stylesheet" in rel else RefKind.OTHER
            self._add_ref(kind, attrs.get("href"), False)
        elif tag == "form":
            self._form = {"action": attrs.get("action")}
        elif tag in ("input", "button"):
            typ = attrs.get("type", "submit" if tag == "button" else "text").lower()
            if tag == "input" and typ == "image":
                self._add_ref(RefKind.IMAGE, attrs.get("src"), True)
            if self._form is not None and typ in ("submit", "image"):
                styled = bool(_LINK_STYLE.search(style or "")) or "link" in attrs.get("class", "").lower()
                rec = self._new_record(LinkKind.FORM_SUBMIT, self._form["action"],
                                       title=attrs.get("title"), styled=styled, style=style)
                if tag == "input":
                    rec["text"].append(attrs.get("value", "") or attrs.get("alt", ""))
                else:
                    self._button = rec
        elif tag in ("source", "video", "audio", "embed", "iframe", "frame", "script", "object"):
            url = attrs.get("src") or attrs.get("data") or attrs.get("poster")
            self._add_ref(RefKind.OTHER if tag != "source" else RefKind.IMAGE, url, tag == "source")
        if tag in ("body", "table", "td", "th", "tr") and attrs.get("background"):
            self._add_ref(RefKind.IMAGE, attrs["background"], True)

    def handle_startendtag(self, tag, attrs) -> None:
        self.handle_starttag(tag, attrs)
        if tag in _BLOCK_TAGS or tag in ("a", "button", "form"):
            self.handle_endtag(tag)

    def handle_endtag(self, tag: str) -> None:
        if self._skip:
            if tag == self._skip:
                if tag == "style":
                    css = "".join(self._style_buf)
                    for url in _CSS_IMPORT.findall(css):
                        self._add_ref(RefKind.STYLESHEET, url, False)
                self._skip = None
            return
        if tag == "a":
            self._close_anchor()
        elif tag == "button":
            self._button = None
        elif tag == "form":
            self._form = None
        if tag in _BLOCK_TAGS:
            for i in range(len(self._blocks) - 1, 0, -1):
                if self._blocks[i].tag == tag:
                    for block in reversed(self._blocks[i:]):
                        self._close_block(block)
                    del self._blocks[i:]
                    break

    def handle_data(self, data: str) -> None:
        if self._skip:
            if self._skip == "style":
                self._style_buf.append(data)
            return
        if self._anchor is not None:
            self._anchor["text"].append(data)
        if self._button is not None:
            self._button["text"].append(data)
        for block in self._blocks:
            block.text.append(data)

    def finish(self) -> None:
        self.close()
        for block in reversed(self._blocks):
            self._close_block(block)
        self._blocks = []


def _is_relative(href: str) -> bool:
    return parse_url(href.strip()).scheme == ""


def extract_links(html: str, base: Optional[str] = None, start_index: int = 0) -> list[LinkInstance]:
    """Collect anchors, form submit controls and images from ``html``.

    A ``<base href>`` in the document wins over ``base``. Relative hrefs are
    resolved against the base; without one they have no effective target.
    """
    scanner = _LinkScanner()
    try:
        scanner.feed(html)
        scanner.finish()
    except Exception:  # noqa: BLE001 - hostile markup must never abort a scan
        pass
    return _build_links(scanner, base, start_index)


def _build_links(scanner: _LinkScanner, base: Optional[str], start_index: int) -> list[LinkInstance]:
    base_href = scanner.base_href.strip() if scanner.base_href else (base.strip() if base else None)
    out: list[LinkInstance] = []
    for i, rec in enumerate(scanner.records):
        href = rec["href"]
        effective: Optional[str] = None
        applied = False
        if href is not None:
            stripped = href.strip()
            if _is_relative(stripped):
                if base_href and not _is_relative(base_href):
                    effective = urljoin(base_href, stripped)
                    applied = True
            else:
                effective = stripped
        kind = rec["kind"]
        text = _norm_text("".join(rec["text"]))
        image_only = False
        if kind is LinkKind.ANCHOR and rec["has_image"]:
            kind = LinkKind.IMAGE_LINK
            image_only = not text
            if not text:
                text = _norm_text(" ".join(rec["alt"]))
        out.append(LinkInstance(
            source_index=start_index + i,
            kind=kind,
            href_raw=href,
            href_effective=effective,
            anchor_text=text,
            title_attr=rec["title"],
            base_applied=applied,
            styled_as_link=rec["styled"],
            style_attr=rec["style"],
            image_only=image_only,
            block_text=rec["block"] or "",
        ))
    return out


def _scan_html(html: str, start_index: int) -> tuple[list[LinkInstance], list[ExternalRef]]:
    scanner = _LinkScanner()
    try:
        scanner.feed(html)
        scanner.finish()
    except Exception:  # noqa: BLE001
        pass
    links = _build_links(scanner, None, start_index)
    refs = [ExternalRef(kind, url, local) for kind, url, local in scanner.refs]
    return links, refs


# ---------------------------------------------------------------------------
# Headers and sender
# ---------------------------------------------------------------------------

def _split_header_section(raw: bytes) -> tuple[bytes, bytes]:
    candidates = [(raw.find(sep), sep) for sep in (b"\r\n\r\n", b"\n\n")]
    found = [(pos, sep) for pos, sep in candidates if pos >= 0]
    if not found:
        raise HeaderSectionMissing("no blank line between header section and body")
    pos, sep = min(found)
    return raw[:pos], raw[pos + len(sep):]


def _decode_line(line: bytes) -> str:
    try:
        return line.decode("utf-8")
    except UnicodeDecodeError:
        return line.decode("latin-1")


def parse_headers(section: bytes) -> list[tuple[str, str]]:
    headers: list[list[str]] = []
    for raw_line in section.split(b"\n"):
        line = _decode_line(raw_line.rstrip(b"\r"))
        if not line:
            continue
        if line[0] in " \t":
            if headers:
                headers[-1][1] += line
            continue
        name, sep, value = line.partition(":")
        if not sep or not name or " " in name:
            continue  # mbox "From " line or garbage
        headers.append([name, value.lstrip(" \t")])
    return [(name, value) for name, value in headers]


def decode_words(value: str) -> str:
    """Decode RFC 2047 encoded words, leaving undecodable chunks verbatim."""
    if "=?" not in value:
        return value
    try:
        parts = decode_header(value)
    except Exception:  # noqa: BLE001
        return value
    out = []
    for chunk, charset in parts:
        if isinstance(chunk, bytes):
            try:
                out.append(chunk.decode(charset or "ascii", errors="replace"))
            except LookupError:
                out.append(chunk.decode("utf-8", errors="replace"))
        else:
            out.append(chunk)
    return "".join(out)


def _unquote_display(name: str) -> str:
    name = name.strip()
    if len(name) >= 2 and name[0] == '"' and name[-1] == '"':
        name = re.sub(r"\\(.)", r"\1", name[1:-1])
    return name


_COMMENT_TAIL = re.compile(r"\s*\([^()]*\)\s*$")


def parse_sender(value: Optional[str], auth: Optional[str] = None,
                 return_path: Optional[str] = None) -> SenderIdentity:
    """Split a ``From`` value into display name and addr-spec."""
    rp_host = None
    if return_path:
        rp = return_path.strip().strip("<>").strip()
        if "@" in rp:
            rp_host = rp.rsplit("@", 1)[1]
    if value is None:
        return SenderIdentity(present=False, authentication_results=auth, return_path_host=rp_host)

    raw_display = None
    lt = value.rfind("<")
    gt = value.find(">", lt + 1) if lt >= 0 else -1
    if lt >= 0 and gt > lt:
        raw_display = value[:lt].strip() or None
        addr = value[lt + 1:gt].strip()
    else:
        addr = _COMMENT_TAIL.sub("", value).strip()
    display = decode_words(_unquote_display(raw_display)) if raw_display else None

    local = host = address = None
    if "@" in addr:
        local, host = addr.rsplit("@", 1)
        address = addr
    return SenderIdentity(
        present=True,
        display_name=display or None,
        address=address,
        local_part=local,
        host=host,
        authentication_results=auth,
        return_path_host=rp_host,
        raw_value=value,
        raw_display_name=raw_display,
    )


# ---------------------------------------------------------------------------
# MIME body
# ---------------------------------------------------------------------------

def _part_bytes(part) -> bytes:
    cte = (part.get("Content-Transfer-Encoding") or "").strip().lower()
    if cte in ("base64", "quoted-printable"):
        data = part.get_payload(decode=True)
        return data if isinstance(data, bytes) else b""
    payload = part.get_payload()
    if not isinstance(payload, str):
        return b""
    return payload.encode("utf-8", "surrogateescape")


def _part_text(part) -> str:
    data = _part_bytes(part)
    charset = part.get_content_charset() or "utf-8"
    try:
        return data.decode(charset, errors="replace")
    except LookupError:
        return data.decode("utf-8", errors="replace")


def _clean(s: str) -> str:
    # surrogate escapes come from undecodable bytes
    return s.encode("utf-8", "surrogateescape").decode("utf-8", "replace")


def _filename(part) -> Optional[str]:
    try:
        name = part.get_filename()
    except Exception:  # noqa: BLE001
        name = None
    if name is None:
        return None
    name = _clean(name)
    if "=?" in name:
        name = decode_words(name)
    return name


def parse_message(raw: bytes) -> EmailMessage:
    """Parse raw message bytes into an :class:`EmailMessage`."""
    if not raw:
        raise HeaderSectionMissing("empty input")
    section, _ = _split_header_section(raw)
    headers = parse_headers(section)

    def first(name: str) -> Optional[str]:
        lname = name.lower()
        return next((v for k, v in headers if k.lower() == lname), None)

    sender = parse_sender(first("From"), first("Authentication-Results"), first("Return-Path"))

    body_html = body_text = None
    html_parts: list[str] = []
    links: list[LinkInstance] = []
    refs: list[ExternalRef] = []
    attachments: list[AttachmentMeta] = []
    try:
        msg = email.message_from_string(raw.decode("utf-8", "surrogateescape"),
                                        policy=email.policy.compat32)
        parts = list(msg.walk())
    except Exception:  # noqa: BLE001
        parts = []

    for part in parts:
        if part.is_multipart():
            continue
        ctype = part.get_content_type()
        disposition = (part.get("Content-Disposition") or "").split(";")[0].strip().lower()
        filename = _filename(part)
        is_attachment = disposition == "attachment" or (
            disposition != "inline" and filename is not None and not ctype.startswith("text/"))
        if is_attachment:
            attachments.append(AttachmentMeta(
                index=len(attachments),
                filename_raw=filename or "",
                declared_mime=part.get("Content-Type") and ctype,
                size_bytes=len(_part_bytes(part)),
            ))
            continue
        if ctype == "text/html":
            html = _part_text(part)
            html_parts.append(html)
            if body_html is None:
                body_html = html
            new_links, new_refs = _scan_html(html, len(links))
            links.extend(new_links)
            refs.extend(new_refs)
        elif ctype == "text/plain" and body_text is None:
            body_text = _part_text(part)

    if not parts:
        _, body = _split_header_section(raw)
        body_text = body.decode("utf-8", "replace")

    return EmailMessage(
        raw_bytes=raw,
        headers=tuple(headers),
        sender=sender,
        body_html=body_html,
        body_text=body_text,
        links=tuple(links),
        attachments=tuple(attachments),
        external_refs=tuple(refs),
        html_parts=tuple(html_parts),
    )
