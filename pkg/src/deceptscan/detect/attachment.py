"""Attachment rules ATT-01 to ATT-05b."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..config import RuleConfig
from ..findings import Confidence, Finding, make_finding
from ..message import EmailMessage
from ..text import bidi_render, looks_like_domain, mangle_distance, strip_bidi

_RUNNABLE = frozenset({"executable", "script"})
_BENIGN = frozenset({"document", "image"})
_PADDING = re.compile(r"\s{8,}")


@dataclass(frozen=True)
class ExtensionChain:
    base: str
    extensions: tuple[str, ...]
    displayed_extension: str
    actual_extension: str


def _last_extension(name: str) -> str:
    return name.rsplit(".", 1)[1].lower() if "." in name else ""


def extension_chain(filename: str) -> ExtensionChain:
    """Split a filename into base and dot-separated extensions.

    Bidi controls are stripped for the actual chain; the displayed extension
    is taken from the simulated rendering. Whitespace is kept, so
    ``"a.pdf   .exe"`` has the extensions ``("pdf   ", "exe")``.
    """
    plain = strip_bidi(filename)
    base, *exts = plain.split(".")
    extensions = tuple(e.lower() for e in exts)
    return ExtensionChain(
        base=base,
        extensions=extensions,
        displayed_extension=_last_extension(bidi_render(filename).displayed),
        actual_extension=extensions[-1] if extensions else "",
    )


def _mangled_target(ext: str, config: RuleConfig) -> str | None:
    # documents first: ".pif" should read as ".pdf", not ".gif"
    ranked = sorted(config.executable_extensions.items(), key=lambda kv: (kv[1] != "document", kv[0]))
    for candidate, cls in ranked:
        if cls in _BENIGN and 0 < mangle_distance(ext, candidate, config.visual_pairs) <= 1:
            return candidate
    return None


def _check(index: int, filename: str, config: RuleConfig) -> list[Finding]:
    loc = f"attachment[{index}]"
    out: list[Finding] = []
    chain = extension_chain(filename)
    actual = chain.actual_extension
    actual_cls = config.risk_class(actual) if actual else "other"
    runnable = actual_cls in _RUNNABLE

    if runnable and len(chain.extensions) >= 2:
        decoys = [e for e in chain.extensions[:-1] if config.risk_class(e) in _BENIGN]
        if decoys:
            out.append(make_finding("ATT-01", loc, f".{decoys[-1]}.{actual}",
                                    f"{actual} file disguised with a .{decoys[-1]} extension"))

    plain = strip_bidi(filename)
    domain_like = runnable and actual in config.psl.single_label_suffixes() \
        and looks_like_domain(plain, config.psl.single_label_suffixes(), config.confusables)
    if domain_like:
        out.append(make_finding("ATT-03", loc, plain,
                                f"executable .{actual} name reads as a domain"))

    mangled = None
    if actual and actual_cls in (_RUNNABLE | {"other"}):
        mangled = _mangled_target(actual, config)
        if mangled is not None:
            out.append(make_finding("ATT-04", loc, f".{actual}",
                                    f".{actual} is one edit away from .{mangled}"))

    if runnable and not domain_like and mangled is None and actual not in config.familiar_executables:
        out.append(make_finding("ATT-02", loc, f".{actual}",
                                f"uncommon {actual_cls} type .{actual}"))

    if len(filename) > config.thresholds.visible_width and "." in filename:
        head = filename[: filename.rfind(".")]
        pad = _PADDING.search(head)
        if pad is not None:
            out.append(make_finding("ATT-05a", loc, filename[: pad.start()],
                                    f"{pad.end() - pad.start()} whitespace characters push .{actual} out of view",
                                    Confidence.HEURISTIC))

    rendering = bidi_render(filename)
    if rendering.had_controls:
        if chain.displayed_extension != actual:
            out.append(make_finding("ATT-05b", loc, rendering.displayed,
                                    f"displayed as .{chain.displayed_extension} but is .{actual}"))
        else:
            out.append(make_finding("ATT-05b", loc, rendering.displayed,
                                    "bidi control characters in filename; extension unchanged",
                                    Confidence.HEURISTIC))
    return out


def detect_attachments(msg: EmailMessage, config: RuleConfig) -> list[Finding]:
    out: list[Finding] = []
    for att in msg.attachments:
        out.extend(_check(att.index, att.filename_raw, config))
    return out
