"""Unicode-level primitives shared by the detectors.

Confusable skeletons, bidi display simulation, domain-likeness, the mangle
edit distance and a randomness score for DNS labels.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

# ---------------------------------------------------------------------------
# Confusables
# ---------------------------------------------------------------------------

_CURATED_CONFUSABLES: dict[int, str] = {
    # Cyrillic lowercase
    0x0430: "a", 0x0435: "e", 0x043E: "o", 0x0440: "p", 0x0441: "c",
    0x0443: "y", 0x0445: "x", 0x0456: "i", 0x0458: "j", 0x0455: "s",
    0x04BB: "h", 0x0501: "d", 0x051B: "q", 0x051D: "w", 0x04CF: "l",
    0x043A: "k", 0x043C: "m", 0x0442: "t",
    # Cyrillic uppercase
    0x0410: "A", 0x0412: "B", 0x0415: "E", 0x041A: "K", 0x041C: "M",
    0x041D: "H", 0x041E: "O", 0x0420: "P", 0x0421: "C", 0x0422: "T",
    0x0425: "X", 0x0406: "I", 0x0408: "J", 0x0405: "S", 0x04C0: "I",
    # Greek
    0x03B1: "a", 0x03BF: "o", 0x03BD: "v", 0x03C1: "p", 0x03B9: "i",
    0x03BA: "k", 0x03C4: "t", 0x03C5: "u", 0x0391: "A", 0x0392: "B",
    0x0395: "E", 0x0396: "Z", 0x0397: "H", 0x0399: "I", 0x039A: "K",
    0x039C: "M", 0x039D: "N", 0x039F: "O", 0x03A1: "P", 0x03A4: "T",
    0x03A5: "Y", 0x03A7: "X",
    # Latin look-alikes and punctuation
    0x0131: "i", 0x0261: "g", 0x2010: "-", 0x2011: "-", 0x2012: "-",
    0x2013: "-", 0x2212: "-", 0x2024: ".", 0x3002: ".", 0xFF61: ".",
    0x2044: "/", 0x2215: "/",
}
# Fullwidth ASCII block, U+FF01..U+FF5E (includes U+FF20 FULLWIDTH COMMERCIAL AT).
_CURATED_CONFUSABLES.update({0xFF01 + i: chr(0x21 + i) for i in range(0x5E)})


@dataclass(frozen=True)
class ConfusableTable:
    """Code point to ASCII replacement mapping used by :func:`skeleton`."""

    mapping: Mapping[str, str]

    def __post_init__(self) -> None:
        for key, value in self.mapping.items():
            if len(key) != 1 or key.isascii():
                raise ValueError(f"confusable key must be one non-ASCII code point: {key!r}")
            if not value.isascii():
                raise ValueError(f"replacement for U+{ord(key):04X} is not ASCII")

    def extended(self, extra: Mapping[str, str]) -> "ConfusableTable":
        merged = dict(self.mapping)
        merged.update(extra)
        return ConfusableTable(merged)

    @classmethod
    def from_file(cls, path: str | Path, base: "ConfusableTable | None" = None) -> "ConfusableTable":
        """Load ``U+XXXX<TAB>replacement`` lines on top of ``base``."""
        extra: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].upper().startswith("U+"):
                raise ValueError(f"{path}:{lineno}: expected 'U+XXXX<TAB>replacement'")
            extra[chr(int(parts[0][2:], 16))] = parts[1]
        return (base or DEFAULT_CONFUSABLES).extended(extra)


DEFAULT_CONFUSABLES = ConfusableTable({chr(cp): rep for cp, rep in _CURATED_CONFUSABLES.items()})


def skeleton_map(s: str, table: ConfusableTable = DEFAULT_CONFUSABLES) -> tuple[str, list[int], bool]:
    """Skeletonize ``s`` and keep track of where each output char came from.

    Returns ``(skeleton, origin, residue)`` where ``origin[i]`` is the index in
    ``s`` that produced skeleton character ``i`` and ``residue`` is true when a
    non-ASCII code point had no mapping.
    """
    out: list[str] = []
    origin: list[int] = []
    residue = False
    mapping = table.mapping
    for i, ch in enumerate(s):
        rep = mapping.get(ch)
        if rep is None:
            if not ch.isascii():
                residue = True
            rep = ch
        out.append(rep)
        origin.extend([i] * len(rep))
    return "".join(out), origin, residue


def skeleton(s: str, table: ConfusableTable = DEFAULT_CONFUSABLES) -> str:
    return skeleton_map(s, table)[0]


def has_residue(s: str, table: ConfusableTable = DEFAULT_CONFUSABLES) -> bool:
    """True if ``s`` keeps non-ASCII code points after skeletonization."""
    return skeleton_map(s, table)[2]


# ---------------------------------------------------------------------------
# Bidi display simulation
# ---------------------------------------------------------------------------

RLO = "\u202e"
LRO = "\u202d"
PDF = "\u202c"
RLE = "\u202b"
LRE = "\u202a"
_ISOLATES = frozenset("\u2066\u2067\u2068\u2069")
_MARKS = frozenset("\u200e\u200f\u061c")
BIDI_CONTROLS = frozenset({RLO, LRO, PDF, RLE, LRE}) | _ISOLATES | _MARKS


@dataclass(frozen=True)
class BidiRendering:
    displayed: str
    had_controls: bool
    control_positions: tuple[int, ...] = field(default=())


class _Scope:
    __slots__ = ("reverse", "items")

    def __init__(self, reverse: bool) -> None:
        self.reverse = reverse
        self.items: list[str] = []

    def render(self) -> str:
        return "".join(reversed(self.items) if self.reverse else self.items)


def bidi_render(s: str) -> BidiRendering:
    """Simulate display order for override controls.

    Characters inside an RLO scope are shown reversed; an LRO scope keeps
    logical order. A nested scope is placed as one block in its parent.
    Embeddings, isolates and marks are removed without reordering.
    """
    positions: list[int] = []
    stack = [_Scope(reverse=False)]
    for i, ch in enumerate(s):
        if ch not in BIDI_CONTROLS:
            stack[-1].items.append(ch)
            continue
        positions.append(i)
        if ch in (RLO, LRO):
            stack.append(_Scope(reverse=ch == RLO))
        elif ch == PDF and len(stack) > 1:
            block = stack.pop().render()
            stack[-1].items.append(block)
    while len(stack) > 1:
        block = stack.pop().render()
        stack[-1].items.append(block)
    return BidiRendering(stack[0].render(), bool(positions), tuple(positions))


def strip_bidi(s: str) -> str:
    return "".join(ch for ch in s if ch not in BIDI_CONTROLS)


# ---------------------------------------------------------------------------
# Domain-likeness
# ---------------------------------------------------------------------------

_LABEL = r"[a-z0-9](?:[a-z0-9-]*[a-z0-9])?"
_DOMAIN_RE = re.compile(rf"^(?:{_LABEL}\.)+({_LABEL})$", re.IGNORECASE)

# single-label suffixes recognised without a snapshot
_DEFAULT_TLDS = frozenset(
    "com net org edu gov mil int info biz io co ly gd me de uk fr nl eu ru jp".split()
)


def looks_like_domain(s: str, tlds: Iterable[str] | None = None,
                      table: ConfusableTable = DEFAULT_CONFUSABLES) -> bool:
    """True if ``s`` reads as ``label(.label)+`` with a plausible final label."""
    m = _DOMAIN_RE.match(skeleton(s, table))
    if not m:
        return False
    last = m.group(1).lower()
    known = _DEFAULT_TLDS if tlds is None else {t.lower() for t in tlds}
    return last in known or (last.isascii() and last.isalpha() and 2 <= len(last) <= 6)


# ---------------------------------------------------------------------------
# Mangle distance
# ---------------------------------------------------------------------------

DEFAULT_VISUAL_PAIRS: tuple[tuple[str, str], ...] = (
    ("g", "q"), ("rn", "m"), ("l", "1"), ("0", "o"),
)


def _expand_pairs(pairs: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    for a, b in pairs:
        out.append((a, b))
        out.append((b, a))
    return out


def mangle_distance(candidate: str, brand: str,
                    pairs: Iterable[tuple[str, str]] = DEFAULT_VISUAL_PAIRS) -> int:
    """Edit distance tuned to look-alike domains.

    Optimal-string-alignment Damerau-Levenshtein (insert, delete, substitute,
    adjacent transposition) plus unit-cost replacement of one member of a
    visually similar pair with the other, which may differ in length
    (``rn`` <-> ``m``). Doubling a character is an insertion and costs 1.
    """
    a, b = candidate, brand
    if a == b:
        return 0
    rules = _expand_pairs(pairs)
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                best = min(best, d[i - 2][j - 2] + 1)
            for src, dst in rules:
                ls, ld = len(src), len(dst)
                if ls <= i and ld <= j and a[i - ls:i] == src and b[j - ld:j] == dst:
                    best = min(best, d[i - ls][j - ld] + 1)
            d[i][j] = best
    return d[n][m]


# ---------------------------------------------------------------------------
# Randomness score
# ---------------------------------------------------------------------------

# Letter bigram tiers ranked by frequency in a large English technical text.
_COMMON_BIGRAMS = frozenset(
    """
    ab ac ad ag ai ak al am an ap ar as at au av ax ay ba bc be bi bj bl bo
    br bs bu by ca cc ce ch ci ck cl co cr ct cu da dd de di dl do ds du ea
    eb ec ed ee ef eg ei el em en ep eq er es et ev ew ex ey fa fe ff fi fl
    fo fr ft fu ga ge gh gi gl gn gr gs gu ha he hi ho hr ia ib ic id ie if
    ig il im in io ip ir is it iv iz je ke la ld le lf li ll lo ls lt lu ly
    ma mb me mi mm mo mp ms mu na nc nd ne ng ni nl nm nn no ns nt nu nv ny
    oa ob oc od oe of og oi ok ol om on oo op or os ot ou ov ow pa pe pi pl
    po pp pr pt py qu ra rc rd re rg ri rm rn ro rp rr rs rt ru rw ry sa sc
    se sh si sl so sp ss st su sy ta tc te th ti tl to tr ts tt tu tw ty ua
    ub uc ud ue ug ui ul um un up ur us ut va ve vi wa we wh wi wo xa xc xe
    xi xp xt yi yn yp ys yt yw ze
    """.split()
)
_UNCOMMON_BIGRAMS = frozenset(
    """
    ae af aw az bd bp bt cm cp cs cy db dc dt dv dy eh eo fp fy gc gg gm go
    gp gt hl hm ht hu hy ii ik ix ju ka kg ki kn kp kr ks ku kw lc lg lp lr
    lv lw mr mt my nb nf nh np ox oz pd ph pn ps pu rb rf rk rl rv sf sk sm
    sn sq sw tb td tf tm tn tp uf uo vm vo wl wn wr ws ww xo xs xx yc ye yl
    ym yo za zi
    """.split()
)
_RARE_BIGRAMS = frozenset(
    """
    ah aq bb bm bn cd cn cq dj dm dn dr dx ej ek eu fb fg fk gb gf gv hf hh
    hn hs iq ja jc jo kc kl lb lk lm ln mc md mk ml mn nj nk nr nw nz oy pc
    pf pk pm rh rx sd sj tv tx uk ux vs wd wz xd xh xy ya yb yv zf zo
    """.split()
)

_CONSONANT_RUN = re.compile(r"[b-df-hj-np-tv-xz]{4,}")
# total penalty 3.0 maps to a score of exactly 0.75
_SCORE_SCALE = 3.0 / math.log(4.0)


def _bigram_penalty(pair: str) -> float:
    if pair in _COMMON_BIGRAMS:
        return 0.0
    if pair in _UNCOMMON_BIGRAMS:
        return 0.5
    if pair in _RARE_BIGRAMS:
        return 1.0
    return 1.5


def randomness_penalty(label: str) -> float:
    """Raw, unbounded penalty behind :func:`randomness_score`."""
    total = 0.0
    for seg in re.split(r"[-_]", label.lower()):
        for x, y in zip(seg, seg[1:]):
            xa, ya = x.isalpha(), y.isalpha()
            if xa and ya:
                total += _bigram_penalty(x + y)
            elif xa != ya:
                total += 1.0
        total += 0.5 * sum(ch.isdigit() for ch in seg)
        for run in _CONSONANT_RUN.findall(seg):
            total += 0.5 * (len(run) - 3)
    return total


def randomness_score(label: str) -> float:
    """Heuristic in [0, 1] for how much a DNS label resembles random characters.

    Every term of the penalty is non-negative and tied to a position in the
    label, so appending characters can only raise the score.
    """
    return 1.0 - math.exp(-randomness_penalty(label) / _SCORE_SCALE)
