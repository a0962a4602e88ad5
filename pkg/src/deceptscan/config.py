"""Rule configuration: protected brands, lookup lists, thresholds and tables.

Config files are INI documents read with :mod:`configparser`::

    [deceptscan]
    brand_domains = trusted-page.com, example.org
    random = 0.8
    psl_file = /etc/deceptscan/public_suffix_list.dat

    [extensions]
    hta = script

Every field has a default, so the scanner runs without a file.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

from .text import DEFAULT_CONFUSABLES, DEFAULT_VISUAL_PAIRS, ConfusableTable
from .urls import DEFAULT_PSL, PublicSuffixSnapshot

CONFIG_ENV_VAR = "DECEPTSCAN_CONFIG"

RISK_CLASSES = ("executable", "script", "document", "image", "other")

DEFAULT_EXTENSIONS: dict[str, str] = {
    "exe": "executable", "scr": "executable", "pif": "executable",
    "com": "executable", "bat": "executable", "cmd": "executable",
    "js": "script", "jar": "script", "vbs": "script",
    "pdf": "document", "docx": "document", "doc": "document",
    "txt": "document", "xlsx": "document",
    "jpg": "image", "jpeg": "image", "png": "image", "gif": "image",
}


class ConfigError(ValueError):
    """Invalid configuration file or value."""


@dataclass(frozen=True)
class Thresholds:
    visible_width: int = 60
    long_subdomain: int = 40
    random: float = 0.75
    mangle_max: int = 1

    def __post_init__(self) -> None:
        for name in ("visible_width", "long_subdomain", "random", "mangle_max"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"threshold {name} must be positive")
        if self.random > 1:
            raise ConfigError("threshold random must be in (0, 1]")


@dataclass(frozen=True)
class RuleConfig:
    brand_domains: tuple[str, ...] = ("trusted-page.com",)
    shortener_domains: tuple[str, ...] = (
        "bit.ly", "tinyurl.com", "t.co", "goo.gl", "ow.ly", "is.gd", "shortener.com",
    )
    redirect_param_names: tuple[str, ...] = ("url", "u", "redirect", "redirect-to", "page", "dest")
    executable_extensions: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_EXTENSIONS))
    familiar_executables: tuple[str, ...] = ("exe",)
    premium_prefixes: tuple[str, ...] = ("0900", "+49900", "0049900", "1900", "+1900", "1-900")
    generic_keywords: tuple[str, ...] = ("mail", "login", "secure", "account", "provider")
    scan_prompts: tuple[str, ...] = ("scan", "qr")
    credential_keywords: tuple[str, ...] = ("password", "passwort", "credentials")
    visual_pairs: tuple[tuple[str, str], ...] = DEFAULT_VISUAL_PAIRS
    thresholds: Thresholds = Thresholds()
    psl: PublicSuffixSnapshot = DEFAULT_PSL
    confusables: ConfusableTable = DEFAULT_CONFUSABLES
    disabled_rules: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for dom in self.brand_domains:
            if dom != dom.lower():
                raise ConfigError(f"brand domain must be lowercase: {dom}")
        for ext, cls in self.executable_extensions.items():
            if cls not in RISK_CLASSES:
                raise ConfigError(f"unknown risk class {cls!r} for extension {ext!r}")

    def risk_class(self, extension: str) -> str:
        return self.executable_extensions.get(extension.lower(), "other")


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

_LIST_KEYS = {
    "brand_domains", "shortener_domains", "redirect_param_names", "familiar_executables",
    "premium_prefixes", "generic_keywords", "scan_prompts", "credential_keywords",
}
_THRESHOLD_KEYS = {"visible_width": int, "long_subdomain": int, "random": float, "mangle_max": int}


def _split_list(value: str) -> tuple[str, ...]:
    items = [v.strip() for chunk in value.splitlines() for v in chunk.split(",")]
    return tuple(v for v in items if v)


def load_extension_table(path: str | Path) -> dict[str, str]:
    """Read ``ext<TAB>class`` lines."""
    table: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigError(f"bad extension line: {line!r}")
        table[parts[0].lower().lstrip(".")] = parts[1].lower()
    return table


def load_config(path: Optional[str | Path] = None) -> RuleConfig:
    """Load ``path``, falling back to ``$DECEPTSCAN_CONFIG``, then to defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return RuleConfig()
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    base = path.parent
    main = parser["deceptscan"] if parser.has_section("deceptscan") else {}
    kwargs: dict = {}
    thresholds = {}
    for key, value in main.items():
        if key in _LIST_KEYS:
            items = _split_list(value)
            if key in ("brand_domains", "shortener_domains", "scan_prompts",
                       "credential_keywords", "generic_keywords", "familiar_executables"):
                items = tuple(i.lower() for i in items)
            kwargs[key] = items
        elif key in _THRESHOLD_KEYS:
            try:
                thresholds[key] = _THRESHOLD_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
        elif key == "disabled_rules":
            kwargs[key] = frozenset(i.upper() for i in _split_list(value))
        elif key == "visual_pairs":
            pairs = []
            for item in _split_list(value):
                a, sep, b = item.partition(":")
                if not sep or not a or not b:
                    raise ConfigError(f"visual pair must be a:b, got {item!r}")
                pairs.append((a, b))
            kwargs[key] = tuple(pairs)
        elif key == "psl_file":
            kwargs["psl"] = PublicSuffixSnapshot.from_file(base / value)
        elif key == "confusables_file":
            kwargs["confusables"] = ConfusableTable.from_file(base / value, DEFAULT_CONFUSABLES)
        elif key == "extensions_file":
            table = dict(DEFAULT_EXTENSIONS)
            table.update(load_extension_table(base / value))
            kwargs["executable_extensions"] = table
        else:
            raise ConfigError(f"unknown config key: {key}")

    if parser.has_section("extensions"):
        table = dict(kwargs.get("executable_extensions", DEFAULT_EXTENSIONS))
        for ext, cls in parser["extensions"].items():
            table[ext.lower().lstrip(".")] = cls.strip().lower()
        kwargs["executable_extensions"] = table
    if thresholds:
        kwargs["thresholds"] = replace(Thresholds(), **thresholds)
    try:
        return RuleConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
