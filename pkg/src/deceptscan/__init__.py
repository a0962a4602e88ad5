"""Detect user-deception techniques in raw email messages."""

from .analyzer import analyze, scan_bytes
from .config import RuleConfig, load_config
from .corpus import CorpusSample, generate_corpus, generate_sample
from .findings import Finding, UnknownTechniqueId, explain
from .message import EmailMessage, HeaderSectionMissing, extract_links, parse_message

__all__ = [
    "CorpusSample",
    "EmailMessage",
    "Finding",
    "HeaderSectionMissing",
    "RuleConfig",
    "UnknownTechniqueId",
    "analyze",
    "explain",
    "extract_links",
    "generate_corpus",
    "generate_sample",
    "load_config",
    "parse_message",
    "scan_bytes",
]
